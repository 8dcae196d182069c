#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trisep/nnls.hpp"

namespace {

using namespace trisep;

TEST(Nnls, RecoversNonnegativeSolutionExactly) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(20, 8);
    Eigen::VectorXd x(8);
    for (int i = 0; i < 8; ++i) x(i) = i % 3 == 0 ? 0.0 : u(rng);
    const NnlsResult r = nnls(a, a * x);
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.x - x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(r.residual, 1e-10);
  }
}

TEST(Nnls, SatisfiesKktConditions) {
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(12, 6);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(12);
    const NnlsResult r = nnls(a, b);
    const Eigen::VectorXd grad = a.transpose() * (a * r.x - b);
    for (int i = 0; i < 6; ++i) {
      EXPECT_GE(r.x(i), 0.0);
      if (r.x(i) > 0)
        EXPECT_NEAR(grad(i), 0.0, 1e-9);
      else
        EXPECT_GE(grad(i), -1e-9);
    }
    EXPECT_NEAR(r.residual, (a * r.x - b).norm(), 1e-12);
  }
}

TEST(Nnls, NegativeTargetGivesZero) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const NnlsResult r = nnls(a, -Eigen::VectorXd::Ones(3));
  EXPECT_EQ(r.x, Eigen::VectorXd::Zero(3));
  EXPECT_NEAR(r.residual, std::sqrt(3.0), 1e-15);
}

TEST(HermitianToReal, IsAnIsometry) {
  oracle::Rng rng(82);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix x = CMatrix::Random(6, 6), y = CMatrix::Random(6, 6);
    x = (x + x.adjoint()).eval();
    y = (y + y.adjoint()).eval();
    const Eigen::VectorXd rx = hermitian_to_real(x), ry = hermitian_to_real(y);
    EXPECT_EQ(rx.size(), 36);
    EXPECT_NEAR(rx.norm(), x.norm(), 1e-12);
    EXPECT_NEAR(rx.dot(ry), (x * y).trace().real(), 1e-12);
  }
}

}  // namespace
