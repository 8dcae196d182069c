#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trisep/matcore.hpp"

namespace {

using namespace trisep;

CMatrix random_density(int dim, int rank, Rng& rng) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int i = 0; i < rank; ++i) {
    const CVector v = oracle::unit(dim, rng);
    m += v * v.adjoint();
  }
  return m / m.trace();
}

TEST(PartialTranspose, MatchesIndexLoopOracle) {
  Rng rng(11);
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const CMatrix m = CMatrix::Random(4 * n, 4 * n);
      EXPECT_LT((partial_transpose(m, Dims{n}, Transpose::A) - oracle::partial_transpose(m, n, true, false)).norm(),
                1e-14);
      EXPECT_LT((partial_transpose(m, Dims{n}, Transpose::B) - oracle::partial_transpose(m, n, false, true)).norm(),
                1e-14);
      EXPECT_LT((partial_transpose(m, Dims{n}, Transpose::AB) - oracle::partial_transpose(m, n, true, true)).norm(),
                1e-14);
    }
}

TEST(PartialTranspose, IsAnInvolutionAndComposes) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const CMatrix m = random_density(4 * n, 3, rng);
    const Dims d{n};
    EXPECT_LT((partial_transpose(partial_transpose(m, d, Transpose::A), d, Transpose::A) - m).norm(), 1e-14);
    EXPECT_LT((partial_transpose(partial_transpose(m, d, Transpose::A), d, Transpose::B) -
               partial_transpose(m, d, Transpose::AB))
                  .norm(),
              1e-14);
    EXPECT_NEAR(partial_transpose(m, d, Transpose::AB).trace().real(), 1.0, 1e-14);
  }
}

TEST(PartialTranspose, RejectsWrongShape) {
  EXPECT_THROW(partial_transpose(CMatrix::Zero(6, 6), Dims{2}, Transpose::A), DimensionError);
}

TEST(Rank, AgreesWithSpectralOracle) {
  Rng rng(13);
  for (int r = 0; r <= 8; ++r) {
    const CMatrix m = r ? random_density(8, r, rng) : CMatrix::Zero(8, 8);
    EXPECT_EQ(numerical_rank(m), r);
    EXPECT_EQ(numerical_rank(m), oracle::hermitian_rank(m));
    const CMatrix k = kernel_basis(m);
    EXPECT_EQ(k.cols(), 8 - r);
    if (k.cols()) {
      EXPECT_LT((m * k).norm(), 1e-12);
      EXPECT_LT((k.adjoint() * k - CMatrix::Identity(k.cols(), k.cols())).norm(), 1e-12);
    }
    EXPECT_EQ(range_basis(m).cols(), r);
  }
}

TEST(Psd, ThresholdsAndHermiticity) {
  CMatrix m = CMatrix::Identity(4, 4);
  EXPECT_TRUE(is_psd(m));
  m(0, 0) = -1e-6;
  EXPECT_FALSE(is_psd(m));
  m(0, 0) = -1e-12;
  EXPECT_TRUE(is_psd(m));
  CMatrix h = CMatrix::Identity(2, 2);
  h(0, 1) = 0.5;
  EXPECT_THROW(hermitize(h), HermiticityError);
  EXPECT_NEAR(hermiticity_defect(h), std::sqrt(0.5), 1e-15);
}

TEST(Psd, SqrtAndPseudoInverse) {
  Rng rng(14);
  const CMatrix m = random_density(6, 4, rng);
  const CMatrix s = psd_sqrt(m);
  EXPECT_LT((s * s - m).norm(), 1e-12);
  const CMatrix p = pseudo_inverse_hermitian(m);
  EXPECT_LT((m * p * m - m).norm(), 1e-10);
  EXPECT_THROW(psd_inverse_sqrt(m), RankMismatch);
  const CMatrix full = random_density(6, 6, rng);
  const CMatrix is = psd_inverse_sqrt(full);
  EXPECT_LT((is * full * is - CMatrix::Identity(6, 6)).norm(), 1e-9);
}

TEST(LocalProject, ContractsTheNamedParty) {
  Rng rng(15);
  const int n = 3;
  const auto x = oracle::random_factors(n, rng);
  const CVector v = x.full();
  const CMatrix rho = v * v.adjoint();
  const CMatrix onc = local_project(rho, Dims{n}, Party::C, x.g);
  const CVector ef = kron(x.e, x.f);
  EXPECT_LT((onc - ef * ef.adjoint()).norm(), 1e-13);
  const CMatrix ona = local_project(rho, Dims{n}, Party::A, x.e);
  const CVector fg = kron(x.f, x.g);
  EXPECT_LT((ona - fg * fg.adjoint()).norm(), 1e-13);
  EXPECT_NEAR(reduced_state(rho, Dims{n}, Party::C).trace().real(), 1.0, 1e-13);
  EXPECT_LT((reduced_state(rho, Dims{n}, Party::C) - x.g * x.g.adjoint()).norm(), 1e-13);
}

TEST(Kron, MatchesProductOracle) {
  Rng rng(16);
  const auto x = oracle::random_factors(4, rng);
  EXPECT_LT((product_vector(x.e, x.f, x.g) - x.full()).norm(), 1e-15);
}

TEST(SimultaneousDiagonalize, CommutingNormalPair) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 4;
    const CMatrix u = random_unitary(n, rng);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(n, n)).norm(), 1e-12);
    const CVector db = oracle::unit(n, rng) * 3.0, dc = oracle::unit(n, rng) * 3.0;
    const CMatrix b = u * db.asDiagonal() * u.adjoint();
    const CMatrix c = u * dc.asDiagonal() * u.adjoint();
    const std::vector<CMatrix> ops{b, c};
    const SimultaneousEigen se = simultaneous_diagonalize(ops);
    for (int i = 0; i < 2; ++i) {
      const CMatrix diag = se.basis.adjoint() * ops[static_cast<std::size_t>(i)] * se.basis;
      CMatrix off = diag;
      off.diagonal().setZero();
      EXPECT_LT(off.norm(), 1e-9);
    }
    EXPECT_LT(commutator_norm(b, c), 1e-12);
  }
}

TEST(SimultaneousDiagonalize, RejectsNonCommuting) {
  CMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const std::vector<CMatrix> ops{x, z};
  EXPECT_THROW(simultaneous_diagonalize(ops), CommutatorError);
}

TEST(Schmidt, ProductAndEntangled) {
  Rng rng(18);
  const CVector a = oracle::unit(2, rng), b = oracle::unit(3, rng);
  const SchmidtSplit s = schmidt_split(kron(a, b), 2, 3);
  EXPECT_LT(s.coefficients(1), 1e-12);
  EXPECT_NEAR(std::norm(s.left.dot(a)), 1.0, 1e-12);
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const SchmidtSplit e = schmidt_split(bell, 2, 2);
  EXPECT_NEAR(e.coefficients(1), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Tolerance, ValidateRejectsNonPositive) {
  Tolerance t;
  EXPECT_NO_THROW(t.validate());
  t.rank_rel = 0;
  EXPECT_THROW(t.validate(), Error);
}

}  // namespace
