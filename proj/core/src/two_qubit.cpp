#include "trisep/two_qubit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace trisep {

namespace {

// sigma_y (x) sigma_y
CMatrix spin_flip() {
  CMatrix y = CMatrix::Zero(4, 4);
  y(0, 3) = -1.0;
  y(1, 2) = 1.0;
  y(2, 1) = 1.0;
  y(3, 0) = -1.0;
  return y;
}

// Columns sqrt(mu_k) u_k over the numerical range of rho.
CMatrix range_factor(const CMatrix& rho, const Tolerance& tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((rho + rho.adjoint()) * 0.5);
  const auto& mu = es.eigenvalues();
  const double top = std::max(mu.cwiseAbs().maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < mu.size(); ++k)
    if (mu(k) > tol.rank_rel * top * 4) keep.push_back(k);
  CMatrix v(4, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    v.col(static_cast<Eigen::Index>(i)) = std::sqrt(mu(keep[i])) * es.eigenvectors().col(keep[i]);
  return v;
}

struct Takagi {
  Eigen::VectorXd values;  // descending
  CMatrix vectors;         // unitary, tau = W diag(values) W^T
};

Takagi takagi(const CMatrix& tau, double cutoff) {
  const Eigen::Index r = tau.rows();
  Eigen::MatrixXd m(2 * r, 2 * r);
  const Eigen::MatrixXd a = tau.real();
  const Eigen::MatrixXd b = tau.imag();
  m << a, b, b, -a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((m + m.transpose()) * 0.5);
  Takagi t;
  t.values = Eigen::VectorXd::Zero(r);
  t.vectors = CMatrix::Zero(r, r);
  Eigen::Index found = 0;
  for (Eigen::Index k = 2 * r - 1; k >= r && found < r; --k) {
    const double s = es.eigenvalues()(k);
    if (s <= cutoff) break;
    const Eigen::VectorXd u = es.eigenvectors().col(k).head(r);
    const Eigen::VectorXd w = es.eigenvectors().col(k).tail(r);
    CVector z(r);
    for (Eigen::Index i = 0; i < r; ++i) z(i) = Complex(u(i), w(i));
    t.values(found) = s;
    t.vectors.col(found) = z / z.norm();
    ++found;
  }
  if (found < r) {
    // Complete with the orthogonal complement; these carry zero Takagi values.
    Rng rng(0x7a6a61ULL);
    for (Eigen::Index k = found; k < r; ++k) {
      CVector z = random_unit_vector(static_cast<int>(r), rng);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index j = 0; j < k; ++j) z -= t.vectors.col(j) * t.vectors.col(j).dot(z);
      t.vectors.col(k) = z / z.norm();
    }
  }
  return t;
}

// Angles phi_b, phi_c with a + b e^{i phi_b} + c e^{i phi_c} = 0 for a
// triangle (or degenerate triangle) with sides a, b, c.
std::pair<double, double> close_triangle(double a, double b, double c) {
  if (a <= 0.0 || b <= 0.0) return {0.0, std::numbers::pi};
  const double cosb = std::clamp((c * c - a * a - b * b) / (2.0 * a * b), -1.0, 1.0);
  const double phib = std::acos(cosb);
  const Complex rest = -a - b * std::polar(1.0, phib);
  const double phic = std::abs(rest) > 0.0 ? std::arg(rest) : std::numbers::pi;
  return {phib, phic};
}

// Phases with sum_j lambda_j e^{i theta_j} = 0 for descending lambda and
// lambda_1 <= lambda_2 + lambda_3 + lambda_4.
std::array<double, 4> closing_phases(const std::array<double, 4>& l) {
  const double big = std::max(l[0] - l[1], l[2] - l[3]);
  const double len = std::min({big, l[2] + l[3], l[0] + l[1]});
  std::array<double, 4> theta{};
  const auto [phi2, phil] = close_triangle(l[0], l[1], len);
  theta[1] = phi2;
  const double base = phil + std::numbers::pi;
  const auto [phi3, phi4] = close_triangle(len, l[2], l[3]);
  theta[2] = base + phi3;
  theta[3] = base + phi4;
  return theta;
}

}  // namespace

double concurrence(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("concurrence needs a 4x4 matrix");
  const CMatrix v = range_factor(rho, Tolerance{});
  if (v.cols() == 0) return 0.0;
  const CMatrix tau = v.transpose() * spin_flip() * v;
  Eigen::JacobiSVD<CMatrix> svd(tau);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
  s.head(svd.singularValues().size()) = svd.singularValues();
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

std::vector<TwoQubitTerm> two_qubit_decomposition(const CMatrix& rho, const Tolerance& tol) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("two-qubit decomposition needs a 4x4 matrix");
  const CMatrix h = hermitize(rho, tol);
  const double trace = h.trace().real();
  const CMatrix v = range_factor(h, tol);
  const Eigen::Index r = v.cols();
  if (r == 0) return {};

  const CMatrix y = spin_flip();
  const CMatrix tau = v.transpose() * y * v;
  const Takagi tk = takagi((tau + tau.transpose()) * 0.5, tol.rank_rel * std::max(1.0, tau.norm()));
  const CMatrix x = v * tk.vectors.conjugate();

  std::array<double, 4> lambda{};
  std::array<CVector, 4> cols;
  for (int j = 0; j < 4; ++j) {
    lambda[static_cast<std::size_t>(j)] = j < r ? tk.values(j) : 0.0;
    cols[static_cast<std::size_t>(j)] = j < r ? CVector(x.col(j)) : CVector(CVector::Zero(4));
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lambda[static_cast<std::size_t>(a)] > lambda[static_cast<std::size_t>(b)]; });
  std::array<double, 4> l{};
  std::array<CVector, 4> xs;
  for (int j = 0; j < 4; ++j) {
    l[static_cast<std::size_t>(j)] = lambda[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    xs[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
  }
  if (l[0] - l[1] - l[2] - l[3] > tol.residual * std::max(trace, 1e-300))
    throw NotPPT("two-qubit state is entangled (concurrence " + std::to_string(l[0] - l[1] - l[2] - l[3]) + ")");

  const auto theta = closing_phases(l);
  static constexpr int kHadamard[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  std::vector<TwoQubitTerm> terms;
  for (int i = 0; i < 4; ++i) {
    CVector z = CVector::Zero(4);
    for (int j = 0; j < 4; ++j)
      z += 0.5 * kHadamard[i][j] * std::polar(1.0, theta[static_cast<std::size_t>(j)] / 2.0) * xs[static_cast<std::size_t>(j)];
    const double weight = z.squaredNorm();
    if (weight <= tol.rank_rel * std::max(trace, 1e-300)) continue;
    const SchmidtSplit split = schmidt_split(z, 2, 2);
    if (split.coefficients(1) > 1e-6 * split.coefficients(0))
      throw NumericalBreakdown("two-qubit decomposition produced a non-product term");
    terms.push_back({weight, split.left, split.right});
  }
  return terms;
}

}  // namespace trisep
