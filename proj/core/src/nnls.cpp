#include "trisep/nnls.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace trisep {

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
  if (a.rows() != b.size()) throw DimensionError("nnls: A and b disagree in rows");
  const auto n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);
  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    out.residual = b.norm();
    return out;
  }
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(a.rows(), n));

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd s = sub.colPivHouseholderQr().solve(b);
    z.setZero();
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = s(static_cast<Eigen::Index>(k));
  };

  Eigen::VectorXd w = a.transpose() * (b - a * out.x);
  Eigen::VectorXd z(n);
  while (out.iterations < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) best_w = w(j), best = j;
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    ++out.iterations;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) feasible = false;
      if (feasible) break;
      double step = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) step = std::min(step, out.x(j) / (out.x(j) - z(j)));
      out.x += step * (z - out.x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && out.x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          out.x(j) = 0.0;
        }
    }
    out.x = z;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)]) out.x(j) = 0.0;
    w = a.transpose() * (b - a * out.x);
  }
  out.converged = out.iterations < max_iterations;
  out.residual = (a * out.x - b).norm();
  return out;
}

Eigen::VectorXd hermitian_to_real(const CMatrix& m) {
  const auto d = m.rows();
  Eigen::VectorXd v(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) v(k++) = m(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      v(k++) = std::sqrt(2.0) * m(i, j).real();
      v(k++) = std::sqrt(2.0) * m(i, j).imag();
    }
  return v;
}

}  // namespace trisep
