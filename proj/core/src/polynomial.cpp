#include "trisep/polynomial.hpp"

#include <cmath>
#include <numbers>

namespace trisep {

namespace {

Complex root_of_unity(int k, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

}  // namespace

Complex evaluate_polynomial(const CVector& ascending, Complex x) {
  Complex acc = 0.0;
  for (Eigen::Index i = ascending.size() - 1; i >= 0; --i) acc = acc * x + ascending(i);
  return acc;
}

int effective_degree(const CVector& ascending, double rel) {
  if (ascending.size() == 0) return -1;
  const double top = ascending.cwiseAbs().maxCoeff();
  if (!(top > 0)) return -1;
  for (Eigen::Index i = ascending.size() - 1; i >= 0; --i)
    if (std::abs(ascending(i)) > rel * top) return static_cast<int>(i);
  return -1;
}

std::vector<Complex> polynomial_roots(const CVector& ascending, double rel) {
  const int deg = effective_degree(ascending, rel);
  if (deg <= 0) return {};
  CMatrix companion = CMatrix::Zero(deg, deg);
  const Complex lead = ascending(deg);
  for (int i = 0; i < deg; ++i) companion(0, i) = -ascending(deg - 1 - i) / lead;
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  std::vector<Complex> roots(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return roots;
}

CVector interpolate_univariate(const std::function<Complex(Complex)>& f, int degree) {
  const int n = degree + 1;
  CVector values(n);
  for (int j = 0; j < n; ++j) values(j) = f(root_of_unity(j, n));
  CVector coeffs = CVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += values(j) * root_of_unity(-((j * k) % n), n);
    coeffs(k) = acc / static_cast<double>(n);
  }
  return coeffs;
}

CMatrix sylvester_matrix(const CVector& p, const CVector& q) {
  const int m = static_cast<int>(p.size()) - 1;
  const int n = static_cast<int>(q.size()) - 1;
  if (m < 0 || n < 0) throw DimensionError("sylvester matrix of an empty coefficient vector");
  const int size = m + n;
  CMatrix s = CMatrix::Zero(size, size);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s(r, r + i) = p(m - i);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s(n + r, r + i) = q(n - i);
  return s;
}

Complex sylvester_resultant(const CVector& p, const CVector& q) {
  if (p.size() == 0 || q.size() == 0) return 0.0;
  const CMatrix s = sylvester_matrix(p, q);
  if (s.size() == 0) return 1.0;
  return s.partialPivLu().determinant();
}

BiPolynomial BiPolynomial::interpolate(const std::function<Complex(Complex, Complex)>& f, int deg_x, int deg_y) {
  const int nx = deg_x + 1, ny = deg_y + 1;
  CMatrix values(nx, ny);
  for (int j = 0; j < nx; ++j)
    for (int k = 0; k < ny; ++k) values(j, k) = f(root_of_unity(j, nx), root_of_unity(k, ny));
  CMatrix fx(nx, nx), fy(ny, ny);
  for (int a = 0; a < nx; ++a)
    for (int j = 0; j < nx; ++j) fx(a, j) = root_of_unity(-((a * j) % nx), nx) / static_cast<double>(nx);
  for (int k = 0; k < ny; ++k)
    for (int b = 0; b < ny; ++b) fy(k, b) = root_of_unity(-((k * b) % ny), ny) / static_cast<double>(ny);
  return BiPolynomial(fx * values * fy);
}

double BiPolynomial::max_abs_coefficient() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

Complex BiPolynomial::operator()(Complex x, Complex y) const { return evaluate_polynomial(in_y(x), y); }

CVector BiPolynomial::in_y(Complex x) const {
  CVector out(c_.cols());
  for (Eigen::Index k = 0; k < c_.cols(); ++k) out(k) = evaluate_polynomial(c_.col(k), x);
  return out;
}

CVector BiPolynomial::in_x(Complex y) const {
  CVector out(c_.rows());
  for (Eigen::Index j = 0; j < c_.rows(); ++j) out(j) = evaluate_polynomial(c_.row(j).transpose(), y);
  return out;
}

Complex BiPolynomial::dx(Complex x, Complex y) const {
  const CVector cx = in_x(y);
  Complex acc = 0.0;
  for (Eigen::Index j = cx.size() - 1; j >= 1; --j) acc = acc * x + static_cast<double>(j) * cx(j);
  return acc;
}

Complex BiPolynomial::dy(Complex x, Complex y) const {
  const CVector cy = in_y(x);
  Complex acc = 0.0;
  for (Eigen::Index k = cy.size() - 1; k >= 1; --k) acc = acc * y + static_cast<double>(k) * cy(k);
  return acc;
}

BiPolynomial BiPolynomial::conj_swap() const { return BiPolynomial(c_.transpose().conjugate()); }

BiPolynomial BiPolynomial::trimmed(double rel) const {
  if (c_.size() == 0) return *this;
  const double cut = rel * max_abs_coefficient();
  Eigen::Index rows = c_.rows(), cols = c_.cols();
  while (rows > 1 && c_.row(rows - 1).cwiseAbs().maxCoeff() <= cut) --rows;
  while (cols > 1 && c_.col(cols - 1).head(rows).cwiseAbs().maxCoeff() <= cut) --cols;
  return BiPolynomial(c_.topLeftCorner(rows, cols));
}

}  // namespace trisep
