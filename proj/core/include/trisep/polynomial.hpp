#pragma once

// Dense complex polynomials in one and two variables: evaluation,
// interpolation on roots of unity, Sylvester resultants and companion-matrix
// root finding.

#include <functional>
#include <vector>

#include "trisep/matcore.hpp"

namespace trisep {

/// Horner evaluation; coefficients in ascending order.
Complex evaluate_polynomial(const CVector& ascending, Complex x);

/// Index of the highest coefficient with |c| > rel * max|c|, or -1 for the zero polynomial.
int effective_degree(const CVector& ascending, double rel = 1e-13);

/// Roots of the polynomial after dropping leading coefficients below
/// rel * max|c| (eigenvalues of the companion matrix).
std::vector<Complex> polynomial_roots(const CVector& ascending, double rel = 1e-13);

/// The `degree + 1` coefficients of the polynomial that agrees with `f` on
/// the (degree + 1)-th roots of unity.
CVector interpolate_univariate(const std::function<Complex(Complex)>& f, int degree);

/// Sylvester matrix of p and q (ascending coefficients, formal degrees).
CMatrix sylvester_matrix(const CVector& p, const CVector& q);

/// Determinant of the Sylvester matrix built with the formal degrees
/// p.size() - 1 and q.size() - 1.
Complex sylvester_resultant(const CVector& p, const CVector& q);

/// Polynomial sum_{j,k} c(j,k) x^j y^k.  In the search for product vectors x
/// is beta and y stands for conj(beta), treated as an independent variable.
class BiPolynomial {
 public:
  BiPolynomial() = default;
  explicit BiPolynomial(CMatrix coefficients) : c_(std::move(coefficients)) {}

  static BiPolynomial interpolate(const std::function<Complex(Complex, Complex)>& f, int deg_x, int deg_y);

  /// Stored degree bounds (X, Y).
  int deg_x() const { return static_cast<int>(c_.rows()) - 1; }
  int deg_y() const { return static_cast<int>(c_.cols()) - 1; }
  const CMatrix& coefficients() const { return c_; }
  double max_abs_coefficient() const;

  Complex operator()(Complex x, Complex y) const;
  /// Coefficients in y (ascending) after fixing x.
  CVector in_y(Complex x) const;
  /// Coefficients in x (ascending) after fixing y.
  CVector in_x(Complex y) const;
  /// Partial derivatives at (x, y).
  Complex dx(Complex x, Complex y) const;
  Complex dy(Complex x, Complex y) const;

  /// P*(x, y) = conj(P)(y, x); equals conj(P(x, conj x)) on the diagonal y = conj x.
  BiPolynomial conj_swap() const;
  /// Drops trailing rows/columns whose coefficients are all below rel * max.
  BiPolynomial trimmed(double rel = 1e-13) const;

 private:
  CMatrix c_;
};

}  // namespace trisep
