#pragma once

// Search for product vectors |e,f,g> whose partial conjugates lie in the
// ranges of rho, rho^tA, rho^tB and rho^tAB (the set V[rho]).
//
// With e ~ alpha|0> + |1>, f ~ beta|0> + |1> (chart 0), every kernel vector K
// of one of the four operators contributes a row
//     x y <k^00| + x <k^01| + y <k^10| + <k^11|
// of the matrix A, where x is alpha for rho, rho^tB and conj(alpha) for the
// other two, and y is beta for rho, rho^tA and conj(beta) otherwise.  The
// admissible |g> form the kernel of A, so all N x N minors of A vanish.
// conj(alpha) and conj(beta) are carried as independent variables a2, b2.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trisep/polynomial.hpp"
#include "trisep/states.hpp"

namespace trisep {

/// Kernels of the four operators, each basis vector split into its Charlie
/// components k^{00}, k^{01}, k^{10}, k^{11}.
struct KernelData {
  Dims dims;
  std::array<CMatrix, 4> bases;  ///< 4N x k(op) orthonormal columns

  int count(int op) const { return static_cast<int>(bases[static_cast<std::size_t>(op)].cols()); }
  int total() const { return count(0) + count(1) + count(2) + count(3); }
  /// k^{ab} of basis vector i of operator op.
  CVector component(int op, int i, int ab) const;
};

KernelData assemble_constraints(const TripartiteState& state);
/// Same from a Hermitian matrix that need not be positive; its partial
/// transposes are formed here.
KernelData assemble_constraints(const CMatrix& rho, Dims dims, const Tolerance& tol = {});

/// One row of A: a kernel vector (or a combination within one operator).
struct ConstraintRow {
  int op = 0;     ///< 0 = rho, 1 = rho^tA, 2 = rho^tB, 3 = rho^tAB
  CVector kernel; ///< 4N-vector
};

std::vector<ConstraintRow> constraint_rows(const KernelData& kd);

/// Row of A as a function of independent (alpha, beta, a2, b2) in the chart.
CVector evaluate_row(const ConstraintRow& row, Dims dims, int chart, Complex alpha, Complex beta, Complex a2,
                     Complex b2);
/// k_tot x N matrix A with a2 = conj(alpha), b2 = conj(beta).
CMatrix evaluate_A(const KernelData& kd, Complex alpha, Complex beta, int chart = 0);
CMatrix evaluate_A(const KernelData& kd, int chart, Complex alpha, Complex beta, Complex a2, Complex b2);

/// A minor of A (or the complex conjugate of one) written as a polynomial in
/// (alpha, a2) whose coefficients are BiPolynomials in (beta, b2).
struct MinorEquation {
  int deg_alpha = 0;
  int deg_a2 = 0;
  std::vector<BiPolynomial> coefficients;  ///< index i * (deg_a2 + 1) + j for alpha^i a2^j
  std::vector<int> rows;                   ///< provenance: indices into constraint_rows()
  bool conjugated = false;                 ///< conj-swap of the minor on `rows`
  int conjugate_of = -1;                   ///< index of the equation it conjugates, or -1

  const BiPolynomial& coefficient(int i, int j) const {
    return coefficients[static_cast<std::size_t>(i * (deg_a2 + 1) + j)];
  }
  /// Coefficient matrix in (alpha, a2) at fixed (beta, b2).
  CMatrix at(Complex beta, Complex b2) const;
  Complex operator()(Complex alpha, Complex beta, Complex a2, Complex b2) const;
  /// Degree bounds in beta and b2.
  int deg_beta() const;
  int deg_b2() const;
  /// Swap alpha <-> a2, beta <-> b2 and conjugate the coefficients.
  MinorEquation conj_swap() const;
};

/// Expands the minor of the given rows (any N rows of A) in the chart.
MinorEquation minor_equation(const std::vector<ConstraintRow>& rows, const std::vector<int>& chosen, Dims dims,
                             int chart);

struct MinorSystem {
  KernelData kernels;
  std::vector<ConstraintRow> rows;
  int chart = 0;
  std::vector<int> base_rows;           ///< the N-1 pivot rows shared by every minor
  std::vector<MinorEquation> equations; ///< independent minors followed by their conjugates

  int independent_count() const;
};

/// k_tot - N + 1 minors combining the N-1 greedily pivoted rows with each
/// remaining row, plus their conj-swaps.  Throws ThresholdNotMet when k_tot <= N.
MinorSystem build_minor_system(const KernelData& kd, int chart = 0, std::uint64_t seed = 0x5eedULL);

/// One (alpha, beta) solution of a chart with its Charlie factor.
struct ChartSolution {
  Complex alpha;
  Complex beta;
  CVector g;
  double residual = 0.0;  ///< largest membership residual over the four operators
};

struct MinorSolveResult {
  std::vector<ChartSolution> solutions;
  std::string strategy;          ///< holomorphic, alpha-pure, bilinear or multistart
  int candidate_count = 0;       ///< roots of the univariate eliminant before filtering
  int eliminant_degree = 0;
  std::array<int, 2> degree_pair{0, 0};  ///< (X, Y) of the eliminated bivariate system
  bool continuum = false;
  int discarded_nonconjugate = 0;
};

struct SolveOptions {
  std::uint64_t seed = 0x5eedULL;
  int max_eliminant_degree = 200;
  int multistart = 64;
  double chart_radius = 2.0;      ///< keep candidates with |alpha|, |beta| below this
  double membership_tol = 1e-7;
  double dedupe_tol = 1e-7;
};

/// Resultant elimination with conj(beta) as an independent variable, conjugate
/// filtering, Gauss-Newton refinement on the full system and validation.
MinorSolveResult solve_minor_system(const MinorSystem& ms, const SolveOptions& opts = {});

struct ProductSearchResult {
  std::vector<ProductVector> vectors;  ///< V[rho], or sampled members when continuum
  bool continuum = false;              ///< the solution set is not finite
  bool threshold_met = true;           ///< k_tot > N
  int k_total = 0;
  std::array<int, 4> candidate_counts{};  ///< per chart
  std::array<int, 4> eliminant_degrees{};
  std::array<std::array<int, 2>, 4> degree_pairs{};
  std::string strategy;
};

/// Membership residual max over ops of ||P_K(op) v_op|| for the partially conjugated vectors.
double membership_residual(const KernelData& kd, const ProductVector& v);

/// All four charts after a seeded random local rotation of Alice and Bob;
/// duplicates (factor fidelity >= 1 - 1e-8) are merged.
ProductSearchResult find_product_vectors(const TripartiteState& state, const SolveOptions& opts = {});
ProductSearchResult find_product_vectors(const CMatrix& rho, Dims dims, const Tolerance& tol,
                                         const SolveOptions& opts = {});

/// Local minimisation of the membership residual from random starts; used
/// for continua, below-threshold kernels and as the last-resort strategy.
std::vector<ProductVector> sample_product_vectors(const KernelData& kd, int starts, std::uint64_t seed,
                                                  double membership_tol = 1e-7);

}  // namespace trisep
