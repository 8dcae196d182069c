#pragma once

// Tripartite density matrices on C^2 (x) C^2 (x) C^N, product vectors,
// convex decompositions and the generators used by tests and the CLI.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "trisep/matcore.hpp"

namespace trisep {

/// Ranks of rho, rho^tA, rho^tB, rho^tAB in that order.
struct RankSignature {
  std::array<int, 4> r{};

  int sum() const { return r[0] + r[1] + r[2] + r[3]; }
  friend bool operator==(const RankSignature&, const RankSignature&) = default;
};

/// Operator index used throughout: 0 = rho, 1 = rho^tA, 2 = rho^tB, 3 = rho^tAB.
inline constexpr int kOperatorCount = 4;
const char* operator_name(int op);

/// Immutable density matrix with its partial transposes and ranks cached.
class TripartiteState {
 public:
  /// Hermitizes `rho` and checks shape, finiteness, PSD and unit trace.
  TripartiteState(const CMatrix& rho, Dims dims, const Tolerance& tol = {});

  /// Same checks except the unit-trace requirement (trace must be positive
  /// or the matrix zero).  Used for remainders of subtraction steps.
  static TripartiteState unnormalized(const CMatrix& rho, Dims dims, const Tolerance& tol = {});

  Dims dims() const { return dims_; }
  const Tolerance& tolerance() const { return tol_; }
  const CMatrix& rho() const { return ops_[0]; }
  /// op(0) = rho, op(1..3) = rho^tA, rho^tB, rho^tAB.
  const CMatrix& op(int index) const { return ops_.at(static_cast<std::size_t>(index)); }
  const CMatrix& transposed(Transpose t) const;
  const RankSignature& ranks() const { return ranks_; }
  int rank() const { return ranks_.r[0]; }
  double trace() const { return ops_[0].trace().real(); }

  /// True when all three partial transposes are PSD.
  bool is_ppt() const;
  /// Smallest eigenvalue of op(index).
  double min_eigenvalue_of(int index) const;

 private:
  TripartiteState(const CMatrix& rho, Dims dims, const Tolerance& tol, bool require_unit_trace);

  Dims dims_;
  Tolerance tol_;
  std::array<CMatrix, 4> ops_;
  RankSignature ranks_;
};

/// |e> (x) |f> (x) |g> with unit-norm factors.
///
/// Chart c (0..3) describes how (alpha, beta) parametrise the qubit factors:
/// bit 0 set swaps the roles of |0>,|1> for Alice, bit 1 for Bob.  In chart 0
/// e ~ alpha|0> + |1> and f ~ beta|0> + |1>.
struct ProductVector {
  CVector e;
  CVector f;
  CVector g;
  int chart = 0;
  std::optional<Complex> alpha;
  std::optional<Complex> beta;

  /// Normalises the factors and picks the chart in which |alpha|,|beta| <= 1.
  static ProductVector from_factors(const CVector& e, const CVector& f, const CVector& g);
  /// Factors from chart parameters.
  static ProductVector from_chart(int chart, Complex alpha, Complex beta, const CVector& g);

  CVector full() const;
  CMatrix projector() const;
  /// Partially conjugated vector (e*, f, g), (e, f*, g) or (e*, f*, g) for op 1..3, or full() for op 0.
  CVector conjugated_for(int op) const;
};

/// Product fidelity |<e|e'>|^2 |<f|f'>|^2 |<g|g'>|^2.
double product_fidelity(const ProductVector& a, const ProductVector& b);

struct Decomposition {
  std::vector<double> weights;
  std::vector<ProductVector> vectors;

  std::size_t size() const { return weights.size(); }
  CMatrix reconstruct(Dims dims) const;
  /// Frobenius norm of rho - reconstruct().
  double residual(const CMatrix& rho, Dims dims) const;
  void append(const Decomposition& other);
};

/// Random factor drawn uniformly on the complex unit sphere.
ProductVector random_product_vector(Dims dims, Rng& rng);

/// Normalised mixture sum_i w_i |v_i><v_i| / sum_i w_i.
TripartiteState from_ensemble(const std::vector<double>& weights, const std::vector<ProductVector>& vectors,
                              Dims dims, const Tolerance& tol = {});

struct Ensemble {
  std::vector<double> weights;  ///< normalised to sum 1
  std::vector<ProductVector> vectors;
};

/// `terms` random product vectors with weights uniform in [0.2, 1], normalised.
Ensemble random_ensemble(Dims dims, int terms, Rng& rng);

/// sqrt(D) X^dagger X sqrt(D) normalised, X = (CB, C, B, 1) stacked over the
/// blocks |00>,|01>,|10>,|11>.
CMatrix canonical_matrix(const CMatrix& b, const CMatrix& c, const CMatrix& d);

struct CanonicalParameters {
  CMatrix b;
  CMatrix c;
  CMatrix d;
};

/// Commuting normal B, C with a shared Haar-random eigenbasis and standard
/// normal complex eigenvalues; D diagonal with entries uniform in [0.5, 2].
CanonicalParameters random_canonical_parameters(int n, std::uint64_t seed);
TripartiteState random_canonical_state(int n, std::uint64_t seed, const Tolerance& tol = {});

/// The four members |0,1,+>, |1,+,0>, |+,0,1>, |-,-,->.
std::vector<ProductVector> shifts_upb_vectors();
/// (1 - sum of the four UPB projectors) / 4 on three qubits.
TripartiteState shifts_upb_state(const Tolerance& tol = {});

/// p |singlet><singlet| + (1 - p) 1/4 on AB, times |0><0| on a Charlie of dimension n.
TripartiteState werner_state(double p, int n = 2, const Tolerance& tol = {});

}  // namespace trisep
