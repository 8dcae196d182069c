#pragma once

// Constructive separability for low-rank PPT states: canonical-form
// extraction, rank-N decomposition, the unique 2 x M decomposition, kernel
// product vectors and rank-2/rank-3 three-qubit decompositions, and
// positivity-preserving subtraction of product projectors.

#include <array>
#include <cstdint>
#include <vector>

#include "trisep/states.hpp"

namespace trisep {

/// rho = L (X^dagger X) L^dagger with X = (CB, C, B, 1) and
/// L = U_A^dagger (x) U_B^dagger (x) sqrt(D).
struct CanonicalForm {
  Dims dims;
  CMatrix b;
  CMatrix c;
  CMatrix d;          ///< <11|rho'|11> in the rotated basis, full rank
  CMatrix unitary_a;  ///< rho' = (U_A (x) U_B (x) 1) rho (U_A (x) U_B (x) 1)^dagger
  CMatrix unitary_b;
  CMatrix filter;     ///< D^{-1/2}, applied on Charlie after the rotation
  double delta_residual = 0.0;
  double commutator_residual = 0.0;  ///< max of ||[B,B^+]||, ||[C,C^+]||, ||[B,C]||, ||[B,C^+]||
  int basis_attempts = 0;

  /// The density matrix encoded by (B, C, D, U_A, U_B).
  CMatrix reconstruct() const;
};

/// Seed of the local-basis search; results are deterministic for a given seed.
inline constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

/// Throws NotPPT, RankMismatch (rank != N), BasisSearchExhausted or CommutatorError.
CanonicalForm extract_canonical(const TripartiteState& state, std::uint64_t seed = kDefaultSeed);

/// Exactly N product terms from the common eigenvectors of B and C.
Decomposition decompose_rank_n(const TripartiteState& state, std::uint64_t seed = kDefaultSeed);
Decomposition decompose_canonical(const CanonicalForm& form, const Tolerance& tol = {});

struct BipartiteTerm {
  double weight = 0.0;
  CVector e;  ///< unit vector on the qubit
  CVector b;  ///< unit vector on the M-dimensional side
};

/// rho on C^2 (x) C^M (index a*M + m) with rank equal to the dimension of its
/// support on the M side: the unique decomposition into r product terms.
/// Supports of dimension 2 with rank > 2 fall back to a (non-unique)
/// two-qubit decomposition.
std::vector<BipartiteTerm> bipartite_rank_n_decompose(const CMatrix& rho, int m, const Tolerance& tol = {},
                                                      std::uint64_t seed = kDefaultSeed);

/// Orthonormal basis of the support of Charlie's reduced state, and rho
/// compressed to it: rho = (1 (x) V) rho_c (1 (x) V)^dagger.
struct CharlieSupport {
  CMatrix isometry;  ///< N x N'
  CMatrix compressed;
  Dims dims;         ///< (2, 2, N')
};
CharlieSupport compress_charlie(const CMatrix& rho, Dims dims, const Tolerance& tol = {});
/// Lifts a decomposition on the compressed space back through the isometry.
Decomposition lift_charlie(const Decomposition& d, const CMatrix& isometry);

struct KernelProductVector {
  ProductVector vector;
  bool isolated = true;  ///< false when the quadratic vanished identically (a continuum)
  double residual = 0.0; ///< ||rho |e,f,g>||
};

/// Product vector in the kernel of a rank-2 or rank-3 three-qubit state.
KernelProductVector kernel_product_vector(const TripartiteState& state, std::uint64_t seed = kDefaultSeed);

/// Which operators must stay PSD after a subtraction.
enum class Partition {
  A_BC,  ///< lambda from rho alone; the result is reported for rho^tA
  All,   ///< lambda = min over rho and its three partial transposes
};

struct Subtraction {
  CMatrix remainder;
  double lambda = 0.0;
  std::array<bool, 4> psd{};  ///< PSD status of the remainder's four operators
};

/// rho - lambda |v><v| with lambda = 1 / <v|rho^+|v> (minimised over the
/// partially conjugated vectors for Partition::All).  Throws
/// RangeMembershipError when v (or a conjugate) leaves a required range.
Subtraction subtract_product(const TripartiteState& state, const CVector& v, Partition partition = Partition::A_BC);

/// 1 / <v|m^+|v>, or 0 when v has a component in the kernel of m beyond 1e-6 relative.
double subtraction_weight(const CMatrix& m, const CVector& v, const Tolerance& tol = {});

/// Exactly 2 (resp. 3) product terms; FactorNotProduct when a term fails the
/// Schmidt test sigma_2 <= 1e-8 sigma_1.
Decomposition decompose_rank2_3qubit(const TripartiteState& state, std::uint64_t seed = kDefaultSeed);
Decomposition decompose_rank3_3qubit(const TripartiteState& state, std::uint64_t seed = kDefaultSeed);

/// Splits a unit vector on C^2 (x) C^2 (x) C^N into factors; FactorNotProduct
/// when any cut has sigma_2 > threshold * sigma_1.
ProductVector factor_product(const CVector& v, Dims dims, double threshold = 1e-8);

}  // namespace trisep
