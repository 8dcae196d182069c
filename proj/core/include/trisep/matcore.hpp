#pragma once

// Dense complex linear algebra on C^2 (x) C^2 (x) C^N: partial transposes,
// numerical rank and kernels, positivity tests, local projections and
// simultaneous diagonalisation of commuting normal operators.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "trisep/errors.hpp"

namespace trisep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// Numerical thresholds shared by every routine in the library.
///
/// `rank_rel` is the relative singular-value cutoff: a singular value
/// counts as zero when it is <= rank_rel * sigma_max * dim.  `psd_abs` is the
/// eigenvalue floor used by is_psd, scaled by (1 + |lambda_max|).  `residual`
/// bounds reconstruction errors and Hermiticity defects.
struct Tolerance {
  double rank_rel = 1e-10;
  double psd_abs = 1e-10;
  double residual = 1e-8;

  void validate() const;
};

/// Subsystem dimensions (2, 2, n).  Basis index of |a>|b>|c> is a*2n + b*n + c.
struct Dims {
  int n = 2;

  constexpr int dim() const { return 4 * n; }
  friend constexpr bool operator==(Dims, Dims) = default;
};

enum class Transpose { A, B, AB };
enum class Party { A, B, C, AB };

inline constexpr Transpose kAllTransposes[] = {Transpose::A, Transpose::B, Transpose::AB};

const char* to_string(Transpose t);
const char* to_string(Party p);

/// Throws DimensionError unless `m` is dims.dim() x dims.dim().
void require_shape(const CMatrix& m, Dims dims);
/// Throws Error on NaN or infinite entries.
void require_finite(const CMatrix& m);

CMatrix partial_transpose(const CMatrix& m, Dims dims, Transpose parties);

/// Numerical rank with the sigma <= rank_rel * sigma_max * dim rule.
int numerical_rank(const CMatrix& m, const Tolerance& tol = {});
/// Orthonormal basis (as columns) of the numerical kernel.
CMatrix kernel_basis(const CMatrix& m, const Tolerance& tol = {});
/// Orthonormal basis (as columns) of the numerical range (column space).
CMatrix range_basis(const CMatrix& m, const Tolerance& tol = {});

double hermiticity_defect(const CMatrix& m);
/// (m + m^dagger)/2, or HermiticityError when the defect exceeds tol.residual
/// relative to max(1, ||m||).
CMatrix hermitize(const CMatrix& m, const Tolerance& tol = {});

/// Eigenvalues in ascending order of a Hermitian matrix (symmetrised first).
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m, const Tolerance& tol = {});
double min_eigenvalue(const CMatrix& m, const Tolerance& tol = {});
bool is_psd(const CMatrix& m, const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse of a Hermitian matrix restricted to its
/// numerical range.
CMatrix pseudo_inverse_hermitian(const CMatrix& m, const Tolerance& tol = {});
/// Principal square root of a Hermitian PSD matrix (negative eigenvalues are
/// clamped at zero).
CMatrix psd_sqrt(const CMatrix& m);
/// Inverse of psd_sqrt; throws RankMismatch if `m` is numerically singular.
CMatrix psd_inverse_sqrt(const CMatrix& m, const Tolerance& tol = {});

/// <vec| rho |vec> on the parties that remain after contracting `party`.
CMatrix local_project(const CMatrix& rho, Dims dims, Party party, const CVector& vec);

/// Reduced density matrix of a single party or of AB.
CMatrix reduced_state(const CMatrix& rho, Dims dims, Party keep);

double commutator_norm(const CMatrix& x, const CMatrix& y);

struct SimultaneousEigen {
  CMatrix basis;        ///< unitary, columns are the common eigenvectors
  CMatrix eigenvalues;  ///< eigenvalues(k, i) = <v_k| ops[i] |v_k>
};

/// Common orthonormal eigenbasis of pairwise commuting normal operators.
///
/// A seeded random real combination of the Hermitian and anti-Hermitian parts
/// is diagonalised and the result checked against every input; up to eight
/// fresh combinations are tried before giving up.
SimultaneousEigen simultaneous_diagonalize(std::span<const CMatrix> ops, const Tolerance& tol = {},
                                           std::uint64_t seed = 0x5eed);

CVector kron(const CVector& a, const CVector& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector product_vector(const CVector& e, const CVector& f, const CVector& g);

/// Uniform on the complex unit sphere (normalised standard normal components).
CVector random_unit_vector(int dim, Rng& rng);
/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
CMatrix random_unitary(int dim, Rng& rng);

/// Schmidt decomposition of `v` seen as a (rows x cols) matrix, row-major over
/// the first factor.  Returns singular values and the leading factors.
struct SchmidtSplit {
  Eigen::VectorXd coefficients;
  CVector left;   ///< leading left factor (unit norm)
  CVector right;  ///< leading right factor (unit norm)
};
SchmidtSplit schmidt_split(const CVector& v, int rows, int cols);

}  // namespace trisep
