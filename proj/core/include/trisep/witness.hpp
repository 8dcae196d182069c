#pragma once

// Entanglement witnesses W = P + Q^tA + R^tB + S^tAB - eps 1 for edge states,
// with P, Q, R, S the projectors onto the kernels of delta and its partial
// transposes and eps the minimum of the operator sum over product vectors.

#include <cstdint>
#include <optional>

#include "trisep/productfind.hpp"
#include "trisep/states.hpp"

namespace trisep {

struct EpsilonOptions {
  int starts = 200;
  std::uint64_t seed = 0x5eedULL;
  int max_sweeps = 500;
  /// Dense grid cross-check on three qubits: step in both chart coordinates
  /// over the unit disc of each chart, followed by local refinement.
  bool grid_check = true;
  double grid_step = 0.05;
  /// Values above -clamp are reported as 0.
  double clamp = 1e-10;
};

struct EpsilonResult {
  double value = 0.0;            ///< smallest value found (multistart and grid)
  double multistart_value = 0.0;
  std::optional<double> grid_value;
  ProductVector argmin;
};

/// <e,f,g| op |e,f,g> for unit factors.
double product_expectation(const CMatrix& op, Dims dims, const ProductVector& v);

/// Infimum of <e,f,g| op |e,f,g> over unit product vectors by alternating
/// minimisation over the three factors from seeded random starts.
EpsilonResult epsilon_inf(const CMatrix& op, Dims dims, const EpsilonOptions& opts = {});

struct Witness {
  Dims dims;
  CMatrix p, q, r, s;  ///< projectors onto K(delta), K(delta^tA), K(delta^tB), K(delta^tAB)
  double epsilon = 0.0;
  CMatrix w;

  /// P + Q^tA + R^tB + S^tAB.
  CMatrix operator_sum() const;
  double expectation(const CMatrix& rho) const { return (w * rho).trace().real(); }
};

/// P + Q^tA + R^tB + S^tAB - epsilon 1.
CMatrix assemble_witness(const CMatrix& p, const CMatrix& q, const CMatrix& r, const CMatrix& s, double epsilon,
                         Dims dims);

/// Throws NotEdge when delta has product vectors in V[delta] or is not PPT.
Witness build_witness(const TripartiteState& delta, const EpsilonOptions& eps = {}, const SolveOptions& search = {});

}  // namespace trisep
