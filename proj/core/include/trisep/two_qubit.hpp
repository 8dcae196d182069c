#pragma once

// Separable decompositions of two-qubit states via the Wootters construction.

#include <vector>

#include "trisep/matcore.hpp"

namespace trisep {

struct TwoQubitTerm {
  double weight = 0.0;
  CVector e;  ///< unit vector on the first qubit
  CVector f;  ///< unit vector on the second qubit
};

/// Wootters concurrence of a 4x4 density matrix (any positive trace).
double concurrence(const CMatrix& rho);

/// At most four product terms summing to `rho`.  Throws NotPPT when the
/// concurrence exceeds tol.residual * trace (the state is entangled).
std::vector<TwoQubitTerm> two_qubit_decomposition(const CMatrix& rho, const Tolerance& tol = {});

}  // namespace trisep
