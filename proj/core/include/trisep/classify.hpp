#pragma once

// End-to-end classification of PPT states on C^2 (x) C^2 (x) C^N: NPT
// detection, the constructive low-rank routes, the subtraction loop above the
// generic threshold and the product-vector search with a convex-sum fit.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trisep/productfind.hpp"
#include "trisep/states.hpp"
#include "trisep/witness.hpp"

namespace trisep {

enum class VerdictClass { NptEntangled, Separable, PptEdge, PptEntangledNonEdge, Undetermined };

/// NPT_ENTANGLED, SEPARABLE, PPT_EDGE, PPT_ENTANGLED_NONEDGE or UNDETERMINED.
const char* to_string(VerdictClass c);

struct SubtractionStep {
  double lambda = 0.0;
  ProductVector vector;
  RankSignature ranks_after;
  std::array<bool, 4> psd{};
};

struct BipartitionCheck {
  std::string cut;  ///< "A|BC", "B|AC" or "C|AB"
  bool biseparable = false;
  std::string detail;
};

struct Verdict {
  VerdictClass verdict = VerdictClass::Undetermined;
  /// partial-transpose, two-qubit, rank-n, rank-2, rank-3, bipartite-rank-4,
  /// subtraction or product-search.
  std::string route;
  Dims dims;
  RankSignature ranks;
  std::optional<Decomposition> decomposition;
  std::optional<Witness> witness;
  std::vector<ProductVector> vectors;  ///< V[rho], or representatives of a continuum
  bool continuum = false;
  double reconstruction_error = 0.0;   ///< ||rho - sum w P||_F for SEPARABLE
  std::optional<double> fit_residual;  ///< NNLS residual when the convex fit ran
  std::vector<SubtractionStep> subtractions;
  std::vector<BipartitionCheck> bipartitions;
  std::string detail;
};

struct ClassifyOptions {
  std::uint64_t seed = 0x5eedULL;
  SolveOptions search;
  EpsilonOptions epsilon;
  bool build_witness = false;
  /// Attempt the rank-4 bipartite decomposition across B|AC and C|AB too.
  bool verify_bipartitions = false;
  /// Skip the constructive low-rank routes and go straight to the threshold
  /// routes (used to cross-check routes against each other).
  bool skip_low_rank = false;
  int subtraction_samples = 16;
  double reconstruction_tol = 1e-7;
};

struct Feasibility {
  bool feasible = false;
  Decomposition decomposition;  ///< vectors with positive weight
  std::vector<double> weights;  ///< one weight per input vector
  double residual = 0.0;        ///< ||rho - sum w_i P_i||_F
};

/// Nonnegative least squares of rho over the projectors on `vectors`;
/// feasible when the residual is at most tol.residual.
Feasibility separability_feasible(const TripartiteState& state, const std::vector<ProductVector>& vectors);

Verdict classify(const TripartiteState& state, const ClassifyOptions& opts = {});

}  // namespace trisep
