#include "trisep/classify.hpp"

#include <cmath>

#include "trisep/lowrank.hpp"
#include "trisep/nnls.hpp"
#include "trisep/two_qubit.hpp"

namespace trisep {

namespace {

constexpr double kProductTest = 1e-8;

Verdict base_verdict(const TripartiteState& state) {
  Verdict v;
  v.dims = state.dims();
  v.ranks = state.ranks();
  return v;
}

bool finish_separable(Verdict& v, const TripartiteState& state, Decomposition d, const std::string& route,
                      double tol) {
  const double err = d.residual(state.rho(), state.dims());
  v.route = route;
  if (!(err <= tol)) {
    v.verdict = VerdictClass::Undetermined;
    v.detail = route + " decomposition misses rho by " + std::to_string(err);
    return false;
  }
  v.verdict = VerdictClass::Separable;
  v.reconstruction_error = err;
  v.decomposition = std::move(d);
  return true;
}

// Swaps tensor factors so that `first` (0 = A, 1 = B, 2 = C) becomes the
// qubit of a 2 x (2N') cut; only qubit Charlie (n == 2) supports the C cut.
CMatrix bring_to_front(const CMatrix& rho, Dims dims, int first) {
  const int n = dims.n;
  const int d = dims.dim();
  std::vector<int> perm(static_cast<std::size_t>(d));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < n; ++c) {
        const int from = a * 2 * n + b * n + c;
        int to = from;
        if (first == 1) to = b * 2 * n + a * n + c;
        if (first == 2) to = c * 4 + a * 2 + b;
        perm[static_cast<std::size_t>(from)] = to;
      }
  CMatrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = rho(i, j);
  return out;
}

std::vector<BipartitionCheck> check_bipartitions(const TripartiteState& state) {
  std::vector<BipartitionCheck> out;
  const char* names[] = {"A|BC", "B|AC", "C|AB"};
  for (int cut = 0; cut < 3; ++cut) {
    BipartitionCheck c;
    c.cut = names[cut];
    if (cut == 2 && state.dims().n != 2) {
      c.detail = "Charlie is not a qubit";
      out.push_back(c);
      continue;
    }
    try {
      const auto terms = bipartite_rank_n_decompose(bring_to_front(state.rho(), state.dims(), cut),
                                                    2 * state.dims().n, state.tolerance());
      c.biseparable = !terms.empty();
      c.detail = std::to_string(terms.size()) + " product terms";
    } catch (const Error& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  }
  return out;
}

void attach_witness(Verdict& v, const TripartiteState& state, const ClassifyOptions& opts) {
  if (!opts.build_witness) return;
  try {
    v.witness = build_witness(state, opts.epsilon, opts.search);
  } catch (const NotEdge& e) {
    v.detail = std::string("witness not built: ") + e.what();
  }
}

Verdict classify_ppt(const TripartiteState& state, const ClassifyOptions& opts, int depth);

Verdict product_search_route(const TripartiteState& state, const ClassifyOptions& opts) {
  Verdict v = base_verdict(state);
  v.route = "product-search";
  SolveOptions search = opts.search;
  search.seed = opts.seed;
  const ProductSearchResult res = find_product_vectors(state, search);
  v.vectors = res.vectors;
  v.continuum = res.continuum;
  if (res.continuum) {
    v.verdict = VerdictClass::Undetermined;
    v.detail = "V[rho] is not finite; sampled representatives attached";
    return v;
  }
  if (res.vectors.empty()) {
    v.verdict = VerdictClass::PptEdge;
    attach_witness(v, state, opts);
    return v;
  }
  const Feasibility f = separability_feasible(state, res.vectors);
  v.fit_residual = f.residual;
  if (f.feasible) {
    finish_separable(v, state, f.decomposition, "product-search", opts.reconstruction_tol);
    return v;
  }
  v.verdict = VerdictClass::Undetermined;
  v.detail = "the " + std::to_string(res.vectors.size()) + " vectors of V[rho] do not span rho as a convex sum";
  return v;
}

Verdict subtraction_route(const TripartiteState& state, const ClassifyOptions& opts, int depth) {
  Verdict v = base_verdict(state);
  v.route = "subtraction";
  const Dims dims = state.dims();
  const int threshold = 15 * dims.n - 1;
  const int max_steps = 4 * dims.n;
  TripartiteState current = state;
  Decomposition removed;
  for (int step = 0; step < max_steps && current.ranks().sum() > threshold; ++step) {
    const KernelData kd = assemble_constraints(current);
    const auto samples = sample_product_vectors(kd, opts.subtraction_samples,
                                                opts.seed + 0x100 * static_cast<std::uint64_t>(step + 1),
                                                opts.search.membership_tol);
    std::optional<Subtraction> best;
    ProductVector best_v;
    for (const auto& s : samples) {
      try {
        Subtraction sub = subtract_product(current, s.full(), Partition::All);
        if (!best || sub.lambda > best->lambda) best = std::move(sub), best_v = s;
      } catch (const RangeMembershipError&) {
      } catch (const FactorNotProduct&) {
      }
    }
    if (!best) {
      v.verdict = VerdictClass::Undetermined;
      v.detail = "no product vector could be subtracted";
      return v;
    }
    current = TripartiteState::unnormalized(best->remainder, dims, state.tolerance());
    removed.weights.push_back(best->lambda);
    removed.vectors.push_back(best_v);
    v.subtractions.push_back({best->lambda, best_v, current.ranks(), best->psd});
  }
  if (current.ranks().sum() > threshold) {
    v.verdict = VerdictClass::Undetermined;
    v.detail = "rank sum still above 15N-1 after " + std::to_string(max_steps) + " subtractions";
    return v;
  }
  const double t = current.trace();
  Decomposition total = removed;
  if (t > state.tolerance().residual) {
    const TripartiteState normalized(current.rho() / t, dims, state.tolerance());
    const Verdict rest = classify_ppt(normalized, opts, depth + 1);
    if (rest.verdict != VerdictClass::Separable) {
      v.verdict = VerdictClass::Undetermined;
      v.vectors = rest.vectors;
      v.detail = std::string("remainder after subtraction is ") + to_string(rest.verdict) + " via " + rest.route;
      return v;
    }
    for (std::size_t i = 0; i < rest.decomposition->size(); ++i) {
      total.weights.push_back(rest.decomposition->weights[i] * t);
      total.vectors.push_back(rest.decomposition->vectors[i]);
    }
  }
  finish_separable(v, state, total, "subtraction", opts.reconstruction_tol);
  return v;
}

std::optional<Verdict> low_rank_routes(const TripartiteState& state, const ClassifyOptions& opts) {
  const Dims dims = state.dims();
  const int r = state.rank();
  Verdict v = base_verdict(state);
  if (dims.n == 1) {
    Decomposition d;
    for (const auto& t : two_qubit_decomposition(state.rho(), state.tolerance())) {
      d.weights.push_back(t.weight);
      d.vectors.push_back(ProductVector::from_factors(t.e, t.f, CVector::Ones(1)));
    }
    finish_separable(v, state, d, "two-qubit", opts.reconstruction_tol);
    return v;
  }
  if (r == dims.n) {
    try {
      if (finish_separable(v, state, decompose_rank_n(state, opts.seed), "rank-n", opts.reconstruction_tol)) return v;
    } catch (const Error& e) {
      v.detail = e.what();
    }
  }
  if (dims.n == 2 && (r == 2 || r == 3)) {
    try {
      const Decomposition d =
          r == 2 ? decompose_rank2_3qubit(state, opts.seed) : decompose_rank3_3qubit(state, opts.seed);
      if (finish_separable(v, state, d, r == 2 ? "rank-2" : "rank-3", opts.reconstruction_tol)) return v;
    } catch (const Error& e) {
      v.detail = e.what();
    }
  }
  if (dims.n == 2 && r == 4) {
    const CMatrix reduced_bc = state.rho().block(0, 0, 4, 4) + state.rho().block(4, 4, 4, 4);
    if (numerical_rank(reduced_bc, state.tolerance()) == 4) {
      try {
        const auto terms = bipartite_rank_n_decompose(state.rho(), 4, state.tolerance(), opts.seed);
        Decomposition d;
        bool all_product = true;
        for (const auto& t : terms) {
          const SchmidtSplit s = schmidt_split(t.b, 2, 2);
          if (s.coefficients.size() > 1 && s.coefficients(1) > kProductTest * s.coefficients(0)) all_product = false;
          d.weights.push_back(t.weight);
          d.vectors.push_back(ProductVector::from_factors(t.e, s.left, s.right));
        }
        if (opts.verify_bipartitions) v.bipartitions = check_bipartitions(state);
        if (all_product) {
          if (finish_separable(v, state, d, "bipartite-rank-4", opts.reconstruction_tol)) return v;
        } else {
          // The A|BC decomposition is unique and has an entangled BC factor.
          v.route = "bipartite-rank-4";
          SolveOptions search = opts.search;
          search.seed = opts.seed;
          const ProductSearchResult res = find_product_vectors(state, search);
          v.vectors = res.vectors;
          v.continuum = res.continuum;
          if (res.vectors.empty() && !res.continuum) {
            v.verdict = VerdictClass::PptEdge;
            attach_witness(v, state, opts);
          } else {
            v.verdict = VerdictClass::PptEntangledNonEdge;
            v.detail = "unique A|BC decomposition has an entangled BC factor";
          }
          return v;
        }
      } catch (const Error& e) {
        v.detail = e.what();
      }
    }
  }
  return std::nullopt;
}

Verdict classify_ppt(const TripartiteState& state, const ClassifyOptions& opts, int depth) {
  if (!opts.skip_low_rank || depth > 0)
    if (auto v = low_rank_routes(state, opts)) return *v;
  if (state.ranks().sum() > 15 * state.dims().n - 1) return subtraction_route(state, opts, depth);
  return product_search_route(state, opts);
}

ProductVector lift(const ProductVector& v, const CMatrix& iso) { return ProductVector::from_factors(v.e, v.f, iso * v.g); }

}  // namespace

const char* to_string(VerdictClass c) {
  switch (c) {
    case VerdictClass::NptEntangled:
      return "NPT_ENTANGLED";
    case VerdictClass::Separable:
      return "SEPARABLE";
    case VerdictClass::PptEdge:
      return "PPT_EDGE";
    case VerdictClass::PptEntangledNonEdge:
      return "PPT_ENTANGLED_NONEDGE";
    case VerdictClass::Undetermined:
      return "UNDETERMINED";
  }
  return "UNDETERMINED";
}

Feasibility separability_feasible(const TripartiteState& state, const std::vector<ProductVector>& vectors) {
  Feasibility f;
  const Eigen::VectorXd b = hermitian_to_real(state.rho());
  Eigen::MatrixXd a(b.size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i)
    a.col(static_cast<Eigen::Index>(i)) = hermitian_to_real(vectors[i].projector());
  const NnlsResult r = nnls(a, b);
  f.residual = r.residual;
  f.feasible = !vectors.empty() && r.residual <= state.tolerance().residual;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double w = r.x(static_cast<Eigen::Index>(i));
    f.weights.push_back(w);
    if (w > 0) {
      f.decomposition.weights.push_back(w);
      f.decomposition.vectors.push_back(vectors[i]);
    }
  }
  return f;
}

Verdict classify(const TripartiteState& state, const ClassifyOptions& opts) {
  if (!state.is_ppt()) {
    Verdict v = base_verdict(state);
    v.verdict = VerdictClass::NptEntangled;
    v.route = "partial-transpose";
    double worst = 0.0;
    for (int op = 1; op < 4; ++op) worst = std::min(worst, state.min_eigenvalue_of(op));
    v.detail = "smallest partial-transpose eigenvalue " + std::to_string(worst);
    return v;
  }
  const CharlieSupport cs = compress_charlie(state.rho(), state.dims(), state.tolerance());
  if (cs.dims.n == state.dims().n) {
    Verdict v = classify_ppt(state, opts, 0);
    if (opts.verify_bipartitions && v.bipartitions.empty()) v.bipartitions = check_bipartitions(state);
    return v;
  }
  const TripartiteState compressed(cs.compressed / cs.compressed.trace().real(), cs.dims, state.tolerance());
  Verdict v = classify_ppt(compressed, opts, 0);
  v.dims = state.dims();
  v.ranks = state.ranks();
  if (v.decomposition) {
    *v.decomposition = lift_charlie(*v.decomposition, cs.isometry);
    for (auto& w : v.decomposition->weights) w *= state.trace();
    v.reconstruction_error = v.decomposition->residual(state.rho(), state.dims());
    if (v.verdict == VerdictClass::Separable && !(v.reconstruction_error <= opts.reconstruction_tol)) {
      v.verdict = VerdictClass::Undetermined;
      v.detail = "lifted decomposition misses rho by " + std::to_string(v.reconstruction_error);
    }
  }
  for (auto& p : v.vectors) p = lift(p, cs.isometry);
  for (auto& s : v.subtractions) s.vector = lift(s.vector, cs.isometry);
  if (v.witness) v.witness.reset();
  if (opts.build_witness && v.verdict == VerdictClass::PptEdge) attach_witness(v, state, opts);
  if (opts.verify_bipartitions && v.bipartitions.empty()) v.bipartitions = check_bipartitions(state);
  return v;
}

}  // namespace trisep
