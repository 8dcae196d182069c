// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trisep/lowrank.hpp"
#include "trisep/report.hpp"

namespace {

using namespace trisep;

// Pinned tolerances.
constexpr double kReconstruction = 1e-7;
constexpr double kCommutator = 1e-8;
constexpr double kSeconds = 1.0;
constexpr double kKernelResidual = 1e-8;
constexpr double kFidelity = 1e-8;
constexpr double kPptFloor = -1e-10;
constexpr double kGridSigma = 1e-3;
constexpr double kGridStep = 0.05;
constexpr double kEpsilonMin = 1e-4;
constexpr double kWitnessFloor = -1e-8;
constexpr int kWitnessSamples = 10000;
constexpr int kBound7777 = 160;
constexpr int kBoundMarginal = 4608;
constexpr double kMinorTol = 1e-7;
constexpr double kSearchRate = 0.95;
constexpr int kMaxSubtractions = 8;
constexpr double kWernerMargin = 0.02;
constexpr double kWeightError = 1e-6;
constexpr double kWithheldResidual = 1e-3;

struct Line {
  bool pass = true;
  std::string detail;
  std::string first_failure;
  double seconds = 0.0;
  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

void report(int id, const char* name, const Line& l) {
  std::printf("criterion %d %s %s: %s (%.1f s)%s%s\n", id, l.pass ? "PASS" : "FAIL", name, l.detail.c_str(), l.seconds,
              l.pass ? "" : "; first failure: ", l.first_failure.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TripartiteState state_of(const oracle::Mixture& m, int n) { return TripartiteState(m.rho, Dims{n}); }

double reconstruction(const Decomposition& d, const CMatrix& rho) {
  const int n = static_cast<int>(rho.rows()) / 4;
  CMatrix back = CMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const CVector v = oracle::product(d.vectors[i].e, d.vectors[i].f, d.vectors[i].g);
    back += d.weights[i] * v * v.adjoint();
  }
  (void)n;
  return (back - rho).norm();
}

double best_fidelity(const oracle::Factors& x, const std::vector<ProductVector>& vs) {
  double best = 0.0;
  for (const auto& v : vs) best = std::max(best, oracle::fidelity(x.e, x.f, x.g, v.e, v.f, v.g));
  return best;
}

// ---------------------------------------------------------------- criterion 1
Line canonical_round_trip() {
  Line l;
  double worst_err = 0, worst_comm = 0, worst_time = 0;
  for (int n = 2; n <= 5; ++n)
    for (std::uint64_t k = 0; k < 100; ++k) {
      const std::uint64_t seed = 1000 * static_cast<std::uint64_t>(n) + k;
      const TripartiteState s = random_canonical_state(n, seed);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const CanonicalForm f = extract_canonical(s);
        const Decomposition d = decompose_rank_n(s);
        const double t = seconds_since(t0);
        const double err = reconstruction(d, s.rho());
        const double comm = std::max({commutator_norm(f.b, f.c), commutator_norm(f.b, f.c.adjoint()),
                                      commutator_norm(f.b, f.b.adjoint()), commutator_norm(f.c, f.c.adjoint())});
        worst_err = std::max(worst_err, err);
        worst_comm = std::max(worst_comm, comm);
        worst_time = std::max(worst_time, t);
        if (d.size() != static_cast<std::size_t>(n)) l.fail("wrong term count at N=" + std::to_string(n));
        if (!(err <= kReconstruction)) l.fail(fmt("reconstruction %.3g", err));
        if (!(comm <= kCommutator)) l.fail(fmt("commutator %.3g", comm));
        if (!(t < kSeconds)) l.fail(fmt("runtime %.3g s", t));
      } catch (const Error& e) {
        l.fail(std::string("seed ") + std::to_string(seed) + ": " + e.what());
      }
    }
  l.detail = fmt("400 states, max error %.2e", worst_err) + fmt(", max commutator %.2e", worst_comm) +
               fmt(", max time %.3f s", worst_time);
  return l;
}

// ---------------------------------------------------------------- criterion 2
Line low_rank_three_qubit() {
  Line l;
  oracle::Rng rng(2002);
  double worst_kernel = 0, worst_err = 0;
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    const int r = 2 + i % 2;
    const auto mix = oracle::random_mixture(2, r, rng);
    const TripartiteState s = state_of(mix, 2);
    try {
      const KernelProductVector k = kernel_product_vector(s, 2002 + static_cast<std::uint64_t>(i));
      const double kr = (mix.rho * oracle::product(k.vector.e, k.vector.f, k.vector.g)).norm();
      const Decomposition d = r == 2 ? decompose_rank2_3qubit(s) : decompose_rank3_3qubit(s);
      const double err = reconstruction(d, mix.rho);
      worst_kernel = std::max(worst_kernel, kr);
      worst_err = std::max(worst_err, err);
      if (!(kr <= kKernelResidual) || !(err <= kReconstruction) || d.size() != static_cast<std::size_t>(r)) ++failures;
    } catch (const Error& e) {
      ++failures;
    }
  }
  if (failures) l.fail(std::to_string(failures) + " failures");
  l.detail = std::to_string(200 - failures) + "/200 ok" + fmt(", max kernel residual %.2e", worst_kernel) +
             fmt(", max error %.2e", worst_err);
  return l;
}

// ---------------------------------------------------------------- criterion 3
Line bipartite_uniqueness() {
  Line l;
  oracle::Rng rng(3003);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    CMatrix rho = CMatrix::Zero(8, 8);
    std::vector<CVector> es, bs;
    std::uniform_real_distribution<double> w(0.2, 1.0);
    double total = 0;
    std::vector<double> ws;
    for (int t = 0; t < 4; ++t) {
      es.push_back(oracle::unit(2, rng));
      bs.push_back(oracle::unit(4, rng));
      ws.push_back(w(rng));
      total += ws.back();
    }
    for (int t = 0; t < 4; ++t) {
      const CVector v = kron(es[static_cast<std::size_t>(t)], bs[static_cast<std::size_t>(t)]);
      rho += ws[static_cast<std::size_t>(t)] / total * v * v.adjoint();
    }
    try {
      const auto terms = bipartite_rank_n_decompose(rho, 4);
      if (terms.size() != 4) l.fail("term count " + std::to_string(terms.size()));
      for (int t = 0; t < 4; ++t) {
        double best = 0;
        for (const auto& x : terms)
          best = std::max(best, std::norm(x.e.dot(es[static_cast<std::size_t>(t)])) *
                                    std::norm(x.b.dot(bs[static_cast<std::size_t>(t)])));
        worst = std::max(worst, 1 - best);
        if (!(best >= 1 - kFidelity)) l.fail(fmt("fidelity %.12f", best));
      }
    } catch (const Error& e) {
      l.fail(e.what());
    }
  }
  l.detail = fmt("100 states, max 1 - fidelity %.2e", worst);
  return l;
}

// ---------------------------------------------------------------- criterion 4
// sigma_min of A(e, f) over a grid in the unit disc of each of the four charts.
double grid_sigma_min(const TripartiteState& s) {
  std::array<std::array<CMatrix, 4>, 4> blocks;  // [op][2a+b] = K_op^dagger restricted to block ab (k x 2)
  for (int op = 0; op < 4; ++op) {
    const CMatrix k = oracle::kernel_basis(oracle::op(s.rho(), 2, op));
    for (int ab = 0; ab < 4; ++ab) blocks[op][ab] = k.middleRows(2 * ab, 2).adjoint();
  }
  std::vector<Complex> disc;
  const int steps = static_cast<int>(std::lround(1.0 / kGridStep));
  for (int i = -steps; i <= steps; ++i)
    for (int j = -steps; j <= steps; ++j) {
      const Complex z(i * kGridStep, j * kGridStep);
      if (std::abs(z) <= 1.0 + 1e-12) disc.push_back(z);
    }
  double worst = 1e300;
  for (int chart = 0; chart < 4; ++chart)
    for (const Complex alpha : disc) {
      CVector e(2);
      if (chart & 1)
        e << 1.0, alpha;
      else
        e << alpha, 1.0;
      e.normalize();
      for (const Complex beta : disc) {
        CVector f(2);
        if (chart & 2)
          f << 1.0, beta;
        else
          f << beta, 1.0;
        f.normalize();
        Eigen::Matrix2cd gram = Eigen::Matrix2cd::Zero();
        for (int op = 0; op < 4; ++op) {
          const bool ca = op == 1 || op == 3, cb = op == 2 || op == 3;
          const CVector ee = ca ? CVector(e.conjugate()) : e;
          const CVector ff = cb ? CVector(f.conjugate()) : f;
          CMatrix a = CMatrix::Zero(blocks[op][0].rows(), 2);
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) a += ee(x) * ff(y) * blocks[op][2 * x + y];
          gram += a.adjoint() * a;
        }
        const double tr = gram.trace().real();
        const double det = (gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0)).real();
        const double lmin = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det)));
        worst = std::min(worst, std::sqrt(std::max(0.0, lmin)));
      }
    }
  return worst;
}

Line edge_pipeline() {
  Line l;
  const TripartiteState s = shifts_upb_state();
  double min_pt = 1e300;
  for (int op = 1; op < 4; ++op) min_pt = std::min(min_pt, oracle::min_eigenvalue(oracle::op(s.rho(), 2, op)));
  if (!(min_pt >= kPptFloor)) l.fail(fmt("transpose eigenvalue %.3g", min_pt));
  const ProductSearchResult search = find_product_vectors(s);
  if (!search.vectors.empty() || search.continuum) l.fail("product search returned vectors");
  const double sigma = grid_sigma_min(s);
  if (!(sigma >= kGridSigma)) l.fail(fmt("grid sigma_min %.3g", sigma));
  ClassifyOptions o;
  o.build_witness = true;
  const Verdict v = classify(s, o);
  if (v.verdict != VerdictClass::PptEdge) l.fail(std::string("verdict ") + to_string(v.verdict));
  if (!v.witness) {
    l.fail("no witness");
    return l;
  }
  const Witness& w = *v.witness;
  const double eps = w.epsilon;
  const double tr = (w.w * s.rho()).trace().real();
  if (!(eps >= kEpsilonMin)) l.fail(fmt("epsilon %.3g", eps));
  if (!(std::abs(tr + eps) <= 1e-8)) l.fail(fmt("trace(W rho) + eps = %.3g", tr + eps));
  oracle::Rng rng(4004);
  double worst = 1e300;
  for (int i = 0; i < kWitnessSamples; ++i) {
    const CVector x = oracle::random_factors(2, rng).full();
    worst = std::min(worst, (x.adjoint() * w.w * x)(0, 0).real());
  }
  if (!(worst >= kWitnessFloor)) l.fail(fmt("trace(W sigma) %.3g", worst));
  l.detail = fmt("min transpose eigenvalue %.2e", min_pt) + fmt(", grid sigma_min %.4f", sigma) +
             fmt(", epsilon %.6f", eps) + fmt(", trace(W rho) %.6f", tr) + fmt(", min trace(W sigma) %.4f", worst);
  return l;
}

// ---------------------------------------------------------------- criterion 5
// Largest 2 x 2 minor of A at a product vector, rows from test-side kernels.
double max_minor(const CMatrix& rho, const ProductVector& v) {
  std::vector<CVector> rows;
  for (int op = 0; op < 4; ++op) {
    const CMatrix k = oracle::kernel_basis(oracle::op(rho, 2, op));
    const oracle::Factors x{v.e, v.f, v.g};
    const CVector ee = (op == 1 || op == 3) ? CVector(v.e.conjugate()) : v.e;
    const CVector ff = (op == 2 || op == 3) ? CVector(v.f.conjugate()) : v.f;
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
      CVector row(2);
      for (int g = 0; g < 2; ++g) {
        CVector unit = CVector::Zero(2);
        unit(g) = 1.0;
        row(g) = k.col(c).dot(oracle::product(ee, ff, unit));
      }
      rows.push_back(row);
    }
  }
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      worst = std::max(worst, std::abs(rows[i](0) * rows[j](1) - rows[i](1) * rows[j](0)));
  return worst;
}

Line solution_counts() {
  Line l;
  oracle::Rng rng(5005);
  int max7 = 0, maxm = 0, accepted = 0;
  double worst_minor = 0;
  for (int i = 0; i < 50; ++i) {
    const auto mix = oracle::random_mixture(2, 7, rng);
    const TripartiteState s = state_of(mix, 2);
    if (s.ranks() != RankSignature{{7, 7, 7, 7}}) l.fail("signature is not (7,7,7,7)");
    const ProductSearchResult r = find_product_vectors(s);
    for (int c : r.candidate_counts) max7 = std::max(max7, c);
    for (const auto& v : r.vectors) {
      worst_minor = std::max(worst_minor, max_minor(mix.rho, v));
      ++accepted;
    }
  }
  if (max7 > kBound7777) l.fail("candidate count " + std::to_string(max7));
  for (int i = 0; i < 10; ++i) {
    const CMatrix h = oracle::marginal_instance(rng);
    const ProductSearchResult r = find_product_vectors(h, Dims{2}, Tolerance{});
    for (int c : r.candidate_counts) maxm = std::max(maxm, c);
    for (const auto& v : r.vectors) {
      worst_minor = std::max(worst_minor, max_minor(h, v));
      ++accepted;
    }
  }
  if (maxm > kBoundMarginal) l.fail("marginal candidate count " + std::to_string(maxm));
  if (!(worst_minor <= kMinorTol)) l.fail(fmt("minor %.3g", worst_minor));
  l.detail = "max candidates (7,7,7,7) " + std::to_string(max7) + ", marginal " + std::to_string(maxm) + ", " +
             std::to_string(accepted) + " accepted solutions" + fmt(", max minor %.2e", worst_minor);
  return l;
}

// ---------------------------------------------------------------- criterion 6
// Three-qubit PPT state with rank sum above 29; i % 4 picks the family.
CMatrix above_threshold_state(int i, oracle::Rng& rng) {
  if (i % 4 < 2) return oracle::random_mixture(2, 8 + (i / 4) % 9, rng).rho;
  const int removed = i % 4 == 2 ? 1 : 2;
  for (;;) {
    CMatrix p = CMatrix::Zero(8, 8);
    CMatrix basis(8, removed);
    for (int c = 0; c < removed; ++c) basis.col(c) = oracle::unit(8, rng);
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(basis).householderQ() * CMatrix::Identity(8, removed);
    const CMatrix rho = (CMatrix::Identity(8, 8) - q * q.adjoint()) / static_cast<double>(8 - removed);
    bool ppt = true;
    for (int op = 1; op < 4; ++op) ppt = ppt && oracle::min_eigenvalue(oracle::op(rho, 2, op)) >= 1e-9;
    if (ppt) return rho;
  }
}

Line threshold_behaviour() {
  Line l;
  oracle::Rng rng(6006);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    CMatrix rho = oracle::random_mixture(n, std::min(4 * n, 4 * n - 5 + i % 7), rng).rho;
    const KernelData kd = assemble_constraints(TripartiteState(rho, Dims{n}));
    int oracle_k = 0;
    for (int op = 0; op < 4; ++op) oracle_k += 4 * n - oracle::hermitian_rank(oracle::op(rho, n, op));
    bool threw = false;
    try {
      build_minor_system(kd);
    } catch (const ThresholdNotMet&) {
      threw = true;
    }
    if (threw != (oracle_k <= n)) l.fail("ThresholdNotMet mismatch at k_tot " + std::to_string(oracle_k));
    ++checked;
  }
  int found = 0, steps_max = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    const CMatrix rho = above_threshold_state(i, rng);
    const TripartiteState s(rho, Dims{2});
    if (s.ranks().sum() <= 29) {
      l.fail("generator produced rank sum " + std::to_string(s.ranks().sum()));
      continue;
    }
    ++total;
    SolveOptions so;
    so.seed = 6006 + static_cast<std::uint64_t>(i);
    const ProductSearchResult r = find_product_vectors(s, so);
    if (!r.vectors.empty() || r.continuum) ++found;
    ClassifyOptions co;
    co.seed = so.seed;
    const Verdict v = classify(s, co);
    const int steps = static_cast<int>(v.subtractions.size());
    steps_max = std::max(steps_max, steps);
    if (v.route != "subtraction" || steps < 1 || steps > kMaxSubtractions) {
      l.fail("state " + std::to_string(i) + ": route " + v.route + " with " + std::to_string(steps) + " steps, " +
             v.detail);
      continue;
    }
    if (v.subtractions.back().ranks_after.sum() > 29) l.fail("loop stopped above the threshold");
    CMatrix remainder = rho;
    for (const auto& step : v.subtractions) {
      const CVector x = oracle::product(step.vector.e, step.vector.f, step.vector.g);
      remainder -= step.lambda * x * x.adjoint();
      for (int op = 0; op < 4; ++op) {
        if (!step.psd[static_cast<std::size_t>(op)]) l.fail("step reported a non-PSD operator");
        if (oracle::min_eigenvalue(oracle::op(remainder, 2, op)) < -1e-9) l.fail("remainder lost positivity");
      }
    }
  }
  const double rate = total ? static_cast<double>(found) / total : 0.0;
  if (!(rate >= kSearchRate)) l.fail(fmt("nonempty rate %.3f", rate));
  l.detail = std::to_string(checked) + " threshold checks, nonempty or continuum " + std::to_string(found) + "/" +
             std::to_string(total) + ", max subtractions " + std::to_string(steps_max);
  return l;
}

// ---------------------------------------------------------------- criterion 7
Line werner_routing() {
  Line l;
  const double t = oracle::werner_threshold();
  if (!(0.40 >= t + kWernerMargin && 0.30 <= t - kWernerMargin)) l.fail(fmt("threshold %.6f not bracketed", t));
  const Verdict hi = classify(werner_state(0.40));
  if (hi.verdict != VerdictClass::NptEntangled) l.fail(std::string("p=0.40 gave ") + to_string(hi.verdict));
  const TripartiteState lo_state = werner_state(0.30);
  const Verdict lo = classify(lo_state);
  double err = 1e300;
  if (lo.decomposition) err = reconstruction(*lo.decomposition, lo_state.rho());
  if (lo.verdict != VerdictClass::Separable) l.fail(std::string("p=0.30 gave ") + to_string(lo.verdict));
  if (!(err <= kReconstruction)) l.fail(fmt("reconstruction %.3g", err));
  l.detail = fmt("oracle threshold %.6f", t) + ", p=0.40 " + to_string(hi.verdict) + ", p=0.30 " +
             to_string(lo.verdict) + fmt(" error %.2e", err);
  return l;
}

// ---------------------------------------------------------------- criterion 8
Line feasibility_recovery() {
  Line l;
  oracle::Rng rng(8008);
  double worst_w = 0, min_withheld = 1e300;
  int separable = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 4 + i % 7;
    const auto mix = oracle::random_mixture(3, k, rng);
    const TripartiteState s = state_of(mix, 3);
    ClassifyOptions o;
    o.seed = 8008 + static_cast<std::uint64_t>(i);
    const Verdict v = classify(s, o);
    if (v.verdict != VerdictClass::Separable || !v.decomposition) {
      l.fail("mixture " + std::to_string(i) + " gave " + to_string(v.verdict) + " via " + v.route);
      continue;
    }
    ++separable;
    if (v.vectors.size() != mix.vectors.size()) l.fail("V differs from the generator set at " + std::to_string(i));
    for (std::size_t g = 0; g < mix.vectors.size(); ++g) {
      const auto& x = mix.vectors[g];
      if (best_fidelity(x, v.vectors) < 1 - kFidelity) l.fail("generator missing from V");
      double w = 0;
      for (std::size_t j = 0; j < v.decomposition->size(); ++j) {
        const auto& y = v.decomposition->vectors[j];
        if (oracle::fidelity(x.e, x.f, x.g, y.e, y.f, y.g) >= 1 - kFidelity) w += v.decomposition->weights[j];
      }
      worst_w = std::max(worst_w, std::abs(w - mix.weights[g]));
    }
    std::vector<ProductVector> withheld;
    for (std::size_t g = 1; g < mix.vectors.size(); ++g)
      withheld.push_back(ProductVector::from_factors(mix.vectors[g].e, mix.vectors[g].f, mix.vectors[g].g));
    const Feasibility f = separability_feasible(s, withheld);
    min_withheld = std::min(min_withheld, f.residual);
    if (f.feasible || !(f.residual > kWithheldResidual)) l.fail(fmt("withheld residual %.3g", f.residual));
  }
  if (!(worst_w <= kWeightError)) l.fail(fmt("weight error %.3g", worst_w));
  l.detail = std::to_string(separable) + "/100 SEPARABLE" + fmt(", max weight error %.2e", worst_w) +
             fmt(", min withheld residual %.3e", min_withheld);
  return l;
}

// ---------------------------------------------------------------- criterion 9
// Bitwise reruns of a sample from every criterion above.
std::string digest_run() {
  std::string out;
  for (int n = 2; n <= 5; ++n) {
    const TripartiteState s = random_canonical_state(n, 1000 * static_cast<std::uint64_t>(n));
    out += decomposition_to_json(decompose_rank_n(s)).dump();
  }
  oracle::Rng rng(9009);
  for (int r = 2; r <= 3; ++r) {
    const TripartiteState s = state_of(oracle::random_mixture(2, r, rng), 2);
    out += product_vector_to_json(kernel_product_vector(s).vector).dump();
    out += decomposition_to_json(r == 2 ? decompose_rank2_3qubit(s) : decompose_rank3_3qubit(s)).dump();
  }
  ClassifyOptions wo;
  wo.build_witness = true;
  out += verdict_to_json(classify(shifts_upb_state(), wo), Tolerance{}).dump();
  out += search_to_json(find_product_vectors(state_of(oracle::random_mixture(2, 7, rng), 2))).dump();
  out += search_to_json(find_product_vectors(oracle::marginal_instance(rng), Dims{2}, Tolerance{})).dump();
  out += verdict_to_json(classify(TripartiteState(above_threshold_state(0, rng), Dims{2})), Tolerance{}).dump();
  out += verdict_to_json(classify(TripartiteState(above_threshold_state(2, rng), Dims{2})), Tolerance{}).dump();
  out += verdict_to_json(classify(werner_state(0.30)), Tolerance{}).dump();
  out += verdict_to_json(classify(state_of(oracle::random_mixture(3, 10, rng), 3)), Tolerance{}).dump();
  return out;
}

Line determinism() {
  Line l;
  const std::string a = digest_run();
  const std::string b = digest_run();
  if (a != b) l.fail("reruns differ");
  l.detail = std::to_string(a.size()) + " bytes of reports compared across two reruns";
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria{
      {"canonical round-trip", canonical_round_trip},
      {"low-rank three-qubit separability", low_rank_three_qubit},
      {"bipartite uniqueness", bipartite_uniqueness},
      {"edge-state pipeline", edge_pipeline},
      {"solution-count bounds", solution_counts},
      {"threshold behaviour", threshold_behaviour},
      {"partial-transpose routing", werner_routing},
      {"feasibility recovery", feasibility_recovery},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l.fail(std::string("exception: ") + e.what());
    }
    l.seconds = seconds_since(t0);
    report(static_cast<int>(i + 1), criteria[i].first, l);
    failed += l.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
