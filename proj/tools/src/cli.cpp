#include "trisep_cli/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "trisep/lowrank.hpp"
#include "trisep/report.hpp"

namespace trisep::cli {

namespace {

struct RunConfig {
  std::uint64_t seed = 0x5eedULL;
  Tolerance tol;
  double tol_reconstruction = 1e-7;
  int workers = 1;
  std::string format = "json";
  std::string out;

  std::string gen_kind;
  int n = 2;
  int terms = 4;
  double p = 0.3;

  std::string input;
  std::string decomposition_file;
  std::string witness_file;
  bool witness = false;
  bool bipartitions = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void emit(const RunConfig& cfg, const Json& j, const std::string& text, std::ostream& out) {
  const std::string body = cfg.format == "json" ? j.dump(2) + "\n" : text;
  if (cfg.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw FormatError("cannot write " + cfg.out);
  f << body;
}

std::string ranks_text(const RankSignature& r) {
  return "(" + std::to_string(r.r[0]) + ", " + std::to_string(r.r[1]) + ", " + std::to_string(r.r[2]) + ", " +
         std::to_string(r.r[3]) + ")";
}

int exit_code(VerdictClass c) {
  switch (c) {
    case VerdictClass::Separable:
      return kSeparable;
    case VerdictClass::NptEntangled:
      return kNpt;
    case VerdictClass::PptEdge:
      return kEdge;
    case VerdictClass::PptEntangledNonEdge:
      return kNonEdge;
    case VerdictClass::Undetermined:
      return kUndetermined;
  }
  return kUndetermined;
}

ClassifyOptions classify_options(const RunConfig& cfg) {
  ClassifyOptions o;
  o.seed = cfg.seed;
  o.search.seed = cfg.seed;
  o.epsilon.seed = cfg.seed;
  o.build_witness = cfg.witness;
  o.verify_bipartitions = cfg.bipartitions;
  o.reconstruction_tol = cfg.tol_reconstruction;
  return o;
}

Json tolerances(const RunConfig& cfg) {
  Json j = tolerance_to_json(cfg.tol);
  j["reconstruction"] = cfg.tol_reconstruction;
  return j;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  Json meta;
  meta["kind"] = cfg.gen_kind;
  meta["seed"] = cfg.seed;
  std::optional<TripartiteState> state;
  if (cfg.gen_kind == "canonical") {
    if (cfg.n < 1) throw UsageError("--n must be at least 1");
    meta["n"] = cfg.n;
    state = random_canonical_state(cfg.n, cfg.seed, cfg.tol);
  } else if (cfg.gen_kind == "ensemble") {
    if (cfg.n < 1) throw UsageError("--n must be at least 1");
    if (cfg.terms < 1) throw UsageError("--terms must be at least 1");
    meta["n"] = cfg.n;
    meta["terms"] = cfg.terms;
    Rng rng(cfg.seed);
    const Ensemble e = random_ensemble(Dims{cfg.n}, cfg.terms, rng);
    state = from_ensemble(e.weights, e.vectors, Dims{cfg.n}, cfg.tol);
    meta["ensemble"] = decomposition_to_json(Decomposition{e.weights, e.vectors});
  } else if (cfg.gen_kind == "upb") {
    state = shifts_upb_state(cfg.tol);
  } else if (cfg.gen_kind == "werner") {
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
    if (cfg.n < 1) throw UsageError("--n must be at least 1");
    meta["p"] = cfg.p;
    meta["n"] = cfg.n;
    state = werner_state(cfg.p, cfg.n, cfg.tol);
  } else {
    throw UsageError("unknown kind '" + cfg.gen_kind + "'");
  }
  const Json file = state_to_json(*state, meta);
  if (cfg.out.empty()) {
    if (cfg.format == "json")
      out << file.dump(2) << "\n";
    else
      out << "ranks: " << ranks_text(state->ranks()) << "\n";
    return kOk;
  }
  write_json_file(file, cfg.out);
  if (cfg.format == "json")
    out << Json{{"path", cfg.out}, {"ranks", ranks_to_json(state->ranks())}}.dump(2) << "\n";
  else
    out << "ranks: " << ranks_text(state->ranks()) << "\n";
  return kOk;
}

int cmd_ppt_check(const RunConfig& cfg, std::ostream& out) {
  const TripartiteState s = load(cfg.input, cfg.tol);
  Json j;
  j["dims"] = {2, 2, s.dims().n};
  j["ranks"] = ranks_to_json(s.ranks());
  Json mins = Json::object();
  for (int op = 0; op < 4; ++op) mins[operator_name(op)] = s.min_eigenvalue_of(op);
  j["min_eigenvalues"] = mins;
  j["ppt"] = s.is_ppt();
  j["tolerances"] = tolerances(cfg);
  std::string text = std::string("ppt: ") + (s.is_ppt() ? "yes" : "no") + "\nranks: " + ranks_text(s.ranks()) + "\n";
  emit(cfg, j, text, out);
  return s.is_ppt() ? kOk : kNpt;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const TripartiteState s = load(cfg.input, cfg.tol);
  const Verdict v = classify(s, classify_options(cfg));
  Json j = verdict_to_json(v, cfg.tol);
  j["tolerances"] = tolerances(cfg);
  j["seed"] = cfg.seed;
  emit(cfg, j, verdict_to_text(v), out);
  return exit_code(v.verdict);
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const TripartiteState s = load(cfg.input, cfg.tol);
  const Verdict v = classify(s, classify_options(cfg));
  Json j;
  j["class"] = to_string(v.verdict);
  j["route"] = v.route;
  j["tolerances"] = tolerances(cfg);
  std::string text = verdict_to_text(v);
  if (v.decomposition) {
    j["decomposition"] = decomposition_to_json(*v.decomposition);
    j["reconstruction_error"] = v.reconstruction_error;
  }
  emit(cfg, j, text, out);
  return exit_code(v.verdict);
}

int cmd_find_vectors(const RunConfig& cfg, std::ostream& out) {
  const TripartiteState s = load(cfg.input, cfg.tol);
  SolveOptions o;
  o.seed = cfg.seed;
  const ProductSearchResult r = find_product_vectors(s, o);
  Json j = search_to_json(r);
  j["ranks"] = ranks_to_json(s.ranks());
  j["tolerances"] = tolerances(cfg);
  std::string text = "product vectors: " + std::to_string(r.vectors.size()) + (r.continuum ? " (continuum)" : "") +
                     "\nstrategy: " + r.strategy + "\n";
  emit(cfg, j, text, out);
  return kOk;
}

int cmd_witness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TripartiteState s = load(cfg.input, cfg.tol);
  EpsilonOptions e;
  e.seed = cfg.seed;
  SolveOptions o;
  o.seed = cfg.seed;
  try {
    const Witness w = build_witness(s, e, o);
    Json j = witness_to_json(w);
    j["expectation"] = w.expectation(s.rho());
    j["tolerances"] = tolerances(cfg);
    emit(cfg, j,
         "epsilon: " + std::to_string(w.epsilon) + "\ntrace(W rho): " + std::to_string(w.expectation(s.rho())) + "\n",
         out);
    return kOk;
  } catch (const NotEdge& ex) {
    err << "not an edge state: " << ex.what() << "\n";
    return kUndetermined;
  }
}

const Json& evidence(const Json& j, const char* key) { return j.is_object() && j.contains(key) ? j.at(key) : j; }

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.decomposition_file.empty() == cfg.witness_file.empty())
    throw UsageError("verify needs exactly one of --decomposition or --witness");
  const TripartiteState s = load(cfg.input, cfg.tol);
  Json j;
  j["tolerances"] = tolerances(cfg);
  std::vector<std::string> failures;
  if (!cfg.decomposition_file.empty()) {
    const Decomposition d = decomposition_from_json(evidence(read_json_file(cfg.decomposition_file), "decomposition"));
    const double residual = d.residual(s.rho(), s.dims());
    double min_weight = d.size() ? d.weights.front() : 0.0;
    for (double w : d.weights) min_weight = std::min(min_weight, w);
    for (const auto& v : d.vectors)
      if (v.g.size() != s.dims().n) throw FormatError("decomposition: Charlie factor does not match dims");
    j["kind"] = "decomposition";
    j["terms"] = d.size();
    j["reconstruction_error"] = residual;
    j["min_weight"] = min_weight;
    if (d.size() == 0) failures.push_back("empty decomposition");
    if (min_weight < 0) failures.push_back("negative weight " + std::to_string(min_weight));
    if (!(residual <= cfg.tol_reconstruction)) failures.push_back("reconstruction error " + std::to_string(residual));
  } else {
    const Witness w = witness_from_json(evidence(read_json_file(cfg.witness_file), "witness"));
    if (w.dims != s.dims()) throw FormatError("witness dims do not match the state");
    const double assembly = (w.w - assemble_witness(w.p, w.q, w.r, w.s, w.epsilon, w.dims)).norm();
    const double trace = w.expectation(s.rho());
    j["kind"] = "witness";
    j["epsilon"] = w.epsilon;
    j["expectation"] = trace;
    j["assembly_error"] = assembly;
    if (!(w.epsilon > 0)) failures.push_back("epsilon is not positive");
    if (!(assembly <= cfg.tol.residual)) failures.push_back("W differs from its assembly by " + std::to_string(assembly));
    if (!(trace < 0)) failures.push_back("trace(W rho) = " + std::to_string(trace) + " does not detect the state");
  }
  j["passed"] = failures.empty();
  j["failures"] = failures;
  std::string text = std::string("passed: ") + (failures.empty() ? "yes" : "no") + "\n";
  for (const auto& f : failures) text += "failure: " + f + "\n";
  emit(cfg, j, text, out);
  if (failures.empty()) return kOk;
  for (const auto& f : failures) err << "verify: " << f << "\n";
  return kVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Separability and PPT entanglement analysis of 2x2xN states", "trisep"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--tol-rank", cfg.tol.rank_rel, "Relative singular-value cutoff for ranks")->capture_default_str();
  app.add_option("--tol-psd", cfg.tol.psd_abs, "Absolute eigenvalue slack for positivity")->capture_default_str();
  app.add_option("--tol-residual", cfg.tol.residual, "Residual tolerance for fits and checks")->capture_default_str();
  app.add_option("--tol-reconstruction", cfg.tol_reconstruction, "Frobenius bound on decomposition error")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker count")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("-o,--out", cfg.out, "Output path (default: stdout)");

  auto* gen = app.add_subcommand("gen", "Generate a state file");
  gen->add_option("kind", cfg.gen_kind, "canonical, ensemble, upb or werner")->required();
  gen->add_option("--n", cfg.n, "Dimension of the third party")->capture_default_str();
  gen->add_option("--terms", cfg.terms, "Number of product terms (ensemble)")->capture_default_str();
  gen->add_option("--p", cfg.p, "Singlet weight (werner)")->capture_default_str();

  auto* ppt = app.add_subcommand("ppt-check", "Partial-transpose positivity and ranks");
  auto* cls = app.add_subcommand("classify", "Classify a state");
  auto* dec = app.add_subcommand("decompose", "Product decomposition of a separable state");
  auto* fv = app.add_subcommand("find-vectors", "Product vectors in the ranges of a state");
  auto* wit = app.add_subcommand("witness", "Witness for an edge state");
  auto* ver = app.add_subcommand("verify", "Check a decomposition or witness against a state");
  for (auto* sub : {ppt, cls, dec, fv, wit, ver})
    sub->add_option("input", cfg.input, "State file")->required()->check(CLI::ExistingFile);
  for (auto* sub : {cls, dec}) {
    sub->add_flag("--witness", cfg.witness, "Build a witness for edge states");
    sub->add_flag("--verify-bipartitions", cfg.bipartitions, "Also decompose across B|AC and C|AB");
  }
  ver->add_option("--decomposition", cfg.decomposition_file, "Decomposition or verdict file")
      ->check(CLI::ExistingFile);
  ver->add_option("--witness", cfg.witness_file, "Witness or verdict file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    try {
      cfg.tol.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (!(cfg.tol_reconstruction > 0)) throw UsageError("--tol-reconstruction must be positive");
    if (*gen) return cmd_gen(cfg, out);
    if (*ppt) return cmd_ppt_check(cfg, out);
    if (*cls) return cmd_classify(cfg, out);
    if (*dec) return cmd_decompose(cfg, out);
    if (*fv) return cmd_find_vectors(cfg, out);
    if (*wit) return cmd_witness(cfg, out, err);
    return cmd_verify(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kUsage;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUndetermined;
  }
}

}  // namespace trisep::cli
