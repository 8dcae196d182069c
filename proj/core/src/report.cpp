#include "trisep/report.hpp"

#include <sstream>

namespace trisep {

namespace {

Json vectors_to_json(const std::vector<ProductVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(product_vector_to_json(v));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("witness: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Json tolerance_to_json(const Tolerance& tol) {
  Json j;
  j["rank"] = tol.rank_rel;
  j["psd"] = tol.psd_abs;
  j["residual"] = tol.residual;
  return j;
}

Json ranks_to_json(const RankSignature& r) { return Json(r.r); }

Json witness_to_json(const Witness& w) {
  Json j;
  j["dims"] = {2, 2, w.dims.n};
  j["epsilon"] = w.epsilon;
  j["P"] = matrix_to_json(w.p);
  j["Q"] = matrix_to_json(w.q);
  j["R"] = matrix_to_json(w.r);
  j["S"] = matrix_to_json(w.s);
  j["W"] = matrix_to_json(w.w);
  return j;
}

Witness witness_from_json(const Json& j) {
  try {
    Witness w;
    const Json& d = field(j, "dims");
    if (!d.is_array() || d.size() != 3 || d[0] != 2 || d[1] != 2 || !d[2].is_number_integer() || d[2].get<int>() < 1)
      throw FormatError("witness: dims must be [2,2,N]");
    w.dims = Dims{d[2].get<int>()};
    w.epsilon = field(j, "epsilon").get<double>();
    w.p = matrix_from_json(field(j, "P"));
    w.q = matrix_from_json(field(j, "Q"));
    w.r = matrix_from_json(field(j, "R"));
    w.s = matrix_from_json(field(j, "S"));
    w.w = matrix_from_json(field(j, "W"));
    const int dim = w.dims.dim();
    for (const CMatrix* m : {&w.p, &w.q, &w.r, &w.s, &w.w})
      if (m->rows() != dim || m->cols() != dim) throw FormatError("witness: matrix shape does not match dims");
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("witness: ") + e.what());
  }
}

Json search_to_json(const ProductSearchResult& r) {
  Json j;
  j["count"] = r.vectors.size();
  j["continuum"] = r.continuum;
  j["threshold_met"] = r.threshold_met;
  j["k_total"] = r.k_total;
  j["strategy"] = r.strategy;
  j["candidate_counts"] = r.candidate_counts;
  j["eliminant_degrees"] = r.eliminant_degrees;
  j["degree_pairs"] = r.degree_pairs;
  j["vectors"] = vectors_to_json(r.vectors);
  return j;
}

Json verdict_to_json(const Verdict& v, const Tolerance& tol) {
  Json j;
  j["class"] = to_string(v.verdict);
  j["route"] = v.route;
  j["dims"] = {2, 2, v.dims.n};
  j["ranks"] = ranks_to_json(v.ranks);
  j["tolerances"] = tolerance_to_json(tol);
  if (v.decomposition) {
    j["decomposition"] = decomposition_to_json(*v.decomposition);
    j["reconstruction_error"] = v.reconstruction_error;
  }
  if (v.fit_residual) j["fit_residual"] = *v.fit_residual;
  if (v.witness) {
    j["witness"] = witness_to_json(*v.witness);
  }
  j["continuum"] = v.continuum;
  j["vectors"] = vectors_to_json(v.vectors);
  if (!v.subtractions.empty()) {
    Json steps = Json::array();
    for (const auto& s : v.subtractions) {
      Json step;
      step["lambda"] = s.lambda;
      step["vector"] = product_vector_to_json(s.vector);
      step["ranks_after"] = ranks_to_json(s.ranks_after);
      step["psd"] = s.psd;
      steps.push_back(step);
    }
    j["subtractions"] = steps;
  }
  if (!v.bipartitions.empty()) {
    Json cuts = Json::array();
    for (const auto& b : v.bipartitions) cuts.push_back({{"cut", b.cut}, {"biseparable", b.biseparable}, {"detail", b.detail}});
    j["bipartitions"] = cuts;
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

std::string verdict_to_text(const Verdict& v) {
  std::ostringstream os;
  os << "class: " << to_string(v.verdict) << "\n";
  os << "route: " << v.route << "\n";
  os << "dims: 2x2x" << v.dims.n << "\n";
  os << "ranks: (" << v.ranks.r[0] << ", " << v.ranks.r[1] << ", " << v.ranks.r[2] << ", " << v.ranks.r[3] << ")\n";
  if (v.decomposition)
    os << "decomposition: " << v.decomposition->size() << " terms, error " << v.reconstruction_error << "\n";
  if (v.witness) os << "witness: epsilon " << v.witness->epsilon << "\n";
  os << "product vectors: " << v.vectors.size() << (v.continuum ? " (continuum)" : "") << "\n";
  if (!v.subtractions.empty()) os << "subtractions: " << v.subtractions.size() << "\n";
  if (!v.detail.empty()) os << "detail: " << v.detail << "\n";
  return os.str();
}

}  // namespace trisep
