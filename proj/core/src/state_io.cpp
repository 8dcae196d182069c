#include "trisep/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace trisep {

namespace {

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("complex entry must be a [re, im] pair of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw FormatError("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw FormatError("matrix rows differ in length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  if (!m.allFinite()) throw FormatError("matrix has non-finite entries");
  return m;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("vector must be a non-empty array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json product_vector_to_json(const ProductVector& v) {
  Json j;
  j["e"] = vector_to_json(v.e);
  j["f"] = vector_to_json(v.f);
  j["g"] = vector_to_json(v.g);
  j["chart"] = v.chart;
  j["alpha"] = v.alpha ? complex_to_json(*v.alpha) : Json(nullptr);
  j["beta"] = v.beta ? complex_to_json(*v.beta) : Json(nullptr);
  return j;
}

ProductVector product_vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("e") || !j.contains("f") || !j.contains("g"))
    throw FormatError("product vector needs e, f, g");
  const CVector e = vector_from_json(j["e"]);
  const CVector f = vector_from_json(j["f"]);
  const CVector g = vector_from_json(j["g"]);
  if (e.size() != 2 || f.size() != 2) throw FormatError("product vector e and f must have two components");
  try {
    return ProductVector::from_factors(e, f, g);
  } catch (const Error& ex) {
    throw FormatError(ex.what());
  }
}

Json decomposition_to_json(const Decomposition& d) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    Json t = product_vector_to_json(d.vectors[i]);
    t["weight"] = d.weights[i];
    terms.push_back(std::move(t));
  }
  return terms;
}

Decomposition decomposition_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("decomposition must be an array of terms");
  Decomposition d;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("weight") || !t["weight"].is_number()) throw FormatError("term needs a weight");
    d.weights.push_back(t["weight"].get<double>());
    d.vectors.push_back(product_vector_from_json(t));
  }
  return d;
}

Json state_to_json(const TripartiteState& state, const Json& meta) {
  Json j;
  j["version"] = 1;
  j["dims"] = Json::array({2, 2, state.dims().n});
  j["matrix"] = matrix_to_json(state.rho());
  j["meta"] = meta.is_object() ? meta : Json::object();
  return j;
}

TripartiteState state_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object()) throw FormatError("state file must be a JSON object");
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1)
    throw FormatError("unsupported or missing version (expected 1)");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
    throw FormatError("dims must be [2, 2, N]");
  for (const auto& d : j["dims"])
    if (!d.is_number_integer()) throw FormatError("dims must be integers");
  if (j["dims"][0].get<int>() != 2 || j["dims"][1].get<int>() != 2 || j["dims"][2].get<int>() < 1)
    throw FormatError("dims must be [2, 2, N] with N >= 1");
  if (!j.contains("matrix")) throw FormatError("missing matrix");
  if (j.contains("meta") && !j["meta"].is_object()) throw FormatError("meta must be an object");
  const Dims dims{j["dims"][2].get<int>()};
  CMatrix m = matrix_from_json(j["matrix"]);
  if (m.rows() != dims.dim() || m.cols() != dims.dim())
    throw FormatError("matrix shape does not match dims");
  if (hermiticity_defect(m) > tol.residual * std::max(1.0, m.norm())) throw FormatError("matrix is not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-6) throw FormatError("trace deviates from 1 by more than 1e-6");
  if (std::abs(tr - 1.0) > 1e-12) m /= tr;
  try {
    return TripartiteState(m, dims, tol);
  } catch (const Error& ex) {
    throw FormatError(ex.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("invalid JSON in ") + path.string() + ": " + ex.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void save(const TripartiteState& state, const std::filesystem::path& path, const Json& meta) {
  write_json_file(state_to_json(state, meta), path);
}

TripartiteState load(const std::filesystem::path& path, const Tolerance& tol) {
  return state_from_json(read_json_file(path), tol);
}

}  // namespace trisep
