#pragma once

// JSON encoding of states, matrices, product vectors and decompositions.
//
// State file: {"version":1, "dims":[2,2,N], "matrix":[[[re,im],...],...], "meta":{...}}
// with the matrix stored row-major over the basis index a*2N + b*N + c.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "trisep/states.hpp"

namespace trisep {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);
Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

Json product_vector_to_json(const ProductVector& v);
ProductVector product_vector_from_json(const Json& j);
Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

Json state_to_json(const TripartiteState& state, const Json& meta = Json::object());
/// Throws FormatError on schema violations, non-Hermitian or non-PSD payloads
/// and trace deviations above 1e-6.  Smaller deviations are renormalised.
TripartiteState state_from_json(const Json& j, const Tolerance& tol = {});

void save(const TripartiteState& state, const std::filesystem::path& path, const Json& meta = Json::object());
TripartiteState load(const std::filesystem::path& path, const Tolerance& tol = {});

/// Reads and parses a JSON file; FormatError on I/O or parse failure.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

}  // namespace trisep
