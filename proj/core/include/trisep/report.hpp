#pragma once

// JSON reports for verdicts, witnesses and product-vector searches.  Reports
// embed the tolerances they were computed with and carry no timestamps, so a
// fixed seed and input give byte-identical output.

#include "trisep/classify.hpp"
#include "trisep/state_io.hpp"

namespace trisep {

Json tolerance_to_json(const Tolerance& tol);
Json ranks_to_json(const RankSignature& r);

/// {"dims", "P", "Q", "R", "S", "epsilon", "W"}.
Json witness_to_json(const Witness& w);
/// Throws FormatError on schema violations.
Witness witness_from_json(const Json& j);

Json search_to_json(const ProductSearchResult& r);

/// {"class", "route", "ranks", "dims", "decomposition"?, "witness"?, "vectors", ...}.
Json verdict_to_json(const Verdict& v, const Tolerance& tol);

/// Short multi-line human summary of a verdict.
std::string verdict_to_text(const Verdict& v);

}  // namespace trisep
