#pragma once

#include <string>

#include "json.hpp"
#include "xfam/extremal.hpp"
#include "xfam/nip.hpp"
#include "xfam/oracle.hpp"

namespace xfam {

// Family JSON: {"n": 4, "sets": [[1,2],[1,3]]} with sets ascending by mask, or
// the compact form {"n": 4, "masks": ["3","5"]} (hex).  Input accepts either;
// round-trips are lossless and order-insensitive.
nlohmann::json family_to_json(const Family& f, bool compact = false);
Family family_from_json(const nlohmann::json& j);

// Measure JSON: {"n": 3, "weights": ["27/64", ...], "window": [1,3] | null}.
nlohmann::json measure_to_json(const MeasureTable& mu);
MeasureTable measure_from_json(const nlohmann::json& j);

/// "count", "product:p/q", "uniform:k", or "@path/to/measure.json".
MeasureTable parse_measure_spec(const std::string& spec, int n);

nlohmann::json nip_report_to_json(const NipReport& rep);
nlohmann::json trace_to_json(const ReductionTrace& trace);
nlohmann::json bound_report_to_json(const BoundReport& rep);
nlohmann::json search_result_to_json(const SearchResult& res);

}  // namespace xfam
