#ifndef QCOORD_REPORT_JSON_HPP
#define QCOORD_REPORT_JSON_HPP

#include <json.hpp>

#include "qcoord/classifiers.hpp"
#include "qcoord/inclusions.hpp"
#include "qcoord/inequalities.hpp"
#include "qcoord/quadrature.hpp"

namespace qcoord {

using nlohmann::json;

inline constexpr int kReportSchema = 1;

json to_json(const Domain& d);
Domain domain_from_json(const json& j);

json to_json(const Witness& w);
Witness witness_from_json(const json& j);

json to_json(const Verdict& v);
Verdict verdict_from_json(const json& j);

json to_json(const InequalityReport& r);
json to_json(const SearchResult& r);
json to_json(const GalleryReport& r);

json to_json(const SearchBudget& b);
SearchBudget budget_from_json(const json& j);
json to_json(const QuadConfig& c);
QuadConfig quad_config_from_json(const json& j);

}  // namespace qcoord

#endif  // QCOORD_REPORT_JSON_HPP
