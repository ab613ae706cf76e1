#pragma once

// JSON and plain-text renderings of results. Every JSON document is wrapped in an
// envelope carrying schema_version and the producing subcommand.

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "tightlab/estimator.hpp"
#include "tightlab/policy.hpp"
#include "tightlab/rotemberg.hpp"
#include "tightlab/zones.hpp"

namespace tightlab::io {

inline constexpr const char* kSchemaVersion = "1.0";

nlohmann::json envelope(const std::string& kind, nlohmann::json body);

nlohmann::json to_json(const est::EstimateReport& rep);
nlohmann::json to_json(const est::RotembergReport& rep);
nlohmann::json to_json(const zones::SweepResult& sweep);
nlohmann::json to_json(const policy::CalibrationResult& res);
nlohmann::json to_json(const policy::MinWageResult& res);
nlohmann::json to_json(const policy::CounterfactualResult& res);

// Pretty-printed with a trailing newline; non-finite numbers become null.
std::string dump(const nlohmann::json& doc);

// Columns of estimates side by side: coefficient over (SE) per regressor, then first-stage
// F rows, N and clusters.
std::string format_table(const std::vector<std::pair<std::string, const est::EstimateReport*>>& columns,
                         const std::vector<std::string>& rows);

}  // namespace tightlab::io
