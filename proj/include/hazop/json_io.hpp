#pragma once

// JSON encodings shared by the analysis file and the HTTP service.

#include <nlohmann/json.hpp>

#include "hazop/deviation.hpp"
#include "hazop/metrics.hpp"
#include "hazop/model.hpp"
#include "hazop/store.hpp"

namespace hazop {

nlohmann::json to_json(const Diagnostic& diagnostic);
nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);
nlohmann::json to_json(const ProjectModel& model);
nlohmann::json to_json(const DeviationRowRecord& row);
nlohmann::json to_json(const Hazard& hazard);
nlohmann::json to_json(const Recommendation& recommendation);
nlohmann::json to_json(const Hypothesis& hypothesis);
nlohmann::json to_json(const MergeReport& report);
nlohmann::json to_json(const ProjectOutputs& outputs);
nlohmann::json to_json(const ProjectStats& stats);
nlohmann::json to_json(const GuideWordUsage& usage);

// Decoders throw StoreError(STORE_FORMAT) on malformed input.
DeviationRowRecord row_from_json(const nlohmann::json& j);
Hazard hazard_from_json(const nlohmann::json& j);
Recommendation recommendation_from_json(const nlohmann::json& j);
Hypothesis hypothesis_from_json(const nlohmann::json& j);

/// Field updates as sent by the table editor. Unknown keys are rejected.
RowUpdate row_update_from_json(const nlohmann::json& j);

}  // namespace hazop
