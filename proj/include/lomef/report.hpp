#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lomef/pipeline.hpp"

namespace lomef {

/// Six significant digits, "nan"/"inf" spelled out.
std::string format_number(double value);

std::string records_csv(const std::vector<EvaluationRecord>& records);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::string stability_csv(const std::vector<StabilityRow>& rows);
std::string errors_log(const std::vector<std::string>& errors);

nlohmann::json to_json(const ExplanationPayload& payload);
ExplanationPayload payload_from_json(const nlohmann::json& j);
nlohmann::json series_artifact(const SeriesResult& series);
SeriesResult series_from_artifact(const nlohmann::json& j);

/// records.csv, aggregate.csv, errors.log and (optionally) series/<id>.json.
void write_bundle(const RunResult& result, const std::string& directory, bool series_artifacts);
void write_stability(const StabilityResult& result, const std::string& directory);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace lomef
