#pragma once

#include "espresso/metrics.hpp"
#include "espresso/pipeline.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace espresso {

/// Result document schema version, bumped on incompatible changes.
inline constexpr int kResultSchemaVersion = 1;

nlohmann::json to_json(const PipelineConfig& cfg);

/// Overlays the keys present in `j` onto `cfg`; unknown keys throw
/// InvalidConfig so typos in config files are not silently ignored.
void apply_json(const nlohmann::json& j, PipelineConfig& cfg);

nlohmann::json to_json(const Segmentation& seg, std::optional<double> rate_hz);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const StageTiming& timing);

struct RunDocument {
  std::string dataset;
  std::size_t series_length = 0;
  std::size_t channels = 0;
  std::optional<double> sample_rate_hz;
  std::optional<std::uint64_t> seed;
  PipelineConfig config;
  PipelineResult result;
  std::optional<std::vector<std::size_t>> truth;
  std::optional<EvalReport> evaluation;
};

/// Full result document. Timing goes under "timing" unless omitted; every
/// other field is a deterministic function of the inputs.
nlohmann::json result_document(const RunDocument& run, bool include_timing = true);

/// Deterministic text form: sorted keys, two-space indent, trailing newline.
std::string dump_document(const nlohmann::json& doc);

/// Estimated boundaries from a result document (segmentation.boundaries).
std::vector<std::size_t> boundaries_from_document(const nlohmann::json& doc);

} // namespace espresso
