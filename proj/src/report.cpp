#include "espresso/report.hpp"

#include "espresso/error.hpp"

namespace espresso {

namespace {

using nlohmann::json;

std::string stop_kind_name(StopRule::Kind k) {
  switch (k) {
  case StopRule::Kind::fixed_segments: return "fixed";
  case StopRule::Kind::exhaust: return "exhaust";
  case StopRule::Kind::knee: return "knee";
  }
  return "knee";
}

std::string source_name(CandidateSource s) {
  switch (s) {
  case CandidateSource::channel: return "channel";
  case CandidateSource::dense_grid: return "dense";
  case CandidateSource::pooled: return "pooled";
  }
  return "channel";
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config key '") + key + "': " + e.what());
  }
}

} // namespace

json to_json(const PipelineConfig& cfg) {
  json j;
  j["subseq_length"] = cfg.spec.length;
  j["exclusion_radius"] = cfg.spec.exclusion_radius;
  j["chain_beta"] = cfg.chain_beta;
  const CandidateConfig cand = cfg.candidate_config();
  j["smoothing_width"] = cand.smoothing_width;
  j["margin"] = cand.margin;
  j["min_gap"] = cand.min_gap;
  j["mode"] = to_string(cfg.mode);
  j["stop"] = {{"kind", stop_kind_name(cfg.stop.kind)},
               {"segments", cfg.stop.segments},
               {"max_boundaries", cfg.stop.max_boundaries}};
  j["distance"] = cfg.distance == DistanceKind::znorm ? "znorm" : "plain";
  j["curve"] = cfg.curve == CurveKind::WCAC ? "wcac" : "ac";
  j["normalization"] =
      cfg.normalization == EntropyNormalization::complement ? "complement" : "shift";
  j["dense_grid_step"] = cfg.dense_grid_step;
  j["pool_candidates"] = cfg.pool_candidates;
  return j;
}

void apply_json(const json& j, PipelineConfig& cfg) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "subseq_length") {
      const auto radius_default = SubseqSpec::with_length(cfg.spec.length).exclusion_radius;
      const bool radius_was_default = cfg.spec.exclusion_radius == radius_default;
      cfg.spec.length = get_as<std::size_t>(j, "subseq_length");
      if (radius_was_default && !j.contains("exclusion_radius")) {
        cfg.spec.exclusion_radius = SubseqSpec::with_length(cfg.spec.length).exclusion_radius;
      }
    } else if (key == "exclusion_radius") {
      cfg.spec.exclusion_radius = get_as<std::size_t>(j, "exclusion_radius");
    } else if (key == "chain_beta") {
      cfg.chain_beta = get_as<double>(j, "chain_beta");
    } else if (key == "smoothing_width") {
      cfg.smoothing_width = get_as<std::size_t>(j, "smoothing_width");
    } else if (key == "margin") {
      cfg.margin = get_as<std::size_t>(j, "margin");
    } else if (key == "min_gap") {
      cfg.min_gap = get_as<std::size_t>(j, "min_gap");
    } else if (key == "mode") {
      cfg.mode = parse_mode(get_as<std::string>(j, "mode"));
    } else if (key == "stop") {
      const auto kind = value.value("kind", std::string("knee"));
      if (kind == "fixed") cfg.stop = StopRule::fixed(value.value("segments", std::size_t(2)));
      else if (kind == "exhaust") cfg.stop = StopRule::exhaust();
      else if (kind == "knee") cfg.stop = StopRule::knee(value.value("max_boundaries", std::size_t(20)));
      else throw Error(ErrorCode::InvalidConfig, "unknown stop kind '" + kind + "'");
    } else if (key == "distance") {
      const auto v = get_as<std::string>(j, "distance");
      if (v == "znorm") cfg.distance = DistanceKind::znorm;
      else if (v == "plain") cfg.distance = DistanceKind::plain;
      else throw Error(ErrorCode::InvalidConfig, "unknown distance '" + v + "'");
    } else if (key == "curve") {
      const auto v = get_as<std::string>(j, "curve");
      if (v == "wcac") cfg.curve = CurveKind::WCAC;
      else if (v == "ac") cfg.curve = CurveKind::AC;
      else throw Error(ErrorCode::InvalidConfig, "unknown curve '" + v + "'");
    } else if (key == "normalization") {
      const auto v = get_as<std::string>(j, "normalization");
      if (v == "complement") cfg.normalization = EntropyNormalization::complement;
      else if (v == "shift") cfg.normalization = EntropyNormalization::shift;
      else throw Error(ErrorCode::InvalidConfig, "unknown normalization '" + v + "'");
    } else if (key == "dense_grid_step") {
      cfg.dense_grid_step = get_as<std::size_t>(j, "dense_grid_step");
    } else if (key == "pool_candidates") {
      cfg.pool_candidates = get_as<bool>(j, "pool_candidates");
    } else if (key == "threads") {
      cfg.threads = get_as<std::size_t>(j, "threads");
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
}

json to_json(const Segmentation& seg, std::optional<double> rate_hz) {
  json j;
  j["boundaries"] = seg.boundaries;
  j["selection_order"] = seg.selection_order;
  json trace = json::array();
  for (double v : seg.ig_trace) trace.push_back(v);
  j["ig_trace"] = trace;
  j["segments"] = seg.segments();
  j["source"] = source_name(seg.source);
  j["source_channel"] = seg.source_channel ? json(*seg.source_channel) : json(nullptr);
  if (rate_hz) {
    json secs = json::array();
    for (std::size_t b : seg.boundaries) secs.push_back(double(b) / *rate_hz);
    j["boundaries_seconds"] = secs;
  }
  return j;
}

json to_json(const EvalReport& r) {
  json j;
  json matches = json::array();
  for (const auto& m : r.matches) {
    matches.push_back({{"gt", m.gt}, {"est", m.est}, {"abs_error", m.abs_error}});
  }
  j["matches"] = matches;
  j["f_score"] = r.f_score;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["true_positives"] = r.true_positives;
  j["false_positives"] = r.false_positives;
  j["false_negatives"] = r.false_negatives;
  j["rmse_norm"] = r.rmse_norm;
  j["mae_samples"] = r.mae_samples ? json(*r.mae_samples) : json(nullptr);
  j["window_samples"] = r.window_samples;
  j["series_length"] = r.series_length;
  j["empty_estimate"] = r.empty_estimate;
  j["empty_truth"] = r.empty_truth;
  return j;
}

json to_json(const StageTiming& t) {
  return {{"profile_ms", t.profile_ms},
          {"curve_ms", t.curve_ms},
          {"search_ms", t.search_ms},
          {"total_ms", t.total_ms}};
}

json result_document(const RunDocument& run, bool include_timing) {
  json doc;
  doc["schema_version"] = kResultSchemaVersion;
  doc["dataset"] = {{"name", run.dataset},
                    {"length", run.series_length},
                    {"channels", run.channels},
                    {"sample_rate_hz", run.sample_rate_hz ? json(*run.sample_rate_hz)
                                                          : json(nullptr)},
                    {"seed", run.seed ? json(*run.seed) : json(nullptr)}};
  doc["config"] = to_json(run.config);
  doc["mode_used"] = to_string(run.result.mode_used);
  doc["segmentation"] = to_json(run.result.segmentation, run.sample_rate_hz);

  json channels = json::array();
  for (const auto& c : run.result.per_channel) {
    channels.push_back({{"channel", c.channel},
                        {"candidates", c.candidates},
                        {"score", c.score},
                        {"excluded", c.excluded},
                        {"boundaries", c.segmentation.boundaries}});
  }
  doc["per_channel"] = channels;
  doc["warnings"] = run.result.warnings;
  doc["truth"] = run.truth ? json(*run.truth) : json(nullptr);
  doc["evaluation"] = run.evaluation ? to_json(*run.evaluation) : json(nullptr);
  if (include_timing) doc["timing"] = to_json(run.result.timing);
  return doc;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::size_t> boundaries_from_document(const json& doc) {
  try {
    return doc.at("segmentation").at("boundaries").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("result document: ") + e.what());
  }
}

} // namespace espresso
