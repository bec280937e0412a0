#include "espresso/pipeline.hpp"

#include "espresso/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace espresso {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct ChannelShape {
  ShapeCurve curve;
  std::vector<double> smoothed;
  std::vector<std::size_t> ticks;
  std::vector<std::size_t> samples;
  bool excluded = false;
  double profile_ms = 0.0;
  double curve_ms = 0.0;
};

ChannelShape shape_stage(const MultiSeries& series, std::size_t channel,
                         const PipelineConfig& cfg) {
  ChannelShape out;
  auto t0 = Clock::now();
  const ProfilePair profile = compute_profile(series, channel, cfg.spec, cfg.distance);
  out.profile_ms = ms_since(t0);

  t0 = Clock::now();
  if (cfg.curve == CurveKind::WCAC) {
    ChainConfig chain;
    chain.beta = cfg.chain_beta;
    out.curve = extract_wcac(profile, extract_cac(profile, chain));
  } else {
    out.curve = arc_curve(profile);
  }
  const CandidateConfig cand = cfg.candidate_config();
  out.smoothed = smooth(out.curve.values, cand.smoothing_width);
  try {
    out.ticks = find_candidates(out.curve, cand);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCandidates) throw;
    out.excluded = true;
  }
  out.curve.candidates = out.ticks;

  const std::size_t n = series.length();
  for (std::size_t t : out.ticks) {
    const std::size_t b = tick_to_sample(t, cfg.spec);
    if (b > 0 && b < n && (out.samples.empty() || out.samples.back() != b)) {
      out.samples.push_back(b);
    }
  }
  if (out.samples.empty()) out.excluded = true;
  out.curve_ms = ms_since(t0);
  return out;
}

// k-1 candidates with the lowest smoothed curve values (ties to the smaller
// tick). Score is minus the mean selected value relative to the curve mean.
ChannelResult shape_readout(std::size_t channel, const ChannelShape& shape,
                            std::size_t segments, const EntropyView& view,
                            const SubseqSpec& spec) {
  ChannelResult r;
  r.channel = channel;
  r.candidates = shape.samples;
  r.excluded = shape.excluded;
  if (shape.excluded) return r;

  std::vector<std::size_t> order = shape.ticks;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shape.smoothed[a] != shape.smoothed[b] ? shape.smoothed[a] < shape.smoothed[b]
                                                  : a < b;
  });
  const std::size_t take = std::min(order.size(), segments - 1);
  double depth = 0.0;
  const double mean = std::accumulate(shape.smoothed.begin(), shape.smoothed.end(), 0.0) /
                      double(shape.smoothed.size());

  Segmentation& seg = r.segmentation;
  seg.source = CandidateSource::channel;
  seg.source_channel = channel;
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t b = tick_to_sample(order[i], spec);
    if (std::find(seg.selection_order.begin(), seg.selection_order.end(), b) !=
        seg.selection_order.end()) {
      continue;
    }
    depth += shape.smoothed[order[i]];
    seg.selection_order.push_back(b);
    std::vector<std::size_t> sorted = seg.selection_order;
    std::sort(sorted.begin(), sorted.end());
    seg.ig_trace.push_back(information_gain(view, sorted));
  }
  seg.boundaries = seg.selection_order;
  std::sort(seg.boundaries.begin(), seg.boundaries.end());
  if (!seg.selection_order.empty()) {
    const double avg = depth / double(seg.selection_order.size());
    r.score = mean > 0.0 ? -avg / mean : 0.0;
  }
  return r;
}

Segmentation dense_search(const EntropyView& view, const PipelineConfig& cfg) {
  const auto grid = dense_grid(view.length(), cfg.dense_grid_step);
  Segmentation seg = greedy_entropy_seg(view, grid, cfg.stop);
  seg.source = CandidateSource::dense_grid;
  seg.source_channel.reset();
  return seg;
}

} // namespace

PipelineConfig PipelineConfig::for_length(std::size_t L) {
  PipelineConfig cfg;
  cfg.spec = SubseqSpec::with_length(L);
  return cfg;
}

CandidateConfig PipelineConfig::candidate_config() const {
  CandidateConfig c = CandidateConfig::for_length(spec.length);
  if (smoothing_width) c.smoothing_width = *smoothing_width;
  if (margin) c.margin = *margin;
  if (min_gap) c.min_gap = *min_gap;
  return c;
}

void PipelineConfig::validate(std::size_t series_length) const {
  spec.validate_for(series_length);
  if (!(chain_beta > 0.0)) throw Error(ErrorCode::InvalidConfig, "chain_beta must be positive");
  if (smoothing_width && *smoothing_width == 0) {
    throw Error(ErrorCode::InvalidConfig, "smoothing width must be positive");
  }
  if (min_gap && *min_gap == 0) throw Error(ErrorCode::InvalidConfig, "min_gap must be positive");
  if (dense_grid_step == 0 || dense_grid_step >= series_length) {
    throw Error(ErrorCode::InvalidConfig, "dense grid step must be in [1, N)");
  }
  if (stop.kind == StopRule::Kind::fixed_segments && stop.segments < 2) {
    throw Error(ErrorCode::InvalidConfig, "segment count must be >= 2");
  }
  if (stop.kind == StopRule::Kind::knee && stop.max_boundaries < 1) {
    throw Error(ErrorCode::InvalidConfig, "knee look-ahead must be >= 1");
  }
  if (mode == Mode::shape_only && stop.kind != StopRule::Kind::fixed_segments) {
    throw Error(ErrorCode::InvalidConfig, "shape_only mode needs a fixed segment count");
  }
}

std::size_t tick_to_sample(std::size_t tick, const SubseqSpec& spec) {
  return tick + spec.length / 2;
}

std::vector<std::size_t> dense_grid(std::size_t series_length, std::size_t step) {
  if (step == 0) throw Error(ErrorCode::InvalidConfig, "grid step must be positive");
  std::vector<std::size_t> grid;
  for (std::size_t b = step; b < series_length; b += step) grid.push_back(b);
  return grid;
}

std::vector<std::size_t> rank_channels(const std::vector<ChannelResult>& results) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].excluded) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].score != results[b].score) return results[a].score > results[b].score;
    return results[a].channel < results[b].channel;
  });
  std::vector<std::size_t> channels;
  channels.reserve(order.size());
  for (std::size_t i : order) channels.push_back(results[i].channel);
  return channels;
}

std::vector<ChannelResult> search_channels(const EntropyView& view,
                                           const std::vector<std::vector<std::size_t>>& candidates,
                                           const StopRule& stop, std::size_t threads) {
  std::vector<ChannelResult> out(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    out[j].channel = j;
    out[j].candidates = candidates[j];
    out[j].excluded = candidates[j].empty();
  }
  detail::parallel_for(candidates.size(), threads, [&](std::size_t j) {
    if (out[j].excluded) return;
    out[j].segmentation = greedy_entropy_seg(view, candidates[j], stop);
    out[j].segmentation.source = CandidateSource::channel;
    out[j].segmentation.source_channel = j;
    out[j].score = out[j].segmentation.final_gain();
  });
  return out;
}

PipelineResult run_espresso(const MultiSeries& series, const PipelineConfig& cfg) {
  const auto start = Clock::now();
  cfg.validate(series.length());
  const EntropyView view = EntropyView::from_series(series, cfg.normalization);

  PipelineResult result;
  result.mode_used = cfg.mode;

  if (cfg.mode == Mode::entropy_only) {
    const auto t0 = Clock::now();
    result.segmentation = dense_search(view, cfg);
    result.timing.search_ms = ms_since(t0);
    result.timing.total_ms = ms_since(start);
    return result;
  }

  const std::size_t d = series.channels();
  std::vector<ChannelShape> shapes(d);
  detail::parallel_for(d, cfg.threads, [&](std::size_t j) { shapes[j] = shape_stage(series, j, cfg); });
  for (const auto& s : shapes) {
    result.timing.profile_ms += s.profile_ms;
    result.timing.curve_ms += s.curve_ms;
  }
  if (cfg.keep_curves) {
    for (const auto& s : shapes) result.curves.push_back(s.curve);
  }

  const bool all_excluded =
      std::all_of(shapes.begin(), shapes.end(), [](const ChannelShape& s) { return s.excluded; });
  if (all_excluded) {
    if (cfg.mode == Mode::shape_only) {
      throw Error(ErrorCode::NoCandidates, "no channel produced curve minima");
    }
    result.warnings.push_back("no channel produced curve minima; using the dense grid");
    result.mode_used = Mode::entropy_only;
    const auto t0 = Clock::now();
    result.segmentation = dense_search(view, cfg);
    result.timing.search_ms = ms_since(t0);
    result.timing.total_ms = ms_since(start);
    return result;
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (shapes[j].excluded) {
      result.warnings.push_back("channel " + std::to_string(j) +
                                " produced no curve minima and is not ranked");
    }
  }

  const auto t0 = Clock::now();
  if (cfg.mode == Mode::shape_only) {
    for (std::size_t j = 0; j < d; ++j) {
      result.per_channel.push_back(
          shape_readout(j, shapes[j], cfg.stop.segments, view, cfg.spec));
    }
  } else if (cfg.pool_candidates) {
    std::vector<std::size_t> pooled;
    for (std::size_t j = 0; j < d; ++j) {
      ChannelResult r;
      r.channel = j;
      r.candidates = shapes[j].samples;
      r.excluded = shapes[j].excluded;
      result.per_channel.push_back(r);
      pooled.insert(pooled.end(), shapes[j].samples.begin(), shapes[j].samples.end());
    }
    std::sort(pooled.begin(), pooled.end());
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
    result.segmentation = greedy_entropy_seg(view, pooled, cfg.stop);
    result.segmentation.source = CandidateSource::pooled;
    result.timing.search_ms = ms_since(t0);
    result.timing.total_ms = ms_since(start);
    return result;
  } else {
    std::vector<std::vector<std::size_t>> candidates;
    for (const auto& s : shapes) candidates.push_back(s.samples);
    result.per_channel = search_channels(view, candidates, cfg.stop, cfg.threads);
  }

  const auto ranking = rank_channels(result.per_channel);
  result.segmentation = result.per_channel[ranking.front()].segmentation;
  result.timing.search_ms = ms_since(t0);
  result.timing.total_ms = ms_since(start);
  return result;
}

std::string to_string(Mode mode) {
  switch (mode) {
  case Mode::hybrid: return "hybrid";
  case Mode::shape_only: return "shape_only";
  case Mode::entropy_only: return "entropy_only";
  }
  return "hybrid";
}

Mode parse_mode(const std::string& text) {
  if (text == "hybrid") return Mode::hybrid;
  if (text == "shape_only" || text == "shape") return Mode::shape_only;
  if (text == "entropy_only" || text == "entropy") return Mode::entropy_only;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + text + "'");
}

} // namespace espresso
