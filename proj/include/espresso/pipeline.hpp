#pragma once

#include "espresso/entropy.hpp"
#include "espresso/matrix_profile.hpp"
#include "espresso/series.hpp"
#include "espresso/shape_curve.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace espresso {

enum class Mode {
  hybrid,       ///< shape candidates per channel, entropy search over all channels
  shape_only,   ///< the k-1 deepest curve minima of the best channel
  entropy_only, ///< entropy search over a regular grid of candidates
};

struct PipelineConfig {
  /// Subsequence length (the one parameter without a default) and exclusion
  /// radius.
  SubseqSpec spec;
  double chain_beta = 2.0;
  /// Moving-average width before minima extraction; defaults to L.
  std::optional<std::size_t> smoothing_width;
  /// Minima closer than this to either curve end are dropped; defaults to L.
  std::optional<std::size_t> margin;
  /// Minimum spacing between candidates; defaults to L.
  std::optional<std::size_t> min_gap;
  Mode mode = Mode::hybrid;
  StopRule stop = StopRule::knee();
  DistanceKind distance = DistanceKind::znorm;
  /// WCAC by default; AC gives the plain arc-curve baseline.
  CurveKind curve = CurveKind::WCAC;
  EntropyNormalization normalization = EntropyNormalization::complement;
  std::size_t dense_grid_step = 1;
  /// Experimental: merge all channels' candidates into one search.
  bool pool_candidates = false;
  /// Keep per-channel curves in the result.
  bool keep_curves = false;
  /// Worker threads for per-channel stages; 0 picks the hardware count.
  std::size_t threads = 0;

  static PipelineConfig for_length(std::size_t L);

  CandidateConfig candidate_config() const;

  /// Throws InvalidConfig / SubseqTooLong / InvalidSpec.
  void validate(std::size_t series_length) const;
};

struct ChannelResult {
  std::size_t channel = 0;
  /// Candidate boundaries in sample indices.
  std::vector<std::size_t> candidates;
  /// Ranking score, higher is better: final information gain in hybrid mode,
  /// negated relative minima depth in shape_only mode.
  double score = 0.0;
  /// No candidates could be extracted; the channel is not ranked.
  bool excluded = false;
  Segmentation segmentation;
};

struct StageTiming {
  double profile_ms = 0.0;
  double curve_ms = 0.0;
  double search_ms = 0.0;
  double total_ms = 0.0;
};

struct PipelineResult {
  Segmentation segmentation;
  std::vector<ChannelResult> per_channel;
  /// Indexed by channel; filled when keep_curves is set.
  std::vector<ShapeCurve> curves;
  StageTiming timing;
  std::vector<std::string> warnings;
  Mode mode_used = Mode::hybrid;
};

/// Curve position of a candidate tick mapped to a sample boundary: the tick
/// is a window start, and the boundary is placed at the window centre.
std::size_t tick_to_sample(std::size_t tick, const SubseqSpec& spec);

/// Evenly spaced candidates step, 2 step, ... strictly inside (0, N).
std::vector<std::size_t> dense_grid(std::size_t series_length, std::size_t step);

/// Ranked channel order: non-excluded channels by score descending, ties to
/// the smaller channel index.
std::vector<std::size_t> rank_channels(const std::vector<ChannelResult>& results);

/// Runs the entropy search for every channel's candidate list over the full
/// view and returns per-channel results in channel order. Channels with an
/// empty list are marked excluded.
std::vector<ChannelResult> search_channels(const EntropyView& view,
                                           const std::vector<std::vector<std::size_t>>& candidates,
                                           const StopRule& stop, std::size_t threads = 0);

PipelineResult run_espresso(const MultiSeries& series, const PipelineConfig& cfg);

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

} // namespace espresso
