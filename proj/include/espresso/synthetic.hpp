#pragma once

#include "espresso/series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace espresso {

/// C: activities recorded in one session, so neighbouring segments blend
/// over a transition ramp. NC: separate recordings stitched together.
enum class Continuity { C, NC };

/// R: segments made of repeated motifs. NR: level-shifted noise and ramps.
enum class Repetition { R, NR };

struct SyntheticSpec {
  Continuity continuity = Continuity::NC;
  Repetition repetition = Repetition::R;
  std::size_t segments = 3;
  std::uint64_t seed = 0;
  std::size_t channels = 3;
  std::size_t min_segment = 300;
  std::size_t max_segment = 500;
  /// Blend width for C regimes; the labelled boundary is the ramp centre.
  std::size_t transition = 40;
  double noise = 0.1;
  /// Motif period range in samples for R regimes.
  std::size_t min_period = 16;
  std::size_t max_period = 40;
  /// Class of each segment; defaults to 0, 1, ..., segments-1. Equal classes
  /// reuse the same motif and levels (e.g. {0, 1, 0} for an A,B,A pattern).
  std::optional<std::vector<std::size_t>> classes;
  /// Channels replaced by white noise with no segment structure.
  std::vector<std::size_t> noise_channels;
  double sample_rate_hz = 50.0;

  /// Throws InvalidConfig for segments < 2, inconsistent classes, etc.
  void validate() const;
};

struct SyntheticData {
  MultiSeries series;
  std::vector<std::size_t> truth;
  /// Class index per sample.
  std::vector<std::size_t> labels;
};

/// Deterministic for a given spec (seed included), independent of platform
/// distribution implementations.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// "C-R", "NC-NR", ... (case-insensitive, '-' or '_' separator).
void parse_regime(const std::string& text, Continuity& continuity, Repetition& repetition);
std::string regime_name(Continuity continuity, Repetition repetition);

} // namespace espresso
