#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace espresso {

struct BoundaryMatch {
  std::size_t gt = 0;
  std::size_t est = 0;
  std::size_t abs_error = 0;

  bool operator==(const BoundaryMatch&) const = default;
};

/// One-to-one matching: repeatedly pairs the unmatched (gt, est) with the
/// smallest absolute error, ties to the smaller gt then the smaller est,
/// until either side runs out. Matches are returned in gt order.
std::vector<BoundaryMatch> match_boundaries(std::span<const std::size_t> gt,
                                            std::span<const std::size_t> est);

struct FScore {
  double f = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
};

/// A match counts as a true positive when its error is within the window.
/// Unmatched or out-of-window estimates are false positives, unmatched or
/// out-of-window truths false negatives.
FScore f_score(std::span<const std::size_t> gt, std::span<const std::size_t> est,
               std::size_t window_samples);

struct ErrorSummary {
  double value = 0.0;
  /// Set when there were no estimates; rmse_norm then reports 1 and mae
  /// reports +infinity.
  bool empty_estimate = false;
};

/// Per-truth errors: the one-to-one matched estimate where there is one,
/// otherwise (only possible when |est| < |gt|) the nearest estimate with
/// reuse. Throws InvalidBoundaries for an empty truth list.
std::vector<std::size_t> truth_errors(std::span<const std::size_t> gt,
                                      std::span<const std::size_t> est);

/// RMSE of truth_errors divided by the series length.
ErrorSummary rmse_norm(std::span<const std::size_t> gt, std::span<const std::size_t> est,
                       std::size_t series_length);

/// Mean of truth_errors, in samples.
ErrorSummary mae(std::span<const std::size_t> gt, std::span<const std::size_t> est);

struct EvalReport {
  std::vector<BoundaryMatch> matches;
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double rmse_norm = 0.0;
  /// Absent when there are no estimates.
  std::optional<double> mae_samples;
  std::size_t window_samples = 0;
  std::size_t series_length = 0;
  bool empty_estimate = false;
  bool empty_truth = false;
};

/// Scoring window. Explicit samples win over seconds; seconds need a sample
/// rate; with neither, the window is a fraction of the series length.
struct WindowSpec {
  std::optional<std::size_t> samples;
  std::optional<double> seconds;
  double fraction_of_length = 0.02;

  /// Throws InvalidConfig when seconds are given without a rate.
  std::size_t resolve(std::optional<double> rate_hz, std::size_t series_length) const;
};

/// Full report. Inputs are sorted, deduplicated, and stripped of the trivial
/// endpoints 0 and N before scoring.
EvalReport evaluate(std::vector<std::size_t> gt, std::vector<std::size_t> est,
                    std::size_t series_length, std::size_t window_samples);

} // namespace espresso
