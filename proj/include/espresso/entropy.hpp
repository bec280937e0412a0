#pragma once

#include "espresso/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace espresso {

/// How signed channels are turned into non-negative masses.
enum class EntropyNormalization {
  /// Each channel is min-max scaled to [0, 1] and paired with its complement
  /// 1 - x, giving 2D mass rows whose per-sample total is constant. With
  /// constant per-sample mass, segment areas are proportional to segment
  /// lengths and information gain never decreases under refinement.
  complement,
  /// Each channel is shifted by its minimum plus 1e-9 * range. Keeps D rows
  /// but information gain is not monotone under refinement.
  shift,
};

/// Non-negative mass rows plus per-row prefix sums for O(1) segment areas.
/// Immutable after construction.
class EntropyView {
public:
  static EntropyView from_series(const MultiSeries& series,
                                 EntropyNormalization norm = EntropyNormalization::complement);

  /// Uses the rows as masses directly. Rows must be non-empty, of equal
  /// length, finite and non-negative.
  static EntropyView from_masses(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t length() const noexcept { return length_; }

  /// Sum of row j over [begin, end).
  double area(std::size_t j, std::size_t begin, std::size_t end) const {
    const double* p = prefix_.data() + j * (length_ + 1);
    return p[end] - p[begin];
  }

  std::span<const double> mass_row(std::size_t j) const {
    return {mass_.data() + j * length_, length_};
  }
  std::span<const double> prefix_row(std::size_t j) const {
    return {prefix_.data() + j * (length_ + 1), length_ + 1};
  }

  /// Offset subtracted from each source channel, and the scale it was
  /// divided by (1 for the shift convention).
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::vector<double>& scales() const noexcept { return scales_; }

private:
  void build_prefix();

  std::size_t rows_ = 0;
  std::size_t length_ = 0;
  std::vector<double> mass_;
  std::vector<double> prefix_;
  std::vector<double> offsets_;
  std::vector<double> scales_;
};

struct SegmentEntropy {
  double bits = 0.0;
  /// True when every row has zero area over the segment; bits is then 0.
  bool degenerate = false;
};

/// Shannon entropy (base 2) of the per-row area distribution over
/// [begin, end). Throws OutOfRange unless 0 <= begin < end <= N.
SegmentEntropy segment_entropy_info(const EntropyView& view, std::size_t begin,
                                    std::size_t end);

inline double segment_entropy(const EntropyView& view, std::size_t begin, std::size_t end) {
  return segment_entropy_info(view, begin, end).bits;
}

/// H(whole) - sum_i (|s_i| / N) H(s_i) over the segments induced by the
/// boundaries. Throws InvalidBoundaries unless boundaries are strictly
/// increasing within (0, N).
double information_gain(const EntropyView& view, std::span<const std::size_t> boundaries);

struct StopRule {
  enum class Kind { fixed_segments, exhaust, knee };

  Kind kind = Kind::knee;
  /// Target segment count for fixed_segments.
  std::size_t segments = 2;
  /// Look-ahead for knee: greedy runs this many additions before the knee
  /// is located.
  std::size_t max_boundaries = 20;

  static StopRule fixed(std::size_t segments);
  static StopRule exhaust();
  static StopRule knee(std::size_t max_boundaries = 20);
  /// Knee with look-ahead 2 * expected_segments.
  static StopRule knee_with_hint(std::size_t expected_segments);
};

enum class CandidateSource { channel, dense_grid, pooled };

struct Segmentation {
  /// Sorted ascending.
  std::vector<std::size_t> boundaries;
  /// Boundaries in the order greedy selected them; ig_trace[i] is the gain
  /// after selection_order[0..i].
  std::vector<std::size_t> selection_order;
  std::vector<double> ig_trace;
  CandidateSource source = CandidateSource::channel;
  std::optional<std::size_t> source_channel;

  std::size_t segments() const noexcept { return boundaries.size() + 1; }
  double final_gain() const noexcept { return ig_trace.empty() ? 0.0 : ig_trace.back(); }
};

/// Greedy search: each step adds the unused candidate whose split yields
/// the largest information gain (ties to the smaller index). Throws
/// NoCandidates for an empty list and InvalidBoundaries for unsorted or
/// out-of-range candidates.
Segmentation greedy_entropy_seg(const EntropyView& view,
                                std::span<const std::size_t> candidates,
                                const StopRule& stop);

/// Knee of an information-gain trace. trace[k-1] is the gain after k
/// boundaries and baseline is the gain with none. Returns the boundary count
/// k maximising (L_k - L_{k-1}) / (L_{k+1} - L_k); denominators below 1e-12
/// count as +infinity and ties go to the smaller k. The segment count is
/// k + 1. Throws TraceTooShort for fewer than 3 entries.
std::size_t knee_point(std::span<const double> trace, double baseline = 0.0);

} // namespace espresso
