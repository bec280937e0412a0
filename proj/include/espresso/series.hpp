#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace espresso {

/// D-channel, N-sample real-valued series. Storage is channel-major so each
/// channel is one contiguous span. Instances are only produced by
/// validate_series(), which enforces D >= 1, N >= 2 and finiteness; after
/// that the object is immutable.
class MultiSeries {
public:
  std::size_t channels() const noexcept { return channels_; }
  std::size_t length() const noexcept { return length_; }

  std::span<const double> channel(std::size_t j) const;
  double at(std::size_t j, std::size_t i) const { return channel(j)[i]; }

  const std::vector<std::string>& channel_names() const noexcept { return names_; }
  std::optional<double> sample_rate_hz() const noexcept { return rate_; }

  /// Rows of the underlying matrix, one vector per channel.
  std::vector<std::vector<double>> rows() const;

  bool operator==(const MultiSeries&) const = default;

private:
  friend MultiSeries validate_series(const std::vector<std::vector<double>>&,
                                     std::vector<std::string>,
                                     std::optional<double>);

  std::size_t channels_ = 0;
  std::size_t length_ = 0;
  std::vector<double> data_;
  std::vector<std::string> names_;
  std::optional<double> rate_;
};

/// Builds a MultiSeries from a D x N matrix.
///
/// Throws EmptyInput when D = 0 or N < 2, RaggedChannels when rows differ in
/// length and NonFiniteError with the first offending (channel, index) in
/// row-major scan order. Missing names default to "ch<j>".
MultiSeries validate_series(const std::vector<std::vector<double>>& raw,
                            std::vector<std::string> channel_names = {},
                            std::optional<double> sample_rate_hz = std::nullopt);

/// Revalidates an existing series; returns an equal value.
MultiSeries validate_series(const MultiSeries& series);

/// Subsequence length and trivial-match exclusion radius, both in samples.
struct SubseqSpec {
  std::size_t length = 0;
  std::size_t exclusion_radius = 0;

  /// Radius defaults to ceil(L/2).
  static SubseqSpec with_length(std::size_t length);

  /// Throws InvalidSpec for L < 2 or radius 0, SubseqTooLong for L > N/2.
  void validate_for(std::size_t series_length) const;

  /// Number of length-L windows in a series of n samples.
  std::size_t profile_length(std::size_t n) const { return n - length + 1; }

  bool operator==(const SubseqSpec&) const = default;
};

/// Contiguous window [start, start + L) of one channel. Throws OutOfRange
/// when the channel or window falls outside the series.
std::span<const double> subsequence(const MultiSeries& series, std::size_t channel,
                                    std::size_t start, const SubseqSpec& spec);

} // namespace espresso
