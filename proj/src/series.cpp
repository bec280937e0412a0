#include "espresso/series.hpp"

#include "espresso/error.hpp"

#include <cmath>

namespace espresso {

std::span<const double> MultiSeries::channel(std::size_t j) const {
  if (j >= channels_) {
    throw Error(ErrorCode::OutOfRange, "channel " + std::to_string(j) +
                                           " of " + std::to_string(channels_));
  }
  return {data_.data() + j * length_, length_};
}

std::vector<std::vector<double>> MultiSeries::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(channels_);
  for (std::size_t j = 0; j < channels_; ++j) {
    auto c = channel(j);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

MultiSeries validate_series(const std::vector<std::vector<double>>& raw,
                            std::vector<std::string> channel_names,
                            std::optional<double> sample_rate_hz) {
  if (raw.empty()) {
    throw Error(ErrorCode::EmptyInput, "series has no channels");
  }
  const std::size_t n = raw.front().size();
  for (const auto& row : raw) {
    if (row.size() != n) {
      throw Error(ErrorCode::RaggedChannels,
                  "channel lengths " + std::to_string(n) + " and " +
                      std::to_string(row.size()) + " differ");
    }
  }
  if (n < 2) {
    throw Error(ErrorCode::EmptyInput, "series needs at least 2 samples");
  }
  for (std::size_t j = 0; j < raw.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(raw[j][i])) throw NonFiniteError(j, i);
    }
  }
  if (sample_rate_hz && !(*sample_rate_hz > 0.0 && std::isfinite(*sample_rate_hz))) {
    throw Error(ErrorCode::InvalidSpec, "sample rate must be positive");
  }
  if (!channel_names.empty() && channel_names.size() != raw.size()) {
    throw Error(ErrorCode::InvalidSpec, "expected " + std::to_string(raw.size()) +
                                            " channel names, got " +
                                            std::to_string(channel_names.size()));
  }
  if (channel_names.empty()) {
    for (std::size_t j = 0; j < raw.size(); ++j) {
      channel_names.push_back("ch" + std::to_string(j));
    }
  }

  MultiSeries s;
  s.channels_ = raw.size();
  s.length_ = n;
  s.data_.reserve(raw.size() * n);
  for (const auto& row : raw) s.data_.insert(s.data_.end(), row.begin(), row.end());
  s.names_ = std::move(channel_names);
  s.rate_ = sample_rate_hz;
  return s;
}

MultiSeries validate_series(const MultiSeries& series) {
  return validate_series(series.rows(), series.channel_names(), series.sample_rate_hz());
}

SubseqSpec SubseqSpec::with_length(std::size_t length) {
  return SubseqSpec{length, (length + 1) / 2};
}

void SubseqSpec::validate_for(std::size_t series_length) const {
  if (length < 2) {
    throw Error(ErrorCode::InvalidSpec, "subsequence length must be >= 2");
  }
  if (exclusion_radius == 0) {
    throw Error(ErrorCode::InvalidSpec, "exclusion radius must be positive");
  }
  if (2 * length > series_length) {
    throw Error(ErrorCode::SubseqTooLong,
                "L=" + std::to_string(length) + " exceeds N/2 for N=" +
                    std::to_string(series_length));
  }
}

std::span<const double> subsequence(const MultiSeries& series, std::size_t channel,
                                    std::size_t start, const SubseqSpec& spec) {
  auto c = series.channel(channel);
  if (spec.length == 0 || spec.length > c.size() || start > c.size() - spec.length) {
    throw Error(ErrorCode::OutOfRange,
                "window [" + std::to_string(start) + ", " +
                    std::to_string(start + spec.length) + ") outside [0, " +
                    std::to_string(c.size()) + ")");
  }
  return c.subspan(start, spec.length);
}

} // namespace espresso
