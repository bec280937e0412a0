#pragma once

#include "espresso/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace espresso {

enum class DistanceKind {
  znorm, ///< Euclidean distance between z-normalized windows.
  plain, ///< Raw Euclidean distance, for sensitivity studies.
};

/// Nearest-neighbour distance and index for every length-L window of one
/// channel. mp[i] is the distance from window i to window mpi[i], the closest
/// window outside the exclusion zone (|mpi[i] - i| >= spec.exclusion_radius).
struct ProfilePair {
  std::vector<double> mp;
  std::vector<std::size_t> mpi;
  SubseqSpec spec;

  std::size_t size() const noexcept { return mp.size(); }
  bool operator==(const ProfilePair&) const = default;
};

/// Mean and population standard deviation of a window, plus whether the
/// window is treated as constant (std < 1e-12 * (1 + |mean|)).
struct WindowStats {
  double mean = 0.0;
  double std = 0.0;
  bool constant = false;
};

WindowStats window_stats(std::span<const double> w);

/// Euclidean distance between the z-normalized copies of a and b.
///
/// A constant window normalizes to the zero vector, so two constant windows
/// are at distance 0 and a constant/non-constant pair at sqrt(L). The result
/// lies in [0, 2 sqrt(L)]. Throws LengthMismatch for unequal lengths or L < 2.
double znorm_distance(std::span<const double> a, std::span<const double> b);

/// Plain Euclidean distance. Throws LengthMismatch for unequal lengths.
double plain_distance(std::span<const double> a, std::span<const double> b);

double window_distance(std::span<const double> a, std::span<const double> b,
                       DistanceKind kind);

/// Exact matrix profile of one channel. Ties resolve to the smallest index.
/// Throws SubseqTooLong when L > N/2 and InvalidSpec for a malformed spec.
ProfilePair compute_profile(std::span<const double> x, const SubseqSpec& spec,
                            DistanceKind kind = DistanceKind::znorm);

ProfilePair compute_profile(const MultiSeries& series, std::size_t channel,
                            const SubseqSpec& spec,
                            DistanceKind kind = DistanceKind::znorm);

/// Naive O(N^2 L) reference used to check compute_profile.
ProfilePair brute_force_profile(std::span<const double> x, const SubseqSpec& spec,
                                DistanceKind kind = DistanceKind::znorm);

ProfilePair brute_force_profile(const MultiSeries& series, std::size_t channel,
                                const SubseqSpec& spec,
                                DistanceKind kind = DistanceKind::znorm);

} // namespace espresso
