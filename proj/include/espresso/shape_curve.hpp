#pragma once

#include "espresso/matrix_profile.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace espresso {

/// Link between two windows. For hop_count == 1 this is a window and its
/// nearest neighbour; higher hop counts come from chaining nearest-neighbour
/// links, with chain_distance the sum of the hop distances.
struct Arc {
  std::size_t src = 0;
  std::size_t dst = 0;
  double chain_distance = 0.0;
  std::size_t hop_count = 1;

  std::size_t lo() const noexcept { return src < dst ? src : dst; }
  std::size_t hi() const noexcept { return src < dst ? dst : src; }
  std::size_t span() const noexcept { return hi() - lo(); }

  bool operator==(const Arc&) const = default;
};

/// Arcs keyed by their unordered endpoint pair; at most one arc per pair.
struct ArcSet {
  std::vector<Arc> arcs;
  SubseqSpec spec;

  std::size_t size() const noexcept { return arcs.size(); }
};

struct ChainConfig {
  /// Threshold = beta * median(mp) unless an explicit threshold is set.
  double beta = 2.0;
  std::optional<double> threshold;

  double resolve(const ProfilePair& profile) const;
};

enum class CurveKind { AC, WCAC };

struct ShapeCurve {
  std::vector<double> values;
  CurveKind kind = CurveKind::AC;
  std::vector<std::size_t> candidates;

  std::size_t size() const noexcept { return values.size(); }
};

/// Local-minimum extraction settings. A smoothing width of 1 disables
/// smoothing; even widths are bumped to the next odd value.
struct CandidateConfig {
  std::size_t smoothing_width = 1;
  std::size_t margin = 0;
  std::size_t min_gap = 1;

  /// Width L, margin L, min_gap L.
  static CandidateConfig for_length(std::size_t L);
};

/// The deduplicated nearest-neighbour arcs (i, mpi[i]).
ArcSet nearest_neighbour_arcs(const ProfilePair& profile);

/// Plain arc curve: values[t] counts arcs whose closed span [lo, hi]
/// contains t.
ShapeCurve arc_curve(const ProfilePair& profile);
ShapeCurve arc_curve(const ArcSet& arcs, std::size_t curve_length);

/// Chained arc set. Starting from each window, follows
/// i -> mpi[i] -> mpi[mpi[i]] -> ... accumulating hop distances and adds an
/// arc from i to each node reached while the accumulated distance stays
/// strictly below the threshold. A chain ends at the first revisited node.
/// Composed arcs that would land inside the exclusion zone of their source are
/// not added, but the chain continues through them.
ArcSet extract_cac(const ProfilePair& profile, const ChainConfig& cfg = {});

/// Weighted chained arc curve: each arc adds
///   chain_distance / (span / curve_length)
/// to every tick in its closed span.
ShapeCurve extract_wcac(const ProfilePair& profile, const ArcSet& arcs);

/// Centred moving average; windows are truncated at the ends.
std::vector<double> smooth(const std::vector<double>& values, std::size_t width);

/// Local minima of the smoothed curve. Flat minima report their first index,
/// runs touching either end of the curve are ignored, candidates closer than
/// margin to an end are dropped, and the survivors are thinned so that any
/// two are at least min_gap apart (lower value wins, then lower index).
/// Returns indices in ascending order; throws NoCandidates when none remain.
std::vector<std::size_t> find_candidates(const ShapeCurve& curve,
                                         const CandidateConfig& cfg);

} // namespace espresso
