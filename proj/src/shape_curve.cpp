#include "espresso/shape_curve.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <unordered_map>

namespace espresso {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  const auto lo = std::min(a, b);
  const auto hi = std::max(a, b);
  return (std::uint64_t(lo) << 32) | std::uint64_t(hi);
}

class ArcBuilder {
public:
  explicit ArcBuilder(const SubseqSpec& spec) { set_.spec = spec; }

  void add(const Arc& arc) {
    const auto key = pair_key(arc.src, arc.dst);
    auto [it, inserted] = index_.try_emplace(key, set_.arcs.size());
    if (inserted) {
      set_.arcs.push_back(arc);
    } else if (arc.chain_distance < set_.arcs[it->second].chain_distance) {
      set_.arcs[it->second] = arc;
    }
  }

  ArcSet take() { return std::move(set_); }

private:
  ArcSet set_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

void check_profile(const ProfilePair& profile) {
  if (profile.mp.size() != profile.mpi.size() || profile.mp.empty()) {
    throw Error(ErrorCode::InvalidSpec, "profile distance/index lengths differ or are empty");
  }
  for (std::size_t i = 0; i < profile.mpi.size(); ++i) {
    if (profile.mpi[i] >= profile.mpi.size()) {
      throw Error(ErrorCode::OutOfRange, "profile index " + std::to_string(i) +
                                             " points outside the profile");
    }
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + long(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + long(mid));
  return 0.5 * (lower + upper);
}

} // namespace

double ChainConfig::resolve(const ProfilePair& profile) const {
  if (threshold) return *threshold;
  return beta * median(profile.mp);
}

CandidateConfig CandidateConfig::for_length(std::size_t L) {
  return CandidateConfig{L, L, L};
}

ArcSet nearest_neighbour_arcs(const ProfilePair& profile) {
  check_profile(profile);
  ArcBuilder builder(profile.spec);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    builder.add(Arc{i, profile.mpi[i], profile.mp[i], 1});
  }
  return builder.take();
}

ShapeCurve arc_curve(const ArcSet& arcs, std::size_t curve_length) {
  std::vector<long long> diff(curve_length + 1, 0);
  for (const Arc& a : arcs.arcs) {
    if (a.hi() >= curve_length) {
      throw Error(ErrorCode::OutOfRange, "arc endpoint beyond curve length");
    }
    ++diff[a.lo()];
    --diff[a.hi() + 1];
  }
  ShapeCurve curve;
  curve.kind = CurveKind::AC;
  curve.values.resize(curve_length);
  long long running = 0;
  for (std::size_t t = 0; t < curve_length; ++t) {
    running += diff[t];
    curve.values[t] = double(running);
  }
  return curve;
}

ShapeCurve arc_curve(const ProfilePair& profile) {
  return arc_curve(nearest_neighbour_arcs(profile), profile.size());
}

ArcSet extract_cac(const ProfilePair& profile, const ChainConfig& cfg) {
  check_profile(profile);
  const double threshold = cfg.resolve(profile);
  const std::size_t n = profile.size();
  const std::size_t radius = profile.spec.exclusion_radius;

  ArcBuilder builder(profile.spec);
  for (std::size_t i = 0; i < n; ++i) {
    builder.add(Arc{i, profile.mpi[i], profile.mp[i], 1});
  }

  // visited[v] == i + 1 marks v as part of the chain started at i.
  std::vector<std::size_t> visited(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    visited[i] = i + 1;
    std::size_t cur = profile.mpi[i];
    visited[cur] = i + 1;
    double dist = profile.mp[i];
    std::size_t hops = 1;
    while (true) {
      const std::size_t next = profile.mpi[cur];
      if (visited[next] == i + 1) break;
      dist += profile.mp[cur];
      ++hops;
      if (!(dist < threshold)) break;
      const std::size_t gap = i > next ? i - next : next - i;
      if (gap >= radius) builder.add(Arc{i, next, dist, hops});
      visited[next] = i + 1;
      cur = next;
    }
  }
  return builder.take();
}

ShapeCurve extract_wcac(const ProfilePair& profile, const ArcSet& arcs) {
  const std::size_t n = profile.size();
  std::vector<long double> diff(n + 1, 0.0L);
  for (const Arc& a : arcs.arcs) {
    if (a.hi() >= n) throw Error(ErrorCode::OutOfRange, "arc endpoint beyond curve length");
    if (a.span() == 0) continue;
    const long double weight =
        (long double)a.chain_distance / ((long double)a.span() / (long double)n);
    diff[a.lo()] += weight;
    diff[a.hi() + 1] -= weight;
  }
  ShapeCurve curve;
  curve.kind = CurveKind::WCAC;
  curve.values.resize(n);
  long double running = 0.0L;
  for (std::size_t t = 0; t < n; ++t) {
    running += diff[t];
    curve.values[t] = std::max(0.0, double(running));
  }
  return curve;
}

std::vector<double> smooth(const std::vector<double>& values, std::size_t width) {
  if (width <= 1 || values.size() < 2) return values;
  const std::size_t half = width / 2; // even widths behave as width + 1
  const std::size_t n = values.size();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t a = t >= half ? t - half : 0;
    const std::size_t b = std::min(n - 1, t + half);
    double s = 0.0;
    for (std::size_t u = a; u <= b; ++u) s += values[u];
    out[t] = s / double(b - a + 1);
  }
  return out;
}

std::vector<std::size_t> find_candidates(const ShapeCurve& curve,
                                         const CandidateConfig& cfg) {
  if (curve.values.empty()) throw Error(ErrorCode::NoCandidates, "empty curve");
  const std::vector<double> s = smooth(curve.values, cfg.smoothing_width);
  const std::size_t n = s.size();

  std::vector<std::size_t> minima;
  std::size_t a = 0;
  while (a < n) {
    std::size_t b = a;
    while (b + 1 < n && s[b + 1] == s[a]) ++b;
    const bool interior = a > 0 && b + 1 < n;
    if (interior && s[a - 1] > s[a] && s[b + 1] > s[a]) {
      if (a >= cfg.margin && n - 1 - a >= cfg.margin) minima.push_back(a);
    }
    a = b + 1;
  }

  std::vector<std::size_t> order = minima;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return s[x] != s[y] ? s[x] < s[y] : x < y;
  });
  std::set<std::size_t> kept;
  for (std::size_t c : order) {
    auto it = kept.lower_bound(c);
    if (it != kept.end() && *it - c < cfg.min_gap) continue;
    if (it != kept.begin() && c - *std::prev(it) < cfg.min_gap) continue;
    kept.insert(c);
  }
  if (kept.empty()) throw Error(ErrorCode::NoCandidates, "curve has no interior local minimum");
  return {kept.begin(), kept.end()};
}

} // namespace espresso
