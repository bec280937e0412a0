#include "espresso/entropy.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace espresso {

void EntropyView::build_prefix() {
  prefix_.assign(rows_ * (length_ + 1), 0.0);
  for (std::size_t j = 0; j < rows_; ++j) {
    double* p = prefix_.data() + j * (length_ + 1);
    const double* m = mass_.data() + j * length_;
    for (std::size_t i = 0; i < length_; ++i) p[i + 1] = p[i] + m[i];
  }
}

EntropyView EntropyView::from_series(const MultiSeries& series, EntropyNormalization norm) {
  EntropyView v;
  const std::size_t d = series.channels();
  const std::size_t n = series.length();
  v.length_ = n;
  v.rows_ = norm == EntropyNormalization::complement ? 2 * d : d;
  v.mass_.assign(v.rows_ * n, 0.0);

  for (std::size_t j = 0; j < d; ++j) {
    auto c = series.channel(j);
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    const double range = *hi - *lo;
    double* row = v.mass_.data() + j * n;
    if (norm == EntropyNormalization::complement) {
      double* comp = v.mass_.data() + (d + j) * n;
      for (std::size_t i = 0; i < n; ++i) {
        // Constant channels sit at the midpoint.
        const double u = range > 0.0 ? (c[i] - *lo) / range : 0.5;
        row[i] = u;
        comp[i] = 1.0 - u;
      }
      v.offsets_.push_back(*lo);
      v.scales_.push_back(range > 0.0 ? range : 1.0);
    } else {
      const double eps = 1e-9 * range;
      for (std::size_t i = 0; i < n; ++i) row[i] = c[i] - *lo + eps;
      v.offsets_.push_back(*lo - eps);
      v.scales_.push_back(1.0);
    }
  }
  v.build_prefix();
  return v;
}

EntropyView EntropyView::from_masses(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::EmptyInput, "mass matrix is empty");
  }
  EntropyView v;
  v.rows_ = rows.size();
  v.length_ = rows.front().size();
  v.mass_.reserve(v.rows_ * v.length_);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != v.length_) {
      throw Error(ErrorCode::RaggedChannels, "mass rows differ in length");
    }
    for (std::size_t i = 0; i < v.length_; ++i) {
      const double m = rows[j][i];
      if (!std::isfinite(m)) throw NonFiniteError(j, i);
      if (m < 0.0) {
        throw Error(ErrorCode::InvalidSpec, "negative mass at row " + std::to_string(j) +
                                                ", index " + std::to_string(i));
      }
      v.mass_.push_back(m);
    }
    v.offsets_.push_back(0.0);
    v.scales_.push_back(1.0);
  }
  v.build_prefix();
  return v;
}

SegmentEntropy segment_entropy_info(const EntropyView& view, std::size_t begin,
                                    std::size_t end) {
  if (begin >= end || end > view.length()) {
    throw Error(ErrorCode::OutOfRange, "segment [" + std::to_string(begin) + ", " +
                                           std::to_string(end) + ") in series of length " +
                                           std::to_string(view.length()));
  }
  double total = 0.0;
  for (std::size_t j = 0; j < view.rows(); ++j) total += view.area(j, begin, end);
  if (!(total > 0.0)) return {0.0, true};

  double h = 0.0;
  for (std::size_t j = 0; j < view.rows(); ++j) {
    const double a = view.area(j, begin, end);
    if (a <= 0.0) continue;
    const double p = a / total;
    h -= p * std::log2(p);
  }
  const double cap = std::log2(double(view.rows()));
  return {std::clamp(h, 0.0, cap), false};
}

namespace {

void check_boundaries(std::span<const std::size_t> b, std::size_t n) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] == 0 || b[i] >= n || (i > 0 && b[i] <= b[i - 1])) {
      throw Error(ErrorCode::InvalidBoundaries,
                  "boundaries must be strictly increasing inside (0, " +
                      std::to_string(n) + ")");
    }
  }
}

// Contribution of segment [a, b) to the weighted residual entropy.
double weighted_entropy(const EntropyView& view, std::size_t a, std::size_t b) {
  return double(b - a) / double(view.length()) * segment_entropy(view, a, b);
}

} // namespace

double information_gain(const EntropyView& view, std::span<const std::size_t> boundaries) {
  const std::size_t n = view.length();
  check_boundaries(boundaries, n);
  double residual = 0.0;
  std::size_t start = 0;
  for (std::size_t b : boundaries) {
    residual += weighted_entropy(view, start, b);
    start = b;
  }
  residual += weighted_entropy(view, start, n);
  return segment_entropy(view, 0, n) - residual;
}

StopRule StopRule::fixed(std::size_t segments) {
  StopRule r;
  r.kind = Kind::fixed_segments;
  r.segments = segments;
  return r;
}

StopRule StopRule::exhaust() {
  StopRule r;
  r.kind = Kind::exhaust;
  return r;
}

StopRule StopRule::knee(std::size_t max_boundaries) {
  StopRule r;
  r.kind = Kind::knee;
  r.max_boundaries = max_boundaries;
  return r;
}

StopRule StopRule::knee_with_hint(std::size_t expected_segments) {
  return knee(2 * expected_segments);
}

Segmentation greedy_entropy_seg(const EntropyView& view,
                                std::span<const std::size_t> candidates,
                                const StopRule& stop) {
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "candidate list is empty");
  const std::size_t n = view.length();
  check_boundaries(candidates, n);

  std::size_t additions = candidates.size();
  switch (stop.kind) {
  case StopRule::Kind::fixed_segments:
    if (stop.segments < 1) throw Error(ErrorCode::InvalidConfig, "segment count must be >= 1");
    additions = std::min(additions, stop.segments - 1);
    break;
  case StopRule::Kind::exhaust:
    break;
  case StopRule::Kind::knee:
    additions = std::min(additions, stop.max_boundaries);
    break;
  }

  Segmentation seg;
  std::set<std::size_t> chosen;
  std::vector<bool> used(candidates.size(), false);

  for (std::size_t step = 0; step < additions; ++step) {
    double best_delta = -std::numeric_limits<double>::infinity();
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      const std::size_t b = candidates[c];
      auto hi_it = chosen.upper_bound(b);
      const std::size_t hi = hi_it == chosen.end() ? n : *hi_it;
      const std::size_t lo = hi_it == chosen.begin() ? 0 : *std::prev(hi_it);
      const double delta = weighted_entropy(view, lo, hi) - weighted_entropy(view, lo, b) -
                           weighted_entropy(view, b, hi);
      if (delta > best_delta) {
        best_delta = delta;
        best = c;
      }
    }
    used[best] = true;
    chosen.insert(candidates[best]);
    seg.selection_order.push_back(candidates[best]);
    const std::vector<std::size_t> current(chosen.begin(), chosen.end());
    seg.ig_trace.push_back(information_gain(view, current));
  }

  if (stop.kind == StopRule::Kind::knee && seg.ig_trace.size() >= 3) {
    const std::size_t k = knee_point(seg.ig_trace);
    seg.selection_order.resize(k);
    seg.ig_trace.resize(k);
  }
  seg.boundaries = seg.selection_order;
  std::sort(seg.boundaries.begin(), seg.boundaries.end());
  return seg;
}

std::size_t knee_point(std::span<const double> trace, double baseline) {
  if (trace.size() < 3) {
    throw Error(ErrorCode::TraceTooShort,
                "knee needs at least 3 gains, got " + std::to_string(trace.size()));
  }
  auto gain = [&](std::size_t k) { return k == 0 ? baseline : trace[k - 1]; };
  std::size_t best_k = 1;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const double num = gain(k) - gain(k - 1);
    const double den = gain(k + 1) - gain(k);
    const double ratio = den < 1e-12 ? std::numeric_limits<double>::infinity() : num / den;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
  }
  return best_k;
}

} // namespace espresso
