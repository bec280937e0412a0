#include "espresso/matrix_profile.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace espresso {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "windows of length " +
                                               std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  }
}

void check_profile_spec(std::size_t n, const SubseqSpec& spec) {
  spec.validate_for(n);
  if (spec.exclusion_radius >= spec.profile_length(n)) {
    throw Error(ErrorCode::InvalidSpec,
                "exclusion radius " + std::to_string(spec.exclusion_radius) +
                    " leaves no admissible neighbour");
  }
}

ProfilePair empty_profile(std::size_t m, const SubseqSpec& spec) {
  ProfilePair p;
  p.mp.assign(m, std::numeric_limits<double>::infinity());
  p.mpi.assign(m, 0);
  p.spec = spec;
  return p;
}

void offer(ProfilePair& p, std::size_t row, std::size_t col, double d) {
  if (d < p.mp[row] || (d == p.mp[row] && col < p.mpi[row])) {
    p.mp[row] = d;
    p.mpi[row] = col;
  }
}

// Streaming z-normalized correlation along diagonals (MPX recurrence):
// cov(i+1, j+1) = cov(i, j) + df[i] dg[j] + df[j] dg[i].
// Produces approximate squared distances; callers refine exactly.
class DiagonalSweep {
public:
  DiagonalSweep(std::span<const double> x, std::size_t L, DistanceKind kind)
      : x_(x), L_(L), m_(x.size() - L + 1), kind_(kind) {
    stats_.reserve(m_);
    for (std::size_t i = 0; i < m_; ++i) stats_.push_back(window_stats(x.subspan(i, L)));

    if (kind_ == DistanceKind::znorm) {
      invn_.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        invn_[i] = stats_[i].constant ? 0.0
                                      : 1.0 / (stats_[i].std * std::sqrt(double(L)));
      }
      df_.resize(m_ - 1);
      dg_.resize(m_ - 1);
      for (std::size_t i = 0; i + 1 < m_; ++i) {
        df_[i] = 0.5 * (x[i + L] - x[i]);
        dg_[i] = (x[i + L] - stats_[i + 1].mean) + (x[i] - stats_[i].mean);
      }
    } else {
      // Centre globally; plain distances are shift-invariant.
      double mu = 0.0;
      for (double v : x) mu += v;
      mu /= double(x.size());
      centred_.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) centred_[i] = x[i] - mu;
      sumsq_.resize(m_);
      for (std::size_t i = 0; i < m_; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < L; ++t) s += centred_[i + t] * centred_[i + t];
        sumsq_[i] = s;
      }
    }
  }

  std::size_t windows() const { return m_; }

  /// Squared-distance scale used for the refinement tolerance.
  double scale(std::size_t i) const {
    if (kind_ == DistanceKind::znorm) return 4.0 * double(L_);
    return 4.0 * sumsq_[i] + 1.0;
  }

  /// Calls fn(row, col, approx_sq_distance) for every pair with
  /// col - row >= radius.
  template <typename Fn>
  void for_each_pair(std::size_t radius, Fn&& fn) const {
    for (std::size_t diag = radius; diag < m_; ++diag) {
      if (kind_ == DistanceKind::znorm) {
        double cov = 0.0;
        for (std::size_t t = 0; t < L_; ++t) {
          cov += (x_[diag + t] - stats_[diag].mean) * (x_[t] - stats_[0].mean);
        }
        for (std::size_t row = 0; row + diag < m_; ++row) {
          const std::size_t col = row + diag;
          if (row > 0) cov += df_[row - 1] * dg_[col - 1] + df_[col - 1] * dg_[row - 1];
          fn(row, col, znorm_sq(row, col, cov));
        }
      } else {
        double qt = 0.0;
        for (std::size_t t = 0; t < L_; ++t) qt += centred_[diag + t] * centred_[t];
        for (std::size_t row = 0; row + diag < m_; ++row) {
          const std::size_t col = row + diag;
          if (row > 0) {
            qt += centred_[row + L_ - 1] * centred_[col + L_ - 1] -
                  centred_[row - 1] * centred_[col - 1];
          }
          fn(row, col, std::max(0.0, sumsq_[row] + sumsq_[col] - 2.0 * qt));
        }
      }
    }
  }

private:
  double znorm_sq(std::size_t row, std::size_t col, double cov) const {
    const bool cr = stats_[row].constant;
    const bool cc = stats_[col].constant;
    if (cr && cc) return 0.0;
    if (cr || cc) return double(L_);
    const double corr = std::clamp(cov * invn_[row] * invn_[col], -1.0, 1.0);
    return 2.0 * double(L_) * (1.0 - corr);
  }

  std::span<const double> x_;
  std::size_t L_;
  std::size_t m_;
  DistanceKind kind_;
  std::vector<WindowStats> stats_;
  std::vector<double> invn_, df_, dg_;
  std::vector<double> centred_, sumsq_;
};

} // namespace

WindowStats window_stats(std::span<const double> w) {
  WindowStats s;
  double sum = 0.0;
  for (double v : w) sum += v;
  s.mean = sum / double(w.size());
  double ss = 0.0;
  for (double v : w) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / double(w.size()));
  s.constant = s.std < 1e-12 * (1.0 + std::abs(s.mean));
  return s;
}

double znorm_distance(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  if (a.size() < 2) throw Error(ErrorCode::LengthMismatch, "windows need length >= 2");
  const WindowStats sa = window_stats(a);
  const WindowStats sb = window_stats(b);
  const double L = double(a.size());
  if (sa.constant && sb.constant) return 0.0;
  if (sa.constant || sb.constant) return std::sqrt(L);
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = (a[t] - sa.mean) / sa.std - (b[t] - sb.mean) / sb.std;
    acc += d * d;
  }
  return std::min(std::sqrt(acc), 2.0 * std::sqrt(L));
}

double plain_distance(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) acc += (a[t] - b[t]) * (a[t] - b[t]);
  return std::sqrt(acc);
}

double window_distance(std::span<const double> a, std::span<const double> b,
                       DistanceKind kind) {
  return kind == DistanceKind::znorm ? znorm_distance(a, b) : plain_distance(a, b);
}

ProfilePair compute_profile(std::span<const double> x, const SubseqSpec& spec,
                            DistanceKind kind) {
  check_profile_spec(x.size(), spec);
  const std::size_t L = spec.length;
  const DiagonalSweep sweep(x, L, kind);
  const std::size_t m = sweep.windows();

  // Pass 1: approximate minimum squared distance per window.
  std::vector<double> approx_min(m, std::numeric_limits<double>::infinity());
  sweep.for_each_pair(spec.exclusion_radius, [&](std::size_t r, std::size_t c, double d2) {
    approx_min[r] = std::min(approx_min[r], d2);
    approx_min[c] = std::min(approx_min[c], d2);
  });

  // Pass 2: every pair within tolerance of the approximate minimum is
  // re-evaluated with the exact window distance, so the result matches a
  // direct evaluation including tie order.
  std::vector<double> threshold(m);
  for (std::size_t i = 0; i < m; ++i) threshold[i] = approx_min[i] + 1e-7 * sweep.scale(i);

  ProfilePair out = empty_profile(m, spec);
  sweep.for_each_pair(spec.exclusion_radius, [&](std::size_t r, std::size_t c, double d2) {
    const bool for_row = d2 <= threshold[r];
    const bool for_col = d2 <= threshold[c];
    if (!for_row && !for_col) return;
    const double d = window_distance(x.subspan(r, L), x.subspan(c, L), kind);
    if (for_row) offer(out, r, c, d);
    if (for_col) offer(out, c, r, d);
  });
  return out;
}

ProfilePair compute_profile(const MultiSeries& series, std::size_t channel,
                            const SubseqSpec& spec, DistanceKind kind) {
  return compute_profile(series.channel(channel), spec, kind);
}

ProfilePair brute_force_profile(std::span<const double> x, const SubseqSpec& spec,
                                DistanceKind kind) {
  check_profile_spec(x.size(), spec);
  const std::size_t L = spec.length;
  const std::size_t m = x.size() - L + 1;
  ProfilePair out = empty_profile(m, spec);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap < spec.exclusion_radius) continue;
      const double d = kind == DistanceKind::znorm
                           ? znorm_distance(x.subspan(i, L), x.subspan(j, L))
                           : plain_distance(x.subspan(i, L), x.subspan(j, L));
      if (d < out.mp[i]) {
        out.mp[i] = d;
        out.mpi[i] = j;
      }
    }
  }
  return out;
}

ProfilePair brute_force_profile(const MultiSeries& series, std::size_t channel,
                                const SubseqSpec& spec, DistanceKind kind) {
  return brute_force_profile(series.channel(channel), spec, kind);
}

} // namespace espresso
