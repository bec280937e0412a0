#include "espresso/metrics.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace espresso {

namespace {

std::size_t abs_diff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

} // namespace

std::vector<BoundaryMatch> match_boundaries(std::span<const std::size_t> gt,
                                            std::span<const std::size_t> est) {
  std::vector<BoundaryMatch> pairs;
  pairs.reserve(gt.size() * est.size());
  for (std::size_t g : gt) {
    for (std::size_t e : est) pairs.push_back({g, e, abs_diff(g, e)});
  }
  std::sort(pairs.begin(), pairs.end(), [](const BoundaryMatch& a, const BoundaryMatch& b) {
    return std::tie(a.abs_error, a.gt, a.est) < std::tie(b.abs_error, b.gt, b.est);
  });

  std::vector<BoundaryMatch> out;
  std::vector<std::size_t> used_gt, used_est;
  const std::size_t limit = std::min(gt.size(), est.size());
  for (const auto& p : pairs) {
    if (out.size() == limit) break;
    if (std::find(used_gt.begin(), used_gt.end(), p.gt) != used_gt.end()) continue;
    if (std::find(used_est.begin(), used_est.end(), p.est) != used_est.end()) continue;
    used_gt.push_back(p.gt);
    used_est.push_back(p.est);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(),
            [](const BoundaryMatch& a, const BoundaryMatch& b) { return a.gt < b.gt; });
  return out;
}

FScore f_score(std::span<const std::size_t> gt, std::span<const std::size_t> est,
               std::size_t window_samples) {
  FScore s;
  for (const auto& m : match_boundaries(gt, est)) {
    if (m.abs_error <= window_samples) ++s.true_positives;
  }
  const double tp = double(s.true_positives);
  s.precision = est.empty() ? 0.0 : tp / double(est.size());
  s.recall = gt.empty() ? 0.0 : tp / double(gt.size());
  const double denom = s.precision + s.recall;
  s.f = denom > 0.0 ? 2.0 * s.precision * s.recall / denom : 0.0;
  return s;
}

std::vector<std::size_t> truth_errors(std::span<const std::size_t> gt,
                                      std::span<const std::size_t> est) {
  if (gt.empty()) throw Error(ErrorCode::InvalidBoundaries, "truth boundary list is empty");
  if (est.empty()) throw Error(ErrorCode::EmptyEstimate, "no estimated boundaries");
  const auto matches = match_boundaries(gt, est);
  std::vector<std::size_t> errors;
  errors.reserve(gt.size());
  for (std::size_t g : gt) {
    auto it = std::find_if(matches.begin(), matches.end(),
                           [g](const BoundaryMatch& m) { return m.gt == g; });
    if (it != matches.end()) {
      errors.push_back(it->abs_error);
      continue;
    }
    std::size_t nearest = std::numeric_limits<std::size_t>::max();
    for (std::size_t e : est) nearest = std::min(nearest, abs_diff(g, e));
    errors.push_back(nearest);
  }
  return errors;
}

ErrorSummary rmse_norm(std::span<const std::size_t> gt, std::span<const std::size_t> est,
                       std::size_t series_length) {
  if (est.empty()) return {1.0, true};
  const auto errors = truth_errors(gt, est);
  double ss = 0.0;
  for (std::size_t e : errors) ss += double(e) * double(e);
  const double rmse = std::sqrt(ss / double(errors.size()));
  return {std::min(1.0, rmse / double(series_length)), false};
}

ErrorSummary mae(std::span<const std::size_t> gt, std::span<const std::size_t> est) {
  if (est.empty()) return {std::numeric_limits<double>::infinity(), true};
  const auto errors = truth_errors(gt, est);
  double sum = 0.0;
  for (std::size_t e : errors) sum += double(e);
  return {sum / double(errors.size()), false};
}

std::size_t WindowSpec::resolve(std::optional<double> rate_hz,
                                std::size_t series_length) const {
  if (samples) return *samples;
  if (seconds) {
    if (!rate_hz) {
      throw Error(ErrorCode::InvalidConfig,
                  "window given in seconds but the series has no sample rate");
    }
    return std::size_t(std::llround(*seconds * *rate_hz));
  }
  return std::max<std::size_t>(1, std::size_t(std::llround(fraction_of_length *
                                                           double(series_length))));
}

EvalReport evaluate(std::vector<std::size_t> gt, std::vector<std::size_t> est,
                    std::size_t series_length, std::size_t window_samples) {
  auto clean = [series_length](std::vector<std::size_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::erase_if(v, [series_length](std::size_t b) { return b == 0 || b >= series_length; });
  };
  clean(gt);
  clean(est);

  EvalReport r;
  r.window_samples = window_samples;
  r.series_length = series_length;
  r.matches = match_boundaries(gt, est);
  const FScore fs = f_score(gt, est, window_samples);
  r.f_score = fs.f;
  r.precision = fs.precision;
  r.recall = fs.recall;
  r.true_positives = fs.true_positives;
  r.false_positives = est.size() - fs.true_positives;
  r.false_negatives = gt.size() - fs.true_positives;
  r.empty_truth = gt.empty();
  r.empty_estimate = est.empty();
  if (gt.empty()) {
    r.rmse_norm = 0.0;
    r.mae_samples = 0.0;
  } else {
    r.rmse_norm = rmse_norm(gt, est, series_length).value;
    const auto m = mae(gt, est);
    if (!m.empty_estimate) r.mae_samples = m.value;
  }
  return r;
}

} // namespace espresso
