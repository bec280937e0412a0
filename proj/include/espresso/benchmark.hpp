#pragma once

#include "espresso/metrics.hpp"
#include "espresso/pipeline.hpp"
#include "espresso/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace espresso {

/// Subsequence lengths to sweep. Runs are aggregated by arithmetic mean over
/// all (subject, length) pairs; with repeat_per_subject the report also
/// carries per-subject means.
struct SweepSpec {
  std::vector<std::size_t> subseq_lengths;
  bool repeat_per_subject = true;

  /// Sorts and deduplicates; throws InvalidConfig when empty or a length
  /// exceeds N/2 of the shortest subject.
  void normalize(std::size_t shortest_series);
};

struct BenchmarkSubject {
  std::string name;
  MultiSeries series;
  std::vector<std::size_t> truth;
  std::optional<std::uint64_t> seed;
};

struct BenchmarkOptions {
  /// Pipeline settings shared by every run; spec.length is overridden per
  /// sweep entry (radius back to its ceil(L/2) default).
  PipelineConfig base;
  /// Use the truth segment count as a fixed stop rule; otherwise base.stop.
  bool truth_k = true;
  WindowSpec window;
  std::size_t workers = 1;
  std::optional<std::filesystem::path> output_dir;
  bool write_curves = false;
  bool include_timing = true;
};

struct MetricMeans {
  double f_score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double rmse_norm = 0.0;
  /// Over runs with estimates only; absent if none had any.
  std::optional<double> mae_samples;
  std::size_t runs = 0;
};

MetricMeans mean_of(const std::vector<EvalReport>& reports);

struct BenchmarkRun {
  std::string subject;
  std::size_t subseq_length = 0;
  RunDocument document;
};

struct BenchmarkReport {
  std::vector<BenchmarkRun> runs;
  MetricMeans overall;
  std::vector<std::pair<std::string, MetricMeans>> per_subject;
};

/// Runs every subject at every sweep length, scores against truth and, when
/// an output directory is set, writes one result document per run
/// (<subject>_L<length>.json), optional per-channel curve CSVs and
/// aggregate.json.
BenchmarkReport run_benchmark(const std::vector<BenchmarkSubject>& subjects,
                              const BenchmarkOptions& options, SweepSpec sweep);

nlohmann::json aggregate_document(const BenchmarkReport& report, const BenchmarkOptions& options);

/// Human-readable table: one row per subject plus an overall row with mean
/// F-score and normalized RMSE.
void print_summary(std::ostream& out, const BenchmarkReport& report, Mode mode);

} // namespace espresso
