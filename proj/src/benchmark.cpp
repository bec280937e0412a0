#include "espresso/benchmark.hpp"

#include "espresso/csv_io.hpp"
#include "espresso/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace espresso {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

nlohmann::json means_to_json(const MetricMeans& m) {
  return {{"f_score", m.f_score},
          {"precision", m.precision},
          {"recall", m.recall},
          {"rmse_norm", m.rmse_norm},
          {"mae_samples", m.mae_samples ? nlohmann::json(*m.mae_samples) : nlohmann::json(nullptr)},
          {"runs", m.runs}};
}

} // namespace

void SweepSpec::normalize(std::size_t shortest_series) {
  std::sort(subseq_lengths.begin(), subseq_lengths.end());
  subseq_lengths.erase(std::unique(subseq_lengths.begin(), subseq_lengths.end()),
                       subseq_lengths.end());
  if (subseq_lengths.empty()) throw Error(ErrorCode::InvalidConfig, "sweep has no lengths");
  for (std::size_t L : subseq_lengths) {
    if (L < 2 || 2 * L > shortest_series) {
      throw Error(ErrorCode::InvalidConfig,
                  "sweep length " + std::to_string(L) + " is outside [2, N/2] for N=" +
                      std::to_string(shortest_series));
    }
  }
}

MetricMeans mean_of(const std::vector<EvalReport>& reports) {
  MetricMeans m;
  m.runs = reports.size();
  if (reports.empty()) return m;
  double mae_sum = 0.0;
  std::size_t mae_count = 0;
  for (const auto& r : reports) {
    m.f_score += r.f_score;
    m.precision += r.precision;
    m.recall += r.recall;
    m.rmse_norm += r.rmse_norm;
    if (r.mae_samples) {
      mae_sum += *r.mae_samples;
      ++mae_count;
    }
  }
  const double n = double(reports.size());
  m.f_score /= n;
  m.precision /= n;
  m.recall /= n;
  m.rmse_norm /= n;
  if (mae_count > 0) m.mae_samples = mae_sum / double(mae_count);
  return m;
}

BenchmarkReport run_benchmark(const std::vector<BenchmarkSubject>& subjects,
                              const BenchmarkOptions& options, SweepSpec sweep) {
  if (subjects.empty()) throw Error(ErrorCode::InvalidConfig, "no benchmark subjects");
  std::size_t shortest = subjects.front().series.length();
  for (const auto& s : subjects) shortest = std::min(shortest, s.series.length());
  sweep.normalize(shortest);

  struct Job {
    std::size_t subject;
    std::size_t length;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (std::size_t L : sweep.subseq_lengths) jobs.push_back({s, L});
  }

  BenchmarkReport report;
  report.runs.resize(jobs.size());
  detail::parallel_for(jobs.size(), std::max<std::size_t>(1, options.workers), [&](std::size_t i) {
    const BenchmarkSubject& subject = subjects[jobs[i].subject];
    PipelineConfig cfg = options.base;
    cfg.spec = SubseqSpec::with_length(jobs[i].length);
    if (options.truth_k) cfg.stop = StopRule::fixed(subject.truth.size() + 1);
    if (options.write_curves) cfg.keep_curves = true;

    RunDocument doc;
    doc.dataset = subject.name;
    doc.series_length = subject.series.length();
    doc.channels = subject.series.channels();
    doc.sample_rate_hz = subject.series.sample_rate_hz();
    doc.seed = subject.seed;
    doc.config = cfg;
    doc.result = run_espresso(subject.series, cfg);
    doc.truth = subject.truth;
    const std::size_t window =
        options.window.resolve(subject.series.sample_rate_hz(), subject.series.length());
    doc.evaluation = evaluate(subject.truth, doc.result.segmentation.boundaries,
                              subject.series.length(), window);
    report.runs[i] = BenchmarkRun{subject.name, jobs[i].length, std::move(doc)};
  });

  std::vector<EvalReport> all;
  for (const auto& r : report.runs) all.push_back(*r.document.evaluation);
  report.overall = mean_of(all);
  if (sweep.repeat_per_subject) {
    for (const auto& s : subjects) {
      std::vector<EvalReport> mine;
      for (const auto& r : report.runs) {
        if (r.subject == s.name) mine.push_back(*r.document.evaluation);
      }
      report.per_subject.emplace_back(s.name, mean_of(mine));
    }
  }

  if (options.output_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*options.output_dir, ec);
    if (ec) {
      throw Error(ErrorCode::Io, "cannot create '" + options.output_dir->string() + "': " +
                                     ec.message());
    }
    for (const auto& run : report.runs) {
      const std::string stem = run.subject + "_L" + std::to_string(run.subseq_length);
      write_text(*options.output_dir / (stem + ".json"),
                 dump_document(result_document(run.document, options.include_timing)));
      if (options.write_curves) {
        for (std::size_t j = 0; j < run.document.result.curves.size(); ++j) {
          std::ostringstream csv;
          write_curve_csv(csv, run.document.result.curves[j]);
          write_text(*options.output_dir / (stem + "_curve_ch" + std::to_string(j) + ".csv"),
                     csv.str());
        }
      }
    }
    write_text(*options.output_dir / "aggregate.json",
               dump_document(aggregate_document(report, options)));
  }
  return report;
}

nlohmann::json aggregate_document(const BenchmarkReport& report, const BenchmarkOptions& options) {
  nlohmann::json doc;
  doc["schema_version"] = kResultSchemaVersion;
  doc["config"] = to_json(options.base);
  doc["truth_k"] = options.truth_k;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    const auto& ev = *r.document.evaluation;
    runs.push_back({{"subject", r.subject},
                    {"subseq_length", r.subseq_length},
                    {"seed", r.document.seed ? nlohmann::json(*r.document.seed)
                                             : nlohmann::json(nullptr)},
                    {"f_score", ev.f_score},
                    {"rmse_norm", ev.rmse_norm},
                    {"boundaries", r.document.result.segmentation.boundaries}});
  }
  doc["runs"] = runs;
  doc["overall"] = means_to_json(report.overall);
  nlohmann::json subjects = nlohmann::json::object();
  for (const auto& [name, means] : report.per_subject) subjects[name] = means_to_json(means);
  doc["per_subject"] = subjects;
  return doc;
}

void print_summary(std::ostream& out, const BenchmarkReport& report, Mode mode) {
  const auto flags = out.flags();
  out << std::left << std::setw(24) << "dataset" << std::setw(14) << "mode" << std::right
      << std::setw(6) << "runs" << std::setw(10) << "F-score" << std::setw(10) << "RMSE"
      << "\n";
  auto row = [&](const std::string& name, const MetricMeans& m) {
    out << std::left << std::setw(24) << name << std::setw(14) << to_string(mode) << std::right
        << std::setw(6) << m.runs << std::fixed << std::setprecision(3) << std::setw(10)
        << m.f_score << std::setw(10) << m.rmse_norm << "\n";
    out.flags(flags);
  };
  for (const auto& [name, means] : report.per_subject) row(name, means);
  row("overall", report.overall);
  out.flags(flags);
}

} // namespace espresso
