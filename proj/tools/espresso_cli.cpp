#include "espresso/benchmark.hpp"
#include "espresso/csv_io.hpp"
#include "espresso/error.hpp"
#include "espresso/metrics.hpp"
#include "espresso/pipeline.hpp"
#include "espresso/report.hpp"
#include "espresso/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace espresso;

namespace {

enum Exit { ok = 0, validation = 1, io = 2 };

// Pipeline flags shared by run and bench. Only flags given on the command
// line override the config file.
struct PipelineFlags {
  std::size_t length = 0;
  std::size_t radius = 0;
  double beta = 2.0;
  std::size_t smoothing = 0;
  std::size_t margin = 0;
  std::size_t min_gap = 0;
  std::string mode;
  std::size_t segments = 0;
  bool auto_k = false;
  std::size_t knee_lookahead = 20;
  std::size_t grid_step = 1;
  std::string curve;
  std::string distance;
  std::string normalization;
  bool pool = false;
  std::size_t threads = 0;
  std::string config_path;

  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App& app, bool with_length) {
    if (with_length) {
      opts["length"] = app.add_option("-L,--length", length, "subsequence length");
    }
    opts["radius"] = app.add_option("--exclusion-radius", radius, "default ceil(L/2)");
    opts["beta"] = app.add_option("--beta", beta, "chain threshold = beta * median(mp)");
    opts["smoothing"] = app.add_option("--smoothing", smoothing, "curve smoothing width, default L");
    opts["margin"] = app.add_option("--margin", margin, "end margin in ticks, default L");
    opts["min_gap"] = app.add_option("--min-gap", min_gap, "candidate spacing, default L");
    opts["mode"] = app.add_option("--mode", mode, "hybrid | shape_only | entropy_only");
    opts["k"] = app.add_option("-k,--segments", segments, "fixed number of segments");
    opts["auto_k"] = app.add_flag("--auto-k", auto_k, "pick the segment count at the knee");
    opts["lookahead"] =
        app.add_option("--knee-lookahead", knee_lookahead, "boundaries searched before the knee");
    opts["grid"] = app.add_option("--grid-step", grid_step, "candidate spacing for entropy_only");
    opts["curve"] = app.add_option("--curve", curve, "wcac | ac");
    opts["distance"] = app.add_option("--distance", distance, "znorm | plain");
    opts["normalization"] =
        app.add_option("--normalization", normalization, "complement | shift");
    opts["pool"] = app.add_flag("--pool", pool, "pool candidates across channels");
    opts["threads"] = app.add_option("--threads", threads, "worker threads, 0 = all cores");
    app.add_option("--config", config_path, "JSON pipeline config");
    opts["k"]->excludes(opts["auto_k"]);
  }

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  PipelineConfig build() const {
    PipelineConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorCode::Io, "cannot open config '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, config_path + ": " + e.what());
      }
      apply_json(j, cfg);
    }
    if (given("length")) {
      const bool radius_default =
          cfg.spec.exclusion_radius == SubseqSpec::with_length(cfg.spec.length).exclusion_radius;
      cfg.spec.length = length;
      if (radius_default) cfg.spec.exclusion_radius = SubseqSpec::with_length(length).exclusion_radius;
    }
    if (given("radius")) cfg.spec.exclusion_radius = radius;
    if (given("beta")) cfg.chain_beta = beta;
    if (given("smoothing")) cfg.smoothing_width = smoothing;
    if (given("margin")) cfg.margin = margin;
    if (given("min_gap")) cfg.min_gap = min_gap;
    if (given("mode")) cfg.mode = parse_mode(mode);
    if (given("k")) cfg.stop = StopRule::fixed(segments);
    if (given("auto_k") || given("lookahead")) cfg.stop = StopRule::knee(knee_lookahead);
    if (given("grid")) cfg.dense_grid_step = grid_step;
    if (given("curve")) {
      if (curve == "wcac") cfg.curve = CurveKind::WCAC;
      else if (curve == "ac") cfg.curve = CurveKind::AC;
      else throw Error(ErrorCode::InvalidConfig, "unknown curve '" + curve + "'");
    }
    if (given("distance")) {
      if (distance == "znorm") cfg.distance = DistanceKind::znorm;
      else if (distance == "plain") cfg.distance = DistanceKind::plain;
      else throw Error(ErrorCode::InvalidConfig, "unknown distance '" + distance + "'");
    }
    if (given("normalization")) {
      if (normalization == "complement") cfg.normalization = EntropyNormalization::complement;
      else if (normalization == "shift") cfg.normalization = EntropyNormalization::shift;
      else throw Error(ErrorCode::InvalidConfig, "unknown normalization '" + normalization + "'");
    }
    if (given("pool")) cfg.pool_candidates = pool;
    if (given("threads")) cfg.threads = threads;
    return cfg;
  }
};

struct WindowFlags {
  double seconds = 0.0;
  std::size_t samples = 0;
  CLI::Option* seconds_opt = nullptr;
  CLI::Option* samples_opt = nullptr;

  void add(CLI::App& app) {
    seconds_opt = app.add_option("--window-seconds", seconds, "F-score window in seconds");
    samples_opt = app.add_option("--window-samples", samples, "F-score window in samples");
    seconds_opt->excludes(samples_opt);
  }

  WindowSpec build() const {
    WindowSpec w;
    if (samples_opt->count()) w.samples = samples;
    if (seconds_opt->count()) w.seconds = seconds;
    return w;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
}

// run ---------------------------------------------------------------------

struct RunArgs {
  std::string input;
  std::string label_column;
  std::string channels;
  double rate = 0.0;
  std::string truth_path;
  std::string out;
  std::string curves_dir;
  bool omit_timing = false;
  CLI::Option* rate_opt = nullptr;
  PipelineFlags pipeline;
  WindowFlags window;
};

DatasetManifest manifest_for(const std::string& path, const std::string& label_column,
                             const std::string& channels, CLI::Option* rate_opt, double rate) {
  DatasetManifest m;
  m.path = path;
  if (!label_column.empty()) m.label_column = label_column;
  m.channel_columns = split_list(channels);
  if (rate_opt && rate_opt->count()) m.sample_rate_hz = rate;
  return m;
}

int cmd_run(const RunArgs& a) {
  PipelineConfig cfg = a.pipeline.build();
  if (cfg.spec.length == 0) {
    throw Error(ErrorCode::InvalidConfig, "subsequence length is required (-L or config)");
  }
  const Dataset data =
      ingest_csv(manifest_for(a.input, a.label_column, a.channels, a.rate_opt, a.rate));
  std::optional<std::vector<std::size_t>> truth = data.truth;
  if (!a.truth_path.empty()) truth = read_boundary_file(a.truth_path);
  if (!a.curves_dir.empty()) cfg.keep_curves = true;

  RunDocument doc;
  doc.dataset = std::filesystem::path(a.input).stem().string();
  doc.series_length = data.series.length();
  doc.channels = data.series.channels();
  doc.sample_rate_hz = data.series.sample_rate_hz();
  doc.config = cfg;
  doc.result = run_espresso(data.series, cfg);
  for (const auto& w : doc.result.warnings) std::cerr << "warning: " << w << "\n";
  if (truth) {
    doc.truth = *truth;
    const std::size_t win = a.window.build().resolve(doc.sample_rate_hz, doc.series_length);
    doc.evaluation = evaluate(*truth, doc.result.segmentation.boundaries, doc.series_length, win);
  }
  emit(a.out, dump_document(result_document(doc, !a.omit_timing)));

  if (!a.curves_dir.empty()) {
    make_dir(a.curves_dir);
    for (std::size_t j = 0; j < doc.result.curves.size(); ++j) {
      std::ostringstream csv;
      write_curve_csv(csv, doc.result.curves[j]);
      write_file(std::filesystem::path(a.curves_dir) /
                     (doc.dataset + "_curve_ch" + std::to_string(j) + ".csv"),
                 csv.str());
    }
  }
  return Exit::ok;
}

// bench -------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> inputs;
  std::string label_column = "label";
  std::string channels;
  double rate = 0.0;
  CLI::Option* rate_opt = nullptr;
  std::string synthetic;
  std::size_t subjects = 1;
  std::size_t synth_segments = 3;
  std::size_t synth_channels = 3;
  std::uint64_t seed = 0;
  std::vector<std::size_t> lengths;
  std::size_t workers = 1;
  std::string out;
  bool curves = false;
  bool omit_timing = false;
  PipelineFlags pipeline;
  WindowFlags window;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<BenchmarkSubject> subjects;
  if (!a.synthetic.empty()) {
    SyntheticSpec spec;
    parse_regime(a.synthetic, spec.continuity, spec.repetition);
    spec.segments = a.synth_segments;
    spec.channels = a.synth_channels;
    for (std::size_t s = 0; s < a.subjects; ++s) {
      spec.seed = a.seed + s;
      SyntheticData d = generate_synthetic(spec);
      subjects.push_back({regime_name(spec.continuity, spec.repetition) + "_s" +
                              std::to_string(spec.seed),
                          std::move(d.series), std::move(d.truth), spec.seed});
    }
  }
  for (const auto& path : a.inputs) {
    Dataset d = ingest_csv(manifest_for(path, a.label_column, a.channels, a.rate_opt, a.rate));
    if (!d.truth) throw Error(ErrorCode::InvalidConfig, path + ": benchmark needs labels");
    subjects.push_back({std::filesystem::path(path).stem().string(), std::move(d.series),
                        std::move(*d.truth), std::nullopt});
  }
  if (subjects.empty()) {
    throw Error(ErrorCode::InvalidConfig, "no inputs: give CSV files or --synthetic");
  }

  BenchmarkOptions opts;
  opts.base = a.pipeline.build();
  opts.truth_k = !a.pipeline.given("k") && !a.pipeline.given("auto_k");
  opts.window = a.window.build();
  opts.workers = a.workers;
  if (!a.out.empty()) opts.output_dir = a.out;
  opts.write_curves = a.curves;
  opts.include_timing = !a.omit_timing;

  SweepSpec sweep;
  sweep.subseq_lengths = a.lengths;
  if (sweep.subseq_lengths.empty() && opts.base.spec.length > 0) {
    sweep.subseq_lengths.push_back(opts.base.spec.length);
  }
  if (sweep.subseq_lengths.empty()) {
    throw Error(ErrorCode::InvalidConfig, "give --lengths or -L");
  }
  const BenchmarkReport report = run_benchmark(subjects, opts, sweep);
  print_summary(std::cout, report, opts.base.mode);
  return Exit::ok;
}

// synth -------------------------------------------------------------------

struct SynthArgs {
  std::string regime = "NC-R";
  SyntheticSpec spec;
  std::string noise_channels;
  std::string classes;
  std::string out;
  std::string truth_out;
  std::string label_column = "label";
};

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t pos = 0;
      const unsigned long v = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "not an index: '" + item + "'");
    }
  }
  return out;
}

int cmd_synth(SynthArgs a) {
  parse_regime(a.regime, a.spec.continuity, a.spec.repetition);
  a.spec.noise_channels = parse_index_list(a.noise_channels);
  if (!a.classes.empty()) a.spec.classes = parse_index_list(a.classes);
  const SyntheticData d = generate_synthetic(a.spec);
  std::vector<std::string> labels;
  labels.reserve(d.labels.size());
  for (std::size_t c : d.labels) labels.push_back("c" + std::to_string(c));
  std::ostringstream csv;
  write_csv(csv, d.series, &labels, a.label_column);
  emit(a.out, csv.str());
  if (!a.truth_out.empty()) {
    std::ostringstream b;
    write_boundary_list(b, d.truth);
    write_file(a.truth_out, b.str());
  }
  return Exit::ok;
}

// eval --------------------------------------------------------------------

struct EvalArgs {
  std::string estimate;
  std::string truth;
  std::size_t length = 0;
  CLI::Option* length_opt = nullptr;
  double rate = 0.0;
  CLI::Option* rate_opt = nullptr;
  std::string out;
  WindowFlags window;
};

int cmd_eval(const EvalArgs& a) {
  std::vector<std::size_t> est;
  std::optional<std::size_t> length;
  std::optional<double> rate;
  if (a.length_opt->count()) length = a.length;
  if (a.rate_opt->count()) rate = a.rate;

  if (std::filesystem::path(a.estimate).extension() == ".json") {
    std::ifstream in(a.estimate);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + a.estimate + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, a.estimate + ": " + e.what());
    }
    est = boundaries_from_document(doc);
    const auto& ds = doc.value("dataset", nlohmann::json::object());
    if (!length && ds.contains("length")) length = ds["length"].get<std::size_t>();
    if (!rate && ds.contains("sample_rate_hz") && ds["sample_rate_hz"].is_number()) {
      rate = ds["sample_rate_hz"].get<double>();
    }
  } else {
    est = read_boundary_file(a.estimate);
  }
  const std::vector<std::size_t> gt = read_boundary_file(a.truth);
  if (!length) throw Error(ErrorCode::InvalidConfig, "series length is required (--length)");
  const std::size_t win = a.window.build().resolve(rate, *length);
  emit(a.out, dump_document(to_json(evaluate(gt, est, *length, win))));
  return Exit::ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate time-series segmentation from shape and entropy"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "segment one CSV file");
  run_cmd->add_option("input", run.input, "CSV with a header row")->required();
  run_cmd->add_option("--label-column", run.label_column, "per-sample labels (ground truth)");
  run_cmd->add_option("--channels", run.channels, "comma-separated channel columns");
  run.rate_opt = run_cmd->add_option("--rate", run.rate, "sample rate in Hz");
  run_cmd->add_option("--truth", run.truth_path, "boundary list file (one index per line)");
  run_cmd->add_option("-o,--out", run.out, "result document path, '-' for stdout");
  run_cmd->add_option("--curves", run.curves_dir, "directory for per-channel curve CSVs");
  run_cmd->add_flag("--omit-timing", run.omit_timing, "leave timing out of the document");
  run.pipeline.add(*run_cmd, true);
  run.window.add(*run_cmd);

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "sweep subsequence lengths over datasets");
  bench_cmd->add_option("inputs", bench.inputs, "labelled CSV files");
  bench_cmd->add_option("--label-column", bench.label_column, "label column of the CSV inputs");
  bench_cmd->add_option("--channels", bench.channels, "comma-separated channel columns");
  bench.rate_opt = bench_cmd->add_option("--rate", bench.rate, "sample rate in Hz");
  bench_cmd->add_option("--synthetic", bench.synthetic, "synthetic regime, e.g. NC-R");
  bench_cmd->add_option("--subjects", bench.subjects, "synthetic series to generate");
  bench_cmd->add_option("--synth-segments", bench.synth_segments, "segments per synthetic series");
  bench_cmd->add_option("--synth-channels", bench.synth_channels, "channels per synthetic series");
  bench_cmd->add_option("--seed", bench.seed, "first synthetic seed");
  bench_cmd->add_option("--lengths", bench.lengths, "subsequence lengths to sweep")
      ->delimiter(',');
  bench_cmd->add_option("--workers", bench.workers, "concurrent runs");
  bench_cmd->add_option("-o,--out", bench.out, "output directory");
  bench_cmd->add_flag("--curves", bench.curves, "write per-channel curve CSVs");
  bench_cmd->add_flag("--omit-timing", bench.omit_timing, "leave timing out of documents");
  bench.pipeline.add(*bench_cmd, true);
  bench.window.add(*bench_cmd);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic labelled CSV");
  synth_cmd->add_option("regime", synth.regime, "C-R, C-NR, NC-R or NC-NR");
  synth_cmd->add_option("-k,--segments", synth.spec.segments, "number of segments");
  synth_cmd->add_option("--seed", synth.spec.seed, "generator seed");
  synth_cmd->add_option("--channels", synth.spec.channels, "number of channels");
  synth_cmd->add_option("--min-segment", synth.spec.min_segment, "shortest segment");
  synth_cmd->add_option("--max-segment", synth.spec.max_segment, "longest segment");
  synth_cmd->add_option("--transition", synth.spec.transition, "blend width for C regimes");
  synth_cmd->add_option("--noise", synth.spec.noise, "noise standard deviation");
  synth_cmd->add_option("--noise-channels", synth.noise_channels, "channels of pure noise");
  synth_cmd->add_option("--classes", synth.classes, "class per segment, e.g. 0,1,0");
  synth_cmd->add_option("--rate", synth.spec.sample_rate_hz, "sample rate in Hz");
  synth_cmd->add_option("--label-column", synth.label_column, "label column name");
  synth_cmd->add_option("-o,--out", synth.out, "CSV path, '-' for stdout");
  synth_cmd->add_option("--truth-out", synth.truth_out, "boundary list path");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score estimated boundaries against truth");
  eval_cmd->add_option("estimate", ev.estimate, "result document (.json) or boundary list")
      ->required();
  eval_cmd->add_option("--truth", ev.truth, "ground-truth boundary list")->required();
  ev.length_opt = eval_cmd->add_option("-n,--length", ev.length, "series length");
  ev.rate_opt = eval_cmd->add_option("--rate", ev.rate, "sample rate in Hz");
  eval_cmd->add_option("-o,--out", ev.out, "report path, '-' for stdout");
  ev.window.add(*eval_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return Exit::validation;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bench_cmd) return cmd_bench(bench);
    if (*synth_cmd) return cmd_synth(synth);
    if (*eval_cmd) return cmd_eval(ev);
  } catch (const Error& e) {
    std::cerr << "espresso: " << e.what() << "\n";
    return e.code() == ErrorCode::Io ? Exit::io : Exit::validation;
  } catch (const std::exception& e) {
    std::cerr << "espresso: " << e.what() << "\n";
    return Exit::validation;
  }
  return Exit::ok;
}
