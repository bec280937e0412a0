#include "espresso/csv_io.hpp"

#include "espresso/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace espresso {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(trim(field));
  return out;
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

} // namespace

void DatasetManifest::validate() const {
  if (label_column &&
      std::find(channel_columns.begin(), channel_columns.end(), *label_column) !=
          channel_columns.end()) {
    throw Error(ErrorCode::InvalidConfig,
                "label column '" + *label_column + "' is also listed as a channel");
  }
}

Dataset ingest_csv(const DatasetManifest& manifest) {
  std::ifstream in(manifest.path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + manifest.path + "'");
  return ingest_csv(in, manifest);
}

Dataset ingest_csv(std::istream& in, const DatasetManifest& manifest) {
  manifest.validate();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank(line)) break;
  }
  if (line_no == 0 || is_blank(line)) throw Error(ErrorCode::EmptyInput, "CSV has no header");
  const std::vector<std::string> header = split_fields(line);

  auto column_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "'" + name + "'");
    return std::size_t(it - header.begin());
  };

  std::vector<std::string> names = manifest.channel_columns;
  if (names.empty()) {
    for (const auto& h : header) {
      if (!manifest.label_column || h != *manifest.label_column) names.push_back(h);
    }
  }
  if (names.empty()) throw Error(ErrorCode::MissingColumn, "no channel columns");
  std::vector<std::size_t> channel_cols;
  for (const auto& n : names) channel_cols.push_back(column_of(n));
  std::optional<std::size_t> label_col;
  if (manifest.label_column) label_col = column_of(*manifest.label_column);

  std::vector<std::vector<double>> rows(names.size());
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw TableError(ErrorCode::ParseError, line_no, fields.size(),
                       "expected " + std::to_string(header.size()) + " fields");
    }
    for (std::size_t c = 0; c < channel_cols.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[channel_cols[c]], v)) {
        throw TableError(ErrorCode::NonNumeric, line_no, channel_cols[c] + 1,
                         "'" + fields[channel_cols[c]] + "'");
      }
      rows[c].push_back(v);
    }
    if (label_col) labels.push_back(fields[*label_col]);
  }

  Dataset ds{validate_series(rows, names, manifest.sample_rate_hz), std::nullopt};
  if (label_col) {
    std::vector<std::size_t> truth;
    for (std::size_t i = 1; i < labels.size(); ++i) {
      if (labels[i] != labels[i - 1]) truth.push_back(i);
    }
    ds.truth = std::move(truth);
  }
  return ds;
}

void write_csv(std::ostream& out, const MultiSeries& series,
               const std::vector<std::string>* labels, const std::string& label_column) {
  if (labels && labels->size() != series.length()) {
    throw Error(ErrorCode::LengthMismatch, "label count differs from series length");
  }
  const auto& names = series.channel_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  if (labels) out << "," << label_column;
  out << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < series.length(); ++i) {
    for (std::size_t j = 0; j < series.channels(); ++j) {
      out << (j ? "," : "") << series.at(j, i);
    }
    if (labels) out << "," << (*labels)[i];
    out << "\n";
  }
}

std::vector<std::string> labels_from_boundaries(std::size_t length,
                                                const std::vector<std::size_t>& boundaries) {
  std::vector<std::string> labels(length);
  std::size_t seg = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < length; ++i) {
    while (next < boundaries.size() && boundaries[next] <= i) {
      ++seg;
      ++next;
    }
    labels[i] = "s" + std::to_string(seg);
  }
  return labels;
}

std::vector<std::size_t> read_boundary_list(std::istream& in) {
  std::vector<std::size_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw TableError(ErrorCode::NonNumeric, line_no, 1, "'" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> read_boundary_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_boundary_list(in);
}

void write_boundary_list(std::ostream& out, const std::vector<std::size_t>& boundaries) {
  for (std::size_t b : boundaries) out << b << "\n";
}

void write_curve_csv(std::ostream& out, const ShapeCurve& curve) {
  out << "tick,value\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t t = 0; t < curve.values.size(); ++t) out << t << "," << curve.values[t] << "\n";
}

} // namespace espresso
