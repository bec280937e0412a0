#pragma once

#include "espresso/series.hpp"
#include "espresso/shape_curve.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace espresso {

/// Where a dataset lives and which columns matter. Rows are samples; the
/// first line is a header.
struct DatasetManifest {
  std::string path;
  std::optional<std::string> label_column;
  /// Channel columns in the order they become channels. Empty selects every
  /// column except the label column.
  std::vector<std::string> channel_columns;
  std::optional<double> sample_rate_hz;

  /// Throws InvalidConfig when the label column is also a channel column.
  void validate() const;
};

struct Dataset {
  MultiSeries series;
  /// Indices where the label changes between consecutive rows; absent
  /// without a label column.
  std::optional<std::vector<std::size_t>> truth;
};

/// Reads a dataset from disk. Throws Error(Io) when the file cannot be
/// opened; otherwise as the stream overload.
Dataset ingest_csv(const DatasetManifest& manifest);

/// Throws MissingColumn for absent declared columns, TableError(ParseError)
/// for rows with the wrong number of fields and TableError(NonNumeric) for
/// unparseable channel values. Table rows are reported 1-based as file lines.
Dataset ingest_csv(std::istream& in, const DatasetManifest& manifest);

/// Writes the series with a header of channel names and an optional label
/// column. Values use round-trip precision.
void write_csv(std::ostream& out, const MultiSeries& series,
               const std::vector<std::string>* labels = nullptr,
               const std::string& label_column = "label");

/// Per-sample labels such that label changes occur exactly at the given
/// boundaries ("s0", "s1", ...).
std::vector<std::string> labels_from_boundaries(std::size_t length,
                                                const std::vector<std::size_t>& boundaries);

/// One non-negative integer per line; blank lines and '#' comments are
/// skipped.
std::vector<std::size_t> read_boundary_list(std::istream& in);
std::vector<std::size_t> read_boundary_file(const std::string& path);
void write_boundary_list(std::ostream& out, const std::vector<std::size_t>& boundaries);

/// "tick,value" rows with a header.
void write_curve_csv(std::ostream& out, const ShapeCurve& curve);

} // namespace espresso
