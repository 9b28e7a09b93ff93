#include "tada/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <vector>

#include "tada/error.hpp"

namespace tada {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::int64_t row, std::size_t col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || cell.empty()) {
    fail(ErrorCode::kParse, "cannot parse '" + std::string(cell) + "' as a number at row " +
                                std::to_string(row) + ", column " + std::to_string(col + 1));
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::kNonFinite, "non-finite value at row " + std::to_string(row) + ", column " +
                                    std::to_string(col + 1));
  }
  return value;
}

void write_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

TimeSeries load_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(std::move(line));
  }
  require(!lines.empty(), ErrorCode::kParse, path + " is empty");

  std::size_t first_data = 0;
  std::ptrdiff_t label_col = -1;
  std::size_t n_cols = split_row(lines[0]).size();
  if (opts.has_header) {
    const auto header = split_row(lines[0]);
    first_data = 1;
    if (!opts.label_column.empty()) {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == opts.label_column) {
          require(label_col < 0, ErrorCode::kParse,
                  "duplicate label column '" + opts.label_column + "' in " + path);
          label_col = static_cast<std::ptrdiff_t>(c);
        }
      }
    }
  }
  const std::int64_t n_rows = static_cast<std::int64_t>(lines.size() - first_data);
  require(n_rows > 0, ErrorCode::kTooFewSamples, path + " has no data rows");
  const std::int64_t n_channels = static_cast<std::int64_t>(n_cols) - (label_col >= 0 ? 1 : 0);
  require(n_channels >= 1, ErrorCode::kDimensionMismatch, path + " has no data columns");

  TimeSeries ts;
  ts.values.resize(n_rows, n_channels);
  if (label_col >= 0) ts.labels.assign(static_cast<std::size_t>(n_rows), 0);

  for (std::int64_t r = 0; r < n_rows; ++r) {
    const std::int64_t file_row = static_cast<std::int64_t>(first_data) + r + 1;
    const auto cells = split_row(lines[static_cast<std::size_t>(first_data) + static_cast<std::size_t>(r)]);
    if (cells.size() != n_cols) {
      fail(ErrorCode::kDimensionMismatch,
           "row " + std::to_string(file_row) + " has " + std::to_string(cells.size()) +
               " columns, expected " + std::to_string(n_cols));
    }
    std::int64_t channel = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], file_row, c);
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        require(v == 0.0 || v == 1.0, ErrorCode::kParse,
                "label at row " + std::to_string(file_row) + " must be 0 or 1");
        ts.labels[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(v);
      } else {
        ts.values(r, channel++) = v;
      }
    }
  }
  ts.validate();
  return ts;
}

void save_csv(const std::string& path, const TimeSeries& ts, const CsvOptions& opts) {
  ts.validate();
  const std::string label_name = opts.label_column.empty() ? "is_anomaly" : opts.label_column;
  std::string out;
  if (opts.has_header) {
    for (int c = 0; c < ts.channels(); ++c) {
      if (c > 0) out += ',';
      out += 'c';
      out += std::to_string(c);
    }
    if (ts.has_labels()) {
      out += ',';
      out += label_name;
    }
    out += '\n';
  }
  for (std::int64_t r = 0; r < ts.length(); ++r) {
    for (int c = 0; c < ts.channels(); ++c) {
      if (c > 0) out += ',';
      write_double(out, ts.values(r, c));
    }
    if (ts.has_labels()) {
      out += ',';
      out += ts.labels[static_cast<std::size_t>(r)] ? '1' : '0';
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::kIo, "cannot write " + path);
  f << out;
  require(f.good(), ErrorCode::kIo, "write failed for " + path);
}

void save_diagrams_csv(const std::string& path,
                       std::span<const std::int64_t> window_indices,
                       std::span<const PersistenceDiagram> diagrams) {
  require(window_indices.size() == diagrams.size(), ErrorCode::kDimensionMismatch,
          "one window index per diagram");
  std::string out = "window_index,order,birth,death,weight\n";
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    for (const auto& p : diagrams[i].points) {
      out += std::to_string(window_indices[i]);
      out += ',';
      out += std::to_string(diagrams[i].order);
      out += ',';
      write_double(out, p.birth);
      out += ',';
      write_double(out, p.death);
      out += ',';
      write_double(out, p.weight);
      out += '\n';
    }
  }
  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::kIo, "cannot write " + path);
  f << out;
  require(f.good(), ErrorCode::kIo, "write failed for " + path);
}

}  // namespace tada
