#pragma once

#include <span>
#include <string>

#include "tada/persistence.hpp"
#include "tada/timeseries.hpp"

namespace tada {

struct CsvOptions {
  bool has_header = true;
  // Column extracted into labels when present in the header; set empty to
  // keep every column as data. Label values must be 0 or 1.
  std::string label_column = "is_anomaly";
};

// Rows are timestamps, columns are channels. Parse failures report the
// 1-based row and column.
TimeSeries load_csv(const std::string& path, const CsvOptions& opts = {});

// Header c0,...,cN, plus the label column last when labels are present.
void save_csv(const std::string& path, const TimeSeries& ts, const CsvOptions& opts = {});

// One row per diagram point: window_index,order,birth,death,weight.
void save_diagrams_csv(const std::string& path,
                       std::span<const std::int64_t> window_indices,
                       std::span<const PersistenceDiagram> diagrams);

}  // namespace tada
