#pragma once

#include <cstdint>
#include <span>

#include "tada/error.hpp"

namespace tada {

struct EvalResult {
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  double range_pr_auc = 0.0;
  std::int64_t n_anomaly_ranges = 0;
};

// Probability that a random positive outscores a random negative, ties
// counted half (Mann-Whitney). Needs both classes present.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Area under the precision-recall curve with step interpolation: thresholds
// sweep the distinct score values downward, tied scores enter together, and
// each recall increment is weighted by the precision at that threshold.
double pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Existence-recall variant of PR AUC over contiguous anomaly ranges: a range
// counts as recalled once any of its timestamps is flagged, while precision
// stays point-wise. Coincides with pr_auc when every range has length 1.
double range_pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels);

}  // namespace tada
