#include "tada/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace tada {

namespace {

void validate_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  require(scores.size() == labels.size(), ErrorCode::kDimensionMismatch,
          "scores and labels differ in length");
  require(!scores.empty(), ErrorCode::kTooFewSamples, "no scores to evaluate");
  for (double s : scores) {
    require(std::isfinite(s), ErrorCode::kNonFinite, "scores contain non-finite values");
  }
}

// Indices sorted by descending score; tied scores form one threshold group.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Maximal runs of consecutive 1-labels; returns range id per timestamp
// (-1 outside) and the range count.
std::int64_t label_ranges(std::span<const std::uint8_t> labels, std::vector<std::int64_t>& id) {
  id.assign(labels.size(), -1);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) continue;
    if (i == 0 || labels[i - 1] == 0) ++count;
    id[i] = count - 1;
  }
  return count;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  validate_inputs(scores, labels);
  std::int64_t n_pos = 0;
  for (auto l : labels) n_pos += l != 0;
  const std::int64_t n_neg = static_cast<std::int64_t>(labels.size()) - n_pos;
  require(n_pos > 0 && n_neg > 0, ErrorCode::kInvalidArgument,
          "ROC AUC needs both classes present");

  // Rank-sum form with average ranks over ties.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] != 0) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  validate_inputs(scores, labels);
  std::int64_t n_pos = 0;
  for (auto l : labels) n_pos += l != 0;
  require(n_pos > 0, ErrorCode::kInvalidArgument, "PR AUC needs at least one positive label");

  const auto order = descending_order(scores);
  double area = 0.0;
  double prev_recall = 0.0;
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] != 0) {
        ++tp;
      } else {
        ++fp;
      }
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

double range_pr_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  validate_inputs(scores, labels);
  std::vector<std::int64_t> range_id;
  const std::int64_t n_ranges = label_ranges(labels, range_id);
  require(n_ranges > 0, ErrorCode::kInvalidArgument,
          "range PR AUC needs at least one anomaly range");

  const auto order = descending_order(scores);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(n_ranges), 0);
  std::int64_t ranges_hit = 0;
  double area = 0.0;
  double prev_recall = 0.0;
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) {
      const std::size_t idx = order[k];
      if (labels[idx] != 0) {
        ++tp;
        const std::int64_t rid = range_id[idx];
        if (hits[static_cast<std::size_t>(rid)]++ == 0) ++ranges_hit;
      } else {
        ++fp;
      }
    }
    const double recall = static_cast<double>(ranges_hit) / static_cast<double>(n_ranges);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j + 1;
  }
  return area;
}

EvalResult evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  EvalResult out;
  out.roc_auc = roc_auc(scores, labels);
  out.pr_auc = pr_auc(scores, labels);
  out.range_pr_auc = range_pr_auc(scores, labels);
  std::vector<std::int64_t> range_id;
  out.n_anomaly_ranges = label_ranges(labels, range_id);
  return out;
}

}  // namespace tada
