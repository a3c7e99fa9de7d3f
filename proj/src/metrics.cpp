#include "allocsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "allocsim/errors.hpp"

namespace allocsim {

const std::vector<std::string>& metric_keys() {
  static const std::vector<std::string> keys = {"avg_size", "avg_wt", "sw",   "var_size",
                                                "rop",      "co_gini", "f_gap"};
  return keys;
}

double MetricsReport::value(const std::string& key) const {
  if (key == "avg_size") return avg_size;
  if (key == "avg_wt") return avg_wt;
  if (key == "sw") return sw;
  if (key == "var_size") return var_size;
  if (key == "rop") return static_cast<double>(rop);
  if (key == "co_gini") return co_gini;
  if (key == "f_gap") return f_gap.value_or(0.0);
  throw ValidationError("unknown metric key '" + key + "'");
}

int rop(const AllocationOutcome& outcome,
        const std::vector<ParticipantProfile>& participants,
        const std::vector<HouseResource>& resources) {
  std::map<int, double> size_by_resource;
  for (const auto& r : resources) size_by_resource[r.id] = r.size;

  struct Row {
    int family;
    double size;
  };
  std::vector<Row> rows;
  for (const auto& p : participants) {
    auto it = outcome.assignment.find(p.id);
    if (it == outcome.assignment.end()) continue;
    rows.push_back({p.family_size, size_by_resource.at(it->second)});
  }

  int count = 0;
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      if (a.family > b.family && a.size < b.size) ++count;
    }
  }
  return count;
}

double gini(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("gini: empty value list");
  double mean = 0.0;
  for (double v : values) mean += v;
  const double n = static_cast<double>(values.size());
  mean /= n;
  if (mean == 0.0) return 0.0;
  double abs_diff_sum = 0.0;
  for (double a : values) {
    for (double b : values) abs_diff_sum += std::abs(a - b);
  }
  return abs_diff_sum / (2.0 * n * n * mean);
}

double group_gap(const AllocationOutcome& outcome,
                 const std::vector<ParticipantProfile>& participants,
                 const std::set<int>& vulnerable) {
  double v_sum = 0.0, nv_sum = 0.0;
  int v_count = 0, nv_count = 0;
  for (const auto& p : participants) {
    auto it = outcome.satisfaction.find(p.id);
    const double u = it == outcome.satisfaction.end() ? 0.0 : it->second;
    if (vulnerable.count(p.id)) {
      v_sum += u;
      ++v_count;
    } else {
      nv_sum += u;
      ++nv_count;
    }
  }
  if (v_count == 0 || nv_count == 0)
    throw ValidationError("group_gap: undefined gap (empty group)");
  return v_sum / v_count - nv_sum / nv_count;
}

MetricsReport compute_metrics(const AllocationOutcome& outcome,
                              const std::vector<ParticipantProfile>& participants,
                              const std::vector<HouseResource>& resources,
                              const std::set<int>& vulnerable) {
  std::map<int, double> size_by_resource;
  for (const auto& r : resources) size_by_resource[r.id] = r.size;

  MetricsReport report;
  report.n = static_cast<int>(participants.size());
  if (participants.empty()) return report;

  std::vector<double> per_capita_sizes;
  per_capita_sizes.reserve(participants.size());
  double wt_sum = 0.0;
  for (const auto& p : participants) {
    auto it = outcome.assignment.find(p.id);
    if (it != outcome.assignment.end()) {
      per_capita_sizes.push_back(size_by_resource.at(it->second) / p.family_size);
      ++report.allocated_count;
    } else {
      per_capita_sizes.push_back(0.0);
    }
    auto wt = outcome.wait_rounds.find(p.id);
    wt_sum += wt == outcome.wait_rounds.end() ? 0.0 : static_cast<double>(wt->second);
    auto u = outcome.satisfaction.find(p.id);
    report.sw += u == outcome.satisfaction.end() ? 0.0 : u->second;
  }

  const double n = static_cast<double>(report.n);
  for (double v : per_capita_sizes) report.avg_size += v;
  report.avg_size /= n;
  for (double v : per_capita_sizes) {
    const double d = v - report.avg_size;
    report.var_size += d * d;
  }
  report.var_size /= n;  // population variance
  report.avg_wt = wt_sum / n;
  report.rop = rop(outcome, participants, resources);
  report.co_gini = gini(per_capita_sizes);
  const bool has_v = std::any_of(participants.begin(), participants.end(),
                                 [&](const auto& p) { return vulnerable.count(p.id) > 0; });
  const bool has_nv = std::any_of(participants.begin(), participants.end(),
                                  [&](const auto& p) { return vulnerable.count(p.id) == 0; });
  if (has_v && has_nv) report.f_gap = group_gap(outcome, participants, vulnerable);
  return report;
}

namespace {

MetricWeights make_weights(double avg_size, double avg_wt, double sw, double var_size, double rop_w,
                           double co_gini, double f_gap) {
  MetricWeights w;
  w.w = {{"avg_size", avg_size}, {"avg_wt", avg_wt}, {"sw", sw},       {"var_size", var_size},
         {"rop", rop_w},         {"co_gini", co_gini}, {"f_gap", f_gap}};
  w.higher_better = {{"avg_size", true}, {"avg_wt", false}, {"sw", true},  {"var_size", false},
                     {"rop", false},     {"co_gini", false}, {"f_gap", true}};
  return w;
}

}  // namespace

MetricWeights MetricWeights::satisfaction_objective() {
  return make_weights(5, 5, 10, 1, 5, 1, 1);
}

MetricWeights MetricWeights::fairness_objective() {
  return make_weights(1, 1, 5, 10, 10, 10, 5);
}

NormalizationStats NormalizationStats::from_reports(const std::vector<MetricsReport>& reports) {
  NormalizationStats stats;
  for (const auto& key : metric_keys()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& r : reports) {
      if (key == "f_gap" && !r.f_gap.has_value()) continue;
      const double v = r.value(key);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      any = true;
    }
    if (!any) {
      lo = 0.0;
      hi = 0.0;
    }
    stats.minmax[key] = {lo, hi};
  }
  return stats;
}

double aggregate_f(const MetricsReport& report,
                   const MetricWeights& weights,
                   const NormalizationStats& stats) {
  double f = 0.0;
  for (const auto& [key, weight] : weights.w) {
    auto dir = weights.higher_better.find(key);
    if (dir == weights.higher_better.end())
      throw ValidationError("aggregate_f: metric '" + key + "' has no direction");
    auto mm = stats.minmax.find(key);
    if (mm == stats.minmax.end())
      throw ValidationError("aggregate_f: unknown metric key '" + key + "'");
    const auto [lo, hi] = mm->second;
    double normalized;
    if (hi <= lo || (key == "f_gap" && !report.f_gap.has_value())) {
      normalized = 0.5;  // degenerate pool or undefined gap: neutral
    } else {
      normalized = (report.value(key) - lo) / (hi - lo);
      if (!dir->second) normalized = 1.0 - normalized;
    }
    f += weight * normalized;
  }
  return f;
}

}  // namespace allocsim
