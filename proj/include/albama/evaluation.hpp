#pragma once

#include <span>
#include <string>
#include <vector>

#include "albama/filters.hpp"
#include "albama/forest.hpp"
#include "albama/time_series.hpp"

namespace albama {

// Fixed-unit R^2 between a one-sided and a two-sided estimate over the
// intersection of their defined masks and the window mask:
//   1 - sum(two - one)^2 / sum(two - mean(two))^2
// with the slope pinned to 1 and the intercept to 0; can be negative.
double r2_fixed_unit(const FilterOutput& one_sided,
                     const FilterOutput& two_sided, const IndexMask& mask);

enum class MethodPair {
  albama,     // AlbaMA one-sided vs two-sided
  sg,         // Savitzky-Golay one-sided vs two-sided
  ma3,        // trailing MA(3) vs centered half-width 3
  ma6,
  ma12,
  ma6_vs_3,   // two-sided MA(6) vs one-sided MA(3)
  ma12_vs_6,  // two-sided MA(12) vs one-sided MA(6)
};

std::string method_pair_name(MethodPair pair);
std::vector<MethodPair> all_method_pairs();

struct EvalParams {
  ForestParams forest{};
  int warmup = 24;
  int sg_window = 11;
  int sg_order = 3;
};

struct ReportRow {
  std::string variable;
  std::string method;
  std::string window;
  double r2 = 0.0;
  std::size_t n_obs = 0;
  std::string status = "ok";  // or an error marker; r2 is meaningless then
};

struct BoxplotSummary {
  std::string method;
  std::string window;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  std::size_t n = 0;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;
  std::vector<BoxplotSummary> summaries;
};

// One-sided and two-sided estimates for one method pair, scored per window.
// Row-level failures (zero variance, too few points) are recorded in the
// row's status; the run continues.
std::vector<ReportRow> paired_method_r2(const TimeSeries& y,
                                        const std::string& variable,
                                        MethodPair pair,
                                        std::span<const Window> windows,
                                        const EvalParams& params);

struct NamedSeries {
  std::string name;
  TimeSeries series;
};

// Cross product of series x methods x windows plus per-(method,window)
// boxplot statistics across variables (linear-interpolation quantiles).
EvaluationReport full_report(std::span<const NamedSeries> series,
                             std::span<const MethodPair> methods,
                             std::span<const Window> windows,
                             const EvalParams& params);

// Linear-interpolation quantile on a copy of the data (p in [0,1]).
double quantile(std::vector<double> values, double p);

void write_report_csv(const EvaluationReport& report, const std::string& path);
void write_report_json(const EvaluationReport& report, const std::string& path);
std::vector<ReportRow> read_report_csv(const std::string& path);
std::vector<BoxplotSummary> read_report_json(const std::string& path);

}  // namespace albama
