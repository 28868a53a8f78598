#include "albama/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "albama/error.hpp"
#include "json.hpp"

namespace albama {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

FilterOutput series_as_output(const TimeSeries& fitted,
                              std::size_t full_length, std::size_t offset) {
  FilterOutput out{std::vector<double>(full_length, 0.0),
                   std::vector<bool>(full_length, false)};
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    out.values[offset + i] = fitted.value(i);
    out.defined[offset + i] = true;
  }
  return out;
}

}  // namespace

double r2_fixed_unit(const FilterOutput& one_sided,
                     const FilterOutput& two_sided, const IndexMask& mask) {
  const std::size_t n = mask.size();
  if (one_sided.size() != n || two_sided.size() != n)
    throw Error(ErrorKind::bad_param, "r2_fixed_unit: length mismatch");

  std::vector<std::size_t> common;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] && one_sided.defined[i] && two_sided.defined[i])
      common.push_back(i);
  }
  if (common.size() < 2)
    throw Error(ErrorKind::too_short,
                "r2_fixed_unit: fewer than 2 common defined points");

  double mean_two = 0.0, max_abs = 0.0;
  for (std::size_t i : common) {
    mean_two += two_sided.values[i];
    max_abs = std::max(max_abs, std::abs(two_sided.values[i]));
  }
  mean_two /= static_cast<double>(common.size());

  double sse = 0.0, sst = 0.0;
  for (std::size_t i : common) {
    const double d = two_sided.values[i] - one_sided.values[i];
    const double c = two_sided.values[i] - mean_two;
    sse += d * d;
    sst += c * c;
  }
  // Zero-variance guard with headroom for the rounding a constant series
  // picks up when its mean is computed.
  const double floor_sst = static_cast<double>(common.size()) *
                           std::pow(1e-12 * std::max(1.0, max_abs), 2);
  if (sst <= floor_sst)
    throw Error(ErrorKind::zero_variance,
                "r2_fixed_unit: two-sided series has zero variance on mask");
  return 1.0 - sse / sst;
}

std::string method_pair_name(MethodPair pair) {
  switch (pair) {
    case MethodPair::albama: return "AlbaMA";
    case MethodPair::sg: return "SG";
    case MethodPair::ma3: return "MA(3)";
    case MethodPair::ma6: return "MA(6)";
    case MethodPair::ma12: return "MA(12)";
    case MethodPair::ma6_vs_3: return "MA(6) vs (3)";
    case MethodPair::ma12_vs_6: return "MA(12) vs (6)";
  }
  return "?";
}

std::vector<MethodPair> all_method_pairs() {
  return {MethodPair::albama, MethodPair::sg,        MethodPair::ma3,
          MethodPair::ma6,    MethodPair::ma12,      MethodPair::ma6_vs_3,
          MethodPair::ma12_vs_6};
}

std::vector<ReportRow> paired_method_r2(const TimeSeries& y,
                                        const std::string& variable,
                                        MethodPair pair,
                                        std::span<const Window> windows,
                                        const EvalParams& params) {
  const std::size_t n = y.size();
  FilterOutput one, two;
  switch (pair) {
    case MethodPair::albama: {
      const ForestModel model = fit_two_sided(y, params.forest);
      two = series_as_output(forest_fitted(model), n, 0);
      const auto [fitted, weights] =
          fit_one_sided(y, params.forest, params.warmup);
      one = series_as_output(fitted, n,
                             static_cast<std::size_t>(params.warmup) - 1);
      break;
    }
    case MethodPair::sg:
      one = sg_one_sided(y, params.sg_window, params.sg_order);
      two = sg_two_sided(y, params.sg_window, params.sg_order);
      break;
    case MethodPair::ma3:
      one = ma_one_sided(y, 3);
      two = ma_two_sided(y, 3);
      break;
    case MethodPair::ma6:
      one = ma_one_sided(y, 6);
      two = ma_two_sided(y, 6);
      break;
    case MethodPair::ma12:
      one = ma_one_sided(y, 12);
      two = ma_two_sided(y, 12);
      break;
    case MethodPair::ma6_vs_3:
      one = ma_one_sided(y, 3);
      two = ma_two_sided(y, 6);
      break;
    case MethodPair::ma12_vs_6:
      one = ma_one_sided(y, 6);
      two = ma_two_sided(y, 12);
      break;
  }

  std::vector<ReportRow> rows;
  for (const Window& window : windows) {
    ReportRow row;
    row.variable = variable;
    row.method = method_pair_name(pair);
    row.window = window.name();
    try {
      const IndexMask mask = mask_for_window(y, window);
      std::size_t n_obs = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i] && one.defined[i] && two.defined[i]) ++n_obs;
      row.n_obs = n_obs;
      row.r2 = r2_fixed_unit(one, two, mask);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::zero_variance: row.status = "zero_variance"; break;
        case ErrorKind::too_short: row.status = "too_few_points"; break;
        case ErrorKind::empty_window: row.status = "empty_window"; break;
        default: row.status = "error"; break;
      }
      row.r2 = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty())
    throw Error(ErrorKind::bad_param, "quantile of empty set");
  std::sort(values.begin(), values.end());
  const double h = p * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

EvaluationReport full_report(std::span<const NamedSeries> series,
                             std::span<const MethodPair> methods,
                             std::span<const Window> windows,
                             const EvalParams& params) {
  if (series.empty() || methods.empty() || windows.empty())
    throw Error(ErrorKind::bad_param, "full_report: empty inputs");

  EvaluationReport report;
  for (const NamedSeries& s : series) {
    for (const MethodPair pair : methods) {
      auto rows = paired_method_r2(s.series, s.name, pair, windows, params);
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
  }

  // Boxplot statistics across variables, per (method, window), ok rows only.
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const ReportRow& row : report.rows) {
    if (row.status == "ok") groups[{row.method, row.window}].push_back(row.r2);
  }
  for (const MethodPair pair : methods) {
    for (const Window& window : windows) {
      const auto it = groups.find({method_pair_name(pair), window.name()});
      if (it == groups.end() || it->second.empty()) continue;
      BoxplotSummary s;
      s.method = method_pair_name(pair);
      s.window = window.name();
      s.n = it->second.size();
      s.min = *std::min_element(it->second.begin(), it->second.end());
      s.max = *std::max_element(it->second.begin(), it->second.end());
      s.q1 = quantile(it->second, 0.25);
      s.median = quantile(it->second, 0.5);
      s.q3 = quantile(it->second, 0.75);
      report.summaries.push_back(std::move(s));
    }
  }
  return report;
}

void write_report_csv(const EvaluationReport& report,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << "variable,method,window,r2,n_obs,status\n";
  for (const ReportRow& row : report.rows) {
    out << row.variable << ',' << row.method << ',' << row.window << ','
        << (row.status == "ok" ? format_value(row.r2) : "") << ',' << row.n_obs
        << ',' << row.status << '\n';
  }
}

void write_report_json(const EvaluationReport& report,
                       const std::string& path) {
  nlohmann::json summaries = nlohmann::json::array();
  for (const BoxplotSummary& s : report.summaries) {
    summaries.push_back({{"method", s.method},
                         {"window", s.window},
                         {"min", s.min},
                         {"q1", s.q1},
                         {"median", s.median},
                         {"q3", s.q3},
                         {"max", s.max},
                         {"n", s.n}});
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << nlohmann::json{{"boxplots", summaries}}.dump(2) << '\n';
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("variable,method,window,r2,n_obs,status", 0) != 0)
    throw Error(ErrorKind::bad_value, "bad report header in " + path);
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    // method names may contain no commas; format is fixed at 6 fields
    if (fields.size() < 6)
      throw Error(ErrorKind::bad_value, "bad report row: " + line);
    ReportRow row;
    row.variable = fields[0];
    row.method = fields[1];
    row.window = fields[2];
    row.r2 = fields[3].empty() ? std::numeric_limits<double>::quiet_NaN()
                               : std::stod(fields[3]);
    row.n_obs = static_cast<std::size_t>(std::stoull(fields[4]));
    row.status = fields[5];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace albama
