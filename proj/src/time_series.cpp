#include "albama/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace albama {

namespace {

std::string format_value(double v) {
  // %.17g round-trips doubles exactly, which keeps every writer/reader pair
  // lossless and repeated runs byte-identical.
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

YearMonth YearMonth::plus_months(int m) const {
  int zero_based = year * 12 + (month - 1) + m;
  int y = zero_based / 12;
  int mo = zero_based % 12;
  if (mo < 0) {
    mo += 12;
    y -= 1;
  }
  return YearMonth{y, mo + 1};
}

int YearMonth::months_since(const YearMonth& other) const {
  return (year - other.year) * 12 + (month - other.month);
}

YearMonth YearMonth::parse(const std::string& text) {
  const std::string t = strip(text);
  int y = 0, m = 0;
  // YYYY-MM or YYYY-MM-DD; anything trailing beyond the day is rejected.
  if (t.size() != 7 && t.size() != 10)
    throw Error(ErrorKind::bad_date, "unparseable date: '" + t + "'");
  if (std::sscanf(t.c_str(), "%4d-%2d", &y, &m) != 2 || t[4] != '-' ||
      (t.size() == 10 && t[7] != '-'))
    throw Error(ErrorKind::bad_date, "unparseable date: '" + t + "'");
  if (m < 1 || m > 12)
    throw Error(ErrorKind::bad_date, "month out of range in '" + t + "'");
  return YearMonth{y, m};
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

TimeSeries::TimeSeries(YearMonth start, std::vector<double> values)
    : start_(start), values_(std::move(values)) {
  if (values_.empty())
    throw Error(ErrorKind::too_short, "time series must have length >= 1");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::nonfinite_value,
                  "non-finite value in time series");
  }
}

std::size_t IndexMask::count() const {
  std::size_t n = 0;
  for (bool b : included) n += b;
  return n;
}

TransformKind parse_transform(const std::string& name) {
  if (name == "none") return TransformKind::none;
  if (name == "pct_change") return TransformKind::pct_change;
  if (name == "log_diff") return TransformKind::log_diff;
  if (name == "annualized_mom") return TransformKind::annualized_mom;
  if (name == "yoy") return TransformKind::yoy;
  throw Error(ErrorKind::usage, "unknown transform: '" + name + "'");
}

std::string transform_name(TransformKind kind) {
  switch (kind) {
    case TransformKind::none: return "none";
    case TransformKind::pct_change: return "pct_change";
    case TransformKind::log_diff: return "log_diff";
    case TransformKind::annualized_mom: return "annualized_mom";
    case TransformKind::yoy: return "yoy";
  }
  return "none";
}

TimeSeries transform(const TimeSeries& series, TransformKind kind) {
  if (kind == TransformKind::none)
    return TimeSeries(series.start(), series.values());

  const std::size_t lag = (kind == TransformKind::yoy) ? 12 : 1;
  if (series.size() <= lag)
    throw Error(ErrorKind::too_short,
                "series too short for transform (needs > " +
                    std::to_string(lag) + " observations)");
  for (double v : series.values()) {
    if (v <= 0.0)
      throw Error(ErrorKind::nonpositive_value,
                  "ratio/log transform requires strictly positive values");
  }

  std::vector<double> out(series.size() - lag);
  for (std::size_t t = lag; t < series.size(); ++t) {
    const double cur = series.value(t);
    const double base = series.value(t - lag);
    double v = 0.0;
    switch (kind) {
      case TransformKind::pct_change:
        v = (cur / base - 1.0) * 100.0;
        break;
      case TransformKind::log_diff:
        v = 100.0 * (std::log(cur) - std::log(base));
        break;
      case TransformKind::annualized_mom:
        v = (std::pow(cur / base, 12.0) - 1.0) * 100.0;
        break;
      case TransformKind::yoy:
        v = (cur / base - 1.0) * 100.0;
        break;
      case TransformKind::none:
        break;
    }
    out[t - lag] = v;
  }
  return TimeSeries(series.stamp(lag), std::move(out));
}

Window Window::named(WindowKind kind) {
  Window w;
  w.kind = kind;
  return w;
}

Window Window::custom(YearMonth start, YearMonth end) {
  if (end < start)
    throw Error(ErrorKind::bad_param, "custom window end precedes start");
  Window w;
  w.kind = WindowKind::custom;
  w.start = start;
  w.end = end;
  return w;
}

Window Window::parse(const std::string& text) {
  if (text == "full") return named(WindowKind::full);
  if (text == "full_ex_covid") return named(WindowKind::full_ex_covid);
  if (text == "post_1990") return named(WindowKind::post_1990);
  if (text == "post_2020") return named(WindowKind::post_2020);
  if (text == "post_2021") return named(WindowKind::post_2021);
  if (text == "great_recession") return named(WindowKind::great_recession);
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::usage, "unknown window: '" + text + "'");
  return custom(YearMonth::parse(text.substr(0, colon)),
                YearMonth::parse(text.substr(colon + 1)));
}

bool Window::contains(const YearMonth& ym) const {
  switch (kind) {
    case WindowKind::full:
      return true;
    case WindowKind::full_ex_covid:
      return ym.year != 2020;
    case WindowKind::post_1990:
      return ym >= YearMonth{1990, 1};
    case WindowKind::post_2020:
      return ym >= YearMonth{2020, 1};
    case WindowKind::post_2021:
      return ym >= YearMonth{2021, 1};
    case WindowKind::great_recession:
      return ym >= YearMonth{2008, 1} && ym <= YearMonth{2011, 12};
    case WindowKind::custom:
      return ym >= start && ym <= end;
  }
  return false;
}

std::string Window::name() const {
  switch (kind) {
    case WindowKind::full: return "full";
    case WindowKind::full_ex_covid: return "full_ex_covid";
    case WindowKind::post_1990: return "post_1990";
    case WindowKind::post_2020: return "post_2020";
    case WindowKind::post_2021: return "post_2021";
    case WindowKind::great_recession: return "great_recession";
    case WindowKind::custom: return start.str() + ":" + end.str();
  }
  return "full";
}

IndexMask mask_for_window(const TimeSeries& series, const Window& window) {
  IndexMask mask;
  mask.included.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    mask.included[i] = window.contains(series.stamp(i));
  if (window.kind == WindowKind::custom && mask.count() == 0)
    throw Error(ErrorKind::empty_window,
                "custom window " + window.name() +
                    " does not intersect the series range");
  return mask;
}

TimeSeries load_csv(const std::string& path, const std::string& date_column,
                    const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::too_short, "empty CSV file: '" + path + "'");

  const auto header = split_csv_line(line);
  std::ptrdiff_t date_idx = -1, value_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = strip(header[i]);
    if (name == date_column) date_idx = static_cast<std::ptrdiff_t>(i);
    if (name == value_column) value_idx = static_cast<std::ptrdiff_t>(i);
  }
  if (date_idx < 0)
    throw Error(ErrorKind::missing_column,
                "missing column '" + date_column + "' in '" + path + "'");
  if (value_idx < 0)
    throw Error(ErrorKind::missing_column,
                "missing column '" + value_column + "' in '" + path + "'");

  std::vector<std::pair<YearMonth, double>> rows;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() <= std::max(static_cast<std::size_t>(date_idx),
                                  static_cast<std::size_t>(value_idx)))
      throw Error(ErrorKind::bad_value, "short row in '" + path + "'");
    const YearMonth ym = YearMonth::parse(fields[date_idx]);
    const std::string raw = strip(fields[value_idx]);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (raw.empty() || end != raw.c_str() + raw.size())
      throw Error(ErrorKind::bad_value,
                  "unparseable value '" + raw + "' at " + ym.str());
    if (!std::isfinite(v))
      throw Error(ErrorKind::nonfinite_value,
                  "non-finite value at " + ym.str());
    rows.emplace_back(ym, v);
  }
  if (rows.empty())
    throw Error(ErrorKind::too_short, "no data rows in '" + path + "'");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int step = rows[i].first.months_since(rows[i - 1].first);
    if (step == 0)
      throw Error(ErrorKind::duplicate_month,
                  "duplicate month " + rows[i].first.str());
    if (step > 1)
      throw Error(ErrorKind::month_gap,
                  "gap between " + rows[i - 1].first.str() + " and " +
                      rows[i].first.str());
  }

  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].second;
  return TimeSeries(rows.front().first, std::move(values));
}

void write_csv(const TimeSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << "date,value\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << series.stamp(i).str() << ',' << format_value(series.value(i))
        << '\n';
}

void write_json(const TimeSeries& series, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < series.size(); ++i)
    arr.push_back({{"date", series.stamp(i).str()}, {"value", series.value(i)}});
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << arr.dump(2) << '\n';
}

}  // namespace albama
