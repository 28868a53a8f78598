#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "albama/error.hpp"

namespace albama {

// Calendar month. The library only supports monthly data.
struct YearMonth {
  int year = 0;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  YearMonth plus_months(int m) const;
  // Signed number of months from `other` to *this.
  int months_since(const YearMonth& other) const;

  // Accepts "YYYY-MM" or "YYYY-MM-DD" (the day is ignored).
  static YearMonth parse(const std::string& text);
  std::string str() const;  // "YYYY-MM"
};

// Monthly time series: a start month plus one value per consecutive month.
// Gap-free timestamps hold by construction; values are validated finite.
class TimeSeries {
 public:
  TimeSeries(YearMonth start, std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  YearMonth start() const { return start_; }
  YearMonth stamp(std::size_t i) const {
    return start_.plus_months(static_cast<int>(i));
  }

 private:
  YearMonth start_;
  std::vector<double> values_;
};

struct IndexMask {
  std::vector<bool> included;

  std::size_t size() const { return included.size(); }
  bool operator[](std::size_t i) const { return included[i]; }
  std::size_t count() const;
};

enum class TransformKind { none, pct_change, log_diff, annualized_mom, yoy };

TransformKind parse_transform(const std::string& name);
std::string transform_name(TransformKind kind);

// Growth-rate transforms, all in percent. The output drops the first `lag`
// observations (1, or 12 for yoy) instead of padding.
TimeSeries transform(const TimeSeries& series, TransformKind kind);

enum class WindowKind {
  full,
  full_ex_covid,  // everything except calendar year 2020
  post_1990,
  post_2020,
  post_2021,
  great_recession,  // 2008m1 .. 2011m12
  custom,
};

struct Window {
  WindowKind kind = WindowKind::full;
  YearMonth start{};  // custom only
  YearMonth end{};    // custom only, inclusive

  static Window named(WindowKind kind);
  static Window custom(YearMonth start, YearMonth end);
  // "full", "post_1990", ..., or "YYYY-MM:YYYY-MM" for a custom range.
  static Window parse(const std::string& text);

  bool contains(const YearMonth& ym) const;
  std::string name() const;
};

IndexMask mask_for_window(const TimeSeries& series, const Window& window);

// CSV ingestion: UTF-8, header row, configurable column names, dates in
// YYYY-MM or YYYY-MM-DD. Rows are sorted by date before validation.
TimeSeries load_csv(const std::string& path, const std::string& date_column,
                    const std::string& value_column);

// Writers, columns (date,value).
void write_csv(const TimeSeries& series, const std::string& path);
void write_json(const TimeSeries& series, const std::string& path);

}  // namespace albama
