#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "albama/filters.hpp"
#include "albama/time_series.hpp"

namespace albama {

// Tidy (long-form) CSV for filter comparisons: date,method,value,defined.
class TidyCsvWriter {
 public:
  explicit TidyCsvWriter(const std::string& path);

  // method_ok=false marks the whole method undefined (solver failure).
  void add(const TimeSeries& series, const std::string& method,
           const FilterOutput& output, bool method_ok = true);

 private:
  std::ofstream out_;
};

struct TidyRow {
  YearMonth date{};
  std::string method;
  double value = 0.0;
  bool defined = false;
};

std::vector<TidyRow> read_tidy_csv(const std::string& path);

}  // namespace albama
