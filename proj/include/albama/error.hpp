#pragma once

#include <stdexcept>
#include <string>

namespace albama {

// Error codes are deliberately fine-grained so callers (and tests) can tell
// apart the failure modes the library distinguishes.
enum class ErrorKind {
  usage,             // bad flag/parameter combinations
  missing_column,    // CSV header lacks a requested column
  bad_date,          // unparseable date cell
  bad_value,         // unparseable numeric cell
  duplicate_month,   // two rows share a calendar month
  month_gap,         // missing month between consecutive rows
  nonfinite_value,   // NaN or +/-inf in input data
  too_short,         // series shorter than an operation requires
  nonpositive_value, // ratio/log transform on a value <= 0
  empty_window,      // custom window does not intersect the series
  bad_param,         // invalid numeric parameter (k < 1, odd T, ...)
  bad_bucket_spec,   // overlapping or incomplete lag buckets
  zero_variance,     // R^2 denominator vanishes
  no_convergence,    // iterative solver hit its iteration cap
  io,                // file open/write failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Process exit code contract: 1 usage, 2 data, 3 numerical.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::usage:
      case ErrorKind::bad_param:
        return 1;
      case ErrorKind::no_convergence:
        return 3;
      default:
        return 2;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace albama
