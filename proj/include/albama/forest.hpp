#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "albama/time_series.hpp"
#include "albama/tree.hpp"

namespace albama {

struct ForestParams {
  int n_trees = 500;
  TreeParams tree{};      // min_leaf 40 by default
  bool bootstrap = true;  // T index draws with replacement per tree
  std::uint64_t seed = 42;
};

// Bagged trees over the time trend. Immutable once fitted.
class ForestModel {
 public:
  ForestModel(TimeSeries series, ForestParams params, std::vector<Tree> trees)
      : series_(std::move(series)), params_(params), trees_(std::move(trees)) {}

  const TimeSeries& series() const { return series_; }
  const ForestParams& params() const { return params_; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t series_length() const { return series_.size(); }

 private:
  TimeSeries series_;
  ForestParams params_;
  std::vector<Tree> trees_;
};

// Row-stochastic moving-average weights: fitted(t) = sum_tau w(t,tau) y(tau).
// One-sided matrices only carry rows from `row_offset` on; every stored row
// has `series_length` columns.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t series_length, std::size_t row_offset,
               std::size_t n_rows, bool causal)
      : series_length_(series_length),
        row_offset_(row_offset),
        causal_(causal),
        data_(n_rows * series_length, 0.0) {}

  std::size_t series_length() const { return series_length_; }
  std::size_t row_offset() const { return row_offset_; }
  std::size_t n_rows() const { return data_.size() / series_length_; }
  bool causal() const { return causal_; }

  // `t` is the absolute time index, in [row_offset, row_offset + n_rows).
  std::span<const double> row(std::size_t t) const {
    return {data_.data() + (t - row_offset_) * series_length_, series_length_};
  }
  std::span<double> mutable_row(std::size_t t) {
    return {data_.data() + (t - row_offset_) * series_length_, series_length_};
  }

 private:
  std::size_t series_length_;
  std::size_t row_offset_;
  bool causal_;
  std::vector<double> data_;
};

// Inclusive lag range; lag = t - tau (negative lags are leads).
struct LagBucket {
  int lo;
  int hi;
  static constexpr int open_end = std::numeric_limits<int>::max();
  static constexpr int open_begin = std::numeric_limits<int>::min();
};

struct BucketSpec {
  std::vector<LagBucket> buckets;

  // {0}, {1..2}, {3..5}, {6..}
  static BucketSpec one_sided_default();
  // Symmetric: {..-6}, {-5..-3}, {-2..-1}, {0}, {1..2}, {3..5}, {6..}
  static BucketSpec two_sided_default();

  std::string label(std::size_t i) const;
};

struct BucketShares {
  std::vector<std::string> labels;
  std::size_t row_offset = 0;
  // shares[r][g]: share of bucket g at time row_offset + r; rows sum to 1.
  std::vector<std::vector<double>> shares;
};

// Fits n_trees trees on independent bootstrap draws (tree b is seeded from
// (seed, b)); with bootstrap=false every tree sees the full sample.
ForestModel fit_two_sided(const TimeSeries& y, const ForestParams& params);

// Average of the tree predictions at each t; timestamps copied from input.
TimeSeries forest_fitted(const ForestModel& model);

WeightMatrix extract_weights(const ForestModel& model);

// Expanding-window estimate: for each t from warmup-1 on, refits a full
// forest on y[0..t] (seeded from (seed, t)) and keeps its value and weight
// row at t. Emitted series starts at timestamp index warmup-1; weight rows
// are strictly causal.
std::pair<TimeSeries, WeightMatrix> fit_one_sided(const TimeSeries& y,
                                                  const ForestParams& params,
                                                  int warmup = 24);

BucketShares bucket_shares(const WeightMatrix& weights,
                           const BucketSpec& buckets);

// CSV exports. Long format lists nonzero entries as (t,tau,weight); dense
// format writes one row per t with a column per tau.
void write_weights_long(const WeightMatrix& weights, const std::string& path);
void write_weights_dense(const WeightMatrix& weights, const TimeSeries& series,
                         const std::string& path);
void write_bucket_shares(const BucketShares& shares, const TimeSeries& series,
                         const std::string& path);

struct WeightEntry {
  std::size_t t, tau;
  double weight;
};
std::vector<WeightEntry> read_weights_long(const std::string& path);

struct DenseWeightRow {
  YearMonth date;
  std::size_t t = 0;
  std::vector<double> weights;
};
std::vector<DenseWeightRow> read_weights_dense(const std::string& path);

struct BucketShareRow {
  YearMonth date;
  std::vector<double> shares;
};
struct BucketShareTable {
  std::vector<std::string> labels;
  std::vector<BucketShareRow> rows;
};
BucketShareTable read_bucket_shares(const std::string& path);

}  // namespace albama
