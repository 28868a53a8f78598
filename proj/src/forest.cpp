#include "albama/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "albama/error.hpp"
#include "albama/rng.hpp"
#include "forest_detail.hpp"

namespace albama {

namespace {

void check_params(const ForestParams& params) {
  if (params.n_trees < 1)
    throw Error(ErrorKind::bad_param, "n_trees must be >= 1");
  if (params.tree.min_leaf < 1)
    throw Error(ErrorKind::bad_param, "min_leaf must be >= 1");
}

std::vector<Tree> fit_trees(std::span<const double> values,
                            const ForestParams& params,
                            std::uint64_t base_seed, bool parallel) {
  const std::int64_t n_trees = params.n_trees;
  std::vector<Tree> trees(static_cast<std::size_t>(n_trees));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t b = 0; b < n_trees; ++b) {
    SplitMix64 gen(derive_seed(base_seed, static_cast<std::uint64_t>(b)));
    const TrainingSample sample =
        detail::make_sample(gen, values.size(), params.bootstrap);
    trees[static_cast<std::size_t>(b)] = fit_tree(sample, values, params.tree);
  }
  return trees;
}

// Per-tree lookup tables for weight extraction: which leaf each integer
// query time routes to, and each leaf's consolidated (tau, count/size)
// weights. Leaves cover contiguous integer ranges because the only split
// axis is the trend, so one interval sweep replaces per-query routing.
struct LeafTable {
  std::vector<std::vector<std::pair<int, double>>> leaf_weights;
  std::vector<std::int32_t> leaf_of_t;
};

LeafTable build_leaf_table(const Tree& tree, std::size_t series_length) {
  LeafTable table;
  table.leaf_of_t.assign(series_length, -1);

  struct Item {
    std::int32_t node;
    double lo, hi;  // leaf covers trend values in (lo, hi]
  };
  std::vector<Item> stack;
  stack.push_back({0, -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()});
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const auto& node = tree.nodes()[static_cast<std::size_t>(item.node)];
    if (node.left >= 0) {
      stack.push_back({node.left, item.lo, node.split});
      stack.push_back({node.right, node.split, item.hi});
      continue;
    }
    const std::span<const int> members(
        tree.members().data() + node.members_begin,
        static_cast<std::size_t>(node.members_end - node.members_begin));
    std::vector<std::pair<int, double>> weights;
    const double size = static_cast<double>(members.size());
    std::size_t i = 0;
    while (i < members.size()) {
      std::size_t j = i;
      while (j < members.size() && members[j] == members[i]) ++j;
      weights.emplace_back(members[i], static_cast<double>(j - i) / size);
      i = j;
    }
    const std::int32_t leaf_id =
        static_cast<std::int32_t>(table.leaf_weights.size());
    table.leaf_weights.push_back(std::move(weights));

    // Integer query times in (lo, hi], clamped to the series range. Split
    // points are midpoints of integers, so floor(lo + 1) is the first
    // integer strictly above lo whether lo is integral or half-integral.
    const std::int64_t first =
        std::isinf(item.lo)
            ? 0
            : std::max<std::int64_t>(
                  0, static_cast<std::int64_t>(std::floor(item.lo + 1.0)));
    const std::int64_t last =
        std::isinf(item.hi)
            ? static_cast<std::int64_t>(series_length) - 1
            : std::min<std::int64_t>(
                  static_cast<std::int64_t>(series_length) - 1,
                  static_cast<std::int64_t>(std::floor(item.hi)));
    for (std::int64_t t = first; t <= last; ++t)
      table.leaf_of_t[static_cast<std::size_t>(t)] = leaf_id;
  }
  return table;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ForestModel fit_two_sided(const TimeSeries& y, const ForestParams& params) {
  check_params(params);
  std::vector<Tree> trees = fit_trees(y.values(), params, params.seed, true);
  return ForestModel(y, params, std::move(trees));
}

TimeSeries forest_fitted(const ForestModel& model) {
  const std::int64_t n = static_cast<std::int64_t>(model.series_length());
  const double inv_b = 1.0 / static_cast<double>(model.trees().size());
  std::vector<double> fitted(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (const Tree& tree : model.trees())
      acc += tree.predict(static_cast<double>(t));
    fitted[static_cast<std::size_t>(t)] = acc * inv_b;
  }
  return TimeSeries(model.series().start(), std::move(fitted));
}

WeightMatrix extract_weights(const ForestModel& model) {
  const std::size_t n = model.series_length();
  const std::int64_t n_trees = static_cast<std::int64_t>(model.trees().size());
  const double inv_b = 1.0 / static_cast<double>(n_trees);

  std::vector<LeafTable> tables(static_cast<std::size_t>(n_trees));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < n_trees; ++b)
    tables[static_cast<std::size_t>(b)] =
        build_leaf_table(model.trees()[static_cast<std::size_t>(b)], n);

  WeightMatrix weights(n, 0, n, false);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(n); ++t) {
    std::span<double> row = weights.mutable_row(static_cast<std::size_t>(t));
    for (std::int64_t b = 0; b < n_trees; ++b) {
      const LeafTable& table = tables[static_cast<std::size_t>(b)];
      const auto& leaf =
          table.leaf_weights[static_cast<std::size_t>(table.leaf_of_t[t])];
      for (const auto& [tau, w] : leaf) row[static_cast<std::size_t>(tau)] += w;
    }
    for (double& w : row) w *= inv_b;
  }
  return weights;
}

std::pair<TimeSeries, WeightMatrix> fit_one_sided(const TimeSeries& y,
                                                  const ForestParams& params,
                                                  int warmup) {
  check_params(params);
  if (warmup < 8)
    throw Error(ErrorKind::bad_param, "warmup must be >= 8 months");
  const std::size_t n = y.size();
  if (n < static_cast<std::size_t>(warmup))
    throw Error(ErrorKind::too_short,
                "series shorter than warmup (" + std::to_string(n) + " < " +
                    std::to_string(warmup) + ")");

  const std::size_t first_t = static_cast<std::size_t>(warmup) - 1;
  const std::size_t n_out = n - first_t;
  const double inv_b = 1.0 / static_cast<double>(params.n_trees);
  std::vector<double> fitted(n_out);
  WeightMatrix weights(n, first_t, n_out, true);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(n_out); ++r) {
    const std::size_t t = first_t + static_cast<std::size_t>(r);
    const std::span<const double> prefix(y.values().data(), t + 1);
    const std::uint64_t period_seed = derive_seed(params.seed, t);
    const std::vector<Tree> trees =
        fit_trees(prefix, params, period_seed, false);

    double acc = 0.0;
    std::span<double> row = weights.mutable_row(t);
    for (const Tree& tree : trees) {
      acc += tree.predict(static_cast<double>(t));
      detail::add_leaf_weights(tree.leaf_members(static_cast<double>(t)), row);
    }
    fitted[static_cast<std::size_t>(r)] = acc * inv_b;
    for (double& w : row) w *= inv_b;
  }

  TimeSeries out(y.stamp(first_t), std::move(fitted));
  return {std::move(out), std::move(weights)};
}

BucketSpec BucketSpec::one_sided_default() {
  return BucketSpec{{{0, 0}, {1, 2}, {3, 5}, {6, LagBucket::open_end}}};
}

BucketSpec BucketSpec::two_sided_default() {
  return BucketSpec{{{LagBucket::open_begin, -6},
                     {-5, -3},
                     {-2, -1},
                     {0, 0},
                     {1, 2},
                     {3, 5},
                     {6, LagBucket::open_end}}};
}

std::string BucketSpec::label(std::size_t i) const {
  const LagBucket& b = buckets[i];
  const auto lag_tag = [](int lag) {
    return lag >= 0 ? "t-" + std::to_string(lag) : "t+" + std::to_string(-lag);
  };
  if (b.lo == 0 && b.hi == 0) return "y_t";
  if (b.lo >= 0) {  // pure lags
    if (b.hi == LagBucket::open_end) return "y_" + lag_tag(b.lo) + ":end";
    if (b.lo == b.hi) return "y_" + lag_tag(b.lo);
    return "y_" + lag_tag(b.lo) + ":" + lag_tag(b.hi);
  }
  if (b.hi <= 0) {  // pure leads; nearest lead first in the label
    if (b.lo == LagBucket::open_begin) return "y_" + lag_tag(b.hi) + ":end";
    if (b.lo == b.hi) return "y_" + lag_tag(b.hi);
    return "y_" + lag_tag(b.hi) + ":" + lag_tag(b.lo);
  }
  return "lag" + std::to_string(b.lo) + ":" + std::to_string(b.hi);
}

BucketShares bucket_shares(const WeightMatrix& weights,
                           const BucketSpec& spec) {
  const std::size_t n = weights.series_length();
  const int max_lag = static_cast<int>(n) - 1;
  const int min_lag = weights.causal() ? 0 : -max_lag;

  // Every reachable lag must fall in exactly one bucket.
  std::vector<std::int32_t> bucket_of(
      static_cast<std::size_t>(max_lag - min_lag) + 1, -1);
  for (int lag = min_lag; lag <= max_lag; ++lag) {
    int hits = 0;
    for (std::size_t g = 0; g < spec.buckets.size(); ++g) {
      const LagBucket& b = spec.buckets[g];
      if (lag >= b.lo && lag <= b.hi) {
        bucket_of[static_cast<std::size_t>(lag - min_lag)] =
            static_cast<std::int32_t>(g);
        ++hits;
      }
    }
    if (hits > 1)
      throw Error(ErrorKind::bad_bucket_spec,
                  "lag " + std::to_string(lag) + " matches several buckets");
    if (hits == 0)
      throw Error(ErrorKind::bad_bucket_spec,
                  "lag " + std::to_string(lag) + " matches no bucket");
  }

  BucketShares out;
  out.row_offset = weights.row_offset();
  for (std::size_t g = 0; g < spec.buckets.size(); ++g)
    out.labels.push_back(spec.label(g));
  out.shares.resize(weights.n_rows());
  for (std::size_t r = 0; r < weights.n_rows(); ++r) {
    const std::size_t t = weights.row_offset() + r;
    const std::span<const double> row = weights.row(t);
    std::vector<double> shares(spec.buckets.size(), 0.0);
    for (std::size_t tau = 0; tau < n; ++tau) {
      const int lag = static_cast<int>(t) - static_cast<int>(tau);
      if (lag < min_lag) continue;  // leads carry zero weight when causal
      shares[static_cast<std::size_t>(
          bucket_of[static_cast<std::size_t>(lag - min_lag)])] += row[tau];
    }
    out.shares[r] = std::move(shares);
  }
  return out;
}

void write_weights_long(const WeightMatrix& weights, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << "t,tau,weight\n";
  for (std::size_t r = 0; r < weights.n_rows(); ++r) {
    const std::size_t t = weights.row_offset() + r;
    const std::span<const double> row = weights.row(t);
    for (std::size_t tau = 0; tau < row.size(); ++tau) {
      if (row[tau] != 0.0)
        out << t << ',' << tau << ',' << format_value(row[tau]) << '\n';
    }
  }
}

void write_weights_dense(const WeightMatrix& weights, const TimeSeries& series,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << "date,t";
  for (std::size_t tau = 0; tau < weights.series_length(); ++tau)
    out << ",tau" << tau;
  out << '\n';
  for (std::size_t r = 0; r < weights.n_rows(); ++r) {
    const std::size_t t = weights.row_offset() + r;
    out << series.stamp(t).str() << ',' << t;
    for (double w : weights.row(t)) out << ',' << format_value(w);
    out << '\n';
  }
}

void write_bucket_shares(const BucketShares& shares, const TimeSeries& series,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << "date";
  for (const std::string& label : shares.labels) out << ',' << label;
  out << '\n';
  for (std::size_t r = 0; r < shares.shares.size(); ++r) {
    out << series.stamp(shares.row_offset + r).str();
    for (double s : shares.shares[r]) out << ',' << format_value(s);
    out << '\n';
  }
}

std::vector<WeightEntry> read_weights_long(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,tau,weight", 0) != 0)
    throw Error(ErrorKind::bad_value, "bad long-weight header in " + path);
  std::vector<WeightEntry> entries;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    WeightEntry e{};
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf", &e.t, &e.tau, &e.weight) != 3)
      throw Error(ErrorKind::bad_value, "bad long-weight row: " + line);
    entries.push_back(e);
  }
  return entries;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw Error(ErrorKind::bad_value, "bad number in " + context);
  return v;
}

}  // namespace

std::vector<DenseWeightRow> read_weights_dense(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("date,t", 0) != 0)
    throw Error(ErrorKind::bad_value, "bad dense-weight header in " + path);
  std::vector<DenseWeightRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 3)
      throw Error(ErrorKind::bad_value, "bad dense-weight row: " + line);
    DenseWeightRow row;
    row.date = YearMonth::parse(fields[0]);
    row.t = static_cast<std::size_t>(std::stoull(fields[1]));
    row.weights.reserve(fields.size() - 2);
    for (std::size_t i = 2; i < fields.size(); ++i)
      row.weights.push_back(parse_double(fields[i], path));
    rows.push_back(std::move(row));
  }
  return rows;
}

BucketShareTable read_bucket_shares(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("date,", 0) != 0)
    throw Error(ErrorKind::bad_value, "bad bucket-share header in " + path);
  BucketShareTable table;
  const auto header = split_fields(line);
  table.labels.assign(header.begin() + 1, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorKind::bad_value, "bad bucket-share row: " + line);
    BucketShareRow row;
    row.date = YearMonth::parse(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i)
      row.shares.push_back(parse_double(fields[i], path));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace albama
