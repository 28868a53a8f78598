#include "albama/reference.hpp"

#include <cstdint>
#include <string>

#include "albama/error.hpp"
#include "albama/rng.hpp"
#include "forest_detail.hpp"

namespace albama::reference {

ForestModel fit_two_sided(const TimeSeries& y, const ForestParams& params) {
  if (params.n_trees < 1)
    throw Error(ErrorKind::bad_param, "n_trees must be >= 1");
  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int b = 0; b < params.n_trees; ++b) {
    SplitMix64 gen(derive_seed(params.seed, static_cast<std::uint64_t>(b)));
    const TrainingSample sample =
        detail::make_sample(gen, y.size(), params.bootstrap);
    trees.push_back(fit_tree(sample, y.values(), params.tree));
  }
  return ForestModel(y, params, std::move(trees));
}

TimeSeries forest_fitted(const ForestModel& model) {
  const std::size_t n = model.series_length();
  const double inv_b = 1.0 / static_cast<double>(model.trees().size());
  std::vector<double> fitted(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (const Tree& tree : model.trees())
      acc += tree.predict(static_cast<double>(t));
    fitted[t] = acc * inv_b;
  }
  return TimeSeries(model.series().start(), std::move(fitted));
}

WeightMatrix extract_weights(const ForestModel& model) {
  const std::size_t n = model.series_length();
  const double inv_b = 1.0 / static_cast<double>(model.trees().size());
  WeightMatrix weights(n, 0, n, false);
  for (std::size_t t = 0; t < n; ++t) {
    std::span<double> row = weights.mutable_row(t);
    for (const Tree& tree : model.trees())
      detail::add_leaf_weights(tree.leaf_members(static_cast<double>(t)), row);
    for (double& w : row) w *= inv_b;
  }
  return weights;
}

std::pair<TimeSeries, WeightMatrix> fit_one_sided(const TimeSeries& y,
                                                  const ForestParams& params,
                                                  int warmup) {
  if (warmup < 8)
    throw Error(ErrorKind::bad_param, "warmup must be >= 8 months");
  const std::size_t n = y.size();
  if (n < static_cast<std::size_t>(warmup))
    throw Error(ErrorKind::too_short, "series shorter than warmup");

  const std::size_t first_t = static_cast<std::size_t>(warmup) - 1;
  const double inv_b = 1.0 / static_cast<double>(params.n_trees);
  std::vector<double> fitted(n - first_t);
  WeightMatrix weights(n, first_t, n - first_t, true);

  for (std::size_t t = first_t; t < n; ++t) {
    const std::span<const double> prefix(y.values().data(), t + 1);
    const std::uint64_t period_seed = derive_seed(params.seed, t);
    double acc = 0.0;
    std::span<double> row = weights.mutable_row(t);
    for (int b = 0; b < params.n_trees; ++b) {
      SplitMix64 gen(derive_seed(period_seed, static_cast<std::uint64_t>(b)));
      const TrainingSample sample =
          detail::make_sample(gen, prefix.size(), params.bootstrap);
      const Tree tree = fit_tree(sample, prefix, params.tree);
      acc += tree.predict(static_cast<double>(t));
      detail::add_leaf_weights(tree.leaf_members(static_cast<double>(t)), row);
    }
    fitted[t - first_t] = acc * inv_b;
    for (double& w : row) w *= inv_b;
  }

  TimeSeries out(y.stamp(first_t), std::move(fitted));
  return {std::move(out), std::move(weights)};
}

}  // namespace albama::reference
