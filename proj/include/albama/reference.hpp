#pragma once

// Serial reference implementations of the OpenMP forest kernels. These use
// the straightforward algorithms (plain loops, per-query tree routing, no
// lookup tables) and exist so tests can pin the parallel kernels against an
// independent path and the benchmark target can measure the speedup.

#include <utility>

#include "albama/forest.hpp"
#include "albama/time_series.hpp"

namespace albama::reference {

ForestModel fit_two_sided(const TimeSeries& y, const ForestParams& params);

TimeSeries forest_fitted(const ForestModel& model);

WeightMatrix extract_weights(const ForestModel& model);

std::pair<TimeSeries, WeightMatrix> fit_one_sided(const TimeSeries& y,
                                                  const ForestParams& params,
                                                  int warmup = 24);

}  // namespace albama::reference
