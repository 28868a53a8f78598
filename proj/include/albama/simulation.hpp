#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "albama/time_series.hpp"

namespace albama {

enum class Scenario { gradual, abrupt, combined };

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

struct ScenarioSpec {
  Scenario scenario = Scenario::combined;
  int length = 300;
  double sigma = 0.5;
  std::uint64_t seed = 42;
};

// Noiseless signal, 1-based t in the formulas:
//   gradual   (2t - T)/T
//   abrupt    -1 up to T/2, +1 after
//   combined  (2t - T/2)/(T/2) up to T/2, -1 after
// abrupt/combined require an even length.
std::vector<double> signal(const ScenarioSpec& spec);

// signal + iid N(0, sigma^2) noise; timestamps are synthetic consecutive
// months starting at 2000-01.
TimeSeries generate(const ScenarioSpec& spec);

}  // namespace albama
