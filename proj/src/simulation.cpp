#include "albama/simulation.hpp"

#include "albama/error.hpp"
#include "albama/rng.hpp"

namespace albama {

Scenario parse_scenario(const std::string& name) {
  if (name == "gradual") return Scenario::gradual;
  if (name == "abrupt") return Scenario::abrupt;
  if (name == "combined") return Scenario::combined;
  throw Error(ErrorKind::usage, "unknown scenario: '" + name + "'");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::gradual: return "gradual";
    case Scenario::abrupt: return "abrupt";
    case Scenario::combined: return "combined";
  }
  return "combined";
}

namespace {

void validate(const ScenarioSpec& spec) {
  if (spec.length < 2)
    throw Error(ErrorKind::bad_param, "scenario length must be >= 2");
  if (spec.sigma < 0.0)
    throw Error(ErrorKind::bad_param, "sigma must be >= 0");
  if (spec.scenario != Scenario::gradual && spec.length % 2 != 0)
    throw Error(ErrorKind::bad_param,
                "abrupt/combined scenarios need an even length");
}

}  // namespace

std::vector<double> signal(const ScenarioSpec& spec) {
  validate(spec);
  const int n = spec.length;
  std::vector<double> out(static_cast<std::size_t>(n));
  const double half = static_cast<double>(n) / 2.0;
  for (int t = 1; t <= n; ++t) {
    double v = 0.0;
    switch (spec.scenario) {
      case Scenario::gradual:
        v = (2.0 * t - n) / static_cast<double>(n);
        break;
      case Scenario::abrupt:
        v = (t <= n / 2) ? -1.0 : 1.0;
        break;
      case Scenario::combined:
        v = (t <= n / 2) ? (2.0 * t - half) / half : -1.0;
        break;
    }
    out[static_cast<std::size_t>(t - 1)] = v;
  }
  return out;
}

TimeSeries generate(const ScenarioSpec& spec) {
  std::vector<double> values = signal(spec);
  NormalSampler noise(spec.seed);
  for (double& v : values) v += spec.sigma * noise.next();
  return TimeSeries(YearMonth{2000, 1}, std::move(values));
}

}  // namespace albama
