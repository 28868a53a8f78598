#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "albama/evaluation.hpp"
#include "albama/rng.hpp"
#include "albama/simulation.hpp"

using namespace albama;

namespace {

TimeSeries make_series(std::vector<double> values) {
  return TimeSeries(YearMonth{2000, 1}, std::move(values));
}

FilterOutput as_output(std::vector<double> values) {
  const std::size_t n = values.size();
  return FilterOutput{std::move(values), std::vector<bool>(n, true)};
}

IndexMask all_true(std::size_t n) {
  return IndexMask{std::vector<bool>(n, true)};
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  NormalSampler sampler(seed);
  std::vector<double> out(n);
  for (double& v : out) v = sampler.next();
  return out;
}

}  // namespace

TEST_CASE("r2_fixed_unit: identical series score exactly 1") {
  const std::vector<double> x = noise(50, 1);
  CHECK(r2_fixed_unit(as_output(x), as_output(x), all_true(50)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("r2_fixed_unit: constant shift matches the closed form") {
  const std::vector<double> two = noise(60, 2);
  const double shift = 0.8;
  std::vector<double> one = two;
  for (double& v : one) v += shift;

  double mean = 0.0;
  for (double v : two) mean += v;
  mean /= static_cast<double>(two.size());
  double sst = 0.0;
  for (double v : two) sst += (v - mean) * (v - mean);
  const double expected =
      1.0 - static_cast<double>(two.size()) * shift * shift / sst;

  CHECK(r2_fixed_unit(as_output(one), as_output(two), all_true(60)) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("r2_fixed_unit: predicting the mean scores exactly 0") {
  const std::vector<double> two = noise(40, 3);
  double mean = 0.0;
  for (double v : two) mean += v;
  mean /= static_cast<double>(two.size());
  const std::vector<double> one(two.size(), mean);
  CHECK(r2_fixed_unit(as_output(one), as_output(two), all_true(40)) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("r2_fixed_unit: error paths") {
  const std::vector<double> constant(30, 5.5);
  const std::vector<double> x = noise(30, 4);
  CHECK_THROWS_AS(
      r2_fixed_unit(as_output(x), as_output(constant), all_true(30)), Error);

  FilterOutput sparse = as_output(x);
  for (std::size_t i = 0; i < 29; ++i) sparse.defined[i] = false;
  CHECK_THROWS_AS(r2_fixed_unit(sparse, as_output(x), all_true(30)), Error);
}

TEST_CASE("r2_fixed_unit invariances") {
  const std::vector<double> two = noise(45, 5);
  std::vector<double> one = noise(45, 6);
  const IndexMask mask = all_true(45);
  const double base = r2_fixed_unit(as_output(one), as_output(two), mask);

  std::vector<double> one_shift = one, two_shift = two;
  for (double& v : one_shift) v += 3.7;
  for (double& v : two_shift) v += 3.7;
  CHECK(r2_fixed_unit(as_output(one_shift), as_output(two_shift), mask) ==
        doctest::Approx(base).epsilon(1e-10));

  std::vector<double> one_scaled = one, two_scaled = two;
  for (double& v : one_scaled) v *= 2.5;
  for (double& v : two_scaled) v *= 2.5;
  CHECK(r2_fixed_unit(as_output(one_scaled), as_output(two_scaled), mask) ==
        doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("r2_fixed_unit ignores points outside the mask") {
  const std::vector<double> two = noise(50, 7);
  const std::vector<double> one = noise(50, 8);
  IndexMask mask = all_true(50);
  for (std::size_t i = 40; i < 50; ++i) mask.included[i] = false;

  // corrupting the unmasked tail must not change the score
  std::vector<double> one_changed = one, two_changed = two;
  for (std::size_t i = 40; i < 50; ++i) {
    one_changed[i] = 1e6;
    two_changed[i] = -1e6;
  }
  CHECK(r2_fixed_unit(as_output(one), as_output(two), mask) ==
        r2_fixed_unit(as_output(one_changed), as_output(two_changed), mask));
}

TEST_CASE("paired MA(3): lagged line shift matches the closed form") {
  const std::size_t n = 120;
  const double slope = 0.05;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = slope * static_cast<double>(i);
  const TimeSeries y = make_series(values);

  const std::vector<Window> windows{Window::named(WindowKind::full)};
  EvalParams params;
  const auto rows = paired_method_r2(y, "line", MethodPair::ma3, windows, params);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].status == "ok");

  // trailing MA(3) of a line lags by slope*(3-1)/2; the centered version is
  // exact, so the pair differs by that constant on the common range
  // [3, n-4], where both filters are defined
  const double shift = slope * 1.0;
  std::vector<double> two_vals;
  for (std::size_t t = 3; t + 3 < n; ++t) two_vals.push_back(values[t]);
  double m2 = 0.0;
  for (double v : two_vals) m2 += v;
  m2 /= static_cast<double>(two_vals.size());
  double sst = 0.0;
  for (double v : two_vals) sst += (v - m2) * (v - m2);
  const double expected =
      1.0 -
      static_cast<double>(two_vals.size()) * shift * shift / sst;
  CHECK(rows[0].r2 == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("constant series reports zero-variance rows but keeps running") {
  const TimeSeries constant = make_series(std::vector<double>(60, 1.0));
  const std::vector<Window> windows{Window::named(WindowKind::full)};
  EvalParams params;
  const auto rows =
      paired_method_r2(constant, "flat", MethodPair::ma6, windows, params);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "zero_variance");
  CHECK(std::isnan(rows[0].r2));
}

TEST_CASE("full_report: single cell, counts, and csv round trip") {
  ScenarioSpec spec;
  spec.scenario = Scenario::combined;
  spec.length = 120;
  const std::vector<NamedSeries> series{{"combined", generate(spec)}};
  const std::vector<MethodPair> methods{MethodPair::ma3};
  const std::vector<Window> windows{Window::named(WindowKind::full)};
  EvalParams params;
  const EvaluationReport report =
      full_report(series, methods, windows, params);
  REQUIRE(report.rows.size() == 1);
  REQUIRE(report.summaries.size() == 1);
  CHECK(report.summaries[0].n == 1);
  CHECK(report.summaries[0].median == report.rows[0].r2);

  const auto path =
      (std::filesystem::temp_directory_path() / "albama_report.csv").string();
  write_report_csv(report, path);
  const auto rows = read_report_csv(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].variable == "combined");
  CHECK(rows[0].method == "MA(3)");
  CHECK(rows[0].r2 == report.rows[0].r2);
  CHECK(rows[0].n_obs == report.rows[0].n_obs);
}

TEST_CASE("quantiles use linear interpolation with midpoint medians") {
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({1.0, 2.0, 3.0}, 0.5) == doctest::Approx(2.0));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({5.0}, 0.75) == doctest::Approx(5.0));
}

TEST_CASE("boxplot summaries aggregate across variables") {
  ScenarioSpec spec;
  spec.length = 100;
  std::vector<NamedSeries> series;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    spec.seed = seed;
    spec.scenario = Scenario::gradual;
    series.push_back({"g" + std::to_string(seed), generate(spec)});
  }
  const std::vector<MethodPair> methods{MethodPair::ma3, MethodPair::ma12};
  const std::vector<Window> windows{Window::named(WindowKind::full)};
  EvalParams params;
  const EvaluationReport report =
      full_report(series, methods, windows, params);
  CHECK(report.rows.size() == 6);
  REQUIRE(report.summaries.size() == 2);
  for (const auto& s : report.summaries) {
    CHECK(s.n == 3);
    CHECK(s.min <= s.q1);
    CHECK(s.q1 <= s.median);
    CHECK(s.median <= s.q3);
    CHECK(s.q3 <= s.max);
  }
}
