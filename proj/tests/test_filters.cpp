#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "albama/filters.hpp"
#include "albama/rng.hpp"
#include "oracles.hpp"

using namespace albama;

namespace {

TimeSeries make_series(std::vector<double> values) {
  return TimeSeries(YearMonth{2000, 1}, std::move(values));
}

TimeSeries noise_series(std::size_t n, std::uint64_t seed) {
  NormalSampler sampler(seed);
  std::vector<double> values(n);
  for (double& v : values) v = sampler.next();
  return make_series(std::move(values));
}

// Direct per-point polynomial least-squares refit, solved with the dense
// test oracle rather than the library path.
double refit_at(const TimeSeries& y, std::int64_t t, std::int64_t lo,
                std::int64_t hi, int order) {
  const std::size_t m = static_cast<std::size_t>(order) + 1;
  oracle::Dense gram(m, m);
  std::vector<double> rhs(m, 0.0);
  for (std::int64_t s = lo; s <= hi; ++s) {
    const double x = static_cast<double>(s - t);
    std::vector<double> powers(2 * m - 1, 1.0);
    for (std::size_t j = 1; j < powers.size(); ++j)
      powers[j] = powers[j - 1] * x;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) gram.at(r, c) += powers[r + c];
      rhs[r] += powers[r] * y.value(static_cast<std::size_t>(s));
    }
  }
  return oracle::solve(gram, rhs)[0];
}

}  // namespace

TEST_CASE("ma_one_sided basics") {
  const TimeSeries y = make_series({1, 2, 3, 4});
  const FilterOutput out = ma_one_sided(y, 2);
  CHECK_FALSE(out.defined[0]);
  CHECK(out.defined[1]);
  CHECK(out.values[1] == doctest::Approx(1.5));
  CHECK(out.values[2] == doctest::Approx(2.5));
  CHECK(out.values[3] == doctest::Approx(3.5));

  const FilterOutput identity = ma_one_sided(y, 1);
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(identity.defined[t]);
    CHECK(identity.values[t] == y.value(t));
  }
  CHECK_THROWS_AS(ma_one_sided(y, 0), Error);
  CHECK_THROWS_AS(ma_one_sided(y, 5), Error);
}

TEST_CASE("ma_two_sided basics") {
  const TimeSeries y = make_series({1, 2, 3, 4, 5});
  const FilterOutput out = ma_two_sided(y, 1);
  CHECK_FALSE(out.defined[0]);
  CHECK_FALSE(out.defined[4]);
  CHECK(out.values[1] == doctest::Approx(2.0));
  CHECK(out.values[2] == doctest::Approx(3.0));
  CHECK(out.values[3] == doctest::Approx(4.0));

  const FilterOutput identity = ma_two_sided(y, 0);
  for (std::size_t t = 0; t < 5; ++t) CHECK(identity.values[t] == y.value(t));
  CHECK_THROWS_AS(ma_two_sided(y, -1), Error);
  CHECK_THROWS_AS(ma_two_sided(y, 3), Error);  // 2k+1 = 7 > 5
}

TEST_CASE("centered mean of a line is the line") {
  std::vector<double> values(30);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = 0.7 * static_cast<double>(i) - 2.0;
  const TimeSeries y = make_series(values);
  const FilterOutput out = ma_two_sided(y, 4);
  for (std::size_t t = 4; t + 4 < y.size(); ++t)
    CHECK(out.values[t] == doctest::Approx(y.value(t)).epsilon(1e-12));
}

TEST_CASE("ema recursion") {
  const TimeSeries constant = make_series(std::vector<double>(10, 3.25));
  const FilterOutput c = ema(constant, 12);
  for (std::size_t t = 0; t < 10; ++t)
    CHECK(c.values[t] == doctest::Approx(3.25).epsilon(1e-15));

  const FilterOutput step = ema(make_series({0.0, 1.0}), 3);  // alpha = 0.5
  CHECK(step.values[0] == 0.0);
  CHECK(step.values[1] == doctest::Approx(0.5));

  const TimeSeries y = make_series({5, -1, 2, 7});
  const FilterOutput identity = ema(y, 1);  // alpha = 1
  for (std::size_t t = 0; t < 4; ++t) CHECK(identity.values[t] == y.value(t));
  CHECK_THROWS_AS(ema(y, 0), Error);
}

TEST_CASE("sg_coefficients(5,2): normal-equations oracle and classic values") {
  // oracle: solve the 3x3 normal equations on the design i in {-2..2}
  oracle::Dense gram(3, 3);
  std::vector<double> rhs{1.0, 0.0, 0.0};
  for (int i = -2; i <= 2; ++i) {
    const double powers[5] = {1.0, static_cast<double>(i),
                              static_cast<double>(i * i),
                              static_cast<double>(i * i * i),
                              static_cast<double>(i * i * i * i)};
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) gram.at(r, c) += powers[r + c];
  }
  const std::vector<double> beta = oracle::solve(gram, rhs);
  const std::vector<double> got = sg_coefficients(5, 2);
  const double classic[5] = {-3.0 / 35, 12.0 / 35, 17.0 / 35, 12.0 / 35,
                             -3.0 / 35};
  for (int i = -2; i <= 2; ++i) {
    const double expected =
        beta[0] + beta[1] * i + beta[2] * i * i;
    CHECK(got[static_cast<std::size_t>(i + 2)] ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(got[static_cast<std::size_t>(i + 2)] ==
          doctest::Approx(classic[i + 2]).epsilon(1e-10));
  }
}

TEST_CASE("sg_coefficients moment conditions") {
  for (const auto [window, order] : {std::pair{5, 2}, {7, 3}, {11, 3}, {9, 4}}) {
    const std::vector<double> c = sg_coefficients(window, order);
    double sum = 0.0, moment = 0.0;
    const int half = (window - 1) / 2;
    for (int i = -half; i <= half; ++i) {
      sum += c[static_cast<std::size_t>(i + half)];
      moment += i * c[static_cast<std::size_t>(i + half)];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moment == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sg_coefficients(4, 2), Error);
  CHECK_THROWS_AS(sg_coefficients(5, 5), Error);
}

TEST_CASE("sg_two_sided reproduces cubics on the interior") {
  std::vector<double> values(40);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = static_cast<double>(i);
    values[i] = t * t * t;
  }
  const TimeSeries y = make_series(values);
  const FilterOutput out = sg_two_sided(y, 11, 3);
  for (std::size_t t = 5; t + 5 < y.size(); ++t)
    CHECK(out.values[t] == doctest::Approx(y.value(t)).epsilon(1e-8));
}

TEST_CASE("sg_two_sided on constants, including boundaries") {
  const TimeSeries y = make_series(std::vector<double>(25, 4.5));
  const FilterOutput out = sg_two_sided(y, 11, 3);
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(out.defined[t]);
    CHECK(out.values[t] == doctest::Approx(4.5).epsilon(1e-10));
  }
}

TEST_CASE("sg_two_sided interior equals per-point refit oracle") {
  const TimeSeries y = noise_series(50, 404);
  const FilterOutput out = sg_two_sided(y, 11, 3);
  for (std::int64_t t = 5; t + 5 < 50; ++t) {
    const double expected = refit_at(y, t, t - 5, t + 5, 3);
    CHECK(out.values[static_cast<std::size_t>(t)] ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  // boundary rows also agree with a truncated refit
  for (std::int64_t t : {0, 1, 4, 46, 49}) {
    const double expected =
        refit_at(y, t, std::max<std::int64_t>(0, t - 5),
                 std::min<std::int64_t>(49, t + 5), 3);
    CHECK(out.values[static_cast<std::size_t>(t)] ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("sg_one_sided reproduces lines exactly") {
  std::vector<double> values(30);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = -1.5 + 0.25 * static_cast<double>(i);
  const TimeSeries y = make_series(values);
  for (const auto [window, order] : {std::pair{11, 3}, {6, 1}, {8, 2}}) {
    const FilterOutput out = sg_one_sided(y, window, order);
    for (std::size_t t = static_cast<std::size_t>(window) - 1; t < y.size();
         ++t)
      CHECK(out.values[t] == doctest::Approx(y.value(t)).epsilon(1e-9));
  }
}

TEST_CASE("sg_one_sided equals trailing-window refit oracle") {
  const TimeSeries y = noise_series(40, 505);
  const FilterOutput out = sg_one_sided(y, 11, 3);
  for (std::int64_t t = 10; t < 40; ++t) {
    const double expected = refit_at(y, t, t - 10, t, 3);
    CHECK(out.values[static_cast<std::size_t>(t)] ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK_FALSE(out.defined[9]);
  CHECK(out.defined[10]);
}

TEST_CASE("property: filters are linear and preserve constants") {
  const TimeSeries a = noise_series(36, 1), b = noise_series(36, 2);
  std::vector<double> combo(36);
  for (std::size_t i = 0; i < 36; ++i)
    combo[i] = 2.0 * a.value(i) - 3.0 * b.value(i);
  const TimeSeries c = make_series(combo);

  const auto check_linear = [&](auto&& filter) {
    const FilterOutput fa = filter(a), fb = filter(b), fc = filter(c);
    for (std::size_t t = 0; t < 36; ++t) {
      if (!fc.defined[t]) continue;
      CHECK(fc.values[t] ==
            doctest::Approx(2.0 * fa.values[t] - 3.0 * fb.values[t])
                .epsilon(1e-9));
    }
  };
  check_linear([](const TimeSeries& s) { return ma_one_sided(s, 6); });
  check_linear([](const TimeSeries& s) { return ma_two_sided(s, 3); });
  check_linear([](const TimeSeries& s) { return ema(s, 12); });
  check_linear([](const TimeSeries& s) { return sg_two_sided(s, 11, 3); });
  check_linear([](const TimeSeries& s) { return sg_one_sided(s, 11, 3); });

  const TimeSeries ones = make_series(std::vector<double>(36, 1.0));
  for (const FilterOutput& out :
       {ma_one_sided(ones, 6), ma_two_sided(ones, 3), ema(ones, 12),
        sg_two_sided(ones, 11, 3), sg_one_sided(ones, 11, 3)}) {
    for (std::size_t t = 0; t < 36; ++t) {
      if (out.defined[t])
        CHECK(out.values[t] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
