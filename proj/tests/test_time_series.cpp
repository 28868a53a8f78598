#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "albama/time_series.hpp"
#include "json.hpp"

using namespace albama;

namespace {

std::string write_temp_csv(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

TimeSeries make_series(YearMonth start, std::vector<double> values) {
  return TimeSeries(start, std::move(values));
}

}  // namespace

TEST_CASE("YearMonth arithmetic and parsing") {
  CHECK(YearMonth{2020, 12}.plus_months(1) == YearMonth{2021, 1});
  CHECK(YearMonth{2020, 1}.plus_months(-1) == YearMonth{2019, 12});
  CHECK(YearMonth{2021, 3}.months_since(YearMonth{2020, 12}) == 3);
  CHECK(YearMonth::parse("2020-07") == YearMonth{2020, 7});
  CHECK(YearMonth::parse("2020-07-15") == YearMonth{2020, 7});
  CHECK(YearMonth{2020, 7}.str() == "2020-07");
  CHECK_THROWS_AS(YearMonth::parse("2020/07"), Error);
  CHECK_THROWS_AS(YearMonth::parse("2020-13"), Error);
}

TEST_CASE("load_csv ingests well-formed rows") {
  const auto path = write_temp_csv("albama_ok.csv",
                                   "date,value\n"
                                   "2020-01,1.0\n"
                                   "2020-02,2.0\n"
                                   "2020-03,3.0\n");
  const TimeSeries s = load_csv(path, "date", "value");
  REQUIRE(s.size() == 3);
  CHECK(s.start() == YearMonth{2020, 1});
  CHECK(s.value(2) == 3.0);
}

TEST_CASE("load_csv sorts rows by date") {
  const auto path = write_temp_csv("albama_unsorted.csv",
                                   "date,value\n"
                                   "2020-03,3.0\n"
                                   "2020-01,1.0\n"
                                   "2020-02,2.0\n");
  const TimeSeries s = load_csv(path, "date", "value");
  CHECK(s.value(0) == 1.0);
  CHECK(s.value(2) == 3.0);
}

TEST_CASE("load_csv distinct error kinds") {
  const auto gap = write_temp_csv("albama_gap.csv",
                                  "date,value\n2020-01,1\n2020-03,2\n");
  const auto dup = write_temp_csv("albama_dup.csv",
                                  "date,value\n2020-01,1\n2020-01,2\n");
  const auto nan = write_temp_csv("albama_nan.csv",
                                  "date,value\n2020-01,1\n2020-02,NaN\n");
  const auto baddate = write_temp_csv("albama_bd.csv",
                                      "date,value\n01/2020,1\n");
  const auto ok = write_temp_csv("albama_cols.csv", "date,value\n2020-01,1\n");

  const auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::usage;
  };
  CHECK(kind_of([&] { load_csv(gap, "date", "value"); }) ==
        ErrorKind::month_gap);
  CHECK(kind_of([&] { load_csv(dup, "date", "value"); }) ==
        ErrorKind::duplicate_month);
  CHECK(kind_of([&] { load_csv(nan, "date", "value"); }) ==
        ErrorKind::nonfinite_value);
  CHECK(kind_of([&] { load_csv(baddate, "date", "value"); }) ==
        ErrorKind::bad_date);
  CHECK(kind_of([&] { load_csv(ok, "date", "missing"); }) ==
        ErrorKind::missing_column);
}

TEST_CASE("transform: pct_change of constant series is zero") {
  const TimeSeries s = make_series({2020, 1}, {100.0, 100.0, 100.0});
  const TimeSeries out = transform(s, TransformKind::pct_change);
  REQUIRE(out.size() == 2);
  CHECK(out.value(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.value(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out.start() == YearMonth{2020, 2});
}

TEST_CASE("transform: annualized month-over-month growth") {
  const TimeSeries s = make_series({2020, 1}, {100.0, 101.0});
  const TimeSeries out = transform(s, TransformKind::annualized_mom);
  REQUIRE(out.size() == 1);
  const double expected = (std::pow(101.0 / 100.0, 12.0) - 1.0) * 100.0;
  CHECK(out.value(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(out.value(0) == doctest::Approx(12.682503013196977).epsilon(1e-10));
}

TEST_CASE("transform: yoy needs 13 points") {
  const TimeSeries s = make_series({2020, 1}, {1, 2, 3, 4, 5});
  CHECK_THROWS_AS(transform(s, TransformKind::yoy), Error);
}

TEST_CASE("transform: nonpositive values rejected for ratio transforms") {
  const TimeSeries s = make_series({2020, 1}, {1.0, -1.0, 2.0});
  CHECK_THROWS_AS(transform(s, TransformKind::log_diff), Error);
  CHECK_THROWS_AS(transform(s, TransformKind::pct_change), Error);
}

TEST_CASE("transform: constant-ratio series gives constant annualized rate") {
  // property: annualized_mom of x_t = x_0 * r^t is ((r^12 - 1) * 100) at
  // every index
  const double r = 1.003;
  std::vector<double> values(20);
  values[0] = 50.0;
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = values[i - 1] * r;
  const TimeSeries out =
      transform(make_series({2000, 1}, values), TransformKind::annualized_mom);
  const double expected = (std::pow(r, 12.0) - 1.0) * 100.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out.value(i) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("mask_for_window: full_ex_covid removes calendar 2020") {
  // 2019m1 .. 2021m12
  std::vector<double> values(36, 1.0);
  const TimeSeries s = make_series({2019, 1}, values);
  const IndexMask mask =
      mask_for_window(s, Window::named(WindowKind::full_ex_covid));
  for (std::size_t i = 0; i < 36; ++i) {
    const bool in_2020 = s.stamp(i).year == 2020;
    CHECK(mask[i] == !in_2020);
  }
  CHECK(mask.count() == 24);
}

TEST_CASE("mask_for_window: great recession clipped to series range") {
  std::vector<double> values(36, 1.0);
  const TimeSeries s = make_series({2010, 1}, values);  // 2010m1..2012m12
  const IndexMask mask =
      mask_for_window(s, Window::named(WindowKind::great_recession));
  for (std::size_t i = 0; i < 36; ++i)
    CHECK(mask[i] == (s.stamp(i) <= YearMonth{2011, 12}));
  CHECK(mask.count() == 24);
}

TEST_CASE("mask_for_window: full is all-true and idempotent") {
  const TimeSeries s = make_series({1999, 7}, {1, 2, 3, 4});
  const IndexMask a = mask_for_window(s, Window::named(WindowKind::full));
  const IndexMask b = mask_for_window(s, Window::named(WindowKind::full));
  CHECK(a.count() == 4);
  CHECK(a.included == b.included);
}

TEST_CASE("mask_for_window: empty custom window is an error") {
  const TimeSeries s = make_series({2000, 1}, {1, 2, 3});
  const Window w = Window::custom(YearMonth{1990, 1}, YearMonth{1990, 12});
  CHECK_THROWS_AS(mask_for_window(s, w), Error);
}

TEST_CASE("window parsing round trip") {
  CHECK(Window::parse("post_1990").kind == WindowKind::post_1990);
  CHECK(Window::parse("2008-01:2011-12").kind == WindowKind::custom);
  CHECK(Window::parse("2008-01:2011-12").name() == "2008-01:2011-12");
  CHECK_THROWS_AS(Window::parse("bogus"), Error);
}

TEST_CASE("TimeSeries rejects non-finite values") {
  CHECK_THROWS_AS(make_series({2000, 1}, {1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(make_series({2000, 1}, {}), Error);
}

TEST_CASE("csv writer round-trips exactly") {
  const TimeSeries s =
      make_series({2000, 1}, {0.1, -2.5, 3.141592653589793, 1e-17});
  const auto path =
      (std::filesystem::temp_directory_path() / "albama_rt.csv").string();
  write_csv(s, path);
  const TimeSeries back = load_csv(path, "date", "value");
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.value(i) == s.value(i));
    CHECK(back.stamp(i) == s.stamp(i));
  }
}

TEST_CASE("json writer emits valid records") {
  const TimeSeries s = make_series({2001, 11}, {1.25, -0.5, 3.0});
  const auto path =
      (std::filesystem::temp_directory_path() / "albama_ts.json").string();
  write_json(s, path);
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 3);
  CHECK(doc[0]["date"] == "2001-11");
  CHECK(doc[2]["date"] == "2002-01");
  CHECK(doc[1]["value"] == -0.5);
}

TEST_CASE("transform preserves monotone gap-free timestamps") {
  std::vector<double> values(30);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = 100.0 + static_cast<double>(i);
  const TimeSeries out = transform(make_series({2018, 11}, values),
                                   TransformKind::log_diff);
  CHECK(out.size() == 29);
  CHECK(out.start() == YearMonth{2018, 12});
  CHECK(out.stamp(out.size() - 1) == YearMonth{2021, 4});
}
