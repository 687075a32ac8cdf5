#include <cmath>
#include <vector>

#include "doctest.h"
#include "finscale/error.hpp"
#include "finscale/series.hpp"

using namespace finscale;

namespace {

PriceSeries make_series(const std::vector<double>& prices, std::int64_t step = 60) {
  PriceSeries ps;
  ps.symbol = "TEST";
  ps.base_interval = step;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    ps.timestamps.push_back(static_cast<std::int64_t>(i) * step);
    ps.prices.push_back(prices[i]);
  }
  return ps;
}

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("log returns of 1, e, e^2") {
    const PriceSeries ps = make_series({1.0, std::exp(1.0), std::exp(2.0)});
    const ReturnSeries r1 = log_returns(ps, 1);
    REQUIRE(r1.values.size() == 2);
    CHECK(r1.values[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r1.dt == 60);
    CHECK(r1.start_timestamps == std::vector<std::int64_t>{0, 60});

    const ReturnSeries r2 = log_returns(ps, 2);
    REQUIRE(r2.values.size() == 1);
    CHECK(r2.values[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(r2.dt == 120);
  }

  TEST_CASE("geometric ramp gives constant returns at every lag") {
    std::vector<double> prices(101);
    for (int i = 0; i <= 100; ++i) prices[i] = std::pow(1.01, i);
    const PriceSeries ps = make_series(prices);
    const ReturnSeries r = log_returns(ps, 5);
    REQUIRE(r.values.size() == 20);
    const double expect = 0.04975165426584046;  // 5 ln 1.01
    for (double v : r.values) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("overlap yields stride-one windows") {
    std::vector<double> prices(11, 1.0);
    for (int i = 0; i <= 10; ++i) prices[i] = std::exp(0.01 * i);
    const PriceSeries ps = make_series(prices);
    ReturnOptions opt;
    opt.overlap = true;
    const ReturnSeries r = log_returns(ps, 3, opt);
    CHECK(r.values.size() == 8);  // 11 prices, lag 3, stride 1
    const ReturnSeries rn = log_returns(ps, 3);
    CHECK(rn.values.size() == 3);  // stride 3
  }

  TEST_CASE("aggregate equals recomputing returns at the coarser lag") {
    std::vector<double> prices;
    double p = 100.0;
    for (int i = 0; i < 61; ++i) {
      prices.push_back(p);
      p *= std::exp(0.001 * ((i * 37) % 11 - 5));
    }
    const PriceSeries ps = make_series(prices);
    const ReturnSeries base = log_returns(ps, 1);
    const ReturnSeries agg = aggregate(base, 4);
    const ReturnSeries direct = log_returns(ps, 4);
    REQUIRE(agg.values.size() == direct.values.size());
    for (std::size_t i = 0; i < agg.values.size(); ++i)
      CHECK(agg.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-12));
    CHECK(agg.dt == direct.dt);
  }

  TEST_CASE("aggregate drops the trailing partial block") {
    ReturnSeries rs;
    rs.dt = 1;
    rs.values = {1, 2, 3, 4, 5, 6, 7};
    rs.start_timestamps = {0, 1, 2, 3, 4, 5, 6};
    const ReturnSeries agg = aggregate(rs, 3);
    REQUIRE(agg.values.size() == 2);
    CHECK(agg.values[0] == doctest::Approx(6.0));
    CHECK(agg.values[1] == doctest::Approx(15.0));
    CHECK(agg.dt == 3);
  }

  TEST_CASE("normalize leaves a zero-mean unit-variance pair unchanged") {
    ReturnSeries rs;
    rs.values = {1.0, -1.0};
    rs.start_timestamps = {0, 1};
    const ReturnSeries out = normalize(rs);
    CHECK(out.values[0] == 1.0);
    CHECK(out.values[1] == -1.0);
    CHECK(out.normalized);
  }

  TEST_CASE("normalize of 2,4,6") {
    ReturnSeries rs;
    rs.values = {2.0, 4.0, 6.0};
    rs.start_timestamps = {0, 1, 2};
    const ReturnSeries out = normalize(rs);
    const double s = 1.224744871391589;  // sqrt(3/2)
    CHECK(out.values[0] == doctest::Approx(-s).epsilon(1e-15));
    CHECK(out.values[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(out.values[2] == doctest::Approx(s).epsilon(1e-15));
    CHECK(out.sample_mean == doctest::Approx(4.0));
    CHECK(out.sample_std == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
  }

  TEST_CASE("normalize is exactly idempotent") {
    ReturnSeries rs;
    rs.values = {0.3, -1.2, 2.5, 0.1, -0.9};
    rs.start_timestamps = {0, 1, 2, 3, 4};
    const ReturnSeries once = normalize(rs);
    const ReturnSeries twice = normalize(once);
    for (std::size_t i = 0; i < once.values.size(); ++i) CHECK(once.values[i] == twice.values[i]);
  }

  TEST_CASE("normalize rejects a constant series") {
    ReturnSeries rs;
    rs.values = {1.0, 1.0, 1.0};
    rs.start_timestamps = {0, 1, 2};
    CHECK_THROWS_AS(normalize(rs), DataError);
  }

  TEST_CASE("session gap filter drops spanning windows") {
    PriceSeries ps;
    ps.symbol = "T";
    ps.base_interval = 60;
    ps.timestamps = {0, 60, 120, 600, 660};
    ps.prices = {1.0, 1.1, 1.2, 1.3, 1.4};
    ReturnOptions opt;
    opt.session_gap_factor = 2.0;
    const ReturnSeries r = log_returns(ps, 1, opt);
    CHECK(r.values.size() == 3);  // the 120 -> 600 window is dropped
    const ReturnSeries keep_all = log_returns(ps, 1);
    CHECK(keep_all.values.size() == 4);
  }

  TEST_CASE("price series invariants are enforced") {
    PriceSeries ps = make_series({1.0, 2.0, 3.0});
    CHECK_NOTHROW(validate_price_series(ps));
    ps.prices[1] = -2.0;
    CHECK_THROWS_AS(validate_price_series(ps), DataError);
    ps.prices[1] = 2.0;
    ps.timestamps[2] = ps.timestamps[1];
    CHECK_THROWS_AS(validate_price_series(ps), DataError);
    PriceSeries single = make_series({1.0});
    CHECK_THROWS_AS(validate_price_series(single), DataError);
  }

  TEST_CASE("moment helpers") {
    const std::vector<double> v = {2.0, 4.0, 6.0};
    CHECK(mean_of(v) == doctest::Approx(4.0));
    CHECK(population_std_of(v) == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
  }
}
