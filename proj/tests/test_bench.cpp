#include <doctest.h>

#include <cmath>

#include "geclust/bench.hpp"
#include "geclust/error.hpp"

using namespace geclust;

TEST_CASE("exact power law is recovered") {
  std::vector<double> x, y;
  for (double s : {100.0, 300.0, 1000.0, 3000.0, 10000.0}) {
    x.push_back(s);
    y.push_back(2e-7 * std::pow(s, 1.5));
  }
  const auto fit = fit_power_law(x, y);
  CHECK(std::abs(fit.exponent - 1.5) < 1e-9);
  CHECK(std::abs(fit.intercept - std::log(2e-7)) < 1e-9);
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.ci_low <= fit.exponent);
  CHECK(fit.ci_high >= fit.exponent);
}

TEST_CASE("confidence interval widens with noise") {
  const std::vector<double> x{1, 2, 4, 8, 16, 32};
  const std::vector<double> y{1.1, 1.9, 4.3, 7.6, 16.9, 30.0};
  const auto fit = fit_power_law(x, y);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.ci_high - fit.ci_low > 0.0);
}

TEST_CASE("fit input checks") {
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(fit_power_law(three, three), ConfigError);
  const std::vector<double> x{1, 2, 3, 4}, y{1, 0, 3, 4};
  CHECK_THROWS_AS(fit_power_law(x, y), ConfigError);
}

TEST_CASE("small node-mode run") {
  BenchConfig cfg;
  cfg.sizes = {100, 200, 400, 800};
  cfg.pairs_per_size = 3;
  const auto r = bench_runtime(cfg);
  REQUIRE(r.points.size() == 4);
  for (const auto& p : r.points) {
    CHECK(p.nodes <= static_cast<std::size_t>(p.nominal));
    CHECK(p.query_seconds > 0.0);
  }
  CHECK(format_bench_csv(r).rfind("mode,nominal", 0) == 0);
  cfg.sizes = {100, 200, 400};
  CHECK_THROWS_AS(bench_runtime(cfg), ConfigError);
}
