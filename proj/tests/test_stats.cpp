#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "rggcross/random.hpp"
#include "rggcross/stats.hpp"

using namespace rggcross;
using doctest::Approx;

TEST_CASE("moments") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{2, 4, 6, 8};
  CHECK(stats::mean(x) == Approx(2.5));
  CHECK(stats::variance(x) == Approx(5.0 / 3.0));
  CHECK(stats::covariance(x, y) == Approx(10.0 / 3.0));
  CHECK(stats::pearson(x, y) == Approx(1.0));
  const std::vector<double> c{3, 3, 3, 3};
  CHECK(std::isnan(stats::pearson(x, c)));
}

TEST_CASE("Student t quantiles") {
  CHECK(stats::student_t_quantile(0.95, 19) == Approx(2.0930).epsilon(1e-4));
  CHECK(stats::student_t_quantile(0.95, 1e6) == Approx(1.95996).epsilon(1e-4));
}

TEST_CASE("batch-means intervals cover and shrink") {
  RandomStream rng(8);
  int covered = 0;
  double w_small = 0.0, w_large = 0.0;
  const int trials = 400;
  for (int k = 0; k < trials; ++k) {
    std::vector<double> a, b;
    for (int i = 0; i < 200; ++i) a.push_back(rng.normal());
    for (int i = 0; i < 2000; ++i) b.push_back(rng.normal());
    const auto ci = stats::batch_means_ci(a);
    covered += ci.contains(0.0);
    w_small += ci.half_width();
    w_large += stats::batch_means_ci(b).half_width();
    CHECK(ci.estimate == Approx(stats::mean(a)));
  }
  CHECK(covered >= 360);  // nominal 380 of 400
  CHECK(w_large < 0.4 * w_small);
  std::vector<double> v;
  for (int i = 0; i < 4000; ++i) v.push_back(2.0 * rng.normal());
  CHECK(stats::batch_variance_ci(v).contains(4.0));
}

TEST_CASE("Fisher z") {
  CHECK(stats::fisher_z_p_value(0.0, 100) == Approx(0.5));
  CHECK(stats::fisher_z_p_value(0.3, 200) < 1e-4);
  CHECK(stats::fisher_z_p_value(-0.3, 200) > 0.99);
  CHECK(std::isnan(stats::fisher_z_p_value(0.5, 3)));
}

TEST_CASE("ordinary least squares") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = stats::ols(x, y);
  CHECK(f.slope == Approx(2.0));
  CHECK(f.intercept == Approx(1.0));
  CHECK(f.slope_std_error == Approx(0.0));
  CHECK_THROWS_AS(stats::ols(std::vector<double>{1, 1}, std::vector<double>{0, 1}), std::invalid_argument);
}
