#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "rggcross/theory.hpp"

using namespace rggcross;
using namespace rggcross::theory;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Projection of a uniform point of B_d onto a plane has radial density
// proportional to rho (1 - rho^2)^((d-2)/2); moments via Beta functions.
double projected_radius_moment(int d, int k) {
  return boost::math::beta((k + 2) / 2.0, d / 2.0) / boost::math::beta(1.0, d / 2.0);
}

// The hit region for y is the parallelogram {a x - b z}, of area |x_L x z_L|,
// and it lies inside 2B_2: c_d = kappa_d^2 E|x_L| E|z_L| E|sin|.
double c_d_oracle(int d) {
  const double m1 = projected_radius_moment(d, 1);
  return kappa(d) * kappa(d) * (2.0 / kPi) * m1 * m1;
}

double c_prime_d_oracle(int d) {
  const double m1 = projected_radius_moment(d, 1);
  const double m2 = projected_radius_moment(d, 2);
  return std::pow(kappa(d), 3) * (4.0 / (kPi * kPi)) * m2 * m1 * m1;
}

// Radial quadrature of the ball section powers.
double ball_section_integral(int d, int power) {
  const double r = ConvexBody::ball(d).ball_radius();
  auto f = [&](double rho) {
    const double sec = kappa(d - 2) * std::pow(r * r - rho * rho, (d - 2) / 2.0);
    return 2.0 * kPi * rho * std::pow(sec, power);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, r);
}

bool within(const McEstimate& e, double expect, double sigmas = 4.0) {
  return std::abs(e.value - expect) <= sigmas * e.std_error + 1e-12;
}

}  // namespace

TEST_CASE("c_d matches the closed form and its cap") {
  for (int d : {2, 3, 4}) {
    RandomStream rng(100 + d);
    const McEstimate c = estimate_c_d(d, 2'000'000, rng);
    INFO("d = " << d << " c_d = " << c.value << " +- " << c.std_error);
    CHECK(within(c, c_d_oracle(d)));
    CHECK(c.value <= 2.0 * kPi * kappa(d) * kappa(d) + 4.0 * c.std_error);
    const double hit = c.value / (kappa(d) * 4.0 * kPi * kappa(d));
    CHECK(hit <= 0.5);
  }
  CHECK(c_d_oracle(3) == Approx(3.876).epsilon(1e-3));
}

TEST_CASE("c_d self-consistency across seeds and planes") {
  RandomStream a(1), b(2), h(3);
  const McEstimate ca = estimate_c_d(2, 1'000'000, a);
  const McEstimate cb = estimate_c_d(2, 1'000'000, b);
  CHECK(std::abs(ca.value - cb.value) <= 4.0 * std::hypot(ca.std_error, cb.std_error));
  const Plane2 L = sample_plane_haar(3, h);
  const McEstimate ch = estimate_c_d(L, 1'000'000, h);
  CHECK(within(ch, c_d_oracle(3)));
}

TEST_CASE("mirrored offsets never both hit") {
  RandomStream rng(4);
  const McEstimate m = c_d_mirror_overlap(3, 500'000, rng);
  CHECK(m.value == 0.0);
}

TEST_CASE("c'_d matches the closed form and its cap") {
  for (int d : {2, 3, 4}) {
    RandomStream rng(200 + d);
    const McEstimate cp = estimate_c_prime_d(d, 2'000'000, rng);
    INFO("d = " << d << " c'_d = " << cp.value << " +- " << cp.std_error);
    CHECK(within(cp, c_prime_d_oracle(d)));
    CHECK(cp.value >= 0.0);
    CHECK(cp.value <= 2.0 * kPi * kappa(d) * c_d_oracle(d) + 4.0 * cp.std_error);
  }
  RandomStream a(5), b(6);
  const McEstimate x = estimate_c_prime_d(3, 1'000'000, a);
  const McEstimate y = estimate_c_prime_d(3, 1'000'000, b);
  CHECK(std::abs(x.value - y.value) <= 4.0 * std::hypot(x.std_error, y.std_error));
}

TEST_CASE("section integrals of the ball") {
  CHECK(I2_ball(3) == Approx(0.93052).epsilon(1e-4));
  CHECK(I3_ball(3) == Approx(0.92359).epsilon(1e-3));
  for (int d : {3, 4, 5}) {
    CHECK(I2_ball(d) == Approx(ball_section_integral(d, 2)).epsilon(1e-9));
    CHECK(I3_ball(d) == Approx(ball_section_integral(d, 3)).epsilon(1e-9));
    const auto W = ConvexBody::ball(d);
    RandomStream rng(300 + d);
    const Plane2 L = sample_plane_haar(d, rng);
    CHECK(within(I2(W, L, 1'000'000, rng), I2_ball(d)));
    CHECK(within(I3(W, L, 1'000'000, rng), I3_ball(d)));
  }
}

TEST_CASE("section integrals: trivial cases and Jensen") {
  RandomStream rng(7);
  for (const auto& W : {ConvexBody::ball(2), ConvexBody::cube(2)}) {
    CHECK(I2(W, Plane2::coordinate(2), 1000, rng).value == 1.0);
    CHECK(I3(W, Plane2::coordinate(2), 1000, rng).value == 1.0);
  }
  const auto cube = ConvexBody::cube(3);
  const McEstimate axis = I2(cube, Plane2::coordinate(3), 1000, rng);
  CHECK(axis.value == 1.0);
  CHECK(axis.std_error == 0.0);
  const Plane2 L = sample_plane_haar(3, rng);
  const McEstimate i2 = I2(cube, L, 200'000, rng);
  const McEstimate i3 = I3(cube, L, 200'000, rng);
  CHECK(i3.value + 4.0 * i3.std_error >= i2.value * i2.value - 8.0 * i2.value * i2.std_error);
  // An oblique plane lowers I2 below the axis value 1 (sections spread out).
  CHECK(i2.value < 1.0 - 4.0 * i2.std_error);
}

TEST_CASE("S1 closed form for the ball, S2 nested oracle") {
  const auto W = ConvexBody::ball(3);
  const Plane2 L = Plane2::coordinate(3);
  RandomStream rng(8);
  // The direction of v1 - v2 is isotropic: E (1 - sqrt(1 - u^2))^2 with
  // u uniform on [-1, 1] equals 5/3 - pi/2.
  const McEstimate s1 = S1(W, L, WeightKind::InverseSquare, 2'000'000, rng);
  CHECK(within(s1, 5.0 / 3.0 - kPi / 2.0));
  CHECK(s1.value >= 0.0);
  CHECK(s1.value <= 1.0);
  CHECK(S1(ConvexBody::ball(2), Plane2::coordinate(2), WeightKind::InverseSquare, 1000, rng).value == 0.0);
  CHECK(S2(ConvexBody::cube(2), Plane2::coordinate(2), WeightKind::Unit, 1000, rng).value == 0.0);

  const McEstimate s2 = S2(W, L, WeightKind::InverseSquare, 1'000'000, rng);
  CHECK(s2.value >= 0.0);
  // S2 = E_v (E_v1 g)^2, estimated with two independent inner means.
  MeanAccumulator outer;
  for (int i = 0; i < 4000; ++i) {
    const auto v = sample_uniform_body(W, rng);
    double a = 0.0, b = 0.0;
    const int inner = 200;
    for (int j = 0; j < inner; ++j) {
      a += stress_term(v, sample_uniform_body(W, rng), L, WeightKind::InverseSquare);
      b += stress_term(v, sample_uniform_body(W, rng), L, WeightKind::InverseSquare);
    }
    outer.add((a / inner) * (b / inner));
  }
  CHECK(std::abs(outer.mean() - s2.value) <= 4.0 * std::hypot(outer.std_error(), s2.std_error));
}

TEST_CASE("IW: limit, bound and support") {
  const auto W = ConvexBody::ball(3);
  const Plane2 L = Plane2::coordinate(3);
  const double r = W.ball_radius();
  const double delta = 0.01;
  RandomStream rng(9);
  const Vector origin{0.0, 0.0, 0.0};
  const McEstimate iw = IW(origin, W, L, delta, 2'000'000, rng);
  const double scale = std::pow(delta, 8);
  RandomStream rc(10);
  const McEstimate c = estimate_c_d(3, 2'000'000, rc);
  const double limit = c.value * 2.0 * r;
  INFO("IW/delta^8 = " << iw.value / scale << " limit " << limit);
  CHECK(std::abs(iw.value / scale / limit - 1.0) < 0.10);
  // Maximal section of the ball is the diameter 2r.
  const double bound = c_d_oracle(3) * scale * 2.0 * r;
  CHECK(iw.value <= bound * (1.0 + 10.0 * iw.std_error / iw.value));

  const Vector far{r + 3.0 * delta, 0.0, 0.0};
  CHECK(IW(far, W, L, delta, 100'000, rng).value == 0.0);
  CHECK_THROWS_AS(IW(origin, W, L, 0.0, 10, rng), std::invalid_argument);
}

TEST_CASE("covariance lower bound") {
  const auto W = ConvexBody::ball(3);
  const Plane2 L = Plane2::coordinate(3);
  RandomStream rng(11);
  const McEstimate c{c_d_oracle(3), 0.0, 1};
  const double t = 1000.0, delta = 0.17;
  const McEstimate cov = cov_lower_bound(W, L, WeightKind::InverseSquare, t, delta, c, 1'000'000, rng);
  CHECK(cov.value >= 0.0);
  // Nested oracle: E_v[ sec(v) E_v1 g(v, v1) ].
  MeanAccumulator nested;
  for (int i = 0; i < 20000; ++i) {
    const auto v = sample_uniform_body(W, rng);
    const double sec = *section_volume_exact(W, L, L.project(v));
    double g = 0.0;
    for (int j = 0; j < 50; ++j) g += stress_term(v, sample_uniform_body(W, rng), L, WeightKind::InverseSquare);
    nested.add(sec * g / 50.0);
  }
  const double lead = std::pow(t, 5) / 16.0 * c.value * std::pow(delta, 8);
  CHECK(std::abs(cov.value - lead * nested.mean()) <= 4.0 * std::hypot(cov.std_error, lead * nested.std_error()));
  RandomStream r2(12);
  CHECK(cov_lower_bound(ConvexBody::ball(2), Plane2::coordinate(2), WeightKind::InverseSquare, t, 0.1, 1000, r2).value ==
        0.0);
}

TEST_CASE("moment predictions") {
  const auto W = ConvexBody::ball(3);
  const Constants k = compute_constants(W, Plane2::coordinate(3), "coordinate", WeightKind::InverseSquare, 200'000, 5);
  const auto p = predict_moments(W, 1000.0, 0.1, k);
  REQUIRE(p.var_cr_lb);
  REQUIRE(p.var_cr_ub);
  CHECK(*p.var_cr_lb <= *p.var_cr_ub);
  CHECK(p.var_stress >= 0.0);
  REQUIRE(p.corr_lb);
  CHECK(*p.corr_lb >= -1.0);
  CHECK(*p.corr_lb <= 1.0);
  CHECK(p.e_m == Approx(kappa(3) / 2.0 * 1e6 * 1e-3));
  CHECK(p.e_cr == Approx(k.c_d.value * 1e12 * 1e-8 * k.I2.value / 8.0));
  const auto p2 = predict_moments(W, 2000.0, 0.1, k);
  CHECK(p2.e_cr == Approx(16.0 * p.e_cr));
  // Dense schedule: the upper factor approaches the lower one.
  const auto near = predict_moments(W, 1e4, std::pow(1e4, -0.25), k);
  const auto far = predict_moments(W, 1e8, std::pow(1e8, -0.25), k);
  CHECK(*far.var_cr_ub / *far.var_cr_lb < *near.var_cr_ub / *near.var_cr_lb);

  const auto W2 = ConvexBody::ball(2);
  const Constants k2 = compute_constants(W2, Plane2::coordinate(2), "coordinate", WeightKind::InverseSquare, 200'000, 5);
  const auto q = predict_moments(W2, 500.0, 0.05, k2);
  CHECK_FALSE(q.var_cr_lb.has_value());
  CHECK_FALSE(q.var_cr_ub.has_value());
  CHECK(k2.I2.value == 1.0);
  CHECK(q.e_cr == Approx(k2.c_d.value / 8.0 * std::pow(500.0, 4) * std::pow(0.05, 6)));
  CHECK(q.e_stress == 0.0);
}

TEST_CASE("estimators do not depend on the worker count") {
  const auto W = ConvexBody::cube(3);
  RandomStream h(13);
  const Plane2 L = sample_plane_haar(3, h);
  const Constants one = compute_constants(W, L, "haar", WeightKind::InverseSquare, 300'000, 77, 1);
  const Constants four = compute_constants(W, L, "haar", WeightKind::InverseSquare, 300'000, 77, 4);
  CHECK(one.c_d.value == four.c_d.value);
  CHECK(one.I2.value == four.I2.value);
  CHECK(one.I3.std_error == four.I3.std_error);
  CHECK(one.S2.value == four.S2.value);
  CHECK(one.section_stress.value == four.section_stress.value);
}

TEST_CASE("I2 spread over planes") {
  RandomStream rng(14);
  const PlaneDispersion ball = i2_plane_dispersion(ConvexBody::ball(3), 12, 100'000, rng);
  for (const auto& e : ball.per_plane) CHECK(within(e, I2_ball(3)));
  CHECK(std::abs(ball.bracket) < 4.0 * ball.noise + 1e-6);
  const PlaneDispersion cube = i2_plane_dispersion(ConvexBody::cube(3), 12, 100'000, rng);
  CHECK(cube.bracket > 0.0);
  CHECK(cube.second_moment >= cube.mean * cube.mean);
}
