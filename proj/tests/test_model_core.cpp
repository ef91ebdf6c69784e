#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ringbumps/field.hpp"
#include "ringbumps/firing.hpp"
#include "ringbumps/grid.hpp"
#include "ringbumps/rng.hpp"

using namespace ringbumps;

TEST_CASE("sigmoid firing values") {
  FiringFunction f = FiringFunction::sigmoid(0.1, 0.5);
  CHECK(f(0.5) == 0.5);  // logistic midpoint, exact
  CHECK(f(0.6) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
  CHECK(f(0.6) == doctest::Approx(0.7310585786300049).epsilon(1e-12));

  SUBCASE("bounded and overflow-safe out to |u - rho|/kappa = 1e4") {
    for (double u : {0.5 + 1e3, 0.5 - 1e3, 1e6, -1e6}) {
      double v = f(u);
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(f(0.5 + 1e3) > 0.0);
    CHECK(f(0.5 - 1e3) < 1.0);
    // strictly inside (0,1) wherever doubles can represent it
    CHECK(f(0.5 + 2.0) < 1.0);
    CHECK(f(0.5 - 2.0) > 0.0);
  }

  SUBCASE("strictly increasing") {
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
      double u1 = 6.0 * rng.uniform() - 3.0;
      double u2 = u1 + 1e-6 + rng.uniform();
      CHECK(f(u1) < f(u2));
    }
  }
}

TEST_CASE("heaviside firing") {
  FiringFunction h = FiringFunction::heaviside(0.5);
  CHECK(h(0.4) == 0.0);
  CHECK(h(0.5) == 1.0);  // indicator of u >= rho
  CHECK(h(0.6) == 1.0);
  CHECK_THROWS_AS(h.deriv(0.4), UnsupportedDerivative);
  CHECK_THROWS_AS(h.deriv2(0.4), UnsupportedDerivative);
  CHECK_THROWS_AS(firing_deriv(h, 0.4, 1), UnsupportedDerivative);
}

TEST_CASE("sigmoid derivatives") {
  FiringFunction f = FiringFunction::sigmoid(0.1, 0.5);
  CHECK(f.deriv(0.5) == doctest::Approx(2.5).epsilon(1e-15));  // 1/(4 kappa)
  CHECK(f.deriv2(0.5) == 0.0);  // inflection point

  SUBCASE("first derivative matches central differences") {
    // meaningful where the difference survives cancellation
    FiringFunction g = FiringFunction::sigmoid(1.0, 0.3);
    const double h = 1e-5;
    for (double u = -5.0; u <= 5.0; u += 0.25) {
      double fd = (g(u + h) - g(u - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(g.deriv(u)).epsilon(1e-7));
    }
    for (double u = 0.2; u <= 0.85; u += 0.05) {
      double fd = (f(u + h) - f(u - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(f.deriv(u)).epsilon(1e-7));
    }
  }

  SUBCASE("second derivative identity f'' = f'(1-2f)/kappa") {
    for (double u = 0.1; u <= 0.9; u += 0.1) {
      CHECK(f.deriv2(u) ==
            doctest::Approx(f.deriv(u) * (1.0 - 2.0 * f(u)) / 0.1).epsilon(1e-13));
    }
  }

  SUBCASE("kappa must be positive") {
    CHECK_THROWS_AS(FiringFunction::sigmoid(0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(FiringFunction::sigmoid(-1.0, 0.5), ConfigError);
  }

  SUBCASE("only first and second derivatives exist") {
    CHECK(firing_deriv(f, 0.5, 1) == 2.5);
    CHECK(firing_deriv(f, 0.5, 2) == 0.0);
    CHECK_THROWS_AS(firing_deriv(f, 0.5, 3), ConfigError);
    CHECK_THROWS_AS(firing_deriv(f, 0.5, 0), ConfigError);
  }
}

TEST_CASE("ring grid") {
  SUBCASE("n = 4") {
    RingGrid g = RingGrid::make(4);
    CHECK(g.x[0] == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK(g.x[1] == 0.0);
    CHECK(g.x[2] == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(g.x[3] == doctest::Approx(kPi).epsilon(1e-15));
  }
  SUBCASE("n = 1 degenerate grid") {
    RingGrid g = RingGrid::make(1);
    CHECK(g.x.size() == 1);
    CHECK(g.x[0] == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(g.bin_left(0) == -kPi);
  }
  SUBCASE("n = 2 bins partition (-pi, pi]") {
    RingGrid g = RingGrid::make(2);
    CHECK(g.bin_left(0) == -kPi);
    CHECK(g.x[0] == 0.0);
    CHECK(g.bin_left(1) == 0.0);
    CHECK(g.x[1] == doctest::Approx(kPi).epsilon(1e-15));
  }
  SUBCASE("n = 0 rejected") {
    CHECK_THROWS_AS(RingGrid::make(0), InvalidSize);
  }
  SUBCASE("spacing is exactly 2 pi / N up to rounding") {
    for (int n : {3, 7, 100, 501}) {
      RingGrid g = RingGrid::make(n);
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::abs(g.x[i] - g.bin_left(i) - g.spacing()));
      CHECK(worst < 1e-14);
      CHECK(g.x[n - 1] == doctest::Approx(kPi).epsilon(1e-15));
    }
  }
}

TEST_CASE("periodic quadrature") {
  for (int m : {128, 512}) {
    QuadGrid g = QuadGrid::make(m);
    CHECK(std::abs(quad_integrate(g, g.sinx.square()) - kPi) < 1e-12);
    CHECK(std::abs(quad_integrate(g, g.cosx.square()) - kPi) < 1e-12);
    CHECK(std::abs(quad_integrate(g, Eigen::ArrayXd::Ones(m)) - kTwoPi) < 1e-12);
    CHECK(std::abs(quad_integrate(g, g.sinx * g.cosx)) < 1e-12);
  }
  SUBCASE("resolution floor") {
    CHECK_THROWS_AS(QuadGrid::make(32), InvalidSize);
    CHECK_THROWS_AS(QuadGrid::make(129), InvalidSize);
  }
  SUBCASE("cosine tag is exact") {
    QuadGrid g = QuadGrid::make(128);
    Field f = cosine_field(g, 1.7, 0.4);
    REQUIRE(f.cosine.has_value());
    for (int k = 0; k < g.m; ++k)
      CHECK(f.v[k] == 1.7 * std::cos(g.x[k] + 0.4));
  }
}
