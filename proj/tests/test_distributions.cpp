#include <doctest.h>

#include <cmath>

#include "bilat/distributions.hpp"
#include "oracles.hpp"

using namespace bilat;

TEST_SUITE("distributions") {
  TEST_CASE("t tail matches quadrature over a grid") {
    double worst = 0.0;
    for (double df : {1.0, 2.0, 3.0, 4.5, 10.0, 23.0, 50.0, 200.0}) {
      for (double t = -8.0; t <= 8.0; t += 0.25) {
        worst = std::max(worst, std::abs(student_t_sf(t, df) - oracle::t_sf_quadrature(t, df)));
      }
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("t tail closed forms") {
    // df = 1 is Cauchy, df = 2 has sf = 1/2 - t / (2 sqrt(t^2 + 2))
    for (double t : {-3.0, -0.5, 0.0, 0.7, 2.0, 10.0}) {
      CHECK(student_t_sf(t, 1.0) == doctest::Approx(0.5 - std::atan(t) / std::numbers::pi).epsilon(1e-12));
      CHECK(student_t_sf(t, 2.0) == doctest::Approx(0.5 - t / (2.0 * std::sqrt(t * t + 2.0))).epsilon(1e-12));
    }
  }

  TEST_CASE("t distribution symmetry and centre") {
    for (double df : {3.0, 10.0, 23.0}) {
      CHECK(student_t_sf(0.0, df) == 0.5);
      for (double t : {0.3, 1.7, 4.2}) {
        CHECK(student_t_sf(t, df) + student_t_sf(-t, df) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(student_t_cdf(t, df) == doctest::Approx(1.0 - student_t_sf(t, df)).epsilon(1e-14));
      }
    }
    CHECK(student_t_sf(INFINITY, 5.0) == 0.0);
    CHECK(student_t_sf(-INFINITY, 5.0) == 1.0);
  }

  TEST_CASE("known quantiles") {
    CHECK(student_t_sf(2.228138851986274, 10.0) == doctest::Approx(0.025).epsilon(1e-10));
    CHECK(student_t_sf(1.713871527747, 23.0) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_sf(0.0) == 0.5);
  }

  TEST_CASE("incomplete beta") {
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(a, 1) = x^a
    CHECK(regularized_incomplete_beta(3.5, 1.0, 0.6) == doctest::Approx(std::pow(0.6, 3.5)).epsilon(1e-13));
    for (double x : {0.1, 0.5, 0.9}) {
      CHECK(regularized_incomplete_beta(2.5, 4.0, x) + regularized_incomplete_beta(4.0, 2.5, 1.0 - x) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}
