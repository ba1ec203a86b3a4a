#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_utils.hpp"
#include "strongtrees/special_functions.hpp"

using namespace strongtrees;

TEST_CASE("polygamma values at 1 match the classical constants") {
  CHECK(polygamma(PolyOrder::psi, 1.0) ==
        doctest::Approx(-oracle::kEulerGamma).epsilon(1e-13));
  CHECK(polygamma(PolyOrder::psi_prime, 1.0) ==
        doctest::Approx(oracle::kPi * oracle::kPi / 6.0).epsilon(1e-13));
  CHECK(polygamma(PolyOrder::psi_second, 1.0) ==
        doctest::Approx(-2.0 * oracle::kZeta3).epsilon(1e-13));
}

TEST_CASE("digamma at 2.5 matches the half-integer closed form") {
  const double expected = 8.0 / 3.0 - oracle::kEulerGamma - 2.0 * std::log(2.0);
  CHECK(digamma(2.5) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(digamma(2.5) == doctest::Approx(0.7031566406).epsilon(1e-9));
}

TEST_CASE("polygamma agrees with integer closed forms") {
  for (int k : {0, 1, 2, 3, 5, 10, 50, 100, 500, 1000}) {
    for (int order = 0; order <= 2; ++order) {
      const double expected = oracle::psi_closed_integer(order, k);
      const double got =
          polygamma(static_cast<PolyOrder>(order), static_cast<double>(k) + 1.0);
      CHECK(std::abs(got - expected) <=
            1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("polygamma agrees with half-integer closed forms") {
  for (int k = 0; k <= 100; ++k) {
    for (int order = 0; order <= 2; ++order) {
      const double expected = oracle::psi_closed_half_integer(order, k);
      const double got =
          polygamma(static_cast<PolyOrder>(order), static_cast<double>(k) + 0.5);
      CHECK(std::abs(got - expected) <=
            1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("digamma recurrence psi(z+1) - psi(z) = 1/z") {
  for (double z = 0.5; z <= 100.0; z += 0.37) {
    CHECK(digamma(z + 1.0) - digamma(z) == doctest::Approx(1.0 / z).epsilon(1e-12));
  }
}

TEST_CASE("polygamma rejects nonpositive arguments") {
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(trigamma(0.0), std::domain_error);
  CHECK_THROWS_AS(tetragamma(-0.1), std::domain_error);
}

TEST_CASE("HContext rejects invalid parameters") {
  CHECK_THROWS_AS(HContext(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HContext(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HContext(3, -2.0), std::invalid_argument);
}

TEST_CASE("h vanishes at the endpoints") {
  const HContext ctx{10, 1.0};
  CHECK(h_family(PolyOrder::psi, 0.0, ctx) == 0.0);
  CHECK(h_family(PolyOrder::psi, 1.0, ctx) == 0.0);
}

TEST_CASE("h(0.5) with n=2, s=1 equals ln 2 - 5/12") {
  const HContext ctx{2, 1.0};
  const double expected = std::log(2.0) - 5.0 / 12.0;
  CHECK(h_family(PolyOrder::psi, 0.5, ctx) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(h_family(PolyOrder::psi, 0.5, ctx) == doctest::Approx(0.2764805).epsilon(1e-6));
}

TEST_CASE("h rejects u outside the unit interval") {
  const HContext ctx{5, 1.0};
  CHECK_THROWS_AS(h_family(PolyOrder::psi, -0.01, ctx), std::domain_error);
  CHECK_THROWS_AS(h_family(PolyOrder::psi, 1.01, ctx), std::domain_error);
}

TEST_CASE("h is strictly concave and h'' is increasing") {
  for (std::int64_t n : {0, 1, 2, 5, 10, 100, 1000, 10000}) {
    for (double s : {1.0, 2.0}) {
      const HContext ctx{n, s};
      double prev = 0.0;
      bool have_prev = false;
      for (double u = 0.01; u < 1.0; u += 0.01) {
        const double h2 = h_family(PolyOrder::psi_second, u, ctx);
        CHECK(h2 < 0.0);
        if (have_prev) CHECK(h2 > prev);
        prev = h2;
        have_prev = true;
      }
    }
  }
}

TEST_CASE("finite differences tie the h family together") {
  const double step = 1e-5;
  for (std::int64_t n : {2, 10, 100}) {
    for (double s : {1.0, 2.0}) {
      const HContext ctx{n, s};
      for (double u = 0.05; u <= 0.951; u += 0.05) {
        const double d0 = (h_family(PolyOrder::psi, u + step, ctx) -
                           h_family(PolyOrder::psi, u - step, ctx)) /
                          (2.0 * step);
        CHECK(std::abs(d0 - h_family(PolyOrder::psi_prime, u, ctx)) <= 1e-6);
        const double d1 = (h_family(PolyOrder::psi_prime, u + step, ctx) -
                           h_family(PolyOrder::psi_prime, u - step, ctx)) /
                          (2.0 * step);
        CHECK(std::abs(d1 - h_family(PolyOrder::psi_second, u, ctx)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("h derivatives match the closed forms at counts") {
  // Cross-check h' and h'' against the per-count closed forms
  // h'(u_i) = psi(n+s+1) - psi(n_i+st_i+1) - (n_i+st_i) psi'(n_i+st_i+1).
  const std::int64_t n = 7;
  const double s = 1.5;
  const HContext ctx{n, s};
  const double ns = static_cast<double>(n) + s;
  for (std::int64_t ni : {0, 1, 3, 7}) {
    const double ti = 0.25;
    const double arg = static_cast<double>(ni) + s * ti;
    const double u = arg / ns;
    const double hp = digamma(ns + 1.0) - digamma(arg + 1.0) -
                      arg * trigamma(arg + 1.0);
    const double hpp =
        -2.0 * ns * trigamma(arg + 1.0) - arg * ns * tetragamma(arg + 1.0);
    CHECK(h_family(PolyOrder::psi_prime, u, ctx) ==
          doctest::Approx(hp).epsilon(1e-11));
    CHECK(h_family(PolyOrder::psi_second, u, ctx) ==
          doctest::Approx(hpp).epsilon(1e-11));
  }
}
