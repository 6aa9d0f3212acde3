#include <cmath>
#include <stdexcept>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "emulsion/deloc_var.hpp"
#include "emulsion/lattice_entropy.hpp"

using namespace emulsion;

namespace {
const double kAlphas[] = {0.0, 0.5, 1.0, 1.5, 2.0};
const double kBetas[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
const double kRhos[] = {0.25, 0.5, 0.75};
}  // namespace

TEST_CASE("u and v") {
  for (double a : {-1.0, 0.0, 2.0}) {
    CHECK(u_of_x(2.5, a) == doctest::Approx(0.5 * a + 0.5 * std::log(5.0)).epsilon(1e-14));
    CHECK(u_of_x(2.0, a) == doctest::Approx(0.5 * a + std::log(2.0)).epsilon(1e-14));
    for (double x : {2.1, 3.0, 17.0, 1e6}) {
      CHECK(v_of_y(x, a) == u_of_x(x, a));
      CHECK(u_of_x(x, a) == doctest::Approx(dense::xu_plain(x, a) / x).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(u_of_x(1.9, 0.0), std::domain_error);
}

TEST_CASE("equal couplings") {
  for (double rho : {0.1, 0.5, 0.9}) {
    const auto s = solve_deloc({0.7, 0.7, rho});
    CHECK(s.x_bar == 2.5);
    CHECK(s.y_bar == 2.5);
    CHECK(s.F == doctest::Approx(0.35 + kKappaStar).epsilon(1e-14));
    CHECK(F_of_rho({0.3, 0.3, rho}) == doctest::Approx(0.15 + kKappaStar).epsilon(1e-14));
    CHECK(F_of_rho({0.7, 0.2, rho}) > 0.5 * (rho * 0.7 + (1 - rho) * 0.2));
  }
  CHECK(F_of_rho({1.0, -1.0, 1.0}) == doctest::Approx(0.5 + kKappaStar));
  CHECK(F_of_rho({1.0, -1.0, 0.0}) == doctest::Approx(-0.5 + kKappaStar));
  CHECK_THROWS_AS(solve_deloc({1.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("residuals, identity and ordering on the grid") {
  for (double a : kAlphas)
    for (double b : kBetas)
      for (double rho : kRhos) {
        const auto s = solve_deloc({a, b, rho});
        CHECK(std::abs(s.residual1) < 1e-10);
        CHECK(std::abs(s.residual2) < 1e-10);
        const double lhs = u_of_x(s.x_bar, a) - v_of_y(s.y_bar, b);
        // The weights come out as (1-rho)/x + rho/y when the two stationarity
        // equations are substituted into u(x) - v(y).
        const double rhs = ((1 - rho) / s.x_bar + rho / s.y_bar) * std::log((s.x_bar - 2) / (s.y_bar - 2));
        CHECK(std::abs(lhs - rhs) < 1e-9);
        if (a > b) {
          CHECK(s.y_bar > 2.0);
          CHECK(s.y_bar < kAStar);
          CHECK(s.x_bar > kAStar);
        }
      }
}

TEST_CASE("dense-grid oracle") {
  for (double a : kAlphas)
    for (double b : kBetas) {
      const auto g = dense::make_grid(a, b, 2.0, 100.0);
      for (double rho : kRhos) {
        const auto s = solve_deloc({a, b, rho});
        REQUIRE(s.x_bar < 100.0);
        REQUIRE(s.y_bar < 100.0);
        CHECK(std::abs(dense::F(g, rho) - s.F) < 1e-5);
      }
    }
}

TEST_CASE("symmetries") {
  for (double a : kAlphas)
    for (double b : kBetas)
      for (double rho : kRhos) {
        const double f = F_of_rho({a, b, rho});
        CHECK(std::abs(f - F_of_rho({b, a, 1 - rho})) < 1e-10);
        CHECK(std::abs(f - (0.5 * (a + b) + F_of_rho({-b, -a, rho}))) < 1e-10);
      }
}

TEST_CASE("monotonicity") {
  const double h = 1e-4;
  for (double C : {0.2, 1.0, 3.0})
    for (double rho = 0.1; rho < 0.95; rho += 0.1) {
      const auto s0 = solve_deloc({C, 0.0, rho});
      const auto s1 = solve_deloc({C, 0.0, rho + h});
      CHECK(s1.x_bar < s0.x_bar);
      CHECK(s1.y_bar < s0.y_bar);
      CHECK(F_of_rho({C, 0.0, rho + h}) > F_of_rho({C, 0.0, rho}));
      const auto c1 = solve_deloc({C + h, 0.0, rho});
      CHECK(c1.x_bar > s0.x_bar);
      CHECK(c1.y_bar < s0.y_bar);
    }
}

TEST_CASE("limits in rho") {
  for (double C : {0.5, 1.0, 2.0 * std::log(5.0), 3.0}) {
    const auto top = solve_deloc({C, 0.0, 1 - 1e-8});
    CHECK(std::abs(top.x_bar - kAStar) < 1e-3);
    CHECK(std::abs(top.y_bar - 10.0 / (5.0 - std::exp(-C))) < 1e-3);
    const auto bottom = solve_deloc({C, 0.0, 1e-8});
    if (C < std::log(5.0)) {
      CHECK(std::abs(bottom.x_bar - 10.0 * std::exp(-C) / (5.0 * std::exp(-C) - 1.0)) < 1e-3);
      CHECK(std::abs(bottom.y_bar - kAStar) < 1e-3);
    } else {
      CHECK(std::abs(bottom.y_bar - 2.0 / (1.0 - std::exp(-C))) < 1e-3);
      CHECK(bottom.x_bar > 1e3);
    }
    CHECK(std::abs(bottom.residual1) < 1e-10);
  }
  const auto s = solve_deloc({std::log(5.0), 0.0, 1 - 1e-8});
  CHECK(std::abs(s.y_bar - 25.0 / 12.0) < 1e-4);
  const auto big = solve_deloc({2.0 * std::log(5.0), 0.0, 1e-8});
  CHECK(big.x_unbounded);
  CHECK(std::abs(big.y_bar - 2.0 / (1.0 - 1.0 / 25.0)) < 1e-3);
  CHECK(std::isfinite(big.F));
}
