#include <cmath>

#include "doctest.h"
#include "emulsion/lattice_entropy.hpp"
#include "emulsion/optimize.hpp"

using namespace emulsion;

namespace {

// Gradient of f_ab differentiated term by term from its Stirling form.
double grad_delta(CrossingParams p, double d, double e) {
  const double up = 0.5 * (p.a + 1 - p.b);
  return std::log((up - d) * (p.b - d - e) / (d * d));
}
double grad_eps(CrossingParams p, double d, double e) {
  const double down = 0.5 * (p.a - 1 - p.b);
  return std::log((down - e) * (p.b - d - e) / (e * e));
}

// Brute 2-D grid max of f_ab as a check that the stationary point is the maximum.
double grid_max(CrossingParams p, int n) {
  const double up = 0.5 * (p.a + 1 - p.b), down = 0.5 * (p.a - 1 - p.b);
  double best = -1e300;
  for (int i = 0; i <= n; ++i) {
    const double d = std::min(up, p.b) * i / n;
    for (int j = 0; j <= n; ++j) {
      const double e = std::min(down, p.b - d) * j / n;
      best = std::max(best, crossing_objective(p, d, e));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("kappa at the block optimum") {
  const auto e = kappa({2.5, 1.0});
  CHECK(e.kappa == doctest::Approx(0.5 * std::log(5.0)).epsilon(1e-12));
  CHECK(e.kappa == doctest::Approx(0.8047189562).epsilon(1e-9));
  CHECK(e.delta == 0.5);
  CHECK(e.epsilon == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("kappa boundary and b=1 closed forms") {
  CHECK(kappa_value(2.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(kappa_value(3.0, 1.0) == doctest::Approx((std::log(2.0) + 1.5 * std::log(3.0)) / 3.0).epsilon(1e-13));
  for (double a : {2.2, 3.7, 8.0, 40.0}) {
    const double closed = std::log(2.0) + 0.5 * (a * std::log(a) - (a - 2) * std::log(a - 2));
    CHECK(a * kappa_value(a, 1.0) == doctest::Approx(closed).epsilon(1e-12));
  }
  // Just off b=1 the general branch must agree with the special one.
  CHECK(kappa_value(3.0, 1.0 - 1e-9) == doctest::Approx(kappa_value(3.0, 1.0)).epsilon(1e-7));
  CHECK(kappa_value(1.0, 0.0) == 0.0);
}

TEST_CASE("kappa domain errors") {
  CHECK_THROWS_AS(kappa({1.5, 1.0}), std::domain_error);
  CHECK_THROWS_AS(kappa({3.0, -0.1}), std::domain_error);
  CHECK_THROWS_AS(kappa_partials({2.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(kappa_hat(0.99), std::domain_error);
}

TEST_CASE("maximisers are stationary and maximal") {
  for (double b : {0.1, 0.4, 0.7, 1.0, 1.6, 3.0}) {
    for (double extra : {0.3, 1.0, 2.5, 7.0}) {
      const CrossingParams p{1 + b + extra, b};
      const auto e = kappa(p);
      CHECK(std::abs(grad_delta(p, e.delta, e.epsilon)) < 1e-8);
      CHECK(std::abs(grad_eps(p, e.delta, e.epsilon)) < 1e-8);
      CHECK(p.a * e.kappa >= grid_max(p, 200) - 1e-12);
      CHECK(e.kappa >= 0.0);
      CHECK(e.kappa <= std::log(3.0));
    }
  }
}

TEST_CASE("a kappa is concave on DOM") {
  const auto ak = [](double a, double b) { return a * kappa_value(a, b); };
  for (double a1 = 1.2; a1 < 9; a1 += 0.9)
    for (double b1 = 0.0; b1 < a1 - 1; b1 += 0.35)
      for (double a2 = 1.5; a2 < 9; a2 += 1.3)
        for (double b2 = 0.1; b2 < a2 - 1; b2 += 0.5) {
          const double mid = ak(0.5 * (a1 + a2), 0.5 * (b1 + b2));
          CHECK(mid >= 0.5 * (ak(a1, b1) + ak(a2, b2)) - 1e-12);
        }
}

TEST_CASE("partials") {
  const auto p = kappa_partials({2.5, 1.0});
  CHECK(std::abs(p.dk_da) < 1e-12);
  CHECK(2.5 * p.dk_db == doctest::Approx(0.5 * std::log(9.0 / 5.0)).epsilon(1e-12));
  CHECK(2.5 * p.dk_db == doctest::Approx(0.2938933).epsilon(1e-6));
  CHECK(kappa_partials({3.0, 1.0}).dk_da == doctest::Approx(-std::log(2.0) / 9.0).epsilon(1e-12));

  const double h = 1e-6;
  for (double b : {0.2, 0.8, 1.0, 1.9}) {
    for (double a : {b + 1.4, b + 2.0, b + 5.0}) {
      const auto pr = kappa_partials({a, b});
      const double da = (kappa_value(a + h, b) - kappa_value(a - h, b)) / (2 * h);
      const double db = (kappa_value(a, b + h) - kappa_value(a, b - h)) / (2 * h);
      CHECK(std::abs(pr.dk_da - da) < 1e-5);
      CHECK(std::abs(pr.dk_db - db) < 1e-5);
    }
  }
}

TEST_CASE("kappa_hat") {
  CHECK(kappa_hat_value(1.0) == 0.0);
  CHECK(2.0 * kappa_hat_value(2.0) == doctest::Approx(2.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-13));
  // mu kappa_hat(mu) = log mu + 1 + log 2 + o(1), so the ratio to log mu
  // creeps down to 1 only logarithmically.
  double prev_ratio = 1e300;
  for (double big = 1e2; big <= 1e9; big *= 10) {
    const double v = big * kappa_hat_value(big);
    CHECK(std::abs(v - std::log(big) - 1.0 - std::log(2.0)) < 2.0 / big + 1e-5);
    CHECK(v / std::log(big) < prev_ratio);
    prev_ratio = v / std::log(big);
  }
  CHECK(prev_ratio == doctest::Approx(1.0).epsilon(0.09));
  for (double mu : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    const auto k = kappa_hat(mu);
    CHECK(k.delta == doctest::Approx(0.5 * (mu - std::sqrt((mu - 1) * (mu - 1) + 1))).epsilon(1e-13));
    CHECK(k.kappahat > 0.0);
    CHECK(k.kappahat <= std::log(3.0));
    const double h = 1e-6;
    const double dd = (interface_objective(mu, k.delta + h, k.delta) - interface_objective(mu, k.delta - h, k.delta)) / (2 * h);
    CHECK(std::abs(dd) < 1e-7);
  }
  double prev2 = 0, prev1 = 0;
  int n = 0;
  for (double mu = 1.0; mu <= 100.0; mu += 0.25, ++n) {
    const double v = mu * kappa_hat_value(mu);
    if (n >= 2) CHECK(prev1 >= 0.5 * (prev2 + v) - 1e-12);
    prev2 = prev1;
    prev1 = v;
  }
}

TEST_CASE("model constants") {
  const auto& c = model_constants();
  CHECK(std::abs(c.mu_sup - 2.12) < 0.01);
  CHECK(std::abs(c.mu_sup_value - 0.16) < 0.005);
  CHECK(std::abs(c.alpha0 - 0.125) < 0.002);
  CHECK(std::abs(c.alpha1 - 0.154) < 0.002);
  CHECK(c.mu_sup_value < c.slope_const);
  CHECK(c.alpha0 < c.alpha1);

  // The defining equations hold at the computed roots.
  const auto sup_at = [](double shift) {
    double best = -1e300;
    for (double mu = 1.0; mu < 50.0; mu += 1e-4) best = std::max(best, mu * (kappa_hat_value(mu) + shift - kKappaStar));
    return best;
  };
  CHECK(std::abs(sup_at(0.5 * c.alpha0) - kSlopeConst) < 1e-7);
  CHECK(std::abs(sup_at(0.0) - c.mu_sup_value) < 1e-8);
}

TEST_CASE("g of nu") {
  CHECK(g_of_nu(1.0) == doctest::Approx(kKappaStar - kappa_value(1.0, 0.0)));
  CHECK_THROWS_AS(g_of_nu(0.5), std::domain_error);
  for (double nu = 1.0; nu <= 1000.0; nu *= 1.4) CHECK(g_of_nu(nu) > kSlopeConst);
  CHECK(std::abs(g_of_nu(1000.0) - kSlopeConst) < 0.01);

  // Inner supremum against a dense scan in b.
  for (double nu : {1.5, 3.0, 12.0}) {
    double best = -1e300;
    const double blo = 2.0 / (nu + 1.0);
    for (int i = 0; i <= 200000; ++i) {
      const double b = blo + (1.0 - blo) * i / 200000.0;
      best = std::max(best, kappa_value(b * nu, 1.0 - b));
    }
    CHECK(std::abs(f_of_nu(nu) - best) < 1e-9);
  }
}
