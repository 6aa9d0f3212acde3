#include <cmath>
#include <utility>
#include <stdexcept>

#include "doctest.h"
#include "emulsion/deloc_var.hpp"
#include "emulsion/lattice_entropy.hpp"
#include "emulsion/phase.hpp"

using namespace emulsion;

namespace {

const double kHalfLog5 = 0.5 * std::log(5.0);

ClassifySettings fixed_rho(double rho) {
  ClassifySettings s;
  s.rho_star = [rho](double) { return rho; };
  return s;
}

}  // namespace

TEST_CASE("cone reduction") {
  const auto id = reduce_to_cone({1.0, 0.5, 0.3});
  CHECK(!id.swapped);
  CHECK(!id.reflected);
  CHECK(id.reduced.alpha == 1.0);

  const auto sw = reduce_to_cone({0.5, 1.0, 0.3});
  CHECK(sw.swapped);
  CHECK(sw.reduced.alpha == 1.0);
  CHECK(sw.reduced.beta == 0.5);
  CHECK(sw.reduced.p == doctest::Approx(0.7));
  CHECK(sw.shift == 0.0);

  const auto rf = reduce_to_cone({0.5, -1.0, 0.3});
  CHECK(rf.reflected);
  CHECK(!rf.swapped);
  CHECK(rf.reduced.alpha == 1.0);
  CHECK(rf.reduced.beta == -0.5);
  CHECK(rf.shift == doctest::Approx(-0.25));

  const auto both = reduce_to_cone({-1.0, 0.5, 0.3});
  CHECK(both.swapped);
  CHECK(both.reflected);
  CHECK(in_cone(both.reduced.alpha, both.reduced.beta));
  CHECK(both.reduced.p == doctest::Approx(0.7));

  for (double a = -3; a <= 3; a += 0.5)
    for (double b = -3; b <= 3; b += 0.5) {
      const auto r = reduce_to_cone({a, b, 0.4});
      CHECK(in_cone(r.reduced.alpha, r.reduced.beta));
    }
}

TEST_CASE("second curve lower bound") {
  CHECK(second_curve_lower(0.0) == 0.0);
  CHECK(second_curve_lower(std::log(2.0)) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(second_curve_lower(40.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(second_curve_lower(-1.0), std::domain_error);
}

TEST_CASE("alpha star") {
  const auto mc = model_constants();
  CHECK(std::abs(alpha_star_p(1e-6) - mc.alpha0) < 0.002);
  CHECK(std::abs(alpha_star_p(1.0 - 1e-6) - mc.alpha1) < 0.002);
  CHECK(std::abs(alpha_star_p(1e-6) - 0.125) < 0.002);
  CHECK(std::abs(alpha_star_p(1.0 - 1e-6) - 0.154) < 0.002);
  const double mid = alpha_star_p(0.5);
  CHECK(std::abs(alpha_star_objective(mid, 0.5)) < 1e-7);
  CHECK(alpha_star_objective(mid - 0.01, 0.5) < 0.0);
  CHECK(alpha_star_objective(mid + 0.01, 0.5) > 0.0);
  CHECK_THROWS_AS(alpha_star_p(0.0), std::domain_error);
}

TEST_CASE("supercritical classification") {
  ClassifySettings s;
  CHECK(classify({0.05, 0.05, 0.7}, s).verdict.state == Phase::Delocalized);
  CHECK(classify({9.5, 8.0 * std::log(3.0) + 1e-6, 0.7}, s).verdict.state == Phase::Localized);
  CHECK(classify({2.0, 1.0, 0.7}, s).verdict.state == Phase::Undecided);

  const auto f = free_energy({0.05, 0.05, 0.7}, s);
  CHECK(f.exact);
  CHECK(f.value == doctest::Approx(0.025 + kHalfLog5).epsilon(1e-12));

  // Outside the cone the strong coupling sits on B, so p flips.
  CHECK(classify({8.9, 9.5, 0.3}, s).verdict.state == Phase::Localized);
}

TEST_CASE("localized free energy is bracketed") {
  ClassifySettings s;
  s.phi = [](double a, double b) {
    PhiSource src = bound_source(a, b);
    src.special_mus.push_back(9.0 / 8.0);
    return src;
  };
  const auto f = free_energy({9.0, 8.9, 0.7}, s);
  CHECK(f.cls.verdict.state == Phase::Localized);
  CHECK(!f.exact);
  CHECK(std::isnan(f.value));
  CHECK(f.lower == doctest::Approx(4.5 + kHalfLog5));
  CHECK(f.upper > 4.5 + kHalfLog5);

  // The cheap upper bound dominates the optimised off-diagonal supremum.
  for (auto [a, b] : {std::pair{9.0, 8.9}, std::pair{2.0, 1.5}, std::pair{1.0, -0.5}}) {
    const auto fe = free_energy({a, b, 0.7}, ClassifySettings{});
    if (fe.exact) continue;
    CHECK(S_offdiag(BlockPairKind::AB, bound_source(a, b)).upper <= fe.upper + 1e-9);
  }
}

TEST_CASE("subcritical classification") {
  for (double rho : {0.2, 0.5, 0.8}) {
    const auto s = fixed_rho(rho);
    const double a_star = alpha_star_p(rho);
    // Below alpha* on the lower half the interface does not pay.
    for (double beta : {-0.1, -0.05, 0.0}) {
      CHECK(classify({beta + a_star - 0.01, beta, 0.3}, s).verdict.state == Phase::Delocalized);
      CHECK(classify({beta + a_star + 0.01, beta, 0.3}, s).verdict.state == Phase::Localized);
    }
    for (double t : {0.02, 0.08, 0.12})
      CHECK(classify({t, t, 0.3}, s).verdict.state == Phase::Delocalized);
  }
  CHECK_THROWS_AS(classify({1.0, 0.0, 0.3}, ClassifySettings{}), std::invalid_argument);
  CHECK_THROWS_AS(classify({1.0, 0.0, 1.3}, fixed_rho(0.5)), std::invalid_argument);
}

TEST_CASE("lower half depends on the coupling difference") {
  const auto s = fixed_rho(0.4);
  for (double beta : {-1.5, -0.8, -0.2})
    for (double C : {0.05, 0.13, 0.137, 0.2, 1.0, 1.6})
      for (double t : {0.1, 0.5}) {
        if (beta + t > 0.0 || beta + C < 0.0) continue;
        const auto v1 = classify({beta + C, beta, 0.3}, s).verdict;
        const auto v2 = classify({beta + C + t, beta + t, 0.3}, s).verdict;
        CHECK(v1.state == v2.state);
        CHECK(v1.lower_value == doctest::Approx(v2.lower_value).epsilon(1e-9));
      }
}

TEST_CASE("diagonal agreement of the two regimes") {
  for (double rho : {0.3, 0.7})
    for (double t : {0.05, 0.1, 0.5, 2.0, 5.0}) {
      const auto sub = classify({t, t, 0.3}, fixed_rho(rho));
      const auto sup = classify({t, t, 0.7}, ClassifySettings{});
      CHECK(sub.y_bar == doctest::Approx(2.5).epsilon(1e-9));
      CHECK(sub.verdict.state == sup.verdict.state);
      CHECK(sub.verdict.lower_value == doctest::Approx(sup.verdict.lower_value).epsilon(1e-8));
    }
}

TEST_CASE("subcritical free energy") {
  const auto s = fixed_rho(0.35);
  for (double a : {0.0, 0.1, 2.0}) {
    const auto f = free_energy({a, a, 0.3}, s);
    if (f.cls.verdict.state == Phase::Delocalized) CHECK(f.value == doctest::Approx(0.5 * a + kHalfLog5));
  }
  const auto f = free_energy({0.5, -0.5, 0.3}, s);
  REQUIRE(f.cls.verdict.state == Phase::Localized);
  CHECK(f.lower == doctest::Approx(F_of_rho({0.5, -0.5, 0.35})));

  const auto g = free_energy({0.1, 0.0, 0.3}, s);
  REQUIRE(g.cls.verdict.state == Phase::Delocalized);
  CHECK(g.value == doctest::Approx(F_of_rho({0.1, 0.0, 0.35})));
}

TEST_CASE("symmetries of the sweep") {
  ClassifySettings s;
  s.rho_star = [](double p) { return std::min(0.999, 0.2 + p); };
  for (double p : {0.3, 0.5, 0.8})
    for (double a = -2.0; a <= 2.0; a += 0.5)
      for (double b = -2.0; b <= 2.0; b += 0.5) {
        const auto f1 = free_energy({a, b, p}, s);
        const auto f2 = free_energy({b, a, 1.0 - p}, s);
        const auto f3 = free_energy({-b, -a, p}, s);
        CHECK(f1.cls.verdict.state == f2.cls.verdict.state);
        CHECK(f1.cls.verdict.state == f3.cls.verdict.state);
        CHECK(f1.lower == doctest::Approx(f2.lower).epsilon(1e-9));
        CHECK(f1.lower == doctest::Approx(f3.lower + 0.5 * (a + b)).epsilon(1e-9));
      }

  const auto rows = sweep(0.0, 1.0, -0.5, 0.5, 0.25, 0.7, s, 2);
  CHECK(rows.size() == 25);
  CHECK(rows[0].pt.alpha == 0.0);
  CHECK(rows[1].pt.alpha == 0.25);
  CHECK(rows[5].pt.beta == -0.25);
  const auto rows1 = sweep(0.0, 1.0, -0.5, 0.5, 0.25, 0.7, s, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].fe.lower == rows1[i].fe.lower);

  const double a0 = model_constants().alpha0;
  int diagonal = 0;
  for (const auto& r : sweep(0.0, 3.0, -3.0, 3.0, 0.05, 0.7, ClassifySettings{}))
    if (r.pt.alpha == r.pt.beta && r.pt.alpha <= a0) {
      CHECK(r.cls.verdict.state == Phase::Delocalized);
      ++diagonal;
    }
  CHECK(diagonal == 3);
}

TEST_CASE("curve envelope") {
  const double cap = 8.0 * std::log(3.0);
  for (double a = 0.0; a <= 5.0 + 1e-9; a += 0.5) {
    const auto c = beta_c_envelope(a);
    CHECK(c.beta_lower == doctest::Approx(std::log(2.0 - std::exp(-a))).epsilon(1e-15));
    CHECK(c.beta_lower <= c.beta_upper);
    CHECK(c.beta_upper <= cap);
    CHECK(!c.beta_estimate);
  }
  CHECK(beta_c_envelope(std::log(2.0)).beta_lower == doctest::Approx(std::log(1.5)));
  const auto far = beta_c_envelope(30.0);
  CHECK(far.beta_upper <= cap);
  CHECK(far.beta_upper < 8.6);
  CHECK(beta_c_envelope(0.1).beta_upper == doctest::Approx(0.1));
  CHECK_THROWS_AS(beta_c_envelope(-0.1), std::domain_error);
}

TEST_CASE("curve estimate") {
  CurveSettings s;
  s.monte_carlo = true;
  double prev = -1.0;
  for (double a : {0.1, 1.0, 2.0, 4.0}) {
    const auto c = beta_c_envelope(a, s);
    REQUIRE(c.beta_estimate);
    CHECK(*c.beta_estimate >= c.beta_lower);
    CHECK(*c.beta_estimate <= c.beta_upper);
    CHECK(*c.beta_estimate >= prev - 2.0 * c.beta_estimate_err);
    prev = *c.beta_estimate;
  }
  CHECK(*beta_c_envelope(0.1, s).beta_estimate == doctest::Approx(0.1));
}
