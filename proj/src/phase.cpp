#include "emulsion/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "emulsion/deloc_var.hpp"
#include "emulsion/lattice_entropy.hpp"
#include "emulsion/optimize.hpp"
#include "emulsion/parallel.hpp"

namespace emulsion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PhiSource default_phi(const ClassifySettings& s, double alpha, double beta) {
  return s.phi ? s.phi(alpha, beta) : bound_source(alpha, beta);
}

// Crossing of the Monte Carlo criterion for replicas [first, last).
struct McCriterion {
  std::vector<double> mus;  // realised
  double lower_sup = 0.0;
};

}  // namespace

bool in_cone(double alpha, double beta) { return alpha >= std::abs(beta); }

ConeReduction reduce_to_cone(PhasePoint pt) {
  ConeReduction r;
  r.reduced = pt;
  double a = pt.alpha, b = pt.beta;
  if (!in_cone(a, b) && !in_cone(-b, -a)) {
    std::swap(a, b);
    r.reduced.p = 1.0 - pt.p;
    r.swapped = true;
  }
  if (!in_cone(a, b)) {
    r.shift = 0.5 * (a + b);
    const double na = -b, nb = -a;
    a = na;
    b = nb;
    r.reflected = true;
  }
  r.reduced.alpha = a;
  r.reduced.beta = b;
  return r;
}

Classification classify(PhasePoint pt, const ClassifySettings& s) {
  if (!(pt.p > 0.0 && pt.p < 1.0)) {
    std::ostringstream msg;
    msg << "block density must lie in (0, 1), got " << pt.p;
    throw std::invalid_argument(msg.str());
  }
  Classification c;
  c.reduction = reduce_to_cone(pt);
  const PhasePoint& q = c.reduction.reduced;
  const PhiSource phi = default_phi(s, q.alpha, q.beta);
  c.supercritical = q.p >= s.p_c;
  if (c.supercritical) {
    c.verdict = criterion_supercritical(phi);
    return c;
  }
  if (!s.rho_star) throw std::invalid_argument("subcritical point needs a rho* provider");
  c.rho = s.rho_star(q.p);
  if (!(c.rho > 0.0 && c.rho < 1.0)) {
    // rho* = 1 below p_c only through finite-size noise; treat as supercritical.
    if (c.rho >= 1.0) {
      c.rho = 1.0;
      c.verdict = criterion_supercritical(phi);
      return c;
    }
    std::ostringstream msg;
    msg << "rho* must lie in (0, 1], got " << c.rho;
    throw std::invalid_argument(msg.str());
  }
  const DelocSolution sol = solve_deloc({q.alpha, q.beta, c.rho});
  c.y_bar = sol.y_bar;
  if (c.y_bar - 2.0 < 1e-12) {
    // y_bar -> 2 sends the threshold to -inf: every phi localizes.
    c.verdict.state = Phase::Localized;
    c.verdict.evidence = "BA block ratio at its minimum";
    return c;
  }
  c.verdict = criterion_pointwise(c.y_bar, q.beta, phi);
  return c;
}

FreeEnergy free_energy(PhasePoint pt, const ClassifySettings& s) {
  FreeEnergy out;
  out.cls = classify(pt, s);
  const PhasePoint& q = out.cls.reduction.reduced;
  const double base =
      out.cls.supercritical || out.cls.rho >= 1.0 ? 0.5 * q.alpha + kKappaStar : F_of_rho({q.alpha, q.beta, out.cls.rho});
  if (out.cls.verdict.state == Phase::Delocalized) {
    out.value = out.lower = out.upper = base;
    out.exact = true;
  } else {
    // The delocalized value is a strict lower bound. No block pair beats S_AB,
    // and the rigorous upper bound on phi is kappa_hat + M with M constant in
    // mu, so splitting a block never gains more than max(M, alpha/2) over
    // kappa(a, 1) <= log(5)/2.
    const double M = phi_upper_bound({q.alpha, q.beta, 2.0}) - kappa_hat_value(2.0);
    out.lower = base;
    out.upper = kKappaStar + std::max(M, 0.5 * q.alpha);
    out.value = std::numeric_limits<double>::quiet_NaN();
  }
  out.value += out.cls.reduction.shift;
  out.lower += out.cls.reduction.shift;
  out.upper += out.cls.reduction.shift;
  return out;
}

CurvePoint beta_c_envelope(double alpha, const CurveSettings& s) {
  if (!(alpha >= 0.0)) throw std::domain_error("beta_c_envelope requires alpha >= 0");
  CurvePoint c;
  c.alpha = alpha;
  c.beta_lower = second_curve_lower(alpha);
  const double cap = 8.0 * std::log(3.0);
  const auto localized = [&](double beta) {
    return criterion_supercritical(bound_source(alpha, beta)).state == Phase::Localized;
  };
  double top = std::min(alpha, cap);
  if (localized(top)) {
    double lo = c.beta_lower, hi = top;
    while (hi - lo > s.tol) {
      const double mid = 0.5 * (lo + hi);
      (localized(mid) ? hi : lo) = mid;
    }
    top = hi;
  }
  c.beta_upper = top;

  if (!s.monte_carlo) return c;
  if (c.beta_upper - c.beta_lower < s.tol) {
    c.beta_estimate = c.beta_upper;
    return c;
  }

  // Common random numbers across the beta grid, so every replica group sees a
  // monotone criterion; the crossing is interpolated linearly.
  std::vector<double> mus, realized;
  const int nmu = static_cast<int>(std::lround((s.mu_max - 1.0) / s.dmu));
  for (int i = 0; i <= nmu; ++i) {
    mus.push_back(1.0 + i * s.dmu);
    realized.push_back(static_cast<double>(interface_steps(mus.back(), s.mc.L)) / s.mc.L);
  }
  const double shift = 0.5 * alpha + kKappaStar;
  const int groups = std::max(1, std::min(s.groups, s.mc.replicas));
  std::vector<double> betas(s.beta_points);
  // margin[g][k]: MC criterion minus threshold for group g (g = groups: all).
  std::vector<std::vector<double>> margin(groups + 1, std::vector<double>(s.beta_points));
  for (int k = 0; k < s.beta_points; ++k) {
    const double beta = c.beta_lower + (c.beta_upper - c.beta_lower) * k / (s.beta_points - 1);
    betas[k] = beta;
    const auto rows = phi_interface_samples(alpha, beta, mus, s.mc, true);
    const double lower_sup = weighted_sup(bound_source(alpha, beta), shift).lower;
    for (int g = 0; g <= groups; ++g) {
      double best = lower_sup;
      for (std::size_t m = 0; m < mus.size(); ++m) {
        double sum = 0.0;
        int n = 0;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
          if (g < groups && r % groups != g) continue;
          sum += rows[r][m];
          ++n;
        }
        best = std::max(best, realized[m] * (sum / n - shift));
      }
      margin[g][k] = best - kSlopeConst;
    }
  }
  const auto crossing = [&](const std::vector<double>& m) {
    for (int k = 0; k < s.beta_points; ++k) {
      if (m[k] > 0.0) {
        if (k == 0) return betas[0];
        const double t = -m[k - 1] / (m[k] - m[k - 1]);
        return betas[k - 1] + t * (betas[k] - betas[k - 1]);
      }
    }
    return betas.back();
  };
  c.beta_estimate = crossing(margin[groups]);
  if (groups > 1) {
    std::vector<double> g(groups);
    for (int i = 0; i < groups; ++i) g[i] = crossing(margin[i]);
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / groups;
    double ss = 0.0;
    for (double x : g) ss += (x - mean) * (x - mean);
    c.beta_estimate_err = std::sqrt(ss / (groups - 1) / groups);
  }
  return c;
}

double alpha_star_objective(double C, double rho) {
  const DelocSolution sol = solve_deloc({C, 0.0, rho});
  const double y = sol.y_bar;
  if (y - 2.0 < 1e-300) return kInf;
  const auto obj = [&](double mu) { return mu * (kappa_hat_value(mu) - G(mu, y) + 0.5 * C); };
  constexpr double mu_max = 1e6;
  try {
    const Extremum e = maximize_over_mu(obj, mu_max, 1e-10);
    if (e.arg > 0.5 * mu_max) return kInf;
    return e.value;
  } catch (const ConvergenceError&) {
    return kInf;
  }
}

double alpha_star_p(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream msg;
    msg << "alpha_star_p requires rho in (0, 1), got " << rho;
    throw std::domain_error(msg.str());
  }
  const auto f = [&](double C) { return alpha_star_objective(C, rho); };
  double lo = 0.0, hi = 0.5;
  if (!(f(lo) < 0.0)) throw ConvergenceError("alpha* objective is not negative at C = 0");
  while (!(f(hi) > 0.0)) {
    hi *= 2.0;
    if (hi > 64.0) {
      std::ostringstream msg;
      msg << "alpha* objective stays <= 0 up to C = " << hi << " (rho = " << rho << ", value " << f(hi) << ")";
      throw ConvergenceError(msg.str());
    }
  }
  return bisect(f, lo, hi, 1e-9);
}

double second_curve_lower(double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("second_curve_lower requires alpha >= 0");
  return std::log(2.0 - std::exp(-alpha));
}

std::vector<SweepRow> sweep(double alpha_min, double alpha_max, double beta_min, double beta_max, double res,
                            double p, const ClassifySettings& s, int threads) {
  if (!(res > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (alpha_max < alpha_min || beta_max < beta_min) throw std::invalid_argument("empty sweep region");
  const int na = static_cast<int>(std::floor((alpha_max - alpha_min) / res + 1e-9)) + 1;
  const int nb = static_cast<int>(std::floor((beta_max - beta_min) / res + 1e-9)) + 1;
  std::vector<SweepRow> rows(static_cast<std::size_t>(na) * nb);
  parallel_for(na * nb, threads, [&](int idx) {
    SweepRow& r = rows[idx];
    // Snap to 1e-9 so accumulated rounding cannot push a diagonal cell off
    // the diagonal (and across the p <-> 1 - p reflection).
    const auto snap = [](double x) { return std::round(x * 1e9) / 1e9; };
    r.pt = {snap(alpha_min + (idx % na) * res), snap(beta_min + (idx / na) * res), p};
    const ConeReduction red = reduce_to_cone(r.pt);
    if (red.reduced.p < s.p_c && !s.rho_star) {
      // No rho* available: keep the cell, mark it.
      r.cls.reduction = red;
      r.cls.verdict.evidence = "rho* not supplied for subcritical density";
      r.cls.verdict.gap = kInf;
      r.cls.verdict.lower_value = r.cls.verdict.upper_value = std::numeric_limits<double>::quiet_NaN();
      r.cls.rho = std::numeric_limits<double>::quiet_NaN();
      r.fe.cls = r.cls;
      r.fe.value = r.fe.lower = r.fe.upper = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    r.fe = free_energy(r.pt, s);
    r.cls = r.fe.cls;
  });
  return rows;
}

}  // namespace emulsion
