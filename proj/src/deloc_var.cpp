#include "emulsion/deloc_var.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "emulsion/lattice_entropy.hpp"
#include "emulsion/optimize.hpp"

namespace emulsion {

namespace {

// x u(x) without the cancellation between x log x and (x-2) log(x-2).
double x_times_u(double x, double alpha) {
  if (x == 2.0) return alpha + 2.0 * kLog2;
  return 0.5 * alpha * x + kLog2 + 0.5 * x * std::log1p(2.0 / (x - 2.0)) + std::log(x - 2.0);
}

// y - 2 as a function of t = log(x - 2), from the second stationarity equation.
double log_y_minus_2(double t, double C) {
  // y - 2 = 2 e^{-C} / (2 e^{-t} + 1 - e^{-C})
  return kLog2 - C - std::log(2.0 * std::exp(-t) - std::expm1(-C));
}

}  // namespace

double u_of_x(double x, double alpha) {
  if (!(x >= 2.0)) {
    std::ostringstream msg;
    msg << "u(x) requires x >= 2, got " << x;
    throw std::domain_error(msg.str());
  }
  return x_times_u(x, alpha) / x;
}

double v_of_y(double y, double beta) { return u_of_x(y, beta); }

DelocSolution solve_deloc(DelocParams p) {
  if (!(p.rho > 0.0 && p.rho < 1.0)) {
    std::ostringstream msg;
    msg << "solve_deloc requires rho in (0, 1), got " << p.rho;
    throw std::domain_error(msg.str());
  }
  if (p.C() < 0.0) {
    DelocSolution s = solve_deloc({p.beta, p.alpha, 1.0 - p.rho});
    std::swap(s.x_bar, s.y_bar);
    // The swapped problem reports log(x - 2) of the other coordinate.
    s.log_x_minus_2 = std::log(s.x_bar - 2.0);
    s.x_unbounded = false;
    return s;
  }
  const double rho = p.rho, C = p.C();
  DelocSolution out;
  if (C == 0.0) {
    out.x_bar = out.y_bar = kAStar;
    out.log_x_minus_2 = std::log(0.5);
  } else {
    // h(t) is increasing in t = log(x - 2).
    const auto h = [&](double t) { return kLog2 + rho * t + (1.0 - rho) * log_y_minus_2(t, C); };
    double lo = std::log(1e-12), hi = std::log(10.0);
    if (h(lo) > 0.0) {
      std::ostringstream msg;
      msg << "solve_deloc: no root above x = 2 + 1e-12 (h=" << h(lo) << ", rho=" << rho << ", C=" << C << ")";
      throw ConvergenceError(msg.str());
    }
    while (h(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) {
        std::ostringstream msg;
        msg << "solve_deloc: bracket grew past log(x-2) = 1e300 (rho=" << rho << ", C=" << C << ")";
        throw ConvergenceError(msg.str());
      }
    }
    for (int it = 0; it < 4000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (h(mid) < 0.0 ? lo : hi) = mid;
    }
    const double t = std::abs(h(lo)) < std::abs(h(hi)) ? lo : hi;
    out.log_x_minus_2 = t;
    out.x_unbounded = t > std::log(std::numeric_limits<double>::max());
    out.x_bar = out.x_unbounded ? std::numeric_limits<double>::infinity() : 2.0 + std::exp(t);
    out.y_bar = 2.0 + std::exp(log_y_minus_2(t, C));
  }
  const double t = out.log_x_minus_2;
  const double ly = std::log(out.y_bar - 2.0);
  out.residual1 = kLog2 + rho * t + (1.0 - rho) * ly;
  out.residual2 = C + std::log1p(2.0 * std::exp(-t)) + ly - std::log(out.y_bar);
  if (out.x_unbounded) {
    // At the optimum F = beta/2 + (1/2) log(y/(y-2)), equivalently alpha/2 + (1/2) log(x/(x-2)).
    out.F = 0.5 * p.beta + 0.5 * (std::log(out.y_bar) - ly);
  } else {
    const double wx = rho * out.x_bar, wy = (1.0 - rho) * out.y_bar;
    out.F = (rho * x_times_u(out.x_bar, p.alpha) + (1.0 - rho) * x_times_u(out.y_bar, p.beta)) / (wx + wy);
  }
  return out;
}

double F_of_rho(DelocParams p) {
  if (p.rho == 1.0) return 0.5 * p.alpha + kKappaStar;
  if (p.rho == 0.0) return 0.5 * p.beta + kKappaStar;
  return solve_deloc(p).F;
}

}  // namespace emulsion
