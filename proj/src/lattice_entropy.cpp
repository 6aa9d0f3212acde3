#include "emulsion/lattice_entropy.hpp"

#include <sstream>
#include <stdexcept>

#include "emulsion/optimize.hpp"

namespace emulsion {

namespace {

constexpr double kUnitB = 1e-12;

void require_domain(CrossingParams p) {
  if (!in_crossing_domain(p)) {
    std::ostringstream msg;
    msg << "crossing parameters outside a >= 1 + b, b >= 0: a=" << p.a << " b=" << p.b;
    throw std::domain_error(msg.str());
  }
}

// Clamp tiny negative round-off in quantities that are non-negative in exact arithmetic.
double nonneg(double x) { return x < 0.0 && x > -1e-14 ? 0.0 : x; }

}  // namespace

bool in_crossing_domain(CrossingParams p) {
  return std::isfinite(p.a) && std::isfinite(p.b) && p.b >= 0.0 && p.a >= 1.0 + p.b - 1e-14;
}

double crossing_objective(CrossingParams p, double delta, double epsilon) {
  const double up = 0.5 * (p.a + 1.0 - p.b);
  const double down = nonneg(0.5 * (p.a - 1.0 - p.b));
  return xlogx(p.b) - 2.0 * xlogx(delta) + xlogx(up) - xlogx(nonneg(up - delta)) - 2.0 * xlogx(epsilon) -
         xlogx(nonneg(p.b - delta - epsilon)) + xlogx(down) - xlogx(nonneg(down - epsilon));
}

double interface_objective(double mu, double delta, double epsilon) {
  const double h = 0.5 * (mu - 1.0);
  return -2.0 * xlogx(delta) - 2.0 * xlogx(epsilon) - xlogx(nonneg(1.0 - delta - epsilon)) -
         xlogx(nonneg(h - delta)) - xlogx(nonneg(h - epsilon)) + 2.0 * xlogx(h);
}

EntropyPoint kappa(CrossingParams p) {
  require_domain(p);
  const double a = p.a, b = p.b;
  EntropyPoint out;
  out.params = p;
  if (std::abs(b - 1.0) < kUnitB) {
    out.delta = 0.5;
    out.epsilon = (a - 2.0) / (2.0 * (a - 1.0));
  } else {
    // Roots of the stationarity quadratics, written without cancellation.
    const double root = std::sqrt((a - b) * (a - b) + (b * b - 1.0));
    out.delta = b * (a + 1.0 - b) / ((a + 1.0) + root);
    out.epsilon = nonneg(b * (a - b - 1.0) / (root + a - 1.0));
  }
  out.kappa = crossing_objective(p, out.delta, out.epsilon) / a;
  return out;
}

InterfaceEntropyPoint kappa_hat(double mu) {
  if (!(mu >= 1.0)) {
    std::ostringstream msg;
    msg << "kappa_hat requires mu >= 1, got " << mu;
    throw std::domain_error(msg.str());
  }
  InterfaceEntropyPoint out;
  out.mu = mu;
  out.delta = (mu - 1.0) / (mu + std::sqrt((mu - 1.0) * (mu - 1.0) + 1.0));
  out.kappahat = mu == 1.0 ? 0.0 : interface_objective(mu, out.delta, out.delta) / mu;
  return out;
}

KappaPartials kappa_partials(CrossingParams p) {
  require_domain(p);
  if (p.b <= 0.0 || p.a <= 1.0 + p.b) {
    std::ostringstream msg;
    msg << "kappa_partials undefined on the boundary of the crossing domain: a=" << p.a << " b=" << p.b;
    throw std::domain_error(msg.str());
  }
  const EntropyPoint e = kappa(p);
  const double a = p.a, b = p.b;
  const double up = 0.5 * (a + 1.0 - b);
  const double down = 0.5 * (a - 1.0 - b);
  const double up_left = up - e.delta;
  const double down_left = down - e.epsilon;
  const double free_cols = b - e.delta - e.epsilon;
  KappaPartials out;
  out.dk_da = -e.kappa / a + 0.5 / a * std::log(up * down / (up_left * down_left));
  out.dk_db = 0.5 / a * std::log(b * b * up_left * down_left / (free_cols * free_cols * up * down));
  return out;
}

const ModelConstants& model_constants() {
  static const ModelConstants cached = [] {
    ModelConstants c;
    c.kappa_star = kKappaStar;
    c.a_star = kAStar;
    c.slope_const = kSlopeConst;

    const auto sup_shifted = [](double shift) {
      return maximize_over_mu([shift](double mu) { return mu * (kappa_hat_value(mu) + shift - kKappaStar); }, 1e6,
                              1e-10);
    };
    const Extremum s = sup_shifted(0.0);
    c.mu_sup = s.arg;
    c.mu_sup_value = s.value;

    c.alpha0 = bisect([&](double alpha) { return sup_shifted(0.5 * alpha).value - kSlopeConst; }, 0.0, 1.0, 1e-12);

    const auto rhs = [](double alpha) {
      const double d = std::exp(-alpha);
      return 0.5 * std::log(4.0 * d * (5.0 + d) * (5.0 + d) / (5.0 * (5.0 - d) * (5.0 - d)));
    };
    c.alpha1 = bisect([&](double alpha) { return rhs(alpha) - c.mu_sup_value; }, 0.0, 1.0, 1e-12);
    return c;
  }();
  return cached;
}

double f_of_nu(double nu) {
  if (!(nu >= 1.0)) {
    std::ostringstream msg;
    msg << "f_of_nu requires nu >= 1, got " << nu;
    throw std::domain_error(msg.str());
  }
  const double b_lo = 2.0 / (nu + 1.0);
  if (1.0 - b_lo < 1e-14) return kappa_value(nu, 0.0);
  // Search in log(a) with a = b nu: the maximiser sits near a* for large nu.
  const double s_lo = std::log(b_lo * nu), s_hi = std::log(nu);
  const auto obj = [nu](double s) {
    const double a = std::exp(s);
    const double b = std::min(a / nu, 1.0);
    return kappa_value(b * nu, 1.0 - b);
  };
  return maximize_scan(obj, s_lo, s_hi, 400, 1e-11).value;
}

double g_of_nu(double nu) { return nu * (kKappaStar - f_of_nu(nu)); }

}  // namespace emulsion
