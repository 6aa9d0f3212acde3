#pragma once

// Closed-form entropies of directed self-avoiding paths (steps East, North,
// South, no immediate vertical reversal):
//   kappa(a, b)   growth rate per step of aL-step paths from (0,0) to (bL, L)
//   kappa_hat(mu) growth rate per step of muL-step bridges from (0,0) to (L, 0)
// All values are in nats per step.

#include <cmath>

namespace emulsion {

inline constexpr double kLog2 = 0.69314718055994530942;
/// kappa(a*, 1) = log(5) / 2, the entropy per step of a block crossing.
inline const double kKappaStar = 0.5 * std::log(5.0);
inline constexpr double kAStar = 2.5;
/// a* d/db kappa(a*, 1) = log(9/5) / 2.
inline const double kSlopeConst = 0.5 * std::log(9.0 / 5.0);

/// x log x with the continuous extension 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

struct CrossingParams {
  double a = 0.0;  // steps per unit height, a >= 1 + b
  double b = 0.0;  // horizontal displacement per unit height, b >= 0
};

struct EntropyPoint {
  CrossingParams params;
  double kappa = 0.0;
  double delta = 0.0;    // density of columns with an up-run
  double epsilon = 0.0;  // density of columns with a down-run
};

struct InterfaceEntropyPoint {
  double mu = 1.0;
  double kappahat = 0.0;
  double delta = 0.0;
};

struct KappaPartials {
  double dk_da = 0.0;
  double dk_db = 0.0;
};

struct ModelConstants {
  double kappa_star = 0.0;
  double a_star = 0.0;
  double slope_const = 0.0;
  double mu_sup = 0.0;        // argmax of mu [kappa_hat(mu) - kappa_star]
  double mu_sup_value = 0.0;  // the corresponding supremum
  double alpha0 = 0.0;
  double alpha1 = 0.0;
};

bool in_crossing_domain(CrossingParams p);

/// Stirling exponent f_ab(delta, epsilon) of the column-choice count; its
/// maximum over (delta, epsilon) equals a * kappa(a, b).
double crossing_objective(CrossingParams p, double delta, double epsilon);

/// Stirling exponent f_mu(delta, epsilon) for bridges; max equals mu * kappa_hat(mu).
double interface_objective(double mu, double delta, double epsilon);

/// Throws std::domain_error outside a >= 1 + b, b >= 0.
EntropyPoint kappa(CrossingParams p);
inline double kappa_value(double a, double b) { return kappa({a, b}).kappa; }

/// Throws std::domain_error for mu < 1.
InterfaceEntropyPoint kappa_hat(double mu);
inline double kappa_hat_value(double mu) { return kappa_hat(mu).kappahat; }

/// Partial derivatives of kappa. Requires b > 0 and a > 1 + b.
KappaPartials kappa_partials(CrossingParams p);

/// Crossover constants; computed once and cached.
const ModelConstants& model_constants();

/// f(nu) = sup over b in [2/(nu+1), 1] of kappa(b nu, 1 - b).
double f_of_nu(double nu);
/// g(nu) = nu [kappa_star - f(nu)].
double g_of_nu(double nu);

}  // namespace emulsion
