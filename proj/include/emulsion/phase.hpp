#pragma once

// Phase diagram assembly: verdicts per (alpha, beta, p), free energies, the
// supercritical curve envelope and alpha*(p).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emulsion/block_fe.hpp"
#include "emulsion/interface_fe.hpp"

namespace emulsion {

inline constexpr double kPc = 0.6447;

struct PhasePoint {
  double alpha = 0.0;
  double beta = 0.0;
  double p = 0.5;
};

/// A point mapped into alpha >= |beta| through
///   f(alpha, beta; p) = f(beta, alpha; 1 - p)
///   f(alpha, beta; p) = (alpha + beta)/2 + f(-beta, -alpha; p).
/// `shift` is the additive free-energy offset: f(original) = f(reduced) + shift.
struct ConeReduction {
  PhasePoint reduced;
  double shift = 0.0;
  bool swapped = false;    // labels exchanged, p -> 1 - p
  bool reflected = false;  // (alpha, beta) -> (-beta, -alpha)
};

bool in_cone(double alpha, double beta);
ConeReduction reduce_to_cone(PhasePoint pt);

struct ClassifySettings {
  double p_c = kPc;
  /// rho*(p) for p < p_c. Required for subcritical points.
  std::function<double(double)> rho_star;
  /// Source of phi for a reduced (alpha, beta); defaults to bound_source.
  std::function<PhiSource(double, double)> phi;
};

struct Classification {
  PhaseVerdict verdict;
  ConeReduction reduction;
  bool supercritical = false;
  double rho = 1.0;      // rho*(p) used (1 when supercritical)
  double y_bar = 2.5;    // block ratio at which the subcritical criterion ran
};

/// Supercritical (p >= p_c): criterion_supercritical. Subcritical: y_bar from
/// the delocalized solver at rho*(p), then criterion_pointwise(y_bar, beta).
Classification classify(PhasePoint pt, const ClassifySettings& s);

struct FreeEnergy {
  Classification cls;
  /// Delocalized: the value. Localized: a strict lower bound (f > lower) and
  /// an upper bound. Undecided: both bounds, value = NaN.
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

FreeEnergy free_energy(PhasePoint pt, const ClassifySettings& s);

struct CurvePoint {
  double alpha = 0.0;
  double beta_lower = 0.0;
  double beta_upper = 0.0;
  std::optional<double> beta_estimate;
  double beta_estimate_err = 0.0;
};

struct CurveSettings {
  double tol = 1e-4;
  bool monte_carlo = false;
  EstimatorSettings mc{60, 8, 1, 1};
  int groups = 4;       // disjoint replica groups for the error bar
  int beta_points = 12; // beta grid for the Monte Carlo crossing
  double mu_max = 4.0;
  double dmu = 0.05;
};

/// Rigorous envelope for beta_c(alpha) in alpha >= |beta|, plus an optional
/// Monte Carlo crossing (non-rigorous; finite-L bias pushes it upwards).
CurvePoint beta_c_envelope(double alpha, const CurveSettings& s = {});

/// sup over mu >= 1 of mu [kappa_hat(mu) - G(mu, y) + C/2]; +inf when unbounded.
double alpha_star_objective(double C, double rho);

/// Root in C of alpha_star_objective at fixed rho in (0, 1).
double alpha_star_p(double rho);

/// log(2 - e^-alpha).
double second_curve_lower(double alpha);

struct SweepRow {
  PhasePoint pt;
  Classification cls;
  FreeEnergy fe;
};

/// Row-major over beta (outer) then alpha (inner), both inclusive grids.
/// Subcritical cells without a rho* provider come back Undecided with an
/// infinite gap instead of failing the sweep.
std::vector<SweepRow> sweep(double alpha_min, double alpha_max, double beta_min, double beta_max, double res,
                            double p, const ClassifySettings& s, int threads = 1);

}  // namespace emulsion
