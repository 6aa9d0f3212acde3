#pragma once

// One-dimensional search helpers shared by every module.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace emulsion {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Extremum {
  double arg = 0.0;
  double value = 0.0;
};

using ScalarFn = std::function<double(double)>;

/// Golden-section maximisation on [lo, hi] for a unimodal objective, followed
/// by one parabolic step through the final bracket. Endpoints are candidates.
Extremum maximize_golden(const ScalarFn& f, double lo, double hi, double tol = 1e-9);

/// Uniform scan with `n` cells, then golden-section inside the cells adjacent
/// to the best sample. Use when unimodality is not guaranteed.
Extremum maximize_scan(const ScalarFn& f, double lo, double hi, int n, double tol = 1e-9);

/// Supremum over mu in [1, mu_max] of an objective that eventually decays.
/// Scans on a log-spaced grid, refines by golden-section and verifies that the
/// samples past the located maximum are monotonically decreasing.
Extremum maximize_over_mu(const ScalarFn& f, double mu_max = 1e6, double tol = 1e-9);

/// Root of a monotone function on [lo, hi]; throws ConvergenceError when the
/// endpoints do not bracket a sign change.
double bisect(const ScalarFn& f, double lo, double hi, double tol = 1e-12, int max_iter = 400);

}  // namespace emulsion
