#pragma once

// Delocalized-phase variational formula
//   F(alpha, beta; rho) = sup_{x, y >= 2} [rho x u(x) + (1-rho) y v(y)] / [rho x + (1-rho) y]
// where x u(x) = alpha x/2 + log 2 + (x/2) log x - ((x-2)/2) log(x-2) and v is
// u with beta in place of alpha.

namespace emulsion {

struct DelocParams {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.5;
  double C() const { return alpha - beta; }
};

struct DelocSolution {
  double x_bar = 0.0;
  double y_bar = 0.0;
  double F = 0.0;
  double residual1 = 0.0;  // log 2 + rho log(x-2) + (1-rho) log(y-2)
  double residual2 = 0.0;  // C + log(x (y-2) / (y (x-2)))
  // log(x_bar - 2); finite even when x_bar itself overflows.
  double log_x_minus_2 = 0.0;
  bool x_unbounded = false;
};

/// Throws std::domain_error for x < 2.
double u_of_x(double x, double alpha);
double v_of_y(double y, double beta);

/// Maximisers of the variational problem. Requires rho in (0, 1); C < 0 is
/// handled through F(alpha, beta; rho) = F(beta, alpha; 1 - rho). When x_bar
/// exceeds double range, x_bar = +inf, x_unbounded is set and y_bar, F are
/// still exact. Throws ConvergenceError if the root cannot be bracketed.
DelocSolution solve_deloc(DelocParams p);

/// F itself; rho = 1 and rho = 0 give u(5/2) and v(5/2).
double F_of_rho(DelocParams p);

}  // namespace emulsion
