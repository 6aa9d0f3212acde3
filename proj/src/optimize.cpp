#include "emulsion/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace emulsion {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

Extremum better(const Extremum& a, const Extremum& b) { return b.value > a.value ? b : a; }

}  // namespace

Extremum maximize_golden(const ScalarFn& f, double lo, double hi, double tol) {
  if (hi < lo) std::swap(lo, hi);
  if (hi - lo <= tol) {
    const double m = 0.5 * (lo + hi);
    return {m, f(m)};
  }
  // Never ask for more resolution than the doubles near the bracket carry.
  tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)));
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Extremum best = fc >= fd ? Extremum{c, fc} : Extremum{d, fd};

  // Parabolic step through (a, best, b).
  const double fa = f(a), fb = f(b);
  const double x1 = a, x2 = best.arg, x3 = b;
  const double num = (x2 - x1) * (x2 - x1) * (best.value - fb) - (x2 - x3) * (x2 - x3) * (best.value - fa);
  const double den = (x2 - x1) * (best.value - fb) - (x2 - x3) * (best.value - fa);
  if (den != 0.0) {
    const double xp = x2 - 0.5 * num / den;
    if (xp > a && xp < b) best = better(best, {xp, f(xp)});
  }
  best = better(best, {a, fa});
  best = better(best, {b, fb});
  return best;
}

Extremum maximize_scan(const ScalarFn& f, double lo, double hi, int n, double tol) {
  n = std::max(n, 2);
  const double h = (hi - lo) / n;
  int best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + i * h;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = lo + std::max(best_i - 1, 0) * h;
  const double b = std::min(lo + (best_i + 1) * h, hi);
  Extremum refined = maximize_golden(f, a, b, tol);
  const double x_best = (best_i == n) ? hi : lo + best_i * h;
  return better({x_best, best_v}, refined);
}

Extremum maximize_over_mu(const ScalarFn& f, double mu_max, double tol) {
  // Log-spaced grid in (mu - 1) plus the endpoint mu = 1.
  std::vector<double> grid{1.0};
  const int per_decade = 40;
  const double lo_exp = -4.0;
  const double hi_exp = std::log10(mu_max - 1.0);
  const int n = static_cast<int>(std::ceil((hi_exp - lo_exp) * per_decade));
  for (int i = 0; i <= n; ++i) grid.push_back(1.0 + std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / n));

  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
  const auto it = std::max_element(vals.begin(), vals.end());
  const std::size_t k = static_cast<std::size_t>(it - vals.begin());

  // Past the maximum the objective must decay on the sampled tail.
  for (std::size_t i = k + 1; i + 1 < vals.size(); ++i) {
    if (vals[i + 1] > vals[i] + 1e-9 * (1.0 + std::abs(vals[i]))) {
      std::ostringstream msg;
      msg << "objective not decaying beyond located maximum at mu=" << grid[k]
          << " (increase between mu=" << grid[i] << " and " << grid[i + 1] << ")";
      throw ConvergenceError(msg.str());
    }
  }
  const double a = grid[k == 0 ? 0 : k - 1];
  const double b = grid[std::min(k + 1, grid.size() - 1)];
  Extremum refined = maximize_golden(f, a, b, tol);
  return better({grid[k], vals[k]}, refined);
}

double bisect(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "]: f=" << flo << ", " << fhi;
    throw ConvergenceError(msg.str());
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace emulsion
