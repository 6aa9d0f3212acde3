#include "emulsion/block_fe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "emulsion/lattice_entropy.hpp"
#include "emulsion/optimize.hpp"

namespace emulsion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Composite {
  double value = -kInf;
  double b = 0.0;
  double a1 = 0.0;
};

// Best a1 for a fixed b > 0.
Composite best_for_b(double a, double b, double c, const std::function<double(double)>& phi) {
  const double lo = b, hi = a - 2.0 + b;
  const auto obj = [&](double a1) {
    const double a2 = a - a1;
    return (a1 * phi(a1 / b) + a2 * (0.5 * c + kappa_value(a2, 1.0 - b))) / a;
  };
  if (hi - lo < 1e-14) return {obj(lo), b, lo};
  const Extremum e = maximize_scan(obj, lo, hi, 24, 1e-10);
  return {e.value, b, e.arg};
}

Composite composite_sup(double a, double c, const std::function<double(double)>& phi) {
  Composite best{0.5 * c + kappa_value(a, 1.0), 0.0, 0.0};
  const int n = 100;
  int best_k = 0;
  for (int k = 1; k <= n; ++k) {
    const Composite cand = best_for_b(a, k / static_cast<double>(n), c, phi);
    if (cand.value > best.value) {
      best = cand;
      best_k = k;
    }
  }
  if (best_k > 0) {
    // Refine b around the best cell.
    const double lo = std::max((best_k - 1) / static_cast<double>(n), 1e-9);
    const double hi = std::min((best_k + 1) / static_cast<double>(n), 1.0);
    Composite refined;
    const Extremum e = maximize_golden([&](double b) { return best_for_b(a, b, c, phi).value; }, lo, hi, 1e-8);
    refined = best_for_b(a, e.arg, c, phi);
    if (refined.value > best.value) best = refined;
  }
  return best;
}

// sup over mu >= 1 of mu [f(mu) - shift], +inf when it grows without bound.
double sup_weighted(const std::function<double(double)>& f, double shift, const std::vector<double>& special) {
  const auto obj = [&](double mu) { return mu * (f(mu) - shift); };
  constexpr double mu_max = 1e6;
  double best;
  try {
    const Extremum e = maximize_over_mu(obj, mu_max, 1e-10);
    if (e.arg > 0.5 * mu_max) return kInf;  // still climbing at the end of the range
    best = e.value;
  } catch (const ConvergenceError&) {
    return kInf;
  }
  for (double mu : special) best = std::max(best, obj(mu));
  return best;
}

PhaseVerdict decide(const WeightedSup& w, double threshold, const std::string& what) {
  PhaseVerdict v;
  v.lower_value = w.lower;
  v.upper_value = w.upper;
  v.estimate_value = w.has_estimate ? w.estimate : std::numeric_limits<double>::quiet_NaN();
  v.threshold = threshold;
  std::ostringstream ev;
  if (w.lower > threshold) {
    v.state = Phase::Localized;
    ev << what << ": lower-bound sup " << w.lower << " > " << threshold;
  } else if (w.upper <= threshold) {
    v.state = Phase::Delocalized;
    ev << what << ": upper-bound sup " << w.upper << " <= " << threshold;
  } else {
    v.state = Phase::Undecided;
    v.gap = std::min(threshold - w.lower, w.upper - threshold);
    ev << what << ": bracket [" << w.lower << ", " << w.upper << "] straddles " << threshold;
  }
  v.evidence = ev.str();
  return v;
}

}  // namespace

const char* to_string(BlockPairKind k) {
  switch (k) {
    case BlockPairKind::AA: return "AA";
    case BlockPairKind::AB: return "AB";
    case BlockPairKind::BA: return "BA";
    case BlockPairKind::BB: return "BB";
  }
  return "?";
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Delocalized: return "Delocalized";
    case Phase::Localized: return "Localized";
    case Phase::Undecided: return "Undecided";
  }
  return "?";
}

double psi_diag(BlockPairKind kind, double a, double alpha, double beta) {
  if (kind != BlockPairKind::AA && kind != BlockPairKind::BB) throw std::domain_error("psi_diag takes AA or BB");
  if (!(a >= 2.0)) {
    std::ostringstream msg;
    msg << "psi_diag requires a >= 2, got " << a;
    throw std::domain_error(msg.str());
  }
  return 0.5 * (kind == BlockPairKind::AA ? alpha : beta) + kappa_value(a, 1.0);
}

DiagSupremum S_diag(BlockPairKind kind, double alpha, double beta) {
  return {psi_diag(kind, kAStar, alpha, beta), kAStar};
}

BlockFreeEnergy psi_offdiag(BlockPairKind kind, double a, const PhiSource& phi) {
  if (kind != BlockPairKind::AB && kind != BlockPairKind::BA) throw std::domain_error("psi_offdiag takes AB or BA");
  if (!(a >= 2.0)) {
    std::ostringstream msg;
    msg << "psi_offdiag requires a >= 2, got " << a;
    throw std::domain_error(msg.str());
  }
  const double c = kind == BlockPairKind::AB ? phi.alpha : phi.beta;
  BlockFreeEnergy out;
  out.kind = kind;
  out.a = a;
  out.lower = composite_sup(a, c, phi.lower).value;
  out.upper = composite_sup(a, c, phi.upper).value;
  const Composite est = composite_sup(a, c, phi.estimate ? phi.estimate : phi.lower);
  out.value = std::clamp(est.value, out.lower, out.upper);
  out.b_star = est.b;
  out.a1_star = est.a1;
  out.boundary = est.b > 0.0 && (std::abs(est.a1 - est.b) < 1e-6 || std::abs(est.a1 - (a - 2.0 + est.b)) < 1e-6);
  return out;
}

OffdiagSupremum S_offdiag(BlockPairKind kind, const PhiSource& phi, double a_max) {
  // The bracket ends are suprema of their own runs, taken on a shared a grid.
  OffdiagSupremum out;
  out.lower = out.upper = out.value = -kInf;
  const int n = 24;
  for (int i = 0; i <= n; ++i) {
    const double a = 2.0 + (a_max - 2.0) * i / n;
    const BlockFreeEnergy e = psi_offdiag(kind, a, phi);
    out.lower = std::max(out.lower, e.lower);
    out.upper = std::max(out.upper, e.upper);
    if (e.value > out.value) {
      out.value = e.value;
      out.a_star = a;
    }
  }
  const double h = (a_max - 2.0) / n;
  const Extremum e = maximize_golden([&](double a) { return psi_offdiag(kind, a, phi).value; },
                                     std::max(2.0, out.a_star - h), std::min(a_max, out.a_star + h), 1e-4);
  if (e.value > out.value) {
    out.value = e.value;
    out.a_star = e.arg;
  }
  // Grid sampling can miss the top of the upper run by a little; keep the bracket valid.
  out.lower = std::min(out.lower, out.value);
  out.upper = std::max(out.upper, out.value);
  return out;
}

WeightedSup weighted_sup(const PhiSource& phi, double shift) {
  WeightedSup w;
  w.lower = sup_weighted(phi.lower, shift, phi.special_mus);
  w.upper = sup_weighted(phi.upper, shift, {});
  if (phi.estimate) {
    w.estimate = sup_weighted(phi.estimate, shift, {});
    w.has_estimate = true;
  }
  return w;
}

PhaseVerdict criterion_supercritical(const PhiSource& phi) {
  return decide(weighted_sup(phi, 0.5 * phi.alpha + kKappaStar), kSlopeConst, "supercritical AB vs AA");
}

PhaseVerdict criterion_pointwise(double a, double c, const PhiSource& phi) {
  if (!(a > 2.0)) {
    std::ostringstream msg;
    msg << "criterion_pointwise requires a > 2, got " << a;
    throw std::domain_error(msg.str());
  }
  const double shift = 0.5 * c + 0.5 * std::log(a / (a - 2.0));
  const double threshold = 0.5 * std::log(4.0 * (a - 2.0) * (a - 1.0) * (a - 1.0) / a);
  std::ostringstream what;
  what << "pointwise at a=" << a;
  return decide(weighted_sup(phi, shift), threshold, what.str());
}

double G(double mu, double a) {
  if (!(mu >= 1.0) || !(a > 2.0)) {
    std::ostringstream msg;
    msg << "G requires mu >= 1 and a > 2, got mu=" << mu << " a=" << a;
    throw std::domain_error(msg.str());
  }
  return 0.5 * ((mu - 1.0) / mu) * std::log(a / (a - 2.0)) + std::log(2.0 * (a - 1.0)) / mu;
}

}  // namespace emulsion
