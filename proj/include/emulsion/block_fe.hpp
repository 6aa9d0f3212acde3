#pragma once

// Free energies per step of a polymer crossing one block diagonally, with
// the neighbouring block of the same or the other type, and the criteria
// that decide when the AB interface pays off.

#include <string>

#include "emulsion/interface_fe.hpp"

namespace emulsion {

enum class BlockPairKind { AA, AB, BA, BB };
enum class Phase { Delocalized, Localized, Undecided };

const char* to_string(BlockPairKind k);
const char* to_string(Phase p);

struct PhaseVerdict {
  Phase state = Phase::Undecided;
  std::string evidence;
  double lower_value = 0.0;  // criterion functional evaluated with lower bounds on phi
  double upper_value = 0.0;  // ... with upper bounds (may be +inf)
  double estimate_value = 0.0;  // ... with the point estimate, if the source has one
  double threshold = 0.0;
  double gap = 0.0;  // how far the bracket is from deciding; 0 when decided
};

struct DiagSupremum {
  double value = 0.0;
  double a_star = 0.0;
};

struct BlockFreeEnergy {
  BlockPairKind kind = BlockPairKind::AB;
  double a = 0.0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double b_star = 0.0;   // maximiser of the estimate run
  double a1_star = 0.0;
  bool boundary = false;  // maximiser on a1 = b or a2 = 2 - b with b > 0
};

/// alpha/2 + kappa(a, 1) for AA, beta/2 + kappa(a, 1) for BB. Throws
/// std::domain_error for a < 2 or an off-diagonal kind.
double psi_diag(BlockPairKind kind, double a, double alpha, double beta);

/// Supremum over a of psi_diag, attained at a = 5/2.
DiagSupremum S_diag(BlockPairKind kind, double alpha, double beta);

/// Supremum over b in [0, 1], a1 in [b, a - 2 + b] of
/// [a1 phi(a1/b) + a2 (c/2 + kappa(a2, 1 - b))] / a with a2 = a - a1 and
/// c = alpha (AB) or beta (BA). b = 0 contributes psi_diag. Run three times:
/// with the lower and upper bounds of phi, and with the estimate if present
/// (otherwise the lower bound). The value is clamped into [lower, upper].
BlockFreeEnergy psi_offdiag(BlockPairKind kind, double a, const PhiSource& phi);

/// Supremum over a in [2, a_max] of psi_offdiag, with the maximiser.
struct OffdiagSupremum {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double a_star = 0.0;
};
OffdiagSupremum S_offdiag(BlockPairKind kind, const PhiSource& phi, double a_max = 8.0);

/// sup over mu of mu [phi(mu) - shift] for the three members of the source.
struct WeightedSup {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  bool has_estimate = false;
};
WeightedSup weighted_sup(const PhiSource& phi, double shift);

/// sup_mu mu [phi(mu) - alpha/2 - log(5)/2] against log(9/5)/2.
PhaseVerdict criterion_supercritical(const PhiSource& phi);

/// sup_mu mu [phi(mu) - c/2 - log(a/(a-2))/2] against log[4(a-2)(a-1)^2/a]/2.
/// c is alpha for AB against AA and beta for BA against BB. Throws
/// std::domain_error for a <= 2.
PhaseVerdict criterion_pointwise(double a, double c, const PhiSource& phi);

/// G(mu, a) = ((mu-1)/(2 mu)) log(a/(a-2)) + (1/mu) log[2(a-1)].
double G(double mu, double a);

}  // namespace emulsion
