#pragma once

// Exact finite-size counterparts of the asymptotic entropy formulas:
// dynamic-programming path counts in exact integer arithmetic and quenched
// partition sums of the single-interface model for a given monomer sequence.

#include <gmpxx.h>

#include <span>
#include <vector>

#include "emulsion/random.hpp"

namespace emulsion {

struct PathCountQuery {
  int L = 0;            // block size; sets the band (-L, L] when restricted
  int total_steps = 0;
  int end_x = 0;
  int end_y = 0;
  bool restrict_band = false;
};

/// Directed self-avoiding paths (E/N/S, no N<->S reversal) from (0,0) to
/// (end_x, end_y) in exactly total_steps steps. Throws std::invalid_argument
/// on inconsistent displacement or parity.
mpz_class count_paths(const PathCountQuery& q);

/// Natural log of a positive big integer; -inf for zero.
double log_big(const mpz_class& n);

/// Column-choice formula for N_L(a, b) from the binomial sum over up-columns
/// and down-columns. Agrees with count_paths only in exponential growth rate.
mpz_class column_formula_count(int L, int steps, int horizontal);

struct QuenchedInterfaceQuery {
  double alpha = 0.0;
  double beta = 0.0;
  int L = 0;      // horizontal span; the path ends at (L, 0)
  int steps = 0;  // mu L, with steps - L even
  std::span<const Label> omega;  // at least `steps` labels
};

/// Step classification shared by the transfer matrix and the enumerator:
/// an East step at height y is upper iff y >= 1; a vertical step between y
/// and y' is upper iff max(y, y') >= 1.
inline bool east_step_upper(int y) { return y >= 1; }
inline bool vertical_step_upper(int y_from, int y_to) { return (y_from > y_to ? y_from : y_to) >= 1; }

/// Weight exponent of one monomer: alpha for A on an upper step, beta for B
/// on a lower-or-interface step, zero otherwise.
inline double step_energy(Label l, bool upper, double alpha, double beta) {
  if (upper) return l == Label::A ? alpha : 0.0;
  return l == Label::B ? beta : 0.0;
}

/// log Z for paths from (0,0) to (L,0) in `steps` steps.
double quenched_interface_logZ(const QuenchedInterfaceQuery& q);

/// log Z for every even vertical budget v = 0, 2, ..., v_max with the same
/// sequence prefix, i.e. endpoints (L, 0) reached in L + v steps. One sweep of
/// the transfer matrix serves every entry. Entry k holds v = 2k.
std::vector<double> quenched_interface_logZ_table(double alpha, double beta, int L, int v_max,
                                                  std::span<const Label> omega);

/// The same sweep read out at every column: entry [x][k] is log Z for the
/// bridge to (x, 0) in x + 2k steps (-inf where unreachable). The pruning
/// keeps every state such a shorter bridge needs, so each entry is exact.
std::vector<std::vector<double>> quenched_interface_logZ_grid(double alpha, double beta, int L, int v_max,
                                                              std::span<const Label> omega);

struct KacombReport {
  double a = 0.0;
  double b = 0.0;
  double kappa = 0.0;
  std::vector<int> L;
  std::vector<double> rate;           // (1/aL) log N_L(a,b), band-restricted
  std::vector<double> rate_unrestricted;
  std::vector<double> formula_rate;   // column-choice formula, for the record
  double extrapolated = 0.0;
  double rel_error = 0.0;             // |extrapolated - kappa| / kappa
};

/// Exact counts for each L, extrapolated to L -> infinity with the ansatz
/// r(L) = r + c1 log(L)/L + c2/L (fewer points drop terms from the right).
KacombReport verify_kacomb_asymptotics(double a, double b, std::span<const int> Ls);

/// Fit of r(L) = r + c1 log(L)/L + c2/L through the last three points.
double extrapolate_rate(std::span<const int> Ls, std::span<const double> rates);

}  // namespace emulsion
