#pragma once

// Random block fields and the largest frequency of A blocks that a directed
// coarse-grained path can collect, rho*(p).
//
// Corners sit on the even sublattice of Z^2. From corner (i, j) the path moves
// to (i+1, j+1) through block (i, j) or to (i+1, j-1) through block (i, j-1),
// so every block is one bond of a rotated square lattice. Block (i, j) is A
// when cell_uniform(seed, i, j) < p; a shared seed therefore couples all p.

#include <cstdint>
#include <vector>

#include "emulsion/random.hpp"

namespace emulsion {

struct BlockField {
  int width = 0;
  int height = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<Label> labels;  // row-major, labels[j * width + i]

  Label at(int i, int j) const { return labels[static_cast<std::size_t>(j) * width + i]; }
  double a_fraction() const;
};

/// Labels of blocks (i, j), 0 <= i < width, 0 <= j < height. Throws
/// std::invalid_argument for empty or oversized windows and p outside (0, 1).
BlockField sample_field(int width, int height, double p, std::uint64_t seed);

bool block_is_a(double p, std::uint64_t seed, std::int64_t i, std::int64_t j);

/// Max A count over all `steps`-step directed paths from corner (0, 0),
/// maximised over end heights, divided by steps. One realisation.
double rho_star_single(double p, int steps, std::uint64_t seed);

struct RhoStarEstimate {
  double p = 0.0;
  int steps = 0;
  int replicas = 0;
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> samples;
};

/// Replica r uses replica_seed(seed, r). Requires steps >= 100, replicas >= 2.
RhoStarEstimate rho_star(double p, int steps, int replicas, std::uint64_t seed, int threads = 1);

/// Least-squares line in 1/N through rho_star at each N (same seeds, so the
/// fields are nested). `value` is the intercept, clipped to [0, 1].
struct RhoStarExtrapolation {
  double p = 0.0;
  double value = 0.0;
  double intercept = 0.0;  // unclipped
  double slope = 0.0;
  double max_residual = 0.0;
  std::vector<RhoStarEstimate> runs;
};

RhoStarExtrapolation rho_star_extrapolated(double p, const std::vector<int>& steps, int replicas,
                                           std::uint64_t seed, int threads = 1);

struct PcEstimate {
  double p_c = 0.0;
  double uncertainty = 0.0;  // grid spacing
  double level = 1.0 - 1e-3;
  std::vector<RhoStarExtrapolation> curve;
};

/// Largest grid point whose extrapolated rho* is below `level`. The grid must
/// be increasing; throws std::invalid_argument if no point qualifies.
PcEstimate estimate_pc(const std::vector<double>& p_grid, const std::vector<int>& steps, int replicas,
                       std::uint64_t seed, int threads = 1, double level = 1.0 - 1e-3);

}  // namespace emulsion
