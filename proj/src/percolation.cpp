#include "emulsion/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "emulsion/parallel.hpp"

namespace emulsion {

namespace {

constexpr std::int64_t kMaxFieldBlocks = 400'000'000;
constexpr int kMaxSteps = 1'000'000;

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "block density must lie in (0, 1), got " << p;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double BlockField::a_fraction() const {
  const auto n = std::count(labels.begin(), labels.end(), Label::A);
  return labels.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(labels.size());
}

bool block_is_a(double p, std::uint64_t seed, std::int64_t i, std::int64_t j) {
  return cell_uniform(seed, i, j) < p;
}

BlockField sample_field(int width, int height, double p, std::uint64_t seed) {
  check_p(p);
  if (width < 1 || height < 1) throw std::invalid_argument("field dimensions must be >= 1");
  if (static_cast<std::int64_t>(width) * height > kMaxFieldBlocks) {
    std::ostringstream msg;
    msg << "field of " << width << "x" << height << " blocks exceeds the limit of " << kMaxFieldBlocks;
    throw std::invalid_argument(msg.str());
  }
  BlockField f;
  f.width = width;
  f.height = height;
  f.p = p;
  f.seed = seed;
  f.labels.resize(static_cast<std::size_t>(width) * height);
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i)
      f.labels[static_cast<std::size_t>(j) * width + i] = block_is_a(p, seed, i, j) ? Label::A : Label::B;
  return f;
}

double rho_star_single(double p, int steps, std::uint64_t seed) {
  check_p(p);
  if (steps < 1 || steps > kMaxSteps) {
    std::ostringstream msg;
    msg << "steps must lie in [1, " << kMaxSteps << "], got " << steps;
    throw std::invalid_argument(msg.str());
  }
  // best[j + steps]: max A count on reaching height j; -1 marks unreachable.
  const int off = steps;
  std::vector<int> cur(2 * steps + 1, -1), next(2 * steps + 1, -1);
  cur[off] = 0;
  for (int i = 0; i < steps; ++i) {
    std::fill(next.begin() + off - i - 1, next.begin() + off + i + 2, -1);
    for (int j = -i; j <= i; j += 2) {
      const int v = cur[j + off];
      if (v < 0) continue;
      const int up = v + (block_is_a(p, seed, i, j) ? 1 : 0);
      const int down = v + (block_is_a(p, seed, i, j - 1) ? 1 : 0);
      next[j + 1 + off] = std::max(next[j + 1 + off], up);
      next[j - 1 + off] = std::max(next[j - 1 + off], down);
    }
    std::swap(cur, next);
  }
  return static_cast<double>(*std::max_element(cur.begin(), cur.end())) / steps;
}

RhoStarEstimate rho_star(double p, int steps, int replicas, std::uint64_t seed, int threads) {
  check_p(p);
  if (steps < 100) throw std::invalid_argument("rho_star needs at least 100 steps");
  if (replicas < 2) throw std::invalid_argument("rho_star needs at least 2 replicas");
  RhoStarEstimate e;
  e.p = p;
  e.steps = steps;
  e.replicas = replicas;
  e.seed = seed;
  e.samples.resize(replicas);
  parallel_for(replicas, threads, [&](int r) { e.samples[r] = rho_star_single(p, steps, replica_seed(seed, r)); });
  e.mean = std::accumulate(e.samples.begin(), e.samples.end(), 0.0) / replicas;
  double ss = 0.0;
  for (double x : e.samples) ss += (x - e.mean) * (x - e.mean);
  e.std_err = std::sqrt(ss / (replicas - 1) / replicas);
  return e;
}

RhoStarExtrapolation rho_star_extrapolated(double p, const std::vector<int>& steps, int replicas,
                                           std::uint64_t seed, int threads) {
  if (steps.empty()) throw std::invalid_argument("need at least one path length");
  RhoStarExtrapolation out;
  out.p = p;
  for (int n : steps) out.runs.push_back(rho_star(p, n, replicas, seed, threads));
  if (steps.size() == 1) {
    out.intercept = out.runs[0].mean;
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(steps.size());
    for (const auto& r : out.runs) {
      const double x = 1.0 / r.steps;
      sx += x;
      sy += r.mean;
      sxx += x * x;
      sxy += x * r.mean;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / m;
    for (const auto& r : out.runs)
      out.max_residual = std::max(out.max_residual, std::abs(r.mean - out.intercept - out.slope / r.steps));
  }
  out.value = std::clamp(out.intercept, 0.0, 1.0);
  return out;
}

PcEstimate estimate_pc(const std::vector<double>& p_grid, const std::vector<int>& steps, int replicas,
                       std::uint64_t seed, int threads, double level) {
  if (p_grid.size() < 2 || !std::is_sorted(p_grid.begin(), p_grid.end()))
    throw std::invalid_argument("p grid must be increasing with at least two points");
  PcEstimate out;
  out.level = level;
  int last_below = -1;
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    out.curve.push_back(rho_star_extrapolated(p_grid[k], steps, replicas, seed, threads));
    if (out.curve.back().value < level) last_below = static_cast<int>(k);
  }
  if (last_below < 0) throw std::invalid_argument("no grid point lies below the level; extend the grid downwards");
  out.p_c = p_grid[last_below];
  const std::size_t k = static_cast<std::size_t>(last_below);
  out.uncertainty = k + 1 < p_grid.size() ? p_grid[k + 1] - p_grid[k] : p_grid[k] - p_grid[k - 1];
  return out;
}

}  // namespace emulsion
