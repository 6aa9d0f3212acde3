#include "emulsion/interface_fe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "emulsion/lattice_entropy.hpp"
#include "emulsion/parallel.hpp"
#include "emulsion/path_oracle.hpp"
#include "emulsion/random.hpp"

namespace emulsion {

namespace {

constexpr double kStrategyMu = 9.0 / 8.0;

void check_settings(const EstimatorSettings& s) {
  if (s.L < 20 || s.replicas < 1) {
    std::ostringstream msg;
    msg << "interface estimator needs L >= 20 and replicas >= 1 (got L=" << s.L << ", replicas=" << s.replicas << ")";
    throw std::invalid_argument(msg.str());
  }
}

void check_mu(double mu) {
  if (!(mu >= 1.0) || !std::isfinite(mu)) {
    std::ostringstream msg;
    msg << "interface free energy requires mu >= 1, got " << mu;
    throw std::invalid_argument(msg.str());
  }
}

// Zero-coupling bridge counts, log N(x, v), shared by every estimate at a given L.
// The entries do not depend on v_max, so a larger sweep serves smaller requests.
struct ZeroTable {
  int v_max = -1;
  std::vector<std::vector<double>> grid;
};

std::shared_ptr<const ZeroTable> zero_table(int L, int v_max) {
  static std::mutex m;
  static std::map<int, std::shared_ptr<const ZeroTable>> cache;
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(L);
    if (it != cache.end() && it->second->v_max >= v_max) return it->second;
  }
  auto t = std::make_shared<ZeroTable>();
  t->v_max = v_max;
  const std::vector<Label> blank(static_cast<std::size_t>(L + v_max), Label::A);
  t->grid = quenched_interface_logZ_grid(0.0, 0.0, L, v_max, blank);
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[L];
  if (!slot || slot->v_max < v_max) slot = t;
  return slot;
}

struct Layout {
  int L = 0, half = 0, v_max = 0;
  std::vector<int> v, v_half;  // vertical budgets at L and at L/2
};

Layout make_layout(std::span<const double> mus, int L) {
  Layout lay;
  lay.L = L;
  lay.half = L / 2;
  for (double mu : mus) {
    check_mu(mu);
    lay.v.push_back(interface_steps(mu, L) - L);
    lay.v_half.push_back(interface_steps(mu, lay.half) - lay.half);
    lay.v_max = std::max({lay.v_max, lay.v.back(), lay.v_half.back()});
  }
  return lay;
}

struct ReplicaRows {
  std::vector<std::vector<double>> at_L, at_half;
};

ReplicaRows run_replicas(double alpha, double beta, std::span<const double> mus, const EstimatorSettings& s,
                         bool centered) {
  check_settings(s);
  const Layout lay = make_layout(mus, s.L);
  const auto zero = zero_table(s.L, lay.v_max);
  const std::size_t m = mus.size();
  ReplicaRows rows;
  rows.at_L.assign(static_cast<std::size_t>(s.replicas), std::vector<double>(m));
  rows.at_half.assign(static_cast<std::size_t>(s.replicas), std::vector<double>(m));
  parallel_for(s.replicas, s.threads, [&](int r) {
    const auto omega = sample_sequence(static_cast<std::size_t>(s.L + lay.v_max), replica_seed(s.seed, r));
    const auto grid = quenched_interface_logZ_grid(alpha, beta, s.L, lay.v_max, omega);
    // Prefix A-counts for the centred variant.
    std::vector<int> a_prefix(omega.size() + 1, 0);
    for (std::size_t i = 0; i < omega.size(); ++i) a_prefix[i + 1] = a_prefix[i] + (omega[i] == Label::A);
    const auto value = [&](int x, int v) {
      const int n = x + v;
      double phi = kappa_hat_value(static_cast<double>(n) / x) + (grid[x][v / 2] - zero->grid[x][v / 2]) / n;
      if (centered) phi -= alpha * (static_cast<double>(a_prefix[n]) / n - 0.5);
      return phi;
    };
    for (std::size_t i = 0; i < m; ++i) {
      rows.at_L[r][i] = value(lay.L, lay.v[i]);
      rows.at_half[r][i] = value(lay.half, lay.v_half[i]);
    }
  });
  return rows;
}

std::pair<double, double> mean_and_err(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

int interface_steps(double mu, int L) {
  check_mu(mu);
  const double target = mu * L;
  // Candidates L + 2k around the target; ties go to the shorter path.
  const double k = (target - L) / 2.0;
  const long k_lo = static_cast<long>(std::floor(k));
  const long k_hi = k_lo + 1;
  const double d_lo = std::abs(L + 2.0 * k_lo - target), d_hi = std::abs(L + 2.0 * k_hi - target);
  const long best = (d_hi < d_lo) ? k_hi : k_lo;
  return L + 2 * static_cast<int>(std::max(best, 0L));
}

double phi_lower_bounds(InterfaceParams p) {
  check_mu(p.mu);
  double lo = 0.5 * std::max(p.alpha, p.beta) + kappa_hat_value(p.mu);
  if (std::abs(p.mu - kStrategyMu) < 1e-12) {
    lo = std::max({lo, 0.5 * p.alpha + 0.125 * p.beta, 0.5 * p.beta + 0.125 * p.alpha});
  }
  return lo;
}

double phi_annealed_upper(InterfaceParams p) {
  check_mu(p.mu);
  // log(e^-a/2 + e^b/2) computed stably.
  const double m = std::max(-p.alpha, p.beta);
  const double mix = m + std::log(0.5 * std::exp(-p.alpha - m) + 0.5 * std::exp(p.beta - m));
  return 0.5 * p.alpha + kappa_hat_value(p.mu) + std::max(0.0, mix);
}

double phi_upper_bound(InterfaceParams p) {
  const double kh = kappa_hat_value(p.mu);
  return std::min({phi_annealed_upper(p), phi_annealed_upper({p.beta, p.alpha, p.mu}),
                   kh + std::max({p.alpha, p.beta, 0.0})});
}

std::vector<std::vector<double>> phi_interface_samples(double alpha, double beta, std::span<const double> mus,
                                                       const EstimatorSettings& s, bool centered) {
  return run_replicas(alpha, beta, mus, s, centered).at_L;
}

std::vector<QuenchedEstimate> phi_interface_mu_grid(double alpha, double beta, std::span<const double> mus,
                                                    const EstimatorSettings& s) {
  const ReplicaRows rows = run_replicas(alpha, beta, mus, s, false);
  std::vector<QuenchedEstimate> out;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    std::vector<double> col, ext;
    for (int r = 0; r < s.replicas; ++r) {
      col.push_back(rows.at_L[r][i]);
      ext.push_back(2.0 * rows.at_L[r][i] - rows.at_half[r][i]);
    }
    QuenchedEstimate e;
    std::tie(e.mean, e.std_err) = mean_and_err(col);
    std::tie(e.extrapolated, e.extrapolated_err) = mean_and_err(ext);
    e.L = s.L;
    e.replicas = s.replicas;
    e.seed = s.seed;
    e.steps = interface_steps(mus[i], s.L);
    e.mu_realized = static_cast<double>(e.steps) / s.L;
    const InterfaceParams realized{alpha, beta, e.mu_realized};
    e.lower_bound = phi_lower_bounds(realized);
    e.upper_bound = phi_upper_bound(realized);
    out.push_back(e);
  }
  return out;
}

QuenchedEstimate phi_interface(InterfaceParams p, const EstimatorSettings& s) {
  const double mus[] = {p.mu};
  return phi_interface_mu_grid(p.alpha, p.beta, mus, s).front();
}

QuenchedEstimate phi_interface_cached(InterfaceParams p, const EstimatorSettings& s) {
  using Key = std::tuple<double, double, double, int, int, std::uint64_t>;
  static std::mutex m;
  static std::map<Key, QuenchedEstimate> memo;
  const Key key{p.alpha, p.beta, p.mu, s.L, s.replicas, s.seed};
  {
    std::lock_guard<std::mutex> lock(m);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  const QuenchedEstimate e = phi_interface(p, s);
  std::lock_guard<std::mutex> lock(m);
  return memo.emplace(key, e).first->second;
}

PhiSource bound_source(double alpha, double beta) {
  PhiSource src;
  src.alpha = alpha;
  src.beta = beta;
  src.lower = [alpha, beta](double mu) { return phi_lower_bounds({alpha, beta, mu}); };
  src.upper = [alpha, beta](double mu) { return phi_upper_bound({alpha, beta, mu}); };
  src.special_mus = {kStrategyMu};
  return src;
}

PhiSource monte_carlo_source(double alpha, double beta, const EstimatorSettings& s, double dmu, double mu_max) {
  PhiSource src = bound_source(alpha, beta);
  std::vector<double> mus;
  const int n = static_cast<int>(std::lround((mu_max - 1.0) / dmu));
  for (int i = 0; i <= n; ++i) mus.push_back(1.0 + i * dmu);
  const auto est = phi_interface_mu_grid(alpha, beta, mus, s);
  auto xs = std::make_shared<std::vector<double>>();
  auto ys = std::make_shared<std::vector<double>>();
  for (const auto& e : est) {
    xs->push_back(e.mu_realized);
    ys->push_back(e.mean);
  }
  src.estimate = [xs, ys, lower = src.lower](double mu) {
    if (mu < xs->front() || mu > xs->back()) return lower(mu);
    auto it = std::upper_bound(xs->begin(), xs->end(), mu);
    if (it == xs->end()) return ys->back();
    const std::size_t j = static_cast<std::size_t>(it - xs->begin());
    if (j == 0) return ys->front();
    const double t = (mu - (*xs)[j - 1]) / ((*xs)[j] - (*xs)[j - 1]);
    return (1.0 - t) * (*ys)[j - 1] + t * (*ys)[j];
  };
  return src;
}

}  // namespace emulsion
