#include "emulsion/path_oracle.hpp"

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "emulsion/lattice_entropy.hpp"

namespace emulsion {

namespace {

// Classes of the last step. The start state behaves like an East step.
enum Cls { kE = 0, kN = 1, kS = 2 };

}  // namespace

double log_big(const mpz_class& n) {
  if (sgn(n) <= 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * kLog2;
}

mpz_class count_paths(const PathCountQuery& q) {
  const int T = q.total_steps, ex = q.end_x, ey = q.end_y;
  if (ex < 0 || T < ex + std::abs(ey) || (T - ex - std::abs(ey)) % 2 != 0) {
    std::ostringstream msg;
    msg << "inconsistent path query: steps=" << T << " end=(" << ex << "," << ey << ")";
    throw std::invalid_argument(msg.str());
  }
  if (q.restrict_band && (q.L <= 0 || ey > q.L || ey <= -q.L)) return 0;
  const int vertical = T - ex;
  const int up = (vertical + ey) / 2, down = (vertical - ey) / 2;
  int ylo = -down, yhi = up;
  if (q.restrict_band) {
    ylo = std::max(ylo, -q.L + 1);
    yhi = std::min(yhi, q.L);
  }
  const int ny = yhi - ylo + 1, nx = ex + 1;
  const auto idx = [&](int x, int y, int c) { return (static_cast<std::size_t>(x) * ny + (y - ylo)) * 3 + c; };

  std::vector<mpz_class> prev(static_cast<std::size_t>(nx) * ny * 3), cur(prev.size());
  if (ylo > 0 || yhi < 0) return 0;
  prev[idx(0, 0, kE)] = 1;
  mpz_class sum;
  for (int t = 1; t <= T; ++t) {
    const int remaining = T - t;
    for (int x = 0; x < nx; ++x) {
      for (int y = ylo; y <= yhi; ++y) {
        const bool feasible = std::abs(y) + x <= t && (ex - x) + std::abs(ey - y) <= remaining;
        mpz_class* out = &cur[idx(x, y, 0)];
        if (!feasible) {
          out[kE] = 0;
          out[kN] = 0;
          out[kS] = 0;
          continue;
        }
        if (x > 0) {
          const mpz_class* p = &prev[idx(x - 1, y, 0)];
          sum = p[kE];
          sum += p[kN];
          sum += p[kS];
          out[kE] = sum;
        } else {
          out[kE] = 0;
        }
        if (y - 1 >= ylo) {
          const mpz_class* p = &prev[idx(x, y - 1, 0)];
          out[kN] = p[kE];
          out[kN] += p[kN];
        } else {
          out[kN] = 0;
        }
        if (y + 1 <= yhi) {
          const mpz_class* p = &prev[idx(x, y + 1, 0)];
          out[kS] = p[kE];
          out[kS] += p[kS];
        } else {
          out[kS] = 0;
        }
      }
    }
    std::swap(prev, cur);
  }
  if (ey < ylo || ey > yhi) return 0;
  const mpz_class* p = &prev[idx(ex, ey, 0)];
  return p[kE] + p[kN] + p[kS];
}

mpz_class column_formula_count(int L, int steps, int horizontal) {
  // Up and down step totals for a crossing of height L.
  const int vertical = steps - horizontal;
  if (vertical < L || (vertical - L) % 2 != 0) return 0;
  const int up = (vertical + L) / 2, down = (vertical - L) / 2;
  const auto binom = [](long n, long k) -> mpz_class {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
  };
  // Runs of u >= 1 steps split into k >= 1 columns; zero steps use zero columns.
  const auto runs = [&](int total, int cols) -> mpz_class {
    if (total == 0) return cols == 0 ? 1 : 0;
    return binom(total - 1, cols - 1);
  };
  mpz_class out = 0;
  const int k_lo = up > 0 ? 1 : 0;
  for (int k = k_lo; k <= horizontal; ++k) {
    const mpz_class first = binom(horizontal, k) * runs(up, k);
    if (first == 0) continue;
    mpz_class inner = 0;
    const int l_lo = down > 0 ? 1 : 0;
    for (int l = l_lo; l <= horizontal - k; ++l) inner += binom(horizontal - k, l) * runs(down, l);
    out += first * inner;
  }
  return out;
}

namespace {

// States many orders below the layer maximum drift into subnormal range, where
// x86 arithmetic is two orders of magnitude slower. They carry no weight, so
// flush them to zero for the duration of a sweep.
class FlushDenormals {
 public:
#if defined(__SSE2__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

}  // namespace

std::vector<std::vector<double>> quenched_interface_logZ_grid(double alpha, double beta, int L, int v_max,
                                                              std::span<const Label> omega) {
  if (L < 0 || v_max < 0 || v_max % 2 != 0) throw std::invalid_argument("quenched table requires L >= 0, even v_max >= 0");
  const int T = L + v_max;
  if (static_cast<int>(omega.size()) < T) throw std::invalid_argument("monomer sequence shorter than the path");
  const FlushDenormals ftz;

  // State at (x, v) = (east steps, vertical steps) is a vector over height y and
  // last-step class, with its own power-of-two exponent. (x, v) depends on
  // (x-1, v) and (x, v-1) only, so the sweep runs over tiles of x with v inner:
  // the tile stays in cache and only the column at the tile edge is streamed.
  const int half = v_max / 2;
  const int pad = 2;
  const int width = 2 * (half + pad) + 1;  // y in [-(half+pad), half+pad]
  const int off = half + pad;
  const std::size_t vec = 3 * static_cast<std::size_t>(width);
  constexpr int kZero = std::numeric_limits<int>::min() / 4;  // exponent of an all-zero state

  const int tile = std::max(1, static_cast<int>((256 * 1024) / (vec * sizeof(double))));
  std::vector<double> edge(static_cast<std::size_t>(v_max + 1) * vec, 0.0);  // state(x0 - 1, v)
  std::vector<int> edge_exp(static_cast<std::size_t>(v_max + 1), kZero);
  std::vector<double> rows(2 * static_cast<std::size_t>(tile) * vec, 0.0);  // state(x, v) and (x, v-1)
  std::vector<int> rows_exp(2 * static_cast<std::size_t>(tile), kZero);

  std::vector<std::vector<double>> out(static_cast<std::size_t>(L) + 1,
                                       std::vector<double>(static_cast<std::size_t>(half) + 1,
                                                           -std::numeric_limits<double>::infinity()));
  const double e_alpha = std::exp(alpha), e_beta = std::exp(beta);

  for (int x0 = 0; x0 <= L; x0 += tile) {
    const int x1 = std::min(L + 1, x0 + tile);
    std::fill(rows.begin(), rows.end(), 0.0);
    std::fill(rows_exp.begin(), rows_exp.end(), kZero);
    for (int v = 0; v <= v_max; ++v) {
      const int cur = v & 1, prv = cur ^ 1;
      const int ym = std::min(v, v_max - v);
      for (int x = x0; x < x1; ++x) {
        const int k = x - x0;
        double* o = rows.data() + (static_cast<std::size_t>(cur) * tile + k) * vec + off;
        int& o_exp = rows_exp[static_cast<std::size_t>(cur) * tile + k];
        const double* pv = rows.data() + (static_cast<std::size_t>(prv) * tile + k) * vec + off;
        const int pv_exp = rows_exp[static_cast<std::size_t>(prv) * tile + k];
        const double* pe;
        int pe_exp;
        if (k == 0) {
          pe = edge.data() + static_cast<std::size_t>(v) * vec + off;
          pe_exp = x == 0 ? kZero : edge_exp[static_cast<std::size_t>(v)];
        } else {
          pe = rows.data() + (static_cast<std::size_t>(cur) * tile + k - 1) * vec + off;
          pe_exp = rows_exp[static_cast<std::size_t>(cur) * tile + k - 1];
        }
        double* oE = o;
        double* oN = o + width;
        double* oS = o + 2 * width;
        const int t = x + v;
        if (t == 0) {
          std::fill(o - off, o - off + vec, 0.0);
          oE[0] = 1.0;
          o_exp = 0;
          out[0][0] = 0.0;
          continue;
        }
        const int s_exp = std::max(pe_exp, pv_exp);
        if (s_exp == kZero) {
          std::fill(o - off, o - off + vec, 0.0);
          o_exp = kZero;
          continue;
        }
        const double fe = pe_exp == kZero ? 0.0 : std::ldexp(1.0, std::max(pe_exp - s_exp, -1100));
        const double fv = pv_exp == kZero ? 0.0 : std::ldexp(1.0, std::max(pv_exp - s_exp, -1100));
        const Label mono = omega[static_cast<std::size_t>(t - 1)];
        const double w_up = mono == Label::A ? e_alpha : 1.0;
        const double w_low = mono == Label::B ? e_beta : 1.0;
        const double* lE = pe;
        const double* lN = pe + width;
        const double* lS = pe + 2 * width;
        const double* vE = pv;
        const double* vN = pv + width;
        const double* vS = pv + 2 * width;
        // East at y and North into y are upper iff y >= 1; South into y iff y >= 0.
        const auto span = [&](int y0, int y1, double wE, double wN, double wS) {
          wE *= fe;
          wN *= fv;
          wS *= fv;
          for (int y = y0; y <= y1; ++y) oE[y] = wE * (lE[y] + lN[y] + lS[y]);
          for (int y = y0; y <= y1; ++y) oN[y] = wN * (vE[y - 1] + vN[y - 1]);
          for (int y = y0; y <= y1; ++y) oS[y] = wS * (vE[y + 1] + vS[y + 1]);
        };
        span(-ym, -1, w_low, w_low, w_low);
        span(0, 0, w_low, w_low, w_up);
        span(1, ym, w_up, w_up, w_up);
        for (int y = ym + 1; y <= std::min(ym + pad, half + pad); ++y)
          for (int c = 0; c < 3; ++c) o[c * width + y] = o[c * width - y] = 0.0;

        double mx = 0.0;
        for (int c = 0; c < 3; ++c)
          for (int y = -ym; y <= ym; ++y) mx = std::max(mx, o[c * width + y]);
        if (mx == 0.0) {
          o_exp = kZero;
          continue;
        }
        int e2 = 0;
        std::frexp(mx, &e2);
        o_exp = s_exp;
        if (e2 > 100 || e2 < -100) {
          const double inv = std::ldexp(1.0, -e2);
          for (int c = 0; c < 3; ++c)
            for (int y = -ym; y <= ym; ++y) o[c * width + y] *= inv;
          o_exp += e2;
        }
        if (v % 2 == 0) {
          const double z = oE[0] + oN[0] + oS[0];
          if (z > 0.0) out[static_cast<std::size_t>(x)][static_cast<std::size_t>(v / 2)] = std::log(z) + o_exp * kLog2;
        }
      }
      // The last column of the tile feeds the next tile.
      const int k = x1 - 1 - x0;
      std::copy_n(rows.data() + (static_cast<std::size_t>(cur) * tile + k) * vec, vec,
                  edge.data() + static_cast<std::size_t>(v) * vec);
      edge_exp[static_cast<std::size_t>(v)] = rows_exp[static_cast<std::size_t>(cur) * tile + k];
    }
  }
  return out;
}

std::vector<double> quenched_interface_logZ_table(double alpha, double beta, int L, int v_max,
                                                  std::span<const Label> omega) {
  return quenched_interface_logZ_grid(alpha, beta, L, v_max, omega)[static_cast<std::size_t>(L)];
}

double quenched_interface_logZ(const QuenchedInterfaceQuery& q) {
  const int v = q.steps - q.L;
  if (q.L < 0 || v < 0 || v % 2 != 0) {
    std::ostringstream msg;
    msg << "interface query needs steps - L even and non-negative: steps=" << q.steps << " L=" << q.L;
    throw std::invalid_argument(msg.str());
  }
  return quenched_interface_logZ_table(q.alpha, q.beta, q.L, v, q.omega).back();
}

double extrapolate_rate(std::span<const int> Ls, std::span<const double> rates) {
  const std::size_t n = std::min(Ls.size(), rates.size());
  if (n == 0) throw std::invalid_argument("extrapolate_rate needs at least one point");
  if (n == 1) return rates[0];
  if (n == 2) {
    // r + c/L through two points.
    const double x0 = 1.0 / Ls[0], x1 = 1.0 / Ls[1];
    return (rates[0] * x1 - rates[1] * x0) / (x1 - x0);
  }
  // r + c1 log(L)/L + c2/L through the last three points (Cramer's rule).
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  for (std::size_t i = 0; i < 3; ++i) {
    const double Lf = Ls[n - 3 + i];
    m[i] = {1.0, std::log(Lf) / Lf, 1.0 / Lf};
    rhs[i] = rates[n - 3 + i];
  }
  const auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  auto m0 = m;
  for (int i = 0; i < 3; ++i) m0[i][0] = rhs[i];
  return det3(m0) / det3(m);
}

KacombReport verify_kacomb_asymptotics(double a, double b, std::span<const int> Ls) {
  KacombReport rep;
  rep.a = a;
  rep.b = b;
  rep.kappa = kappa_value(a, b);
  for (int L : Ls) {
    const double steps_d = a * L, horiz_d = b * L;
    const int steps = static_cast<int>(std::lround(steps_d));
    const int horiz = static_cast<int>(std::lround(horiz_d));
    if (std::abs(steps - steps_d) > 1e-9 || std::abs(horiz - horiz_d) > 1e-9) {
      std::ostringstream msg;
      msg << "aL and bL must be integers: a=" << a << " b=" << b << " L=" << L;
      throw std::invalid_argument(msg.str());
    }
    PathCountQuery q{L, steps, horiz, L, true};
    rep.L.push_back(L);
    rep.rate.push_back(log_big(count_paths(q)) / steps);
    q.restrict_band = false;
    rep.rate_unrestricted.push_back(log_big(count_paths(q)) / steps);
    rep.formula_rate.push_back(log_big(column_formula_count(L, steps, horiz)) / steps);
  }
  rep.extrapolated = extrapolate_rate(rep.L, rep.rate);
  rep.rel_error = std::abs(rep.extrapolated - rep.kappa) / rep.kappa;
  return rep;
}

}  // namespace emulsion
