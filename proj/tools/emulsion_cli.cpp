// Command-line front end. Each subcommand writes one CSV (stdout, or
// <out>.csv) and, with --out, a JSON manifest <out>.json beside it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emulsion/block_fe.hpp"
#include "emulsion/deloc_var.hpp"
#include "emulsion/interface_fe.hpp"
#include "emulsion/lattice_entropy.hpp"
#include "emulsion/optimize.hpp"
#include "emulsion/path_oracle.hpp"
#include "emulsion/percolation.hpp"
#include "emulsion/phase.hpp"

using namespace emulsion;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kParamError = 1, kConvergence = 2, kUndecided = 3 };

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row_strings(header); }

  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> out;
    (out.push_back(cell(cells)), ...);
    if (out.size() != width_) throw std::logic_error("csv row width mismatch");
    row_strings(out);
  }
  std::string str() const { return buf_.str(); }

 private:
  static std::string cell(double x) { return num(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::uint64_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(const std::string& s) { return s; }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) buf_ << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        buf_ << '"';
        for (char ch : c) buf_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        buf_ << '"';
      } else {
        buf_ << c;
      }
    }
    buf_ << "\r\n";
  }

  std::size_t width_;
  std::ostringstream buf_;
};

struct Common {
  std::string out;
  int threads = 1;
  bool strict = false;
};

struct Opts {
  double alpha = 0.0, beta = 0.0, p = 0.5, rho = 0.5, mu = 2.0, a = 2.5, b = 1.0;
  int L = 400, steps = 2000, replicas = 100;
  std::uint64_t seed = 0;
  double res = 0.05;
  double alpha_min = 0.0, alpha_max = 3.0, beta_min = -3.0, beta_max = 3.0;
  double p_min = 0.5, p_max = 0.8;
  std::vector<int> Ls{20, 40, 80};
  std::vector<int> step_list{500, 1000, 2000};
  std::vector<double> mus;
  bool mc = false, pc = false, curve = false;
};

void emit(const std::string& command, const Common& c, const Csv& csv, const ordered_json& params,
          std::optional<std::uint64_t> seed, double elapsed) {
  if (c.out.empty()) {
    std::cout << csv.str();
    return;
  }
  std::ofstream f(c.out + ".csv", std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + c.out + ".csv");
  f << csv.str();
  ordered_json m;
  m["command"] = command;
  m["params"] = params;
  m["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
  m["version"] = kVersion;
  m["elapsed_s"] = elapsed;
  std::ofstream j(c.out + ".json", std::ios::binary);
  j << m.dump(2) << "\n";
}

void require_seed(CLI::App* sub) {
  if (sub->count("--seed") == 0) throw std::invalid_argument(std::string(sub->get_name()) + " needs an explicit --seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copolymer near a random emulsion: entropies, free energies and phase diagram"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  Opts o;
  app.add_option("--out", common.out, "output basename; writes <out>.csv and <out>.json")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads; output does not depend on it")->check(CLI::PositiveNumber);
  app.add_flag("--strict", common.strict, "phase: exit 3 if any cell is Undecided");

  auto* entropy = app.add_subcommand("entropy", "kappa(a, b) and kappa_hat(mu)\n  columns: quantity,a,b,mu,value,delta,epsilon");
  entropy->add_option("--a", o.a, "time per size ratio, a >= 1 + b");
  entropy->add_option("--b", o.b, "horizontal fraction in [0, 1]");
  entropy->add_option("--mu", o.mu, "interface ratio, mu >= 1");

  app.add_subcommand("constants", "model constants\n  columns: name,value");

  auto* interface = app.add_subcommand(
      "interface",
      "quenched interface free energy phi(mu)\n  columns: alpha,beta,mu,mu_realized,L,replicas,seed,mean,std_err,"
      "lower,upper,extrapolated,extrapolated_err");
  interface->add_option("--alpha", o.alpha)->required();
  interface->add_option("--beta", o.beta)->required();
  interface->add_option("--mu", o.mus, "one or more mu values")->required();
  interface->add_option("--L", o.L)->capture_default_str();
  interface->add_option("--replicas", o.replicas)->capture_default_str();
  interface->add_option("--seed", o.seed);

  auto* blocks = app.add_subcommand(
      "blocks",
      "block-pair free energies psi_kl(a) and the localization criteria\n  columns: kind,a,value,lower,upper,b_star,"
      "a1_star,boundary\n  --mc replaces the point estimate of phi with Monte Carlo (needs --seed)");
  blocks->add_option("--alpha", o.alpha)->required();
  blocks->add_option("--beta", o.beta)->required();
  blocks->add_option("--a", o.a)->capture_default_str();
  blocks->add_flag("--mc", o.mc);
  blocks->add_option("--L", o.L)->capture_default_str();
  blocks->add_option("--replicas", o.replicas)->capture_default_str();
  blocks->add_option("--seed", o.seed);

  auto* deloc = app.add_subcommand(
      "deloc", "delocalized variational formula\n  columns: alpha,beta,rho,x_bar,y_bar,F,residual1,residual2,x_unbounded");
  deloc->add_option("--alpha", o.alpha)->required();
  deloc->add_option("--beta", o.beta)->required();
  deloc->add_option("--rho", o.rho)->required();

  auto* perc = app.add_subcommand(
      "percolation",
      "rho*(p) by last passage\n  columns: p,steps,replicas,seed,mean,std_err\n  with --pc: p,extrapolated,slope,"
      "max_residual,below_level, and a final row p_c,<value>,<grid spacing>");
  perc->add_option("--p", o.p);
  perc->add_option("--steps", o.step_list, "path lengths")->capture_default_str();
  perc->add_option("--replicas", o.replicas)->capture_default_str();
  perc->add_option("--seed", o.seed);
  perc->add_flag("--pc", o.pc, "scan p in [--p-min, --p-max] with spacing --res and locate p_c");
  perc->add_option("--p-min", o.p_min)->capture_default_str();
  perc->add_option("--p-max", o.p_max)->capture_default_str();
  perc->add_option("--res", o.res)->capture_default_str();

  auto* phase = app.add_subcommand(
      "phase",
      "phase diagram sweep\n  columns: alpha,beta,p,regime,state,lower_value,upper_value,threshold,gap,rho,y_bar,"
      "f_value,f_lower,f_upper,f_exact\n  --rho fixes rho*(p) below p_c; with --seed it is measured instead; with\n"
      "  neither, subcritical cells are reported Undecided\n"
      "  with --curve: alpha,beta_lower,beta_upper,beta_estimate,beta_estimate_err,alpha_star_rho");
  phase->add_option("--p", o.p)->required();
  phase->add_option("--alpha-min", o.alpha_min)->capture_default_str();
  phase->add_option("--alpha-max", o.alpha_max)->capture_default_str();
  phase->add_option("--beta-min", o.beta_min)->capture_default_str();
  phase->add_option("--beta-max", o.beta_max)->capture_default_str();
  phase->add_option("--res", o.res)->capture_default_str();
  phase->add_option("--rho", o.rho);
  phase->add_option("--steps", o.steps, "percolation path length for rho*")->capture_default_str();
  phase->add_option("--replicas", o.replicas, "rho* replicas (default 100), or with --mc interface replicas (default 8)");
  phase->add_option("--seed", o.seed);
  phase->add_flag("--curve", o.curve, "beta_c envelope over [--alpha-min, --alpha-max] instead of the sweep");
  phase->add_flag("--mc", o.mc, "with --curve: Monte Carlo point estimate (needs --seed)");
  phase->add_option("--L", o.L, "with --mc; default 60");

  auto* oracle = app.add_subcommand(
      "oracle", "exact path counts against kappa(a, b)\n  columns: L,rate,rate_unrestricted,formula_rate, then a row "
                "extrapolated,<value>,<kappa>,<rel_error>");
  oracle->add_option("--a", o.a)->required();
  oracle->add_option("--b", o.b)->capture_default_str();
  oracle->add_option("--L", o.Ls, "one or more L")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kParamError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  int code = kOk;
  try {
    ordered_json params;
    if (*entropy) {
      Csv csv({"quantity", "a", "b", "mu", "value", "delta", "epsilon"});
      const double nan = std::nan("");
      if (entropy->count("--a") || entropy->count("--b") || !entropy->count("--mu")) {
        const EntropyPoint e = kappa({o.a, o.b});
        csv.row("kappa", o.a, o.b, nan, e.kappa, e.delta, e.epsilon);
        params["a"] = o.a;
        params["b"] = o.b;
      }
      if (entropy->count("--mu")) {
        const InterfaceEntropyPoint e = kappa_hat(o.mu);
        csv.row("kappa_hat", nan, nan, o.mu, e.kappahat, e.delta, e.delta);
        params["mu"] = o.mu;
      }
      emit("entropy", common, csv, params, std::nullopt, elapsed());
    } else if (app.got_subcommand("constants")) {
      const ModelConstants& m = model_constants();
      Csv csv({"name", "value"});
      csv.row("kappa_star", m.kappa_star);
      csv.row("a_star", m.a_star);
      csv.row("slope_const", m.slope_const);
      csv.row("mu_sup", m.mu_sup);
      csv.row("mu_sup_value", m.mu_sup_value);
      csv.row("alpha0", m.alpha0);
      csv.row("alpha1", m.alpha1);
      emit("constants", common, csv, params, std::nullopt, elapsed());
    } else if (*interface) {
      require_seed(interface);
      const EstimatorSettings s{o.L, o.replicas, o.seed, common.threads};
      const auto est = phi_interface_mu_grid(o.alpha, o.beta, o.mus, s);
      Csv csv({"alpha", "beta", "mu", "mu_realized", "L", "replicas", "seed", "mean", "std_err", "lower", "upper",
               "extrapolated", "extrapolated_err"});
      for (std::size_t i = 0; i < est.size(); ++i) {
        const auto& e = est[i];
        csv.row(o.alpha, o.beta, o.mus[i], e.mu_realized, e.L, e.replicas, e.seed, e.mean, e.std_err, e.lower_bound,
                e.upper_bound, e.extrapolated, e.extrapolated_err);
      }
      params = {{"alpha", o.alpha}, {"beta", o.beta}, {"mu", o.mus}, {"L", o.L}, {"replicas", o.replicas},
                {"threads", common.threads}};
      emit("interface", common, csv, params, o.seed, elapsed());
    } else if (*blocks) {
      PhiSource src = bound_source(o.alpha, o.beta);
      if (o.mc) {
        require_seed(blocks);
        src = monte_carlo_source(o.alpha, o.beta, {o.L, o.replicas, o.seed, common.threads});
      }
      Csv csv({"kind", "a", "value", "lower", "upper", "b_star", "a1_star", "boundary"});
      for (BlockPairKind k : {BlockPairKind::AA, BlockPairKind::BB}) {
        const double v = psi_diag(k, o.a, o.alpha, o.beta);
        csv.row(to_string(k), o.a, v, v, v, 0.0, 0.0, false);
      }
      for (BlockPairKind k : {BlockPairKind::AB, BlockPairKind::BA}) {
        const BlockFreeEnergy e = psi_offdiag(k, o.a, src);
        csv.row(to_string(k), o.a, e.value, e.lower, e.upper, e.b_star, e.a1_star, e.boundary);
      }
      params = {{"alpha", o.alpha}, {"beta", o.beta}, {"a", o.a}, {"mc", o.mc}};
      if (o.mc) {
        params["L"] = o.L;
        params["replicas"] = o.replicas;
      }
      emit("blocks", common, csv, params, o.mc ? std::optional<std::uint64_t>(o.seed) : std::nullopt, elapsed());
    } else if (*deloc) {
      const DelocSolution s = solve_deloc({o.alpha, o.beta, o.rho});
      Csv csv({"alpha", "beta", "rho", "x_bar", "y_bar", "F", "residual1", "residual2", "x_unbounded"});
      csv.row(o.alpha, o.beta, o.rho, s.x_bar, s.y_bar, s.F, s.residual1, s.residual2, s.x_unbounded);
      params = {{"alpha", o.alpha}, {"beta", o.beta}, {"rho", o.rho}};
      emit("deloc", common, csv, params, std::nullopt, elapsed());
    } else if (*perc) {
      require_seed(perc);
      params = {{"steps", o.step_list}, {"replicas", o.replicas}, {"threads", common.threads}};
      if (o.pc) {
        if (!(o.res > 0.0)) throw std::invalid_argument("--res must be positive");
        std::vector<double> grid;
        const int n = static_cast<int>(std::floor((o.p_max - o.p_min) / o.res + 1e-9));
        for (int i = 0; i <= n; ++i) grid.push_back(std::round((o.p_min + i * o.res) * 1e9) / 1e9);
        const PcEstimate pc = estimate_pc(grid, o.step_list, o.replicas, o.seed, common.threads);
        Csv csv({"p", "extrapolated", "slope", "max_residual", "below_level"});
        for (const auto& c : pc.curve) csv.row(c.p, c.value, c.slope, c.max_residual, c.value < pc.level);
        csv.row("p_c", pc.p_c, pc.uncertainty, pc.level, "");
        params["p_min"] = o.p_min;
        params["p_max"] = o.p_max;
        params["res"] = o.res;
        params["extrapolation"] = "least-squares line in 1/N";
        emit("percolation", common, csv, params, o.seed, elapsed());
      } else {
        Csv csv({"p", "steps", "replicas", "seed", "mean", "std_err"});
        for (int n : o.step_list) {
          const RhoStarEstimate e = rho_star(o.p, n, o.replicas, o.seed, common.threads);
          csv.row(o.p, n, o.replicas, o.seed, e.mean, e.std_err);
        }
        params["p"] = o.p;
        emit("percolation", common, csv, params, o.seed, elapsed());
      }
    } else if (*phase) {
      params = {{"p", o.p}, {"alpha_min", o.alpha_min}, {"alpha_max", o.alpha_max}, {"res", o.res}};
      if (o.curve) {
        CurveSettings cs;
        cs.monte_carlo = o.mc;
        if (o.mc) {
          require_seed(phase);
          cs.mc = {phase->count("--L") ? o.L : 60, phase->count("--replicas") ? o.replicas : 8, o.seed, common.threads};
          params["L"] = cs.mc.L;
          params["replicas"] = cs.mc.replicas;
        }
        Csv csv({"alpha", "beta_lower", "beta_upper", "beta_estimate", "beta_estimate_err", "alpha_star_rho"});
        const int n = static_cast<int>(std::floor((o.alpha_max - o.alpha_min) / o.res + 1e-9));
        const double a_star = phase->count("--rho") ? alpha_star_p(o.rho) : std::nan("");
        for (int i = 0; i <= n; ++i) {
          const CurvePoint c = beta_c_envelope(std::round((o.alpha_min + i * o.res) * 1e9) / 1e9, cs);
          csv.row(c.alpha, c.beta_lower, c.beta_upper, c.beta_estimate.value_or(std::nan("")), c.beta_estimate_err,
                  a_star);
        }
        params["curve"] = true;
        params["mc"] = o.mc;
        if (phase->count("--rho")) params["rho"] = o.rho;
        emit("phase", common, csv, params, o.mc ? std::optional<std::uint64_t>(o.seed) : std::nullopt, elapsed());
      } else {
        ClassifySettings s;
        std::optional<std::uint64_t> seed;
        if (phase->count("--rho")) {
          const double rho = o.rho;
          s.rho_star = [rho](double) { return rho; };
          params["rho"] = rho;
        } else if (phase->count("--seed")) {
          seed = o.seed;
          // rho* is needed at p and, for reflected cells, at 1 - p.
          auto memo = std::make_shared<std::map<double, double>>();
          for (double q : {o.p, 1.0 - o.p})
            if (q < kPc) (*memo)[q] = rho_star(q, o.steps, o.replicas, o.seed, common.threads).mean;
          s.rho_star = [memo](double q) { return memo->at(q); };
          params["steps"] = o.steps;
          params["replicas"] = o.replicas;
        }
        params["beta_min"] = o.beta_min;
        params["beta_max"] = o.beta_max;
        params["p_c"] = s.p_c;
        const auto rows = sweep(o.alpha_min, o.alpha_max, o.beta_min, o.beta_max, o.res, o.p, s, common.threads);
        Csv csv({"alpha", "beta", "p", "regime", "state", "lower_value", "upper_value", "threshold", "gap", "rho",
                 "y_bar", "f_value", "f_lower", "f_upper", "f_exact"});
        bool undecided = false;
        for (const auto& r : rows) {
          const auto& v = r.cls.verdict;
          undecided = undecided || v.state == Phase::Undecided;
          csv.row(r.pt.alpha, r.pt.beta, r.pt.p, r.cls.supercritical ? "supercritical" : "subcritical",
                  to_string(v.state), v.lower_value, v.upper_value, v.threshold, v.gap, r.cls.rho, r.cls.y_bar,
                  r.fe.value, r.fe.lower, r.fe.upper, r.fe.exact);
        }
        emit("phase", common, csv, params, seed, elapsed());
        if (common.strict && undecided) code = kUndecided;
      }
    } else if (*oracle) {
      const KacombReport r = verify_kacomb_asymptotics(o.a, o.b, o.Ls);
      Csv csv({"L", "rate", "rate_unrestricted", "formula_rate"});
      for (std::size_t i = 0; i < r.L.size(); ++i)
        csv.row(std::to_string(r.L[i]), r.rate[i], r.rate_unrestricted[i], r.formula_rate[i]);
      csv.row("extrapolated", r.extrapolated, r.kappa, r.rel_error);
      params = {{"a", o.a}, {"b", o.b}, {"L", o.Ls}};
      emit("oracle", common, csv, params, std::nullopt, elapsed());
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kParamError;
  } catch (const std::domain_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kParamError;
  }
  return code;
}
