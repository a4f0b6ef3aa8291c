// tvsync: experiment runner for synchronization of maps on time-varying
// networks. Every subcommand reads an experiment config (JSON) except jsr,
// which reads a matrix-set file.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tvsync/config.hpp"
#include "tvsync/experiments.hpp"
#include "tvsync/format.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool strict = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
  auto* opt = sub->add_option("--config", c.config, "experiment config (JSON)");
  if (needs_config) opt->required();
  sub->add_option("--seed", c.seed, "overrides the config seed");
  sub->add_option("--out", c.out, "output directory (default: config output field)");
  sub->add_flag("--strict", c.strict, "treat non-convergence as failure (exit 3)");
}

tvsync::ExperimentConfig load(const Common& c) {
  auto cfg = tvsync::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

std::filesystem::path out_dir(const Common& c, const tvsync::ExperimentConfig& cfg) {
  return c.out.empty() ? std::filesystem::path(cfg.output) : std::filesystem::path(c.out);
}

std::string growth(const tvsync::LogGrowth& g) {
  return g.is_neg_inf() ? "-inf" : tvsync::format_number(g.value());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronization analysis of coupled maps on time-varying networks"};
  app.require_subcommand(1);

  Common common;
  auto* spectrum = app.add_subcommand("spectrum", "sigma1 trace and Hajnal-diameter estimate");
  add_common(spectrum, common, true);

  auto* simulate = app.add_subcommand("simulate", "run the coupled map lattice and report K, diam, W");
  add_common(simulate, common, true);

  std::string parameter;
  std::vector<double> values;
  std::vector<double> log_grid;
  auto* sweep = app.add_subcommand("sweep", "simulate over a list of parameter values");
  add_common(sweep, common, true);
  sweep->add_option("--param", parameter, "field name (p, r, t_rec, avg_degree, m, alpha, steps, seed) or JSON pointer")
      ->required();
  auto* values_opt = sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
  auto* grid_opt = sweep->add_option("--log-grid", log_grid, "LO HI N: N log-spaced values")->expected(3);
  values_opt->excludes(grid_opt);

  std::size_t t_max = 10;
  auto* check = app.add_subcommand("check", "smallest window length with a spanning-tree union");
  add_common(check, common, true);
  check->add_option("--t-max", t_max, "largest window length tried")->check(CLI::PositiveNumber);

  std::string set_file;
  tvsync::GripenbergOptions jsr_options;
  std::optional<double> mu;
  std::string prune = "ellipsoidal";
  auto* jsr = app.add_subcommand("jsr", "bounds on the projection joint spectral radius of a matrix set");
  add_common(jsr, common, false);
  jsr->add_option("set", set_file, "matrix-set JSON: {\"matrices\": [...], \"mu\": optional}")->required();
  jsr->add_option("--tol", jsr_options.tol, "bracket tolerance")->check(CLI::PositiveNumber);
  jsr->add_option("--max-len", jsr_options.max_len, "longest product explored")->check(CLI::PositiveNumber);
  jsr->add_option("--mu", mu, "Lyapunov exponent of the node map for the verdict");
  jsr->add_option("--prune-norm", prune, "inf | balanced | ellipsoidal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*spectrum) {
      const auto cfg = load(common);
      const auto r = tvsync::run_spectrum(cfg, out_dir(common, cfg));
      std::cout << "sigma1 " << growth(r.sigma1.value) << (r.sigma1.converged ? "" : " (not converged)") << '\n'
                << "diam " << tvsync::format_number(r.diam.value) << (r.diam.converged ? "" : " (not converged)")
                << '\n';
      if (common.strict && (!r.sigma1.converged || !r.diam.converged)) return kExitNumeric;
    } else if (*simulate) {
      const auto cfg = load(common);
      const auto rep = tvsync::run_simulate(cfg, out_dir(common, cfg));
      std::cout << "sigma1 " << growth(rep.sigma1) << '\n'
                << "mu " << tvsync::format_number(rep.mu) << " (" << rep.mu_source << ")\n"
                << "W " << growth(rep.W) << (rep.indeterminate ? " (indeterminate)" : "") << '\n'
                << "predicted_sync " << (rep.predicted_sync ? "true" : "false") << '\n'
                << "observed_sync " << (rep.observed_sync ? "true" : "false") << '\n';
      if (common.strict && rep.indeterminate) return kExitNumeric;
    } else if (*sweep) {
      const auto cfg = load(common);
      if (!log_grid.empty()) {
        const double lo = log_grid[0], hi = log_grid[1];
        const double n = log_grid[2];
        if (!(lo > 0.0 && hi > 0.0) || n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) {
          throw tvsync::Error(tvsync::ErrorKind::InvalidConfig, "--log-grid needs LO>0 HI>0 and integer N>=1");
        }
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t k = 0; k < count; ++k) {
          const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
          values.push_back(k == 0 ? lo : k + 1 == count ? hi : lo * std::pow(hi / lo, f));
        }
      }
      const auto rows = tvsync::run_sweep(cfg, parameter, values, out_dir(common, cfg));
      std::cout << parameter << ",K,W,predicted_sync,observed_sync\n";
      for (const auto& r : rows) {
        std::cout << tvsync::format_number(r.value) << ',' << tvsync::format_number(r.K) << ',' << growth(r.W)
                  << ',' << (r.predicted_sync ? "true" : "false") << ',' << (r.observed_sync ? "true" : "false")
                  << '\n';
      }
    } else if (*check) {
      const auto cfg = load(common);
      const auto r = tvsync::run_check(cfg, t_max, out_dir(common, cfg));
      if (r.T) {
        std::cout << "T " << *r.T << '\n';
      } else {
        std::cout << "T none <= " << t_max << '\n';
      }
      std::size_t scrambling = 0;
      for (bool s : r.scrambling) scrambling += s ? 1 : 0;
      std::cout << "scrambling windows " << scrambling << '/' << r.scrambling.size() << '\n';
    } else if (*jsr) {
      jsr_options.norm = tvsync::parse_prune_norm(prune);
      std::optional<std::filesystem::path> out;
      if (!common.out.empty()) out = common.out;
      const auto r = tvsync::run_jsr(set_file, jsr_options, mu, out);
      std::cout << "lower " << tvsync::format_number(r.bounds.lower) << '\n'
                << "upper " << tvsync::format_number(r.bounds.upper) << '\n'
                << "witness";
      for (auto k : r.bounds.witness) std::cout << ' ' << k;
      std::cout << '\n' << "verdict " << r.verdict << '\n';
      if (common.strict && !r.bounds.converged) return kExitNumeric;
    }
  } catch (const tvsync::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
