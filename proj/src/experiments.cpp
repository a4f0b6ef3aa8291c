#include "tvsync/experiments.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>

#include "tvsync/digraph.hpp"
#include "tvsync/format.hpp"
#include "tvsync/hajnal.hpp"
#include "tvsync/rng.hpp"

namespace tvsync {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSigmaLabel = 4;

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write '" + (dir / name).string() + "'");
  out << content;
}

json growth_json(const LogGrowth& g) {
  return g.is_neg_inf() ? json("-inf") : json(g.value());
}

std::string growth_text(const LogGrowth& g) {
  return g.is_neg_inf() ? "-inf" : format_number(g.value());
}

std::vector<std::pair<std::string, std::string>> common_header(const ExperimentConfig& c) {
  return {{"config_hash", hex64(config_hash(c))},
          {"seed", std::to_string(c.seed)},
          {"source", std::string(to_string(c.source.variant))},
          {"m", std::to_string(source_dim(c))},
          {"map", ScalarMap::make(c.map.kind, c.map.param).name()}};
}

std::string header_text(const std::vector<std::pair<std::string, std::string>>& header) {
  std::string s;
  for (const auto& [k, v] : header) s += "# " + k + "=" + v + "\n";
  return s;
}

SimulateOptions simulate_options(const ExperimentConfig& c) {
  SimulateOptions o;
  o.steps = c.simulation.steps;
  o.record_every = c.simulation.record_every;
  o.mu = c.simulation.mu;
  o.renorm_every = c.estimator.renorm_every;
  o.n_vectors = c.estimator.n_vectors;
  o.basis = c.estimator.basis;
  o.seed = derive_seed(c.seed, kSigmaLabel);
  return o;
}

}  // namespace

SpectrumResult run_spectrum(const ExperimentConfig& c, const std::optional<fs::path>& out) {
  auto source = build_source(c);
  const auto basis = projection_basis(source.dim(), c.estimator.basis);
  SpectrumResult r;
  r.sigma1 = estimate_sigma1(source, basis, c.estimator.horizon, c.estimator.renorm_every,
                             c.estimator.n_vectors, derive_seed(c.seed, kSigmaLabel));
  const auto samples = default_t0_samples(c.estimator.horizon, c.estimator.t0_count, c.estimator.t0_stride);
  r.diam = estimate_hajnal_diameter(source, c.estimator.horizon, samples, c.estimator.norm);

  if (out) {
    std::string csv = header_text(common_header(c));
    csv += "t,sigma1_estimate\n";
    for (const auto& [t, v] : r.sigma1.trace) {
      csv += std::to_string(t) + "," + (v <= LogGrowth::kNegInfRaw ? std::string("-inf") : format_number(v)) + "\n";
    }
    write_file(*out, "spectrum.csv", csv);

    json j;
    j["config_hash"] = hex64(config_hash(c));
    j["sigma1"] = {{"value", growth_json(r.sigma1.value)},
                   {"neg_inf", r.sigma1.value.is_neg_inf()},
                   {"horizon", r.sigma1.horizon},
                   {"renorm_every", r.sigma1.renorm_every},
                   {"converged", r.sigma1.converged}};
    j["diam"] = {{"value", r.diam.value},
                 {"horizon", r.diam.horizon},
                 {"t0_samples", r.diam.t0_samples},
                 {"norm", std::string(to_string(r.diam.norm))},
                 {"converged", r.diam.converged},
                 {"curve", r.diam.curve}};
    write_file(*out, "spectrum.json", j.dump(2) + "\n");
  }
  return r;
}

SyncReport run_simulate(const ExperimentConfig& c, const std::optional<fs::path>& out) {
  auto source = build_source(c);
  const auto map = ScalarMap::make(c.map.kind, c.map.param);
  auto result = simulate(source, map, initial_state(c, source.dim()), simulate_options(c));
  const SyncReport& rep = result.report;
  if (out) {
    std::ostringstream csv;
    write_sync_csv(csv, rep, common_header(c));
    write_file(*out, "simulate.csv", csv.str());
    json j;
    j["config_hash"] = hex64(config_hash(c));
    j["sigma1"] = growth_json(rep.sigma1);
    j["mu"] = rep.mu;
    j["mu_source"] = rep.mu_source;
    j["W"] = growth_json(rep.W);
    j["predicted_sync"] = rep.predicted_sync;
    j["indeterminate"] = rep.indeterminate;
    j["observed_sync"] = rep.observed_sync;
    j["final_diam"] = rep.final_diam;
    j["late_K"] = rep.late_K;
    write_file(*out, "simulate.json", j.dump(2) + "\n");
  }
  return rep;
}

std::string sweep_pointer(const ExperimentConfig& c, const std::string& parameter) {
  static const std::map<std::string, std::string> aliases = {
      {"p", "/source/p"},          {"r", "/source/r"},           {"t_rec", "/source/t_rec"},
      {"avg_degree", "/source/avg_degree"}, {"m", "/source/m"}, {"alpha", "/map/param"},
      {"steps", "/simulation/steps"}, {"seed", "/seed"}};
  std::string ptr = parameter;
  if (ptr.empty() || ptr.front() != '/') {
    const auto it = aliases.find(parameter);
    if (it == aliases.end()) throw Error(ErrorKind::UnknownParameter, "'" + parameter + "' is not a sweepable field");
    ptr = it->second;
  }
  const json j = c;
  try {
    const json::json_pointer jp(ptr);
    if (!j.contains(jp) || !j.at(jp).is_number()) {
      throw Error(ErrorKind::UnknownParameter, "'" + parameter + "' is not a numeric field of this config");
    }
  } catch (const json::exception&) {
    throw Error(ErrorKind::UnknownParameter, "'" + parameter + "' is not a valid JSON pointer");
  }
  return ptr;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& c, const std::string& parameter,
                                const std::vector<double>& values, const std::optional<fs::path>& out) {
  if (values.empty()) throw Error(ErrorKind::InvalidConfig, "sweep needs at least one value");
  const std::string ptr = sweep_pointer(c, parameter);
  const json base = c;
  const json::json_pointer jp(ptr);
  const bool integral = base.at(jp).is_number_integer();

  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    json j = base;
    if (integral) {
      if (!(v >= 0.0) || v != std::floor(v)) {
        throw Error(ErrorKind::InvalidConfig, ptr + ": value " + format_number(v) + " must be a non-negative integer");
      }
      j[jp] = static_cast<std::uint64_t>(v);
    } else {
      j[jp] = v;
    }
    configs.push_back(config_from_json(j));
  }

  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  const auto count = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const SyncReport rep = run_simulate(configs[i], std::nullopt);
      rows[i] = {values[i], rep.late_K, rep.W, rep.sigma1, rep.mu, rep.predicted_sync, rep.observed_sync, rep.indeterminate};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (out) {
    auto header = common_header(c);
    header.emplace_back("parameter", ptr);
    std::string csv = header_text(header);
    csv += parameter + ",K,W,sigma1,mu,predicted_sync,observed_sync,indeterminate\n";
    for (const auto& r : rows) {
      csv += format_number(r.value) + "," + format_number(r.K) + "," + growth_text(r.W) + "," +
             growth_text(r.sigma1) + "," + format_number(r.mu) + "," + (r.predicted_sync ? "true" : "false") +
             "," + (r.observed_sync ? "true" : "false") + "," + (r.indeterminate ? "true" : "false") + "\n";
    }
    write_file(*out, "sweep.csv", csv);
  }
  return rows;
}

CheckResult run_check(const ExperimentConfig& c, std::size_t T_max, const std::optional<fs::path>& out) {
  if (T_max < 1) throw Error(ErrorKind::InvalidConfig, "T_max must be >= 1");
  auto source = build_source(c);
  CheckResult r;
  r.t0_samples = default_t0_samples(c.estimator.horizon, c.estimator.t0_count, c.estimator.t0_stride);
  for (std::size_t T = 1; T <= T_max && !r.T; ++T) {
    bool all = true;
    for (std::size_t t0 : r.t0_samples) {
      if (!window_has_spanning_tree(source, t0, T)) {
        all = false;
        break;
      }
    }
    if (all) r.T = T;
  }
  const std::size_t len = r.T.value_or(T_max);
  for (std::size_t t0 : r.t0_samples) {
    const auto w = window_product(source, t0, len);
    r.scrambling.push_back(is_scrambling(StochasticMatrix::validated(w.product, 1e-9 * static_cast<double>(len + 1))));
  }
  if (out) {
    json j;
    j["config_hash"] = hex64(config_hash(c));
    j["T_max"] = T_max;
    j["T"] = r.T ? json(*r.T) : json("none");
    j["window_length"] = len;
    json windows = json::array();
    for (std::size_t k = 0; k < r.t0_samples.size(); ++k) {
      windows.push_back({{"t0", r.t0_samples[k]}, {"scrambling", static_cast<bool>(r.scrambling[k])}});
    }
    j["windows"] = std::move(windows);
    write_file(*out, "check.json", j.dump(2) + "\n");
  }
  return r;
}

std::string jsr_verdict(double upper, double mu) {
  if (upper <= 0.0) return "synchronized";
  return std::log(upper) + mu < 0.0 ? "synchronized" : "not guaranteed";
}

JsrResult run_jsr_text(const std::string& text, const std::string& origin, const GripenbergOptions& options,
                       std::optional<double> mu, const std::optional<fs::path>& out) {
  const json j = parse_json_text(text, origin);
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, origin + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "matrices" && key != "mu") throw Error(ErrorKind::InvalidConfig, "/" + key + ": unknown field");
  }
  if (!j.contains("matrices") || !j.at("matrices").is_array() || j.at("matrices").empty()) {
    throw Error(ErrorKind::InvalidConfig, "/matrices: expected a nonempty array of matrices");
  }
  std::vector<StochasticMatrix> set;
  std::size_t m = 0;
  for (std::size_t k = 0; k < j.at("matrices").size(); ++k) {
    const std::string path = "/matrices/" + std::to_string(k);
    Matrix raw = matrix_from_json(j.at("matrices")[k], path);
    if (k == 0) m = raw.rows();
    if (!raw.square() || raw.rows() != m) throw Error(ErrorKind::InvalidConfig, path + ": matrices must be square and of equal size");
    if (m < 2) throw Error(ErrorKind::InvalidConfig, path + ": dimension must be >= 2");
    try {
      (void)StochasticMatrix::validated(raw, 1e-9);
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, path + ": " + e.what());
    }
    set.push_back(make_stochastic(raw));
  }
  JsrResult r;
  if (!mu && j.contains("mu")) {
    if (!j.at("mu").is_number()) throw Error(ErrorKind::InvalidConfig, "/mu: expected a number");
    mu = j.at("mu").get<double>();
  }
  r.mu = mu;
  r.input_hash = fnv1a(j.dump());
  r.bounds = gripenberg(project_set(set, projection_basis(m, BasisKind::Orthonormal)), options);
  r.verdict = mu ? jsr_verdict(r.bounds.upper, *mu) : "no mu supplied";
  if (out) {
    json o;
    o["input_hash"] = hex64(r.input_hash);
    o["lower"] = r.bounds.lower;
    o["upper"] = r.bounds.upper;
    o["witness"] = r.bounds.witness;
    o["depth_reached"] = r.bounds.depth_reached;
    o["node_count"] = r.bounds.node_count;
    o["converged"] = r.bounds.converged;
    o["tol"] = options.tol;
    o["max_len"] = options.max_len;
    o["mu"] = mu ? json(*mu) : json(nullptr);
    o["verdict"] = r.verdict;
    write_file(*out, "jsr.json", o.dump(2) + "\n");
  }
  return r;
}

JsrResult run_jsr(const std::string& set_file, const GripenbergOptions& options, std::optional<double> mu,
                  const std::optional<fs::path>& out) {
  std::ifstream in(set_file, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read '" + set_file + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_jsr_text(ss.str(), set_file, options, mu, out);
}

}  // namespace tvsync
