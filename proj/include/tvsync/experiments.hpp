#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tvsync/cml.hpp"
#include "tvsync/config.hpp"
#include "tvsync/estimators.hpp"
#include "tvsync/jsr.hpp"

namespace tvsync {

struct SpectrumResult {
  LyapunovEstimate sigma1;
  DiamEstimate diam;
};

/// sigma1 trace (t, sigma1_estimate) and the Hajnal-diameter estimate;
/// writes spectrum.csv and spectrum.json when `out` is set.
SpectrumResult run_spectrum(const ExperimentConfig& c, const std::optional<std::filesystem::path>& out);

/// One simulation; writes simulate.csv and simulate.json when `out` is set.
SyncReport run_simulate(const ExperimentConfig& c, const std::optional<std::filesystem::path>& out);

struct SweepRow {
  double value = 0.0;
  double K = 0.0;  // post-transient mean node variance
  LogGrowth W = LogGrowth::neg_inf();
  LogGrowth sigma1 = LogGrowth::neg_inf();
  double mu = 0.0;
  bool predicted_sync = false;
  bool observed_sync = false;
  bool indeterminate = false;
};

/// JSON pointer for a sweep parameter: a pointer ("/source/p") or one of the
/// short names p, r, t_rec, avg_degree, m, alpha, steps, seed.
std::string sweep_pointer(const ExperimentConfig& c, const std::string& parameter);

/// One row per value, in input order; values run in parallel.
std::vector<SweepRow> run_sweep(const ExperimentConfig& c, const std::string& parameter,
                                const std::vector<double>& values,
                                const std::optional<std::filesystem::path>& out);

struct CheckResult {
  /// smallest T whose sampled windows all have a spanning-tree union
  std::optional<std::size_t> T;
  std::vector<std::size_t> t0_samples;
  /// per sampled window (of length T, or T_max when none): product scrambling
  std::vector<bool> scrambling;
};

CheckResult run_check(const ExperimentConfig& c, std::size_t T_max,
                      const std::optional<std::filesystem::path>& out);

struct JsrResult {
  JsrBounds bounds;
  std::optional<double> mu;
  /// "synchronized" when log(upper) + mu < 0, else "not guaranteed"
  std::string verdict;
  std::uint64_t input_hash = 0;
};

/// Matrix-set file: {"matrices": [...], "mu": optional}.
JsrResult run_jsr(const std::string& set_file, const GripenbergOptions& options,
                  std::optional<double> mu, const std::optional<std::filesystem::path>& out);
JsrResult run_jsr_text(const std::string& text, const std::string& origin,
                       const GripenbergOptions& options, std::optional<double> mu,
                       const std::optional<std::filesystem::path>& out);

std::string jsr_verdict(double upper, double mu);

}  // namespace tvsync
