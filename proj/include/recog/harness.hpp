#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "recog/bounds.hpp"
#include "recog/errors.hpp"
#include "recog/recognition.hpp"

namespace recog {

// Flat experiment description, fed from a key=value config file plus CLI
// overrides. See parse_config_file for the key set.
struct ExperimentConfig {
  // env.*
  std::uint32_t r = 2;
  std::size_t n = 0;
  std::optional<double> rc;
  std::optional<std::uint64_t> mc;  // explicit database size, overrides rc
  std::uint64_t mc_cap = std::uint64_t{1} << 22;
  std::string qx = "uniform";
  std::string noise;

  // sys.*
  std::string strategy = "truncation";  // truncation | syndrome-bp | syndrome-oracle
  double rm = 0.0;
  double rs = 0.0;
  int ldpc_dv = 3;
  int ldpc_dc = 6;
  int bp_max_iterations = 50;
  double bp_damping = 0.0;
  bool bp_early_exit = true;
  double epsilon = 0.1;
  std::string mode = "score";  // strict | score
  bool fixed_system = false;

  // run.*
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  double budget = 5e11;  // rough elementary-operation budget
};

ExperimentConfig parse_config_file(const std::filesystem::path& path);
// One key=value assignment, shared by file parsing and CLI overrides.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
std::string render_config(const ExperimentConfig& cfg);

Pmf parse_qx_spec(const std::string& spec_string, FieldSpec spec);
NoiseModel parse_noise_spec(const std::string& spec_string, FieldSpec spec);

// Monte Carlo estimate of the recognition error probability with its
// Wilson interval, the error-event histogram, realized rates, and the
// applicable rate bounds.
struct ExperimentResult {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;

  std::uint64_t event_none = 0;
  std::uint64_t event_missed = 0;
  std::uint64_t event_false_accept = 0;
  std::uint64_t event_tie = 0;

  double rc_requested = 0.0;
  double rc_realized = 0.0;
  double rm_realized = 0.0;
  double rs_realized = 0.0;

  double bound_truncation = 0.0;  // NaN when not applicable
  double bound_ldpc = 0.0;
  double bound_syndrome = 0.0;

  std::uint64_t false_index_accepts = 0;
  std::uint64_t false_index_evals = 0;
  double mean_decode_iterations = 0.0;
  double wall_seconds = 0.0;

  std::string strategy;
  std::string noise_descriptor;
  std::string mode;
  double epsilon = 0.0;
  std::uint32_t r = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

// 95% Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string csv_header();
std::string csv_row(const ExperimentResult& res);
std::string summarize(const ExperimentResult& res);

enum class SweepAxis { rc, n, q, rate };

SweepAxis parse_sweep_axis(const std::string& name);

// One experiment per axis value; a failed point is kept in the CSV as a
// row with zero trials and NaN statistics, and the sweep continues.
std::string sweep(const ExperimentConfig& base, SweepAxis axis,
                  const std::vector<double>& values);

}  // namespace recog
