#pragma once
// Experiment orchestration behind the CLI: config parsing, seed dispatch,
// artifact emission (CSV traces + JSON summaries), and the quick
// property-check suite.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sreda/problems.hpp"
#include "sreda/solvers.hpp"

#include "json.hpp"

namespace sreda::harness {

// exit codes shared by all subcommands
inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;      // run completed, criteria not met
inline constexpr int exit_parse = 2;       // config unreadable or invalid
inline constexpr int exit_capability = 3;  // problem lacks a required capability

struct ExperimentConfig {
  nlohmann::json problem;
  std::string algorithm = "sreda";  // sreda | sreda-finite | sgda | sgdmax
  double epsilon = 0.1;
  std::optional<double> delta_f;
  nlohmann::json overrides;  // partial SredaParams / BaselineParams by field name
  std::vector<std::uint64_t> seeds;
  std::uint64_t cap = 0;
  std::uint64_t baseline_iters = 1000;  // K for sgda/sgdmax
  bool diagnostics = true;
  std::string out = "out";
  std::optional<Vec> x0;

  // throws InputError on any schema problem
  static ExperimentConfig parse(const nlohmann::json& j);
};

// command-line overrides applied on top of the config file
struct Flags {
  std::optional<std::string> out;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::uint64_t> cap;
  bool no_diagnostics = false;
};

std::shared_ptr<problems::ProblemOracle> build_problem(const nlohmann::json& spec);

solvers::SredaParams derive_for(const ExperimentConfig& cfg, const problems::ProblemOracle& o,
                                const Vec& x0);

// temp-file + rename so concurrent readers never observe partial output
void write_file_atomic(const std::string& path, const std::string& content);

// worker pool size: SREDA_THREADS, else hardware concurrency
unsigned thread_count();

int cli_run(const std::string& config_path, const Flags& flags);
int cli_sweep(const std::string& config_path, const std::vector<double>& epsilons,
              const Flags& flags);
int cli_check(const Flags& flags);
int cli_params(double epsilon, double kappa, double ell, double sigma, double delta_f,
               std::optional<std::uint64_t> n);

}  // namespace sreda::harness
