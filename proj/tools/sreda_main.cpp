// Command-line front-end: run / sweep / check / params.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sreda/harness.hpp"

namespace {

sreda::harness::Flags make_flags(const std::optional<std::string>& out,
                                 const std::vector<std::uint64_t>& seeds, std::uint64_t cap,
                                 bool cap_set, bool no_diag) {
  sreda::harness::Flags f;
  f.out = out;
  if (!seeds.empty()) f.seeds = seeds;
  if (cap_set) f.cap = cap;
  f.no_diagnostics = no_diag;
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance-reduced minimax solver benchmark harness"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  std::vector<std::uint64_t> seeds;
  std::uint64_t cap = 0;
  bool no_diag = false;
  std::vector<double> epsilons;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) cmd->add_option("--config", config, "experiment config (JSON)")->required();
    cmd->add_option("--out", out, "output directory override");
    cmd->add_option("--seeds", seeds, "seed list override")->delimiter(',');
    cmd->add_option("--cap", cap, "outer iteration cap (0 = derived K)");
    cmd->add_flag("--no-diagnostics", no_diag, "skip exact diagnostic columns");
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment over its seed list");
  add_common(run, true);

  CLI::App* sweep = app.add_subcommand("sweep", "epsilon sweep producing complexity curves");
  add_common(sweep, true);
  sweep->add_option("--epsilons", epsilons, "epsilon values")->delimiter(',')->required();

  CLI::App* check = app.add_subcommand("check", "run the property-check suite");

  CLI::App* params = app.add_subcommand("params", "print derived run parameters");
  double epsilon = 0.1, kappa = 1.0, ell = 1.0, sigma = 0.0, delta_f = 1.0;
  std::optional<std::uint64_t> n;
  params->add_option("--epsilon", epsilon)->required();
  params->add_option("--kappa", kappa)->required();
  params->add_option("--ell", ell);
  params->add_option("--sigma", sigma);
  params->add_option("--delta-f", delta_f)->required();
  params->add_option("--n", n, "component count (finite-sum regime)");

  CLI11_PARSE(app, argc, argv);

  bool cap_set = run->count("--cap") > 0 || sweep->count("--cap") > 0;
  sreda::harness::Flags flags = make_flags(out, seeds, cap, cap_set, no_diag);

  if (run->parsed()) return sreda::harness::cli_run(config, flags);
  if (sweep->parsed()) return sreda::harness::cli_sweep(config, epsilons, flags);
  if (check->parsed()) return sreda::harness::cli_check(flags);
  return sreda::harness::cli_params(epsilon, kappa, ell, sigma, delta_f, n);
}
