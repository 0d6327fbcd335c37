#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "credit_cycle/report.hpp"

namespace cc = credit_cycle;

int main(int argc, char** argv) {
  CLI::App app{"Money issuance, debt valuation and credit-cycle tool"};
  app.require_subcommand(1);

  cc::RunConfig cfg;
  if (const char* env = std::getenv(cc::kOutDirEnv); env && *env) cfg.out_dir = env;

  std::string params_path;
  std::string mode = "full-precision";
  std::string out_dir = cfg.out_dir.string();
  std::string scheme = "exact";
  std::string which = "fig9";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--params", params_path, "Params JSON file")->required();
    sub->add_option("--mode", mode, "full-precision or paper-rounded")->capture_default_str();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };
  auto sim_options = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.sim.seed, "RNG seed")->capture_default_str();
    sub->add_option("--paths", cfg.sim.n_paths, "Number of paths")->capture_default_str();
    sub->add_option("--dt", cfg.sim.dt, "Time step in years")->capture_default_str();
    sub->add_option("--horizon", cfg.sim.horizon, "Horizon in years")->capture_default_str();
    sub->add_option("--scheme", scheme, "exact or euler")->capture_default_str();
    sub->add_option("--threads", cfg.sim.threads, "Worker threads (0 = hardware)")->capture_default_str();
  };

  struct Entry {
    cc::Subcommand cmd;
    const char* help;
  };
  const Entry entries[] = {
      {cc::Subcommand::Validate, "Check parameter identities and printed constants"},
      {cc::Subcommand::Points, "Critical points and characteristic roots"},
      {cc::Subcommand::Table, "Cycle table at the critical points"},
      {cc::Subcommand::SnapshotGrid, "Valuation snapshots on a grid of s"},
      {cc::Subcommand::Simulate, "Monte Carlo first passage times"},
      {cc::Subcommand::Herding, "New-debt value with and without herding"},
      {cc::Subcommand::Temporal, "Expected money, debt and assets over time"},
      {cc::Subcommand::Ledger, "Balance sheets at the critical points"},
      {cc::Subcommand::Figure, "Data series for a figure"},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(std::string(cc::to_string(e.cmd)), e.help);
    common(sub);
    sub->callback([&cfg, cmd = e.cmd] { cfg.subcommand = cmd; });
    switch (e.cmd) {
      case cc::Subcommand::Simulate:
        sim_options(sub);
        sub->add_option("--levels", cfg.levels, "Levels: s_hat, s_star, s_tilde, s_m or numbers")
            ->delimiter(',');
        sub->add_option("--sample-paths", cfg.sample_paths, "Write this many raw paths")->capture_default_str();
        break;
      case cc::Subcommand::Temporal:
        sub->add_option("--horizon", cfg.sim.horizon, "Horizon in years")->capture_default_str();
        sub->add_option("--grid-points", cfg.grid_points, "Grid size")->capture_default_str();
        break;
      case cc::Subcommand::SnapshotGrid:
      case cc::Subcommand::Herding:
        sub->add_option("--grid-points", cfg.grid_points, "Grid size")->capture_default_str();
        break;
      case cc::Subcommand::Figure:
        sub->add_option("--which", which, "fig3, fig4, fig5, fig7, fig9, fig10, fig11, fig12")
            ->capture_default_str();
        sub->add_option("--grid-points", cfg.grid_points, "Grid size")->capture_default_str();
        break;
      default:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cc::kExitUsage;
  }

  try {
    cfg.params_path = params_path;
    cfg.out_dir = out_dir;
    cfg.mode = cc::parse_mode(mode);
    cfg.sim.scheme = cc::parse_scheme(scheme);
    cfg.figure = cc::parse_figure(which);
  } catch (const cc::ModelError& e) {
    std::cerr << "error [usage]: " << e.what() << '\n';
    return cc::kExitUsage;
  }
  return cc::run(cfg, std::cout, std::cerr);
}
