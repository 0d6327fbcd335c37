#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/params.hpp"

namespace credit_cycle {

enum class Scheme { Exact, Euler };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct SimConfig {
  double horizon = 200.0;  // years
  double dt = 1e-3;        // years
  std::uint64_t n_paths = 100000;
  std::uint64_t seed = 20120901;
  Scheme scheme = Scheme::Exact;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
  std::uint64_t steps() const;
};

struct SimPath {
  std::vector<double> times;
  std::vector<double> s;
  bool reached_horizon = false;
};

struct LevelStats {
  double level = 0.0;
  std::uint64_t hits = 0;
  double hit_fraction = 0.0;
  double mean = 0.0;  // over paths that hit
  double std_error = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

struct PassageStats {
  std::uint64_t n_paths = 0;
  std::vector<LevelStats> levels;  // sorted ascending
  std::uint64_t ordering_violations = 0;
};

struct HedgeRung {
  double dt = 0.0;
  double var_hedged = 0.0;
  double var_unhedged = 0.0;
};

struct HedgeResult {
  std::vector<HedgeRung> rungs;
  double slope_hedged = 0.0;  // d log var / d log dt
  double slope_unhedged = 0.0;
  double variance_ratio = 0.0;  // hedged / unhedged at the finest rung
};

double expected_money(const ModelParams& params, double t);

/// Path `path_index` of the ensemble defined by `config`.
SimPath simulate_money_path(const ModelParams& params, const SimConfig& config,
                            std::uint64_t path_index = 0);

/// First time with s >= level, interpolated linearly in ln s between steps.
std::optional<double> first_passage(const SimPath& path, double level);

/// s_T for every path, indexed by path.
std::vector<double> simulate_terminal_values(const ModelParams& params, const SimConfig& config);

/// Hitting statistics for each level. Paths stop once every level is hit.
PassageStats passage_stats(const ModelParams& params, std::vector<double> levels,
                           const SimConfig& config);

/// passage_stats over s_hat, s_star and s_tilde (levels below s0 hit at t = 0).
PassageStats cycle_passage_stats(const ModelParams& params, const CyclePoints& points,
                                 const SimConfig& config);

/// (mu B(s) - s) - a B(s) with B = s/delta. Zero when the debt SDE drift agrees
/// with the issuance drift.
double sde_drift_residual(const ModelParams& params, double s);

/// One-step increments of the hedged portfolio -f'(s) s + f(s) and of f alone
/// over a dt-halving ladder. `config.n_paths` samples per rung.
HedgeResult hedged_portfolio_experiment(const ModelParams& params, double K,
                                        const CharacteristicRoots& roots, double s_start,
                                        const SimConfig& config,
                                        const std::vector<double>& ladder = {1e-2, 5e-3, 2.5e-3});

}  // namespace credit_cycle
