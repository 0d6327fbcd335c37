#include "credit_cycle/stochastic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "credit_cycle/debt_valuation.hpp"
#include "credit_cycle/rng.hpp"

namespace credit_cycle {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::Exact ? "exact" : "euler"; }

Scheme parse_scheme(std::string_view text) {
  if (text == "exact") return Scheme::Exact;
  if (text == "euler") return Scheme::Euler;
  throw ModelError(ErrorKind::Validation, fmt::format("unknown scheme '{}'", text));
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw ModelError(ErrorKind::InvalidParameter, "dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon))
    throw ModelError(ErrorKind::InvalidParameter, "horizon must be at least dt");
  if (n_paths < 1) throw ModelError(ErrorKind::InvalidParameter, "n_paths must be at least 1");
}

std::uint64_t SimConfig::steps() const {
  return static_cast<std::uint64_t>(std::llround(horizon / dt));
}

double expected_money(const ModelParams& params, double t) {
  if (t < 0.0) throw ModelError(ErrorKind::Domain, "time must be non-negative");
  return params.s0 * std::exp(params.a * t);
}

namespace {

// Stream counter tags keep the path ensemble and the hedging ladder apart.
constexpr std::uint64_t kPathStream = 1;
constexpr std::uint64_t kHedgeStream = 2;

/// Walks ln(s_t / s0) on the time grid k * dt. `visit(t_prev, x_prev, t, x)`
/// returns false to stop early. Returns true if the horizon was reached.
template <class Visit>
bool walk_log_path(const ModelParams& params, const SimConfig& config, std::uint64_t path_index,
                   Visit&& visit) {
  auto rng = make_stream(config.seed, {kPathStream, path_index});
  boost::random::normal_distribution<double> normal;
  const std::uint64_t n = config.steps();
  const double dt = config.dt;
  const double sq_dt = std::sqrt(dt);
  const double nu = params.log_drift();
  const double sigma = params.sigma;

  double x = 0.0;
  double t = 0.0;
  if (config.scheme == Scheme::Exact) {
    double w = 0.0;
    for (std::uint64_t k = 1; k <= n; ++k) {
      w += sq_dt * normal(rng);
      const double tk = static_cast<double>(k) * dt;
      const double xk = nu * tk + sigma * w;
      if (!visit(t, x, tk, xk)) return false;
      t = tk;
      x = xk;
    }
  } else {
    double s = params.s0;
    for (std::uint64_t k = 1; k <= n; ++k) {
      s *= 1.0 + params.a * dt + sigma * sq_dt * normal(rng);
      if (!(s > 0.0))
        throw ModelError(ErrorKind::SchemeFailure,
                         fmt::format("Euler step {} of path {} produced non-positive issuance; "
                                     "use the exact scheme or a smaller dt",
                                     k, path_index));
      const double tk = static_cast<double>(k) * dt;
      const double xk = std::log(s / params.s0);
      if (!visit(t, x, tk, xk)) return false;
      t = tk;
      x = xk;
    }
  }
  return true;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) over contiguous blocks. Results must be
/// written to per-index slots so the reduction order never depends on the
/// worker count.
template <class Body>
void parallel_for(std::uint64_t n, unsigned threads, Body&& body) {
  const std::uint64_t workers = std::min<std::uint64_t>(resolve_threads(threads), n);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::uint64_t begin = n * w / workers;
      const std::uint64_t end = n * (w + 1) / workers;
      try {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double interpolate_crossing(double t0, double x0, double t1, double x1, double target) {
  if (x1 == x0) return t1;
  return t0 + (t1 - t0) * (target - x0) / (x1 - x0);
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

double log_log_slope(const std::vector<HedgeRung>& rungs, double HedgeRung::*field) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rungs.size());
  for (const auto& r : rungs) {
    const double v = r.*field;
    if (!(v > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(r.dt);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SimPath simulate_money_path(const ModelParams& params, const SimConfig& config,
                            std::uint64_t path_index) {
  require_valid(params, true);
  config.validate();
  SimPath path;
  const auto n = config.steps();
  path.times.reserve(n + 1);
  path.s.reserve(n + 1);
  path.times.push_back(0.0);
  path.s.push_back(params.s0);
  path.reached_horizon = walk_log_path(params, config, path_index, [&](double, double, double t, double x) {
    path.times.push_back(t);
    path.s.push_back(params.s0 * std::exp(x));
    return true;
  });
  return path;
}

std::optional<double> first_passage(const SimPath& path, double level) {
  if (!(level > 0.0)) throw ModelError(ErrorKind::Domain, "passage level must be positive");
  if (path.s.empty()) return std::nullopt;
  if (path.s.front() >= level) return path.times.front();
  const double target = std::log(level);
  for (std::size_t k = 1; k < path.s.size(); ++k) {
    if (path.s[k] >= level)
      return interpolate_crossing(path.times[k - 1], std::log(path.s[k - 1]), path.times[k],
                                  std::log(path.s[k]), target);
  }
  return std::nullopt;
}

std::vector<double> simulate_terminal_values(const ModelParams& params, const SimConfig& config) {
  require_valid(params, true);
  config.validate();
  std::vector<double> out(config.n_paths);
  parallel_for(config.n_paths, config.threads, [&](std::uint64_t i) {
    double last = 0.0;
    walk_log_path(params, config, i, [&](double, double, double, double x) {
      last = x;
      return true;
    });
    out[i] = params.s0 * std::exp(last);
  });
  return out;
}

PassageStats passage_stats(const ModelParams& params, std::vector<double> levels,
                           const SimConfig& config) {
  require_valid(params, true);
  config.validate();
  for (double l : levels)
    if (!(l > 0.0)) throw ModelError(ErrorKind::Domain, "passage levels must be positive");
  std::sort(levels.begin(), levels.end());

  const std::size_t L = levels.size();
  std::vector<double> targets(L);
  for (std::size_t j = 0; j < L; ++j) targets[j] = std::log(levels[j] / params.s0);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> hit_times(config.n_paths * L, nan);

  parallel_for(config.n_paths, config.threads, [&](std::uint64_t i) {
    double* slot = hit_times.data() + i * L;
    std::size_t next = 0;
    while (next < L && targets[next] <= 0.0) slot[next++] = 0.0;
    if (next == L) return;
    if (config.scheme == Scheme::Exact) {
      // Same recursion as walk_log_path, kept inline: this loop dominates the run time.
      auto rng = make_stream(config.seed, {kPathStream, i});
      boost::random::normal_distribution<double> normal;
      const std::uint64_t n = config.steps();
      const double dt = config.dt;
      const double sq_dt = std::sqrt(dt);
      const double nu = params.log_drift();
      const double sigma = params.sigma;
      double target = targets[next];
      double w = 0.0, x = 0.0;
      for (std::uint64_t k = 1; k <= n; ++k) {
        w += sq_dt * normal(rng);
        const double xk = nu * (static_cast<double>(k) * dt) + sigma * w;
        if (xk >= target) {
          const double tk = static_cast<double>(k) * dt;
          while (next < L && xk >= targets[next]) {
            slot[next] = interpolate_crossing(tk - dt, x, tk, xk, targets[next]);
            ++next;
          }
          if (next == L) break;
          target = targets[next];
        }
        x = xk;
      }
      return;
    }
    walk_log_path(params, config, i, [&](double t0, double x0, double t1, double x1) {
      while (next < L && x1 >= targets[next]) {
        slot[next] = interpolate_crossing(t0, x0, t1, x1, targets[next]);
        ++next;
      }
      return next < L;
    });
  });

  PassageStats stats;
  stats.n_paths = config.n_paths;
  for (std::uint64_t i = 0; i < config.n_paths; ++i) {
    const double* slot = hit_times.data() + i * L;
    for (std::size_t j = 1; j < L; ++j) {
      const bool lower_hit = !std::isnan(slot[j - 1]);
      const bool upper_hit = !std::isnan(slot[j]);
      if (upper_hit && (!lower_hit || slot[j] < slot[j - 1])) ++stats.ordering_violations;
    }
  }
  for (std::size_t j = 0; j < L; ++j) {
    LevelStats ls;
    ls.level = levels[j];
    std::vector<double> times;
    Welford acc;
    for (std::uint64_t i = 0; i < config.n_paths; ++i) {
      const double t = hit_times[i * L + j];
      if (std::isnan(t)) continue;
      times.push_back(t);
      acc.add(t);
    }
    ls.hits = times.size();
    ls.hit_fraction = static_cast<double>(ls.hits) / static_cast<double>(config.n_paths);
    std::sort(times.begin(), times.end());
    ls.mean = ls.hits ? acc.mean : nan;
    ls.std_error = ls.hits > 1 ? std::sqrt(acc.variance() / static_cast<double>(ls.hits)) : nan;
    ls.median = quantile_sorted(times, 0.5);
    ls.q05 = quantile_sorted(times, 0.05);
    ls.q95 = quantile_sorted(times, 0.95);
    stats.levels.push_back(ls);
  }
  return stats;
}

PassageStats cycle_passage_stats(const ModelParams& params, const CyclePoints& points,
                                 const SimConfig& config) {
  return passage_stats(params, {points.s_hat, points.s_star, points.s_tilde}, config);
}

double sde_drift_residual(const ModelParams& params, double s) {
  if (!(s > 0.0)) throw ModelError(ErrorKind::Domain, "issuance level must be positive");
  const double B = expected_debt(params, s);
  return (params.mu() * B - s) - params.a * B;
}

HedgeResult hedged_portfolio_experiment(const ModelParams& params, double K,
                                        const CharacteristicRoots& roots, double s_start,
                                        const SimConfig& config, const std::vector<double>& ladder) {
  require_valid(params, true);
  if (!(s_start > 0.0)) throw ModelError(ErrorKind::Domain, "hedge start level must be positive");
  if (ladder.size() < 2) throw ModelError(ErrorKind::InvalidParameter, "dt ladder needs two rungs");
  if (config.n_paths < 2) throw ModelError(ErrorKind::InvalidParameter, "need at least two samples");

  const double beta = roots.beta_plus;
  const double f0 = new_debt_option(K, beta, s_start);
  const double delta_hedge = new_debt_option_derivative(K, beta, s_start);
  const double nu = params.log_drift();

  HedgeResult result;
  for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
    const double dt = ladder[rung];
    if (!(dt > 0.0)) throw ModelError(ErrorKind::InvalidParameter, "ladder steps must be positive");
    const double sq_dt = std::sqrt(dt);
    std::vector<double> d_hedged(config.n_paths), d_unhedged(config.n_paths);
    parallel_for(config.n_paths, config.threads, [&](std::uint64_t i) {
      auto rng = make_stream(config.seed, {kHedgeStream, rung, i});
      boost::random::normal_distribution<double> normal;
      const double s1 = s_start * std::exp(nu * dt + params.sigma * sq_dt * normal(rng));
      const double df = new_debt_option(K, beta, s1) - f0;
      d_unhedged[i] = df;
      d_hedged[i] = df - delta_hedge * (s1 - s_start);
    });
    Welford h, u;
    for (std::uint64_t i = 0; i < config.n_paths; ++i) {
      h.add(d_hedged[i]);
      u.add(d_unhedged[i]);
    }
    result.rungs.push_back({dt, h.variance(), u.variance()});
  }
  result.slope_hedged = log_log_slope(result.rungs, &HedgeRung::var_hedged);
  result.slope_unhedged = log_log_slope(result.rungs, &HedgeRung::var_unhedged);
  const auto& finest = result.rungs.back();
  result.variance_ratio = finest.var_unhedged > 0.0 ? finest.var_hedged / finest.var_unhedged : 0.0;
  return result;
}

}  // namespace credit_cycle
