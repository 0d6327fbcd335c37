#pragma once

// Reference values and independent reference computations for the tests.
// Constants were produced once with 50-digit arithmetic and frozen here; the
// helper functions recompute quantities without going through the library.

#include <cmath>
#include <cstdint>
#include <random>

#include "credit_cycle/params.hpp"

namespace oracle {

// Illustrative economy r = .05, delta = .045, a = .025, sigma = .15, F = 200, s0 = 9.6.
inline constexpr double beta_plus = 2.40418435655607;
inline constexpr double beta_minus = -1.84862880100052;
inline constexpr double s_star = 15.4094148022512;
inline constexpr double K = 0.198586167337406;
inline constexpr double s_tilde = 28.7802846044948;
inline constexpr double B_tilde = 639.561880099884;
inline constexpr double B_star = 342.431440050026;
inline constexpr double f_star = 142.431440050026;
inline constexpr double f_hat = 39.0952421719884;
inline constexpr double D_hat = 160.904757828012;
inline constexpr double s_m_market = 4.90984053426946;
inline constexpr double s_m_expected = 4.68288103840086;
inline constexpr double p_hat = 0.195476210859942;
inline constexpr double p_star = 0.415941480225116;
inline constexpr double omega = 2.12816230341706;
inline constexpr double p_geometric = 0.314515519206435;
inline constexpr double dd_default = 0.584058519774884;
inline constexpr double excess_money = 184.590585197749;
inline constexpr double leverage_hat = 3.05785600611140;
inline constexpr double lambda = 0.133333333333333;
inline constexpr double von_mises = 2.29599606051105;
inline constexpr double expected_s10 = 12.3266440002023;
inline constexpr double mean_passage_star = 34.4156781776403;  // years
inline constexpr double M10 = 109.065760008093;
inline constexpr double B10 = 273.925422226718;
inline constexpr double A10 = 382.991182234811;
inline constexpr double herding_f15 = 140.454371037519;  // K=.2, beta=2.4, s*=15.43, gamma=2.39
inline constexpr double annuity_t10 = 50.3414696208590;  // m=7, mu=.07, t=10
inline constexpr double compounding_t10 = 201.375270747048;  // 100 e^0.7

/// Roots of the characteristic quadratic in long double, textbook formula.
struct Roots {
  long double lo, hi;
};
inline Roots roots(const credit_cycle::ModelParams& p) {
  const long double a = 0.5L * p.sigma * p.sigma;
  const long double b = static_cast<long double>(p.r) - p.delta - a;
  const long double c = -static_cast<long double>(p.r);
  const long double d = std::sqrt(b * b - 4.0L * a * c);
  return {(-b - d) / (2.0L * a), (-b + d) / (2.0L * a)};
}

/// Closed-form free boundary from value matching and smooth pasting.
inline double s_star_closed(const credit_cycle::ModelParams& p, double beta) {
  return beta / (beta - 1.0) * p.delta * p.F;
}

/// Maximizes (B(s) - F) / s^beta on a uniform grid of n points over (lo, hi].
/// The free boundary is where the option constant implied by value matching is
/// largest. Returns the maximizing grid point.
inline double s_star_grid(const credit_cycle::ModelParams& p, double beta, double lo, double hi,
                          int n, double* step = nullptr) {
  const double h = (hi - lo) / (n - 1);
  if (step) *step = h;
  double best_s = lo, best = -INFINITY;
  for (int i = 0; i < n; ++i) {
    const double s = lo + h * i;
    const double k = (s / p.delta - p.F) / std::pow(s, beta);
    if (k > best) {
      best = k;
      best_s = s;
    }
  }
  return best_s;
}

/// Mean first passage time of ln s to ln(level / s0) for drift nu > 0.
inline double mean_passage(const credit_cycle::ModelParams& p, double level) {
  return std::log(level / p.s0) / p.log_drift();
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// P(ln s reaches b = ln(level/s0) before H) for Brownian motion with drift nu.
inline double passage_probability(const credit_cycle::ModelParams& p, double level, double H) {
  const double b = std::log(level / p.s0);
  const double nu = p.log_drift();
  const double sig = p.sigma * std::sqrt(H);
  return normal_cdf((-b + nu * H) / sig) +
         std::exp(2.0 * nu * b / (p.sigma * p.sigma)) * normal_cdf((-b - nu * H) / sig);
}

/// Random economies with r, delta in [0.01, 0.2], sigma in [0.1, 0.5],
/// a in [0, 0.2], F in [1, 1000]. The ranges keep K = s*^(1-beta)/(delta beta)
/// inside double range.
class ParamGen {
 public:
  explicit ParamGen(std::uint64_t seed) : rng_(seed) {}

  credit_cycle::ModelParams next() {
    std::uniform_real_distribution<double> rate(0.01, 0.2), vol(0.1, 0.5), drift(0.0, 0.2), par(1.0, 1000.0);
    credit_cycle::ModelParams p;
    p.r = rate(rng_);
    p.delta = rate(rng_);
    p.sigma = vol(rng_);
    p.a = drift(rng_);
    p.F = par(rng_);
    p.s0 = p.delta * p.F * std::uniform_real_distribution<double>(0.2, 1.0)(rng_);
    return p;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double x, double ref) {
  return std::abs(x - ref) / std::max(std::abs(ref), 1e-300);
}

}  // namespace oracle
