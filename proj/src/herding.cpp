#include "credit_cycle/herding.hpp"

#include <cmath>

#include <fmt/format.h>

#include "credit_cycle/debt_valuation.hpp"

namespace credit_cycle {

namespace {

void check_domain(const HerdingParams& h, double s) {
  if (!(h.gamma > 0.0)) throw ModelError(ErrorKind::InvalidParameter, "gamma must be positive");
  if (s < 0.0) throw ModelError(ErrorKind::Domain, fmt::format("issuance level {} is negative", s));
  if (h.herding && !(s < h.s_star))
    throw ModelError(ErrorKind::Singularity,
                     fmt::format("herding term undefined at s = {} >= s* = {}", s, h.s_star));
}

double capped_power(double gap, double exponent) {
  static const double log_cap = std::log(kSingularityCap);
  const double lv = -exponent * std::log(gap);
  return lv >= log_cap ? kSingularityCap : std::exp(lv);
}

}  // namespace

double herding_singular_term(const HerdingParams& h, double s) {
  check_domain(h, s);
  if (!h.herding) return 0.0;
  const double gap = h.s_star - s;
  if (gap <= 1e-12 * h.s_star) return capped_power(gap, h.gamma);
  return std::pow(gap, -h.gamma);
}

double herding_singular_derivative(const HerdingParams& h, double s) {
  check_domain(h, s);
  if (!h.herding) return 0.0;
  const double gap = h.s_star - s;
  if (gap <= 1e-12 * h.s_star) {
    const double p = capped_power(gap, h.gamma + 1.0);
    return p == kSingularityCap ? kSingularityCap : h.gamma * p;
  }
  return h.gamma * std::pow(gap, -h.gamma - 1.0);
}

double herding_new_debt(double K, double beta, const HerdingParams& h, double s) {
  const double singular = herding_singular_term(h, s);
  if (singular == kSingularityCap) return kSingularityCap;
  return new_debt_option(K, beta, s) + singular;
}

double singular_derivative_check(const HerdingParams& h, double s) {
  if (!h.herding) throw ModelError(ErrorKind::InvalidParameter, "derivative check needs herding on");
  check_domain(h, s);
  const double gap = h.s_star - s;
  return herding_singular_derivative(h, s) / std::pow(gap, -h.gamma - 1.0);
}

HerdingRegime herding_regime_quantities(const ModelParams& params, const CyclePoints& points,
                                        double s) {
  if (s > points.s_star)
    throw ModelError(ErrorKind::Domain,
                     fmt::format("regime quantities are defined up to s* = {}, got {}", points.s_star, s));
  const auto snap = valuation_snapshot(params, points, s);
  const bool at_critical = std::abs(s - points.s_star) <= 1e-12 * points.s_star;
  // P(s*) = 0 exactly; B - f only reproduces it to rounding.
  const double put = at_critical ? 0.0 : snap.P;
  const double assets = params.F + snap.f;

  auto regime = [](double equity, double assets, double exposure) {
    RegimeQuantities q;
    q.equity = equity;
    q.leverage = equity > 0.0 ? assets / equity : std::numeric_limits<double>::infinity();
    q.default_probability = equity > 0.0 ? exposure / assets : 1.0;
    return q;
  };

  HerdingRegime out;
  out.s = s;
  const double market_debt = params.F - put;
  out.no_herding = regime(assets - market_debt, assets, market_debt);
  out.herding = regime(put, assets, snap.B);
  return out;
}

}  // namespace credit_cycle
