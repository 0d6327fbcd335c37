#include "credit_cycle/temporal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "credit_cycle/debt_valuation.hpp"

namespace credit_cycle {

namespace {

void check_time(double t) {
  if (!(t >= 0.0)) throw ModelError(ErrorKind::Domain, fmt::format("time {} must be non-negative", t));
}

// Below this |a| the closed form for <A> cancels catastrophically.
constexpr double kSmallDrift = 1e-6;

}  // namespace

double expected_money_aggregate(const ModelParams& params, double t) {
  check_time(t);
  if (params.a == 0.0) return params.s0 * t;
  return params.s0 * std::expm1(params.a * t) / params.a;
}

double expected_debt_time(const ModelParams& params, double t) {
  check_time(t);
  return params.s0 * std::exp(params.a * t) / params.delta;
}

TemporalSnapshot expected_assets_time(const ModelParams& params, double t) {
  TemporalSnapshot snap;
  snap.t = t;
  snap.M = expected_money_aggregate(params, t);
  snap.B = expected_debt_time(params, t);
  if (std::abs(params.a) < kSmallDrift) {
    snap.A = snap.M + snap.B;
  } else {
    snap.A = (params.s0 / params.a) * (params.mu() / params.delta * std::exp(params.a * t) - 1.0);
  }
  return snap;
}

ZeroMoneyReport zero_money_singularity_report(const ModelParams& params, const CyclePoints& points) {
  ModelParams crisis = params;
  crisis.s0 = points.s_star;
  const auto at_crisis = expected_assets_time(crisis, 0.0);

  ZeroMoneyReport rep;
  rep.s_star = points.s_star;
  rep.assets_at_crisis = at_crisis.A;
  rep.expected_debt_at_crisis = expected_debt(params, points.s_star);
  rep.money_at_crisis = at_crisis.M;
  // D(s*) = F holds analytically; B - f only reproduces it to rounding.
  const double put = valuation_snapshot(params, points, points.s_star).P;
  rep.put_at_critical = std::abs(put) <= 1e-9 * params.F ? 0.0 : put;
  rep.interpretation =
      "zero expected money aggregate at the crisis time equals the vanishing put-to-default at the "
      "critical point; this marks the singularity of the system, not a literal zero money stock";
  return rep;
}

}  // namespace credit_cycle
