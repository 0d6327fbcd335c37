#pragma once

#include <string>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/params.hpp"

namespace credit_cycle {

/// Expected aggregates in calendar time; A = M + B.
struct TemporalSnapshot {
  double t = 0.0;
  double M = 0.0;
  double B = 0.0;
  double A = 0.0;
};

/// (s0/a)(e^{at} - 1), continuously extended to s0 t at a = 0.
double expected_money_aggregate(const ModelParams& params, double t);

/// s0 e^{at} / delta.
double expected_debt_time(const ModelParams& params, double t);

/// A is evaluated as (s0/a)((mu/delta) e^{at} - 1); M and B separately.
TemporalSnapshot expected_assets_time(const ModelParams& params, double t);

/// Crisis-time view: t* = 0 with s0 moved to s_star.
struct ZeroMoneyReport {
  double s_star = 0.0;
  double assets_at_crisis = 0.0;         // <A(t*)>
  double expected_debt_at_crisis = 0.0;  // B(s_star)
  double money_at_crisis = 0.0;          // <M(t*)>
  double put_at_critical = 0.0;          // P(s_star)
  std::string interpretation;
};

ZeroMoneyReport zero_money_singularity_report(const ModelParams& params, const CyclePoints& points);

}  // namespace credit_cycle
