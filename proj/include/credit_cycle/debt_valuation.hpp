#pragma once

#include <functional>
#include <limits>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/params.hpp"

namespace credit_cycle {

/// Debt-side quantities at one issuance level. All values in trillions.
///
/// On [0, s_tilde]: B - f = D = F_eff - P, A = F_eff + f = B + P, E = f + P.
struct ValuationSnapshot {
  double s = 0.0;
  double B = 0.0;      // expected debt
  double f = 0.0;      // new-debt option
  double D = 0.0;      // market debt
  double P = 0.0;      // put-to-default
  double A = 0.0;      // total assets
  double E = 0.0;      // equity
  double F_eff = 0.0;  // effective par
  Phase phase;
};

struct AnnuitySpec {
  double m = 0.0;   // coupon flow per annum
  double mu = 0.0;  // discount rate
  double t_star = std::numeric_limits<double>::infinity();
};

struct MaturityPayoffs {
  double call = 0.0;
  double put = 0.0;
};

/// Perpetuity value s / delta.
double expected_debt(const ModelParams& params, double s);

double new_debt_option(double K, double beta, double s);
double new_debt_option_derivative(double K, double beta, double s);
double new_debt_option_second_derivative(double K, double beta, double s);

/// With `strict`, levels beyond s_tilde throw ModelError(PostCollapse);
/// otherwise D, P and F_eff are reported as zero there.
ValuationSnapshot valuation_snapshot(const ModelParams& params, const CyclePoints& points,
                                     double s, bool strict = false);

MaturityPayoffs maturity_payoffs(double F, double B_value);

/// A / E, +infinity when the equity is exhausted.
double leverage(const ValuationSnapshot& snap);

double annuity_value(const AnnuitySpec& spec);

/// B(t) = B0 e^{mu t} - int_0^t m(u) e^{mu (t-u)} du, adaptive quadrature.
double deterministic_debt_path(double B0, const std::function<double(double)>& coupon, double mu,
                               double t);
/// Closed form for a constant coupon.
double deterministic_debt_path(double B0, double coupon, double mu, double t);

}  // namespace credit_cycle
