#include "credit_cycle/debt_valuation.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

namespace credit_cycle {

double expected_debt(const ModelParams& params, double s) {
  if (!(params.delta > 0.0))
    throw ModelError(ErrorKind::InvalidParameter, "expected debt needs delta > 0");
  if (s < 0.0) throw ModelError(ErrorKind::Domain, fmt::format("issuance level {} is negative", s));
  return s / params.delta;
}

namespace {

void check_option_inputs(double K, double beta, double s) {
  if (!(K >= 0.0)) throw ModelError(ErrorKind::InvalidParameter, "K must be non-negative");
  if (!(beta > 1.0)) throw ModelError(ErrorKind::InvalidParameter, "option exponent must exceed 1");
  if (s < 0.0) throw ModelError(ErrorKind::Domain, fmt::format("issuance level {} is negative", s));
}

}  // namespace

double new_debt_option(double K, double beta, double s) {
  check_option_inputs(K, beta, s);
  if (s == 0.0) return 0.0;
  return K * std::pow(s, beta);
}

double new_debt_option_derivative(double K, double beta, double s) {
  check_option_inputs(K, beta, s);
  if (s == 0.0) return 0.0;
  return K * beta * std::pow(s, beta - 1.0);
}

double new_debt_option_second_derivative(double K, double beta, double s) {
  check_option_inputs(K, beta, s);
  if (s == 0.0) return beta < 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return K * beta * (beta - 1.0) * std::pow(s, beta - 2.0);
}

ValuationSnapshot valuation_snapshot(const ModelParams& params, const CyclePoints& points, double s,
                                     bool strict) {
  if (s < 0.0) throw ModelError(ErrorKind::Domain, fmt::format("issuance level {} is negative", s));
  if (strict && s > points.s_tilde)
    throw ModelError(ErrorKind::PostCollapse,
                     fmt::format("issuance level {} lies beyond the collapse point {}", s, points.s_tilde));

  ValuationSnapshot snap;
  snap.s = s;
  snap.B = expected_debt(params, s);
  snap.f = new_debt_option(points.K, points.beta, s);
  snap.phase = classify_phase(points, s);

  if (snap.phase.kind == PhaseKind::Collapse) {
    snap.D = 0.0;
    snap.F_eff = 0.0;
  } else {
    snap.D = snap.B - snap.f;
    // Par is fully collateralized up to s_star, then erodes with the market debt.
    snap.F_eff = (s <= points.s_star) ? params.F : snap.D;
  }
  snap.P = snap.F_eff - snap.D;
  snap.A = snap.F_eff + snap.f;
  snap.E = snap.f + snap.P;
  return snap;
}

MaturityPayoffs maturity_payoffs(double F, double B_value) {
  const double put = std::max(F - B_value, 0.0);
  const double D = F - put;
  return {std::max(B_value - D, 0.0), put};
}

double leverage(const ValuationSnapshot& snap) {
  if (snap.E <= 0.0) return std::numeric_limits<double>::infinity();
  return snap.A / snap.E;
}

double annuity_value(const AnnuitySpec& spec) {
  if (!(spec.mu > 0.0)) throw ModelError(ErrorKind::InvalidParameter, "annuity rate must be positive");
  if (spec.m < 0.0) throw ModelError(ErrorKind::InvalidParameter, "coupon flow must be non-negative");
  if (!(spec.t_star > 0.0)) throw ModelError(ErrorKind::InvalidParameter, "horizon must be positive");
  if (std::isinf(spec.t_star)) return spec.m / spec.mu;
  return -(spec.m / spec.mu) * std::expm1(-spec.mu * spec.t_star);
}

double deterministic_debt_path(double B0, double coupon, double mu, double t) {
  if (mu == 0.0) return B0 - coupon * t;
  const double growth = std::exp(mu * t);
  return B0 * growth - (coupon / mu) * std::expm1(mu * t);
}

double deterministic_debt_path(double B0, const std::function<double(double)>& coupon, double mu,
                               double t) {
  if (t < 0.0) throw ModelError(ErrorKind::Domain, "time must be non-negative");
  if (t == 0.0) return B0;
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double u) { return coupon(u) * std::exp(mu * (t - u)); };
  // Kronrod tolerance is relative; rescale so the absolute error stays near 1e-10.
  const double rough = gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 0, 1e-6);
  const double rel_tol = 1e-10 / std::max(1.0, std::abs(rough));
  const double integral = gauss_kronrod<double, 61>::integrate(integrand, 0.0, t, 30, rel_tol);
  return B0 * std::exp(mu * t) - integral;
}

}  // namespace credit_cycle
