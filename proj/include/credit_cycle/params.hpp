#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "credit_cycle/error.hpp"

namespace credit_cycle {

/// Rate, volatility and scale constants of the money/debt economy.
///
/// Units: rates per annum, volatility per sqrt(annum), F and s0 in trillions.
/// The risk-adjusted rate mu and the unit risk price lambda are always derived
/// from these fields (mu = delta + a, lambda = (mu - r) / sigma).
struct ModelParams {
  double r = 0.05;       // riskless rate
  double delta = 0.045;  // current yield
  double a = 0.025;      // drift of money issuance
  double sigma = 0.15;   // volatility of money issuance
  double F = 200.0;      // par value of debt
  double s0 = 9.6;       // initial money issuance

  double mu() const { return delta + a; }
  /// Drift of ln(s_t).
  double log_drift() const { return a - 0.5 * sigma * sigma; }

  /// The illustrative economy used throughout the examples and golden tables.
  static ModelParams primer() { return {}; }
};

/// Roots of 0.5 sigma^2 b (b - 1) + (r - delta) b - r = 0, sorted.
struct CharacteristicRoots {
  double beta_minus = 0.0;
  double beta_plus = 0.0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

/// A note about a printed value that the model's own equations contradict.
/// `location` names where the printed value comes from.
struct Diagnostic {
  std::string location;
  std::string message;

  std::string render() const;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<Diagnostic> diagnostics;

  bool all_passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

// Printed constants of the illustrative primer. They are only used to
// reproduce the rounded tables and to flag printed values that disagree with
// the model equations.
namespace primer_printed {
inline constexpr double beta_minus = -0.099;
inline constexpr double beta_plus = 2.404;
inline constexpr double lambda = 0.45;
inline constexpr double mu = 0.07;
inline constexpr double K = 0.2;
inline constexpr double beta_rounded = 2.4;
inline constexpr double s_star = 15.5;
inline constexpr double s_tilde = 28.9;
inline constexpr double s_star_herding = 15.43;
inline constexpr double gamma = 2.39;
}  // namespace primer_printed

/// Throws ModelError(InvalidParameter) naming the first offending field.
/// The simulator accepts sigma = 0 (deterministic issuance).
void require_valid(const ModelParams& params, bool allow_zero_sigma = false);

ValidationReport validate_params(const ModelParams& params);

CharacteristicRoots characteristic_roots(const ModelParams& params);

/// Left-hand side of the characteristic equation at `beta`.
double characteristic_polynomial(const ModelParams& params, double beta);

double implied_risk_price(const ModelParams& params);

/// True when r, delta, a, sigma equal the primer's printed inputs.
bool is_primer_economy(const ModelParams& params);

/// Reads a flat JSON object with exactly the keys r, delta, a, sigma, F, s0.
ModelParams load_params_file(const std::filesystem::path& path);
ModelParams parse_params(const std::string& text);

}  // namespace credit_cycle
