#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "credit_cycle/params.hpp"

namespace credit_cycle {

enum class Mode { FullPrecision, PaperRounded };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Issuance levels that partition a credit cycle, plus the power-law constant
/// of the new-debt option f(s) = K s^beta.
///
/// Ordering: s_m_expected < s_m_market < s_hat < s_star < s_tilde. A Minsky
/// point is NaN when its condition has no root below s_hat, which happens when
/// f(s_hat) exceeds F/2 (market) or F (expected).
struct CyclePoints {
  double beta = 0.0;          // beta_plus the points were built from
  double s_hat = 0.0;         // B(s_hat) = F
  double s_m_market = 0.0;    // D(s_m) = P(s_m)
  double s_m_expected = 0.0;  // B(s_m) = P(s_m)
  double s_star = 0.0;        // free boundary, D(s_star) = F
  double s_tilde = 0.0;       // D(s_tilde) = 0
  double K = 0.0;
};

enum class PhaseKind { Hedge, Speculative, Ponzi, Collapse };

std::string_view to_string(PhaseKind kind);

struct Phase {
  PhaseKind kind = PhaseKind::Hedge;
  bool post_minsky = false;  // s >= s_m_market

  std::string label() const;
};

enum class MinskyVariant { Market, Expected };

struct DefaultRisk {
  double p_hat = 0.0;        // 1 - D(s_hat)/F
  double p_star = 0.0;       // 1 - F/B(s_star)
  double p_tilde = 1.0;      // total collapse
  double omega = 0.0;        // B(s_star)/D(s_hat), index of debt growth
  double p_geometric = 0.0;  // 1 - omega^(-1/2)
  double dd_survival = 0.0;  // distance-to-default at s_star, no herding: 1/beta
  double dd_default = 0.0;   // no-herding default at s_star: (beta-1)/beta
  double herding_default = 1.0;

  // Raw inputs of the product test D(s_hat) * B(s_star) vs F^2.
  double d_hat = 0.0;
  double b_star = 0.0;
  double F = 0.0;
};

struct NaturalCycleReport {
  bool ordered = false;        // p_hat < p_star < p_tilde
  double product = 0.0;        // D(s_hat) * B(s_star)
  double par_squared = 0.0;    // F^2
  bool product_exceeds = false;
  bool consistent = false;     // (p_hat < p_star) == (product > F^2)
  std::vector<Diagnostic> diagnostics;
};

struct LedgerLine {
  std::string label;
  double value = 0.0;
};

struct Ledger {
  std::string point;
  std::vector<LedgerLine> assets;
  std::vector<LedgerLine> liabilities;

  double total_assets() const;
  double total_liabilities() const;
  bool balanced(double rel_tol = 1e-9) const;
};

enum class LedgerKind { SHat, SStarRelending, SStarNewDebt, STilde };

std::string_view to_string(LedgerKind kind);

/// One row of the cycle summary table. Missing cells are std::nullopt.
struct TableRow {
  std::string point;
  std::optional<double> s;
  std::optional<double> D;
  std::optional<double> B;
  std::optional<double> f;
  std::optional<double> P;
  double p_default = 0.0;
};

double equilibrium_point(const ModelParams& params);

struct CriticalPoint {
  double s_star = 0.0;
  double K = 0.0;
};

/// Free boundary from value matching f(s*) = B(s*) - F together with
/// smooth pasting f'(s*) = B'(s*).
CriticalPoint critical_point(const ModelParams& params, const CharacteristicRoots& roots);

/// Level where B(s) = f(s). Returns +infinity when K == 0 (never collapses).
double collapse_point(const ModelParams& params, double K, const CharacteristicRoots& roots);

/// Bisection on [1e-9 * s_hat, s_hat] to |ds| <= 1e-8.
double minsky_point(const ModelParams& params, double K, const CharacteristicRoots& roots,
                    MinskyVariant variant);

double divergence_scale(double beta);

CyclePoints cycle_points(const ModelParams& params, const CharacteristicRoots& roots);
inline CyclePoints cycle_points(const ModelParams& params) {
  return cycle_points(params, characteristic_roots(params));
}

DefaultRisk default_probabilities(const ModelParams& params, const CyclePoints& points);
NaturalCycleReport natural_cycle_check(const DefaultRisk& risk);

double excess_money(const ModelParams& params, const CharacteristicRoots& roots);

Ledger balance_sheet(const ModelParams& params, const CyclePoints& points, LedgerKind which);

/// Boundaries belong to the later phase: s_hat is Speculative, s_star is
/// Ponzi, s_tilde is Collapse.
Phase classify_phase(const CyclePoints& points, double s);

/// Rows for s_hat, the omega row, s_star and s_tilde.
///
/// PaperRounded reproduces the printed table: beta = 2.4, K = 0.2, the
/// printed s_star = 15.5 and s_tilde = 28.9, B(s_star) = beta/(beta-1) F.
std::vector<TableRow> cycle_table(const ModelParams& params, Mode mode);

}  // namespace credit_cycle
