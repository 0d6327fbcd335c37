#include "credit_cycle/cycle_geometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "credit_cycle/debt_valuation.hpp"

namespace credit_cycle {

std::string_view to_string(Mode mode) {
  return mode == Mode::FullPrecision ? "full-precision" : "paper-rounded";
}

Mode parse_mode(std::string_view text) {
  if (text == "full-precision" || text == "full") return Mode::FullPrecision;
  if (text == "paper-rounded" || text == "paper") return Mode::PaperRounded;
  throw ModelError(ErrorKind::Validation, fmt::format("unknown mode '{}'", text));
}

std::string_view to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::Hedge: return "hedge";
    case PhaseKind::Speculative: return "speculative";
    case PhaseKind::Ponzi: return "ponzi";
    case PhaseKind::Collapse: return "collapse";
  }
  return "unknown";
}

std::string Phase::label() const {
  return fmt::format("{}/{}", to_string(kind), post_minsky ? "post-minsky" : "pre-minsky");
}

std::string_view to_string(LedgerKind kind) {
  switch (kind) {
    case LedgerKind::SHat: return "s_hat";
    case LedgerKind::SStarRelending: return "s_star_relending";
    case LedgerKind::SStarNewDebt: return "s_star_newdebt";
    case LedgerKind::STilde: return "s_tilde";
  }
  return "unknown";
}

namespace {

double sum_lines(const std::vector<LedgerLine>& lines) {
  return std::accumulate(lines.begin(), lines.end(), 0.0,
                         [](double acc, const LedgerLine& l) { return acc + l.value; });
}

void require_free_boundary(double beta) {
  if (!(beta > 1.0))
    throw ModelError(ErrorKind::NoFreeBoundary,
                     fmt::format("no free boundary: option exponent {} does not exceed 1", beta));
}

}  // namespace

double Ledger::total_assets() const { return sum_lines(assets); }
double Ledger::total_liabilities() const { return sum_lines(liabilities); }

bool Ledger::balanced(double rel_tol) const {
  const double a = total_assets();
  const double l = total_liabilities();
  return std::abs(a - l) <= rel_tol * std::max({1.0, std::abs(a), std::abs(l)});
}

double equilibrium_point(const ModelParams& params) { return params.delta * params.F; }

CriticalPoint critical_point(const ModelParams& params, const CharacteristicRoots& roots) {
  const double beta = roots.beta_plus;
  require_free_boundary(beta);
  const double s_star = beta / (beta - 1.0) * params.delta * params.F;
  const double K = std::pow(s_star, 1.0 - beta) / (params.delta * beta);
  return {s_star, K};
}

double collapse_point(const ModelParams& params, double K, const CharacteristicRoots& roots) {
  const double beta = roots.beta_plus;
  require_free_boundary(beta);
  if (K < 0.0) throw ModelError(ErrorKind::InvalidParameter, "K must be non-negative");
  if (K == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(K * params.delta, -1.0 / (beta - 1.0));
}

double minsky_point(const ModelParams& params, double K, const CharacteristicRoots& roots,
                    MinskyVariant variant) {
  const double beta = roots.beta_plus;
  require_free_boundary(beta);
  const double s_hat = equilibrium_point(params);
  const double F = params.F;

  auto gap = [&](double s) {
    const double B = s / params.delta;
    const double f = (K == 0.0) ? 0.0 : K * std::pow(s, beta);
    // market: F = 2 (B - f); expected: F + f = 2 B
    return variant == MinskyVariant::Market ? 2.0 * (B - f) - F : 2.0 * B - F - f;
  };

  const double lo = 1e-9 * s_hat;
  const double hi = s_hat;
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (!(g_lo < 0.0 && g_hi > 0.0))
    throw ModelError(ErrorKind::NoBifurcation,
                     fmt::format("no sign change of the Minsky condition on [{}, {}]", lo, hi));

  std::uintmax_t max_iter = 200;
  auto done = [](double a, double b) { return std::abs(b - a) <= 1e-8; };
  const auto [a, b] = boost::math::tools::bisect(gap, lo, hi, done, max_iter);
  return 0.5 * (a + b);
}

double divergence_scale(double beta) {
  require_free_boundary(beta);
  if (std::isinf(beta)) return 1.0;
  return beta / (beta - 1.0);
}

CyclePoints cycle_points(const ModelParams& params, const CharacteristicRoots& roots) {
  require_valid(params);
  CyclePoints pts;
  pts.beta = roots.beta_plus;
  pts.s_hat = equilibrium_point(params);
  const auto crit = critical_point(params, roots);
  pts.s_star = crit.s_star;
  pts.K = crit.K;
  pts.s_tilde = collapse_point(params, pts.K, roots);
  // Low exponents push the Minsky condition past s_hat; such economies have no
  // Minsky point in the hedge phase.
  auto minsky_or_nan = [&](MinskyVariant variant) {
    try {
      return minsky_point(params, pts.K, roots, variant);
    } catch (const ModelError& e) {
      if (e.kind() != ErrorKind::NoBifurcation) throw;
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  pts.s_m_market = minsky_or_nan(MinskyVariant::Market);
  pts.s_m_expected = minsky_or_nan(MinskyVariant::Expected);
  return pts;
}

DefaultRisk default_probabilities(const ModelParams& params, const CyclePoints& points) {
  const auto at_hat = valuation_snapshot(params, points, points.s_hat);
  const auto at_star = valuation_snapshot(params, points, points.s_star);

  DefaultRisk risk;
  risk.F = params.F;
  risk.d_hat = at_hat.D;
  risk.b_star = at_star.B;
  risk.p_hat = 1.0 - at_hat.D / params.F;
  risk.p_star = 1.0 - params.F / at_star.B;
  risk.p_tilde = 1.0;
  risk.omega = at_star.B / at_hat.D;
  risk.p_geometric = 1.0 - 1.0 / std::sqrt(risk.omega);

  // Without herding the market debt sits at par and equity is f(s_star).
  const double assets = params.F + at_star.f;
  risk.dd_survival = (assets - params.F) / assets;
  risk.dd_default = params.F / assets;
  risk.herding_default = 1.0;
  return risk;
}

NaturalCycleReport natural_cycle_check(const DefaultRisk& risk) {
  NaturalCycleReport rep;
  rep.ordered = risk.p_hat < risk.p_star && risk.p_star < risk.p_tilde;
  rep.product = risk.d_hat * risk.b_star;
  rep.par_squared = risk.F * risk.F;
  rep.product_exceeds = rep.product > rep.par_squared;
  rep.consistent = (risk.p_hat < risk.p_star) == rep.product_exceeds;
  if (rep.product_exceeds) {
    rep.diagnostics.push_back(
        {"Natural cycle of the credit expansion, product condition",
         fmt::format("p(s_hat) < p(s_star) holds with D(s_hat)*B(s_star) = {:.2f} > F^2 = {:.2f}; "
                     "the printed condition 'D(s_hat) x B(s_star) < F^2' has the opposite direction",
                     rep.product, rep.par_squared)});
  }
  return rep;
}

double excess_money(const ModelParams& params, const CharacteristicRoots& roots) {
  const double beta = roots.beta_plus;
  require_free_boundary(beta);
  return ((1.0 - params.delta) * beta - 1.0) * params.F / (beta - 1.0);
}

Ledger balance_sheet(const ModelParams& params, const CyclePoints& points, LedgerKind which) {
  const double delta = params.delta;
  const double F = params.F;
  const double scale = divergence_scale(points.beta);
  Ledger led;
  led.point = std::string(to_string(which));
  switch (which) {
    case LedgerKind::SHat:
      led.assets = {{"money", points.s_hat}, {"credit", (1.0 - delta) * F}};
      led.liabilities = {{"riskless debt", F}};
      break;
    case LedgerKind::SStarRelending:
      led.assets = {{"money", points.s_star}, {"credit", (1.0 - delta) * scale * F}};
      led.liabilities = {{"expected debt", expected_debt(params, points.s_star)}};
      break;
    case LedgerKind::SStarNewDebt:
      led.assets = {{"money", points.s_star}, {"credit", (1.0 - delta) * scale * F}};
      led.liabilities = {{"riskless debt", F},
                         {"new debt", new_debt_option(points.K, points.beta, points.s_star)}};
      break;
    case LedgerKind::STilde:
      led.assets = {{"money", points.s_tilde}, {"credit", (1.0 / delta - 1.0) * points.s_tilde}};
      led.liabilities = {{"new debt", new_debt_option(points.K, points.beta, points.s_tilde)}};
      break;
  }
  return led;
}

Phase classify_phase(const CyclePoints& points, double s) {
  Phase ph;
  if (s < points.s_hat)
    ph.kind = PhaseKind::Hedge;
  else if (s < points.s_star)
    ph.kind = PhaseKind::Speculative;
  else if (s < points.s_tilde)
    ph.kind = PhaseKind::Ponzi;
  else
    ph.kind = PhaseKind::Collapse;
  ph.post_minsky = s >= points.s_m_market;
  return ph;
}

namespace {

std::vector<TableRow> full_precision_table(const ModelParams& params) {
  const auto pts = cycle_points(params);
  const auto risk = default_probabilities(params, pts);
  const auto hat = valuation_snapshot(params, pts, pts.s_hat);
  const auto star = valuation_snapshot(params, pts, pts.s_star);
  const auto tilde = valuation_snapshot(params, pts, pts.s_tilde);

  std::vector<TableRow> rows;
  rows.push_back({"s_hat", hat.s, hat.D, hat.B, hat.f, hat.P, risk.p_hat});
  rows.push_back({"omega", std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                  risk.p_geometric});
  rows.push_back({"s_star", star.s, star.D, star.B, star.f, star.P, risk.p_star});
  rows.push_back({"s_tilde", tilde.s, tilde.D, tilde.B, tilde.f, tilde.P, risk.p_tilde});
  return rows;
}

std::vector<TableRow> paper_rounded_table(const ModelParams& params) {
  if (!is_primer_economy(params))
    throw ModelError(ErrorKind::Validation,
                     "paper-rounded mode only applies to the primer economy (r, delta, a, sigma)");
  namespace pp = primer_printed;
  const double F = params.F;
  const double delta = params.delta;

  const double s_hat = delta * F;
  const double f_hat = pp::K * std::pow(s_hat, pp::beta_rounded);
  const double B_hat = s_hat / delta;
  const double D_hat = B_hat - f_hat;
  const double P_hat = F - D_hat;

  const double B_star = pp::beta_rounded / (pp::beta_rounded - 1.0) * F;
  const double f_star = B_star - F;

  const double omega = B_star / D_hat;
  const double B_tilde = pp::s_tilde / delta;

  std::vector<TableRow> rows;
  rows.push_back({"s_hat", s_hat, D_hat, B_hat, f_hat, P_hat, 1.0 - D_hat / F});
  rows.push_back({"omega", std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                  1.0 - 1.0 / std::sqrt(omega)});
  rows.push_back({"s_star", pp::s_star, F, B_star, f_star, 0.0, 1.0 - F / B_star});
  rows.push_back({"s_tilde", pp::s_tilde, 0.0, B_tilde, B_tilde, 0.0, 1.0});
  return rows;
}

}  // namespace

std::vector<TableRow> cycle_table(const ModelParams& params, Mode mode) {
  return mode == Mode::FullPrecision ? full_precision_table(params) : paper_rounded_table(params);
}

}  // namespace credit_cycle
