#include <doctest.h>

#include <cmath>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/debt_valuation.hpp"
#include "oracle.hpp"

using namespace credit_cycle;

namespace {

const ModelParams kPrimer = ModelParams::primer();

}  // namespace

TEST_CASE("equilibrium point") {
  CHECK(equilibrium_point(kPrimer) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(equilibrium_point({0.05, 0.05, 0.025, 0.15, 100, 1}) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("primer cycle points match the reference values") {
  const auto pts = cycle_points(kPrimer);
  CHECK(oracle::rel_err(pts.s_star, oracle::s_star) < 1e-13);
  CHECK(oracle::rel_err(pts.K, oracle::K) < 1e-12);
  CHECK(oracle::rel_err(pts.s_tilde, oracle::s_tilde) < 1e-12);
  CHECK(std::abs(pts.s_m_market - oracle::s_m_market) < 1e-8);
  CHECK(std::abs(pts.s_m_expected - oracle::s_m_expected) < 1e-8);
  CHECK(divergence_scale(pts.beta) == doctest::Approx(oracle::B_star / 200.0).epsilon(1e-12));
}

TEST_CASE("free boundary conditions") {
  oracle::ParamGen gen(31);
  for (int i = 0; i < 100; ++i) {
    const auto p = gen.next();
    const auto roots = characteristic_roots(p);
    const auto cp = critical_point(p, roots);
    const double f = new_debt_option(cp.K, roots.beta_plus, cp.s_star);
    const double f1 = new_debt_option_derivative(cp.K, roots.beta_plus, cp.s_star);
    CHECK(oracle::rel_err(f, cp.s_star / p.delta - p.F) < 1e-12);
    CHECK(oracle::rel_err(f1, 1.0 / p.delta) < 1e-12);
    CHECK(oracle::rel_err(cp.s_star, oracle::s_star_closed(p, roots.beta_plus)) < 1e-13);
  }
}

TEST_CASE("free boundary agrees with a brute-force grid search") {
  oracle::ParamGen gen(32);
  for (int i = 0; i < 100; ++i) {
    const auto p = gen.next();
    const auto roots = characteristic_roots(p);
    const auto cp = critical_point(p, roots);
    double step = 0.0;
    const double s_hat = p.delta * p.F;
    const double found = oracle::s_star_grid(p, roots.beta_plus, s_hat, 20.0 * cp.s_star, 10000, &step);
    CHECK(std::abs(found - cp.s_star) <= step);
  }
}

TEST_CASE("critical point needs an exponent above one") {
  CHECK_THROWS_AS(critical_point(kPrimer, {-1.0, 1.0}), ModelError);
  CHECK_THROWS_AS(divergence_scale(0.5), ModelError);
}

TEST_CASE("collapse point") {
  const auto roots = characteristic_roots(kPrimer);
  CHECK(std::isinf(collapse_point(kPrimer, 0.0, roots)));
  const double s = collapse_point(kPrimer, oracle::K, roots);
  CHECK(expected_debt(kPrimer, s) == doctest::Approx(new_debt_option(oracle::K, roots.beta_plus, s)).epsilon(1e-12));
}

TEST_CASE("Minsky points") {
  const auto roots = characteristic_roots(kPrimer);
  CHECK(minsky_point(kPrimer, 0.0, roots, MinskyVariant::Market) == doctest::Approx(4.5).epsilon(1e-8));
  CHECK(minsky_point(kPrimer, 0.0, roots, MinskyVariant::Expected) == doctest::Approx(4.5).epsilon(1e-8));
  const double sm = minsky_point(kPrimer, oracle::K, roots, MinskyVariant::Market);
  const double B = sm / kPrimer.delta, f = new_debt_option(oracle::K, roots.beta_plus, sm);
  CHECK(std::abs(2.0 * (B - f) - kPrimer.F) < 1e-5);
  // A huge K pushes the Minsky condition outside the bracket.
  CHECK_THROWS_AS(minsky_point(kPrimer, 1e3, roots, MinskyVariant::Market), ModelError);
}

TEST_CASE("divergence scale") {
  CHECK(divergence_scale(2.0) == 2.0);
  CHECK(divergence_scale(INFINITY) == 1.0);
  CHECK(divergence_scale(1e12) == doctest::Approx(1.0));
}

TEST_CASE("default probabilities") {
  const auto risk = default_probabilities(kPrimer, cycle_points(kPrimer));
  CHECK(risk.p_hat == doctest::Approx(oracle::p_hat).epsilon(1e-12));
  CHECK(risk.p_star == doctest::Approx(oracle::p_star).epsilon(1e-12));
  CHECK(risk.omega == doctest::Approx(oracle::omega).epsilon(1e-12));
  CHECK(risk.p_geometric == doctest::Approx(oracle::p_geometric).epsilon(1e-12));
  CHECK(risk.dd_default == doctest::Approx(oracle::dd_default).epsilon(1e-12));
  CHECK(risk.dd_survival == doctest::Approx(1.0 / oracle::beta_plus).epsilon(1e-12));
  CHECK(risk.p_tilde == 1.0);
}

TEST_CASE("natural cycle") {
  const auto rep = natural_cycle_check(default_probabilities(kPrimer, cycle_points(kPrimer)));
  CHECK(rep.ordered);
  CHECK(rep.product_exceeds);
  CHECK(rep.consistent);
  CHECK(rep.product == doctest::Approx(oracle::D_hat * oracle::B_star).epsilon(1e-12));
  REQUIRE(rep.diagnostics.size() == 1);
  CHECK(rep.diagnostics[0].render().rfind("PAPER-NOTE [", 0) == 0);

  // Equality D(s_hat) B(s_star) = F^2: both probabilities equal 1 - omega^(-1/2).
  DefaultRisk eq;
  eq.F = 200.0;
  eq.d_hat = 100.0;
  eq.b_star = 400.0;
  eq.p_hat = 1.0 - eq.d_hat / eq.F;
  eq.p_star = 1.0 - eq.F / eq.b_star;
  eq.omega = eq.b_star / eq.d_hat;
  eq.p_geometric = 1.0 - 1.0 / std::sqrt(eq.omega);
  CHECK(eq.p_hat == doctest::Approx(eq.p_star));
  CHECK(eq.p_hat == doctest::Approx(eq.p_geometric));
  const auto eq_rep = natural_cycle_check(eq);
  CHECK_FALSE(eq_rep.product_exceeds);
  CHECK(eq_rep.consistent);
}

TEST_CASE("product condition is consistent with the probability ordering on random economies") {
  oracle::ParamGen gen(33);
  for (int i = 0; i < 100; ++i) {
    const auto p = gen.next();
    const auto rep = natural_cycle_check(default_probabilities(p, cycle_points(p)));
    CHECK(rep.consistent);
    CHECK(rep.ordered);
  }
}

TEST_CASE("excess money") {
  const auto roots = characteristic_roots(kPrimer);
  const double em = excess_money(kPrimer, roots);
  CHECK(em == doctest::Approx(oracle::excess_money).epsilon(1e-12));
  const double beta = roots.beta_plus;
  CHECK(em == doctest::Approx((1.0 - kPrimer.delta) * beta / (beta - 1.0) * kPrimer.F - oracle::f_star).epsilon(1e-12));
  // Boundary beta (1 - delta) = 1.
  CHECK(std::abs(excess_money(kPrimer, {-1.0, 1.0 / (1.0 - kPrimer.delta)})) < 1e-10);
  ModelParams heavy = kPrimer;
  heavy.delta = 0.99;
  CHECK(excess_money(heavy, characteristic_roots(heavy)) < 0.0);
}

TEST_CASE("balance sheets balance") {
  oracle::ParamGen gen(34);
  for (int i = 0; i < 50; ++i) {
    const auto p = i == 0 ? kPrimer : gen.next();
    const auto pts = cycle_points(p);
    for (auto kind : {LedgerKind::SHat, LedgerKind::SStarRelending, LedgerKind::SStarNewDebt, LedgerKind::STilde})
      CHECK(balance_sheet(p, pts, kind).balanced(1e-12));
  }
  const auto pts = cycle_points(kPrimer);
  const auto hat = balance_sheet(kPrimer, pts, LedgerKind::SHat);
  CHECK(hat.total_assets() == doctest::Approx(200.0));
  const auto nd = balance_sheet(kPrimer, pts, LedgerKind::SStarNewDebt);
  CHECK(nd.total_liabilities() == doctest::Approx(oracle::B_star).epsilon(1e-12));
  const auto tilde = balance_sheet(kPrimer, pts, LedgerKind::STilde);
  CHECK(tilde.total_assets() == doctest::Approx(oracle::B_tilde).epsilon(1e-12));
}

TEST_CASE("phase classification") {
  const auto pts = cycle_points(kPrimer);
  CHECK(classify_phase(pts, 0.0).kind == PhaseKind::Hedge);
  CHECK_FALSE(classify_phase(pts, 0.0).post_minsky);
  CHECK(classify_phase(pts, 10.0).kind == PhaseKind::Speculative);
  CHECK(classify_phase(pts, 10.0).post_minsky);
  CHECK(classify_phase(pts, pts.s_hat).kind == PhaseKind::Speculative);
  CHECK(classify_phase(pts, pts.s_star).kind == PhaseKind::Ponzi);
  CHECK(classify_phase(pts, 28.9).kind == PhaseKind::Collapse);
  CHECK(classify_phase(pts, 10.0).label() == "speculative/post-minsky");
}

TEST_CASE("cycle points are ordered on random economies") {
  oracle::ParamGen gen(35);
  for (int i = 0; i < 200; ++i) {
    const auto p = gen.next();
    const auto pts = cycle_points(p);
    // f(s_hat)/F = ((beta-1)/beta)^(beta-1)/beta decides whether the market
    // Minsky condition has a root below s_hat.
    const double b = pts.beta;
    const double f_hat_ratio = std::pow((b - 1.0) / b, b - 1.0) / b;
    if (f_hat_ratio < 0.5) {
      CHECK(pts.s_m_expected < pts.s_m_market);
      CHECK(pts.s_m_market < pts.s_hat);
    } else {
      CHECK(std::isnan(pts.s_m_market));
      CHECK(pts.s_m_expected < pts.s_hat);
    }
    CHECK(pts.s_hat < pts.s_star);
    CHECK(pts.s_star < pts.s_tilde);
  }
}

TEST_CASE("cycle points scale linearly with par") {
  oracle::ParamGen gen(36);
  for (int i = 0; i < 50; ++i) {
    auto p = gen.next();
    const auto a = cycle_points(p);
    p.F *= 3.0;
    const auto b = cycle_points(p);
    CHECK(oracle::rel_err(b.s_star, 3.0 * a.s_star) < 1e-12);
    CHECK(oracle::rel_err(b.s_tilde, 3.0 * a.s_tilde) < 1e-11);
    if (std::isfinite(a.s_m_market)) CHECK(std::abs(b.s_m_market - 3.0 * a.s_m_market) < 5e-8);
    CHECK(std::abs(b.s_m_expected - 3.0 * a.s_m_expected) < 5e-8);
  }
}

TEST_CASE("paper-rounded table reproduces the printed chain") {
  const auto rows = cycle_table(kPrimer, Mode::PaperRounded);
  REQUIRE(rows.size() == 4);
  CHECK(*rows[0].f == doctest::Approx(0.2 * std::pow(9.0, 2.4)));
  CHECK(*rows[2].B == doctest::Approx(2.4 / 1.4 * 200.0));
  CHECK(rows[2].p_default == doctest::Approx(1.0 - 1.4 / 2.4));
  CHECK(*rows[3].B == doctest::Approx(28.9 / 0.045));
  CHECK_FALSE(rows[1].s.has_value());
  ModelParams other = kPrimer;
  other.sigma = 0.2;
  CHECK_THROWS_AS(cycle_table(other, Mode::PaperRounded), ModelError);
}
