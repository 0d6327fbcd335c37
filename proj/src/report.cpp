#include "credit_cycle/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "credit_cycle/herding.hpp"
#include "credit_cycle/temporal.hpp"

namespace credit_cycle {

namespace fs = std::filesystem;

std::string_view to_string(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::Validate: return "validate";
    case Subcommand::Points: return "points";
    case Subcommand::Table: return "table";
    case Subcommand::SnapshotGrid: return "snapshot-grid";
    case Subcommand::Simulate: return "simulate";
    case Subcommand::Herding: return "herding";
    case Subcommand::Temporal: return "temporal";
    case Subcommand::Ledger: return "ledger";
    case Subcommand::Figure: return "figure";
  }
  return "unknown";
}

Subcommand parse_subcommand(std::string_view text) {
  for (auto cmd : {Subcommand::Validate, Subcommand::Points, Subcommand::Table, Subcommand::SnapshotGrid,
                   Subcommand::Simulate, Subcommand::Herding, Subcommand::Temporal, Subcommand::Ledger,
                   Subcommand::Figure})
    if (to_string(cmd) == text) return cmd;
  throw ModelError(ErrorKind::Validation, fmt::format("unknown subcommand '{}'", text));
}

std::string_view to_string(Figure fig) {
  switch (fig) {
    case Figure::Fig3: return "fig3";
    case Figure::Fig4: return "fig4";
    case Figure::Fig5: return "fig5";
    case Figure::Fig7: return "fig7";
    case Figure::Fig9: return "fig9";
    case Figure::Fig10: return "fig10";
    case Figure::Fig11: return "fig11";
    case Figure::Fig12: return "fig12";
  }
  return "unknown";
}

Figure parse_figure(std::string_view text) {
  for (auto fig : {Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig7, Figure::Fig9, Figure::Fig10,
                   Figure::Fig11, Figure::Fig12})
    if (to_string(fig) == text) return fig;
  throw ModelError(ErrorKind::Validation, fmt::format("unknown figure '{}'", text));
}

int exit_status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::Validation:
    case ErrorKind::InvalidParameter: return kExitValidation;
    default: return kExitModel;
  }
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{}", value);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

namespace {

std::string write_series(const Series& series) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row(series.columns);
  for (const auto& r : series.rows) {
    std::vector<std::string> cells;
    cells.reserve(r.size());
    for (double v : r) cells.push_back(format_number(v));
    csv.row(cells);
  }
  return out.str();
}

// Grid of n points on [lo, hi]; with `open_end` the last point stays below hi.
std::vector<double> grid(double lo, double hi, std::size_t n, bool open_end = false) {
  std::vector<double> g(n);
  const double denom = static_cast<double>(open_end ? n : std::max<std::size_t>(n - 1, 1));
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / denom;
  return g;
}

double phase_index(PhaseKind kind) { return static_cast<double>(static_cast<int>(kind)); }

}  // namespace

Series emit_figure_series(Figure which, const ModelParams& params, std::size_t points) {
  if (points < 2) throw ModelError(ErrorKind::InvalidParameter, "figure series needs two points");
  const auto roots = characteristic_roots(params);
  const auto pts = cycle_points(params, roots);
  const double F = params.F;
  Series out;
  switch (which) {
    case Figure::Fig3:
      out.columns = {"B", "call"};
      for (double b : grid(0.0, 2.0 * F, points)) out.rows.push_back({b, maturity_payoffs(F, b).call});
      break;
    case Figure::Fig4:
      out.columns = {"B", "D"};
      for (double b : grid(0.0, 2.0 * F, points)) out.rows.push_back({b, F - maturity_payoffs(F, b).put});
      break;
    case Figure::Fig5:
      out.columns = {"B", "put"};
      for (double b : grid(0.0, 2.0 * F, points)) out.rows.push_back({b, maturity_payoffs(F, b).put});
      break;
    case Figure::Fig7:
      out.columns = {"s", "leverage_no_herding", "leverage_herding"};
      for (double s : grid(0.5 * pts.s_hat, pts.s_star, points)) {
        const auto q = herding_regime_quantities(params, pts, s);
        out.rows.push_back({s, q.no_herding.leverage, q.herding.leverage});
      }
      break;
    case Figure::Fig9:
      out.columns = {"beta", "characteristic"};
      for (double b : grid(roots.beta_minus - 1.0, roots.beta_plus + 1.0, points))
        out.rows.push_back({b, characteristic_polynomial(params, b)});
      break;
    case Figure::Fig10:
      out.columns = {"s", "B", "f", "D", "P", "F_eff", "phase"};
      for (double s : grid(0.0, 1.1 * pts.s_tilde, points)) {
        const auto v = valuation_snapshot(params, pts, s);
        out.rows.push_back({s, v.B, v.f, v.D, v.P, v.F_eff, phase_index(v.phase.kind)});
      }
      break;
    case Figure::Fig11: {
      out.columns = {"s", "f_h0", "f_h1"};
      HerdingParams on{true, primer_printed::gamma, pts.s_star};
      HerdingParams off{false, primer_printed::gamma, pts.s_star};
      for (double s : grid(0.0, pts.s_star, points, true))
        out.rows.push_back({s, herding_new_debt(pts.K, pts.beta, off, s),
                            herding_new_debt(pts.K, pts.beta, on, s)});
      break;
    }
    case Figure::Fig12: {
      // Singular new-debt bubble up to s*, then the market debt after the burst.
      out.columns = {"s", "B", "D", "f_h1"};
      HerdingParams on{true, primer_printed::gamma, pts.s_star};
      for (double s : grid(0.0, pts.s_tilde, points)) {
        const auto v = valuation_snapshot(params, pts, s);
        const double fh = s < pts.s_star ? herding_new_debt(pts.K, pts.beta, on, s)
                                         : std::numeric_limits<double>::quiet_NaN();
        out.rows.push_back({s, v.B, v.D, fh});
      }
      break;
    }
  }
  return out;
}

std::string table_csv(const std::vector<TableRow>& rows, Mode mode) {
  auto amount = [mode](const std::optional<double>& v) -> std::string {
    if (!v) return "";
    if (mode == Mode::FullPrecision) return format_number(*v);
    if (*v == 0.0) return "0";
    return fmt::format("{:.1f}", *v);
  };
  auto prob = [mode](double p) -> std::string {
    if (mode == Mode::FullPrecision) return format_number(p);
    if (p == 1.0) return "1.0";
    return fmt::format("{:.3f}", p);
  };
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"point", "s", "D", "B", "f", "P", "p_default"});
  for (const auto& r : rows)
    csv.row({r.point, amount(r.s), amount(r.D), amount(r.B), amount(r.f), amount(r.P), prob(r.p_default)});
  return out.str();
}

std::string snapshot_grid_csv(const ModelParams& params, std::size_t points, double s_max) {
  const auto pts = cycle_points(params);
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"s", "B", "f", "D", "P", "A", "E", "F_eff", "phase"});
  for (double s : grid(0.0, s_max, points)) {
    const auto v = valuation_snapshot(params, pts, s);
    csv.row({format_number(v.s), format_number(v.B), format_number(v.f), format_number(v.D),
             format_number(v.P), format_number(v.A), format_number(v.E), format_number(v.F_eff),
             v.phase.label()});
  }
  return out.str();
}

namespace {

std::vector<Diagnostic> table_diagnostics(const ModelParams& params, Mode mode) {
  std::vector<Diagnostic> notes;
  if (!is_primer_economy(params)) return notes;
  notes.push_back({"Table 3, row s = 12.4",
                   "the printed probability 0.315 equals 1 - omega^(-1/2); no model relation maps "
                   "s = 12.4 to it, so it is reported as the omega row"});
  notes.push_back({"Numerical primer, f(s*)",
                   "f(s*) is printed both as 142.9 and as 0.2 x 15.5^2.4 = 142.3; both are rounding "
                   "artifacts of f(s*) = F/(beta-1)"});
  if (mode == Mode::PaperRounded) {
    notes.push_back({"Table 2, row s_tilde",
                     fmt::format("printed B(s_tilde) = 642.6 is not reproduced by s_tilde/delta = {:.1f} "
                                 "for the printed s_tilde = 28.9",
                                 primer_printed::s_tilde / params.delta)});
    notes.push_back({"Numerical primer, B(s*)",
                     "printed B(s*) = 342.9 follows beta/(beta-1) F with beta = 2.4, not 15.5/0.045"});
  }
  return notes;
}

}  // namespace

nlohmann::ordered_json build_report(const ModelParams& params, Mode mode) {
  using nlohmann::ordered_json;
  const auto validation = validate_params(params);
  const auto roots = characteristic_roots(params);
  const auto pts = cycle_points(params, roots);
  const auto risk = default_probabilities(params, pts);
  const auto cycle = natural_cycle_check(risk);

  ordered_json doc;
  doc["mode"] = std::string(to_string(mode));
  doc["params"] = {{"r", params.r},         {"delta", params.delta}, {"a", params.a},
                   {"sigma", params.sigma}, {"F", params.F},         {"s0", params.s0},
                   {"mu", params.mu()},     {"lambda", implied_risk_price(params)}};
  doc["roots"] = {{"beta_minus", roots.beta_minus}, {"beta_plus", roots.beta_plus}};
  doc["points"] = {{"s_m_expected", pts.s_m_expected}, {"s_m_market", pts.s_m_market},
                   {"s_hat", pts.s_hat},               {"s_star", pts.s_star},
                   {"s_tilde", pts.s_tilde},           {"K", pts.K},
                   {"divergence_scale", divergence_scale(pts.beta)},
                   {"excess_money", excess_money(params, roots)}};

  ordered_json table = ordered_json::array();
  for (const auto& r : cycle_table(params, mode)) {
    auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    table.push_back({{"point", r.point}, {"s", opt(r.s)}, {"D", opt(r.D)}, {"B", opt(r.B)},
                     {"f", opt(r.f)},     {"P", opt(r.P)}, {"p_default", r.p_default}});
  }
  doc["table"] = table;
  doc["probabilities"] = {{"p_hat", risk.p_hat},
                          {"p_star", risk.p_star},
                          {"p_tilde", risk.p_tilde},
                          {"omega", risk.omega},
                          {"p_geometric", risk.p_geometric},
                          {"dd_survival", risk.dd_survival},
                          {"dd_default", risk.dd_default},
                          {"herding_default", risk.herding_default}};
  doc["natural_cycle"] = {{"ordered", cycle.ordered},
                          {"product", cycle.product},
                          {"par_squared", cycle.par_squared},
                          {"product_exceeds", cycle.product_exceeds},
                          {"consistent", cycle.consistent}};

  ordered_json checks = ordered_json::array();
  for (const auto& c : validation.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured},
                      {"expected", c.expected}, {"tolerance", c.tolerance}});
  doc["validation"] = checks;

  ordered_json diags = ordered_json::array();
  auto add = [&](const Diagnostic& d) {
    diags.push_back({{"location", d.location}, {"message", d.message}, {"text", d.render()}});
  };
  for (const auto& d : validation.diagnostics) add(d);
  for (const auto& d : cycle.diagnostics) add(d);
  for (const auto& d : table_diagnostics(params, mode)) add(d);
  doc["diagnostics"] = diags;
  return doc;
}

std::vector<double> resolve_levels(const std::vector<std::string>& names, const CyclePoints& points) {
  std::vector<double> out;
  for (const auto& name : names) {
    if (name == "s_hat") out.push_back(points.s_hat);
    else if (name == "s_star") out.push_back(points.s_star);
    else if (name == "s_tilde") out.push_back(points.s_tilde);
    else if (name == "s_m") out.push_back(points.s_m_market);
    else {
      char* end = nullptr;
      const double v = std::strtod(name.c_str(), &end);
      if (end == name.c_str() || *end != '\0' || !(v > 0.0))
        throw ModelError(ErrorKind::Validation, fmt::format("unknown passage level '{}'", name));
      out.push_back(v);
    }
  }
  return out;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError(ErrorKind::Io, fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw ModelError(ErrorKind::Io, fmt::format("failed writing '{}'", path.string()));
}

void print_diagnostics(std::ostream& log, const nlohmann::ordered_json& report) {
  for (const auto& d : report["diagnostics"]) log << d["text"].get<std::string>() << '\n';
}

int run_validate(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto rep = validate_params(params);
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"check", "passed", "measured", "expected", "tolerance"});
  for (const auto& c : rep.checks) {
    csv.row({"\"" + c.name + "\"", c.passed ? "true" : "false", format_number(c.measured),
             format_number(c.expected), format_number(c.tolerance)});
    log << fmt::format("{:<50} {:<4} measured={} expected={}\n", c.name, c.passed ? "ok" : "FAIL",
                       format_number(c.measured), format_number(c.expected));
  }
  write_file(cfg.out_dir / "validation.csv", out.str());
  for (const auto& d : rep.diagnostics) log << d.render() << '\n';
  return kExitOk;
}

int run_points(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto roots = characteristic_roots(params);
  const auto pts = cycle_points(params, roots);
  const std::vector<std::pair<std::string, double>> values = {
      {"beta_minus", roots.beta_minus},
      {"beta_plus", roots.beta_plus},
      {"s_m_expected", pts.s_m_expected},
      {"s_m_market", pts.s_m_market},
      {"s_hat", pts.s_hat},
      {"s_star", pts.s_star},
      {"s_tilde", pts.s_tilde},
      {"K", pts.K},
      {"divergence_scale", divergence_scale(pts.beta)},
      {"excess_money", excess_money(params, roots)},
  };
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"name", "value"});
  for (const auto& [name, v] : values) {
    csv.row({name, format_number(v)});
    log << fmt::format("{:<18} {:.6f}\n", name, v);
  }
  write_file(cfg.out_dir / "points.csv", out.str());
  const auto report = build_report(params, cfg.mode);
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  print_diagnostics(log, report);
  return kExitOk;
}

int run_table(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto csv = table_csv(cycle_table(params, cfg.mode), cfg.mode);
  write_file(cfg.out_dir / "table.csv", csv);
  const auto report = build_report(params, cfg.mode);
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  log << csv;
  print_diagnostics(log, report);
  return kExitOk;
}

int run_snapshot_grid(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto pts = cycle_points(params);
  write_file(cfg.out_dir / "snapshots.csv", snapshot_grid_csv(params, cfg.grid_points, pts.s_tilde));
  log << fmt::format("wrote {} snapshots on [0, {:.4f}]\n", cfg.grid_points, pts.s_tilde);
  return kExitOk;
}

int run_simulate(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto pts = cycle_points(params);
  const auto levels = resolve_levels(cfg.levels, pts);
  const auto stats = passage_stats(params, levels, cfg.sim);

  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"level", "hits", "hit_fraction", "mean", "std_error", "median", "q05", "q95"});
  for (const auto& l : stats.levels) {
    csv.row({format_number(l.level), std::to_string(l.hits), format_number(l.hit_fraction),
             format_number(l.mean), format_number(l.std_error), format_number(l.median),
             format_number(l.q05), format_number(l.q95)});
    log << fmt::format("level {:>10.4f}: hit {:.4f}, mean {:.4f} y (se {:.4f}), median {:.4f} y\n",
                       l.level, l.hit_fraction, l.mean, l.std_error, l.median);
  }
  write_file(cfg.out_dir / "passage.csv", out.str());

  nlohmann::ordered_json summary;
  summary["seed"] = cfg.sim.seed;
  summary["paths"] = cfg.sim.n_paths;
  summary["dt"] = cfg.sim.dt;
  summary["horizon"] = cfg.sim.horizon;
  summary["scheme"] = std::string(to_string(cfg.sim.scheme));
  summary["ordering_violations"] = stats.ordering_violations;
  write_file(cfg.out_dir / "passage.json", summary.dump(2) + "\n");
  log << fmt::format("ordering violations: {}\n", stats.ordering_violations);

  if (cfg.sample_paths > 0) {
    std::ostringstream paths;
    CsvWriter pcsv(paths);
    pcsv.row({"path", "t", "s"});
    const auto k = std::min(cfg.sample_paths, cfg.sim.n_paths);
    for (std::uint64_t i = 0; i < k; ++i) {
      const auto p = simulate_money_path(params, cfg.sim, i);
      for (std::size_t j = 0; j < p.s.size(); ++j)
        pcsv.row({std::to_string(i), format_number(p.times[j]), format_number(p.s[j])});
    }
    write_file(cfg.out_dir / "paths.csv", paths.str());
  }
  return kExitOk;
}

int run_herding(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  double K, beta, s_star;
  if (cfg.mode == Mode::PaperRounded) {
    K = primer_printed::K;
    beta = primer_printed::beta_rounded;
    s_star = primer_printed::s_star_herding;
  } else {
    const auto pts = cycle_points(params);
    K = pts.K;
    beta = pts.beta;
    s_star = pts.s_star;
  }
  const HerdingParams on{true, primer_printed::gamma, s_star};
  const HerdingParams off{false, primer_printed::gamma, s_star};
  Series series;
  series.columns = {"s", "f_h0", "f_h1"};
  for (double s : grid(0.0, s_star, cfg.grid_points, true))
    series.rows.push_back({s, herding_new_debt(K, beta, off, s), herding_new_debt(K, beta, on, s)});
  write_file(cfg.out_dir / "herding.csv", write_series(series));
  log << fmt::format("herding series: K = {}, beta = {}, s* = {}, gamma = {}\n", format_number(K),
                     format_number(beta), format_number(s_star), format_number(on.gamma));
  return kExitOk;
}

int run_temporal(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  Series series;
  series.columns = {"t", "M", "B", "A"};
  for (double t : grid(0.0, cfg.sim.horizon, cfg.grid_points)) {
    const auto snap = expected_assets_time(params, t);
    series.rows.push_back({snap.t, snap.M, snap.B, snap.A});
  }
  write_file(cfg.out_dir / "temporal.csv", write_series(series));

  const auto zm = zero_money_singularity_report(params, cycle_points(params));
  log << fmt::format("crisis time t* = 0 with s0 = s* = {:.4f}\n", zm.s_star);
  log << fmt::format("  <A(t*)> = {:.4f}, B(s*) = {:.4f}\n", zm.assets_at_crisis, zm.expected_debt_at_crisis);
  log << fmt::format("  <M(t*)> = {}, P(s*) = {}\n", format_number(zm.money_at_crisis),
                     format_number(zm.put_at_critical));
  log << "  " << zm.interpretation << '\n';
  return kExitOk;
}

int run_ledger(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto pts = cycle_points(params);
  std::ostringstream out;
  CsvWriter csv(out);
  csv.row({"ledger", "side", "label", "value"});
  for (auto kind : {LedgerKind::SHat, LedgerKind::SStarRelending, LedgerKind::SStarNewDebt, LedgerKind::STilde}) {
    const auto led = balance_sheet(params, pts, kind);
    for (const auto& l : led.assets) csv.row({led.point, "asset", l.label, format_number(l.value)});
    for (const auto& l : led.liabilities) csv.row({led.point, "liability", l.label, format_number(l.value)});
    log << fmt::format("{:<18} assets {:.4f} liabilities {:.4f} {}\n", led.point, led.total_assets(),
                       led.total_liabilities(), led.balanced() ? "balanced" : "UNBALANCED");
  }
  write_file(cfg.out_dir / "ledger.csv", out.str());
  log << fmt::format("excess money at s*: {:.4f}\n", excess_money(params, characteristic_roots(params)));
  return kExitOk;
}

int run_figure(const RunConfig& cfg, const ModelParams& params, std::ostream& log) {
  const auto series = emit_figure_series(cfg.figure, params, cfg.grid_points);
  const auto name = fmt::format("figure_{}.csv", to_string(cfg.figure));
  write_file(cfg.out_dir / name, write_series(series));
  log << fmt::format("wrote {} ({} rows)\n", name, series.rows.size());
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    const auto params = load_params_file(config.params_path);
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec)
      throw ModelError(ErrorKind::Io,
                       fmt::format("cannot create output directory '{}': {}", config.out_dir.string(), ec.message()));
    switch (config.subcommand) {
      case Subcommand::Validate: return run_validate(config, params, log);
      case Subcommand::Points: return run_points(config, params, log);
      case Subcommand::Table: return run_table(config, params, log);
      case Subcommand::SnapshotGrid: return run_snapshot_grid(config, params, log);
      case Subcommand::Simulate: return run_simulate(config, params, log);
      case Subcommand::Herding: return run_herding(config, params, log);
      case Subcommand::Temporal: return run_temporal(config, params, log);
      case Subcommand::Ledger: return run_ledger(config, params, log);
      case Subcommand::Figure: return run_figure(config, params, log);
    }
  } catch (const ModelError& e) {
    err << fmt::format("error [{}]: {}\n", to_string(e.kind()), e.what());
    return exit_status_for(e.kind());
  } catch (const std::exception& e) {
    err << fmt::format("error [internal]: {}\n", e.what());
    return kExitModel;
  }
  return kExitUsage;
}

}  // namespace credit_cycle
