#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "credit_cycle/report.hpp"
#include "oracle.hpp"

using namespace credit_cycle;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Fresh scratch directory with a primer params file.
struct Scratch {
  fs::path dir;
  fs::path params;

  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("credit_cycle_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    params = dir / "params.json";
    std::ofstream(params) << R"({"r": 0.05, "delta": 0.045, "a": 0.025, "sigma": 0.15, "F": 200, "s0": 9.6})";
  }
  ~Scratch() { fs::remove_all(dir); }

  RunConfig config(Subcommand cmd, const std::string& out) const {
    RunConfig cfg;
    cfg.params_path = params;
    cfg.subcommand = cmd;
    cfg.out_dir = dir / out;
    return cfg;
  }
};

int run_quiet(const RunConfig& cfg, std::string* log = nullptr, std::string* err = nullptr) {
  std::ostringstream l, e;
  const int rc = run(cfg, l, e);
  if (log) *log = l.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(200.0) == "200");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
  CHECK(std::stod(format_number(oracle::K)) == oracle::K);
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("paper-rounded table matches the golden file byte for byte") {
  Scratch s("golden");
  auto cfg = s.config(Subcommand::Table, "out");
  cfg.mode = Mode::PaperRounded;
  REQUIRE(run_quiet(cfg) == kExitOk);
  CHECK(slurp(cfg.out_dir / "table.csv") == slurp(fs::path(CREDIT_CYCLE_GOLDEN_DIR) / "table_paper_rounded.csv"));
}

TEST_CASE("validate reports the printed-constant diagnostics") {
  Scratch s("validate");
  auto cfg = s.config(Subcommand::Validate, "out");
  std::string log;
  REQUIRE(run_quiet(cfg, &log) == kExitOk);
  CHECK(log.find("PAPER-NOTE [Numerical primer, unit risk price]") != std::string::npos);
  CHECK(log.find("PAPER-NOTE [Numerical primer, characteristic roots]") != std::string::npos);
  CHECK(fs::exists(cfg.out_dir / "validation.csv"));
}

TEST_CASE("errors map to categorized exit codes") {
  Scratch s("errors");
  auto cfg = s.config(Subcommand::Points, "out");
  std::ofstream(s.params, std::ios::trunc).close();
  std::string err;
  CHECK(run_quiet(cfg, nullptr, &err) == kExitValidation);
  CHECK(err.find("validation") != std::string::npos);

  std::ofstream(s.params, std::ios::trunc) << R"({"r": 0.05, "delta": 0.045, "a": 0.025, "sigma": 0.15, "F": 200})";
  CHECK(run_quiet(cfg, nullptr, &err) == kExitValidation);
  CHECK(err.find("s0") != std::string::npos);

  cfg.params_path = s.dir / "missing.json";
  CHECK(run_quiet(cfg) == kExitIo);

  Scratch ok("errors_model");
  auto table = ok.config(Subcommand::Table, "out");
  table.mode = Mode::PaperRounded;
  std::ofstream(ok.params, std::ios::trunc) << R"({"r": 0.05, "delta": 0.045, "a": 0.025, "sigma": 0.2, "F": 200, "s0": 9.6})";
  CHECK(run_quiet(table) == kExitValidation);
}

TEST_CASE("every subcommand writes its artifacts") {
  Scratch s("all");
  const std::pair<Subcommand, const char*> cases[] = {
      {Subcommand::Validate, "validation.csv"}, {Subcommand::Points, "points.csv"},
      {Subcommand::Table, "table.csv"},         {Subcommand::SnapshotGrid, "snapshots.csv"},
      {Subcommand::Herding, "herding.csv"},     {Subcommand::Temporal, "temporal.csv"},
      {Subcommand::Ledger, "ledger.csv"},       {Subcommand::Figure, "figure_fig9.csv"},
  };
  for (const auto& [cmd, file] : cases) {
    auto cfg = s.config(cmd, "out");
    cfg.grid_points = 51;
    CHECK(run_quiet(cfg) == kExitOk);
    const auto text = slurp(cfg.out_dir / file);
    CHECK_FALSE(text.empty());
    CHECK(text.find('\r') == std::string::npos);
  }
  auto sim = s.config(Subcommand::Simulate, "out");
  sim.sim.n_paths = 50;
  sim.sim.dt = 1e-2;
  sim.sim.horizon = 50;
  sim.sample_paths = 2;
  CHECK(run_quiet(sim) == kExitOk);
  CHECK(fs::exists(sim.out_dir / "passage.csv"));
  CHECK(fs::exists(sim.out_dir / "passage.json"));
  CHECK(fs::exists(sim.out_dir / "paths.csv"));
}

TEST_CASE("simulate output is byte-identical across runs and worker counts") {
  Scratch s("determinism");
  auto a = s.config(Subcommand::Simulate, "a");
  a.sim.n_paths = 300;
  a.sim.dt = 1e-2;
  a.sim.horizon = 100;
  a.sim.threads = 1;
  a.sample_paths = 1;
  auto b = a;
  b.out_dir = s.dir / "b";
  b.sim.threads = 4;
  REQUIRE(run_quiet(a) == kExitOk);
  REQUIRE(run_quiet(b) == kExitOk);
  for (const char* f : {"passage.csv", "passage.json", "paths.csv"})
    CHECK(slurp(a.out_dir / f) == slurp(b.out_dir / f));
}

TEST_CASE("report round-trips through JSON") {
  const auto doc = build_report(ModelParams::primer(), Mode::FullPrecision);
  const auto text = doc.dump(2);
  const auto back = nlohmann::ordered_json::parse(text);
  CHECK(back == doc);
  CHECK(back.dump(2) == text);
  CHECK(back["roots"]["beta_plus"].get<double>() == characteristic_roots(ModelParams::primer()).beta_plus);
  CHECK(back["points"]["s_star"].get<double>() == doc["points"]["s_star"].get<double>());
  for (const auto& d : back["diagnostics"]) {
    CHECK_FALSE(d["location"].get<std::string>().empty());
    CHECK(d["text"].get<std::string>().rfind("PAPER-NOTE [", 0) == 0);
  }
}

TEST_CASE("figure series") {
  const auto p = ModelParams::primer();
  const auto roots = characteristic_roots(p);

  const auto fig9 = emit_figure_series(Figure::Fig9, p, 1001);
  int crossings = 0;
  for (std::size_t i = 1; i < fig9.rows.size(); ++i) {
    const double y0 = fig9.rows[i - 1][1], y1 = fig9.rows[i][1];
    if ((y0 < 0.0) != (y1 < 0.0)) {
      ++crossings;
      const double b = fig9.rows[i][0];
      CHECK((std::abs(b - roots.beta_minus) < 0.01 || std::abs(b - roots.beta_plus) < 0.01));
    }
  }
  CHECK(crossings == 2);

  const auto fig3 = emit_figure_series(Figure::Fig3, p, 401);
  for (const auto& r : fig3.rows)
    if (r[0] <= p.F) CHECK(r[1] == 0.0);

  const auto fig11 = emit_figure_series(Figure::Fig11, p, 2001);
  CHECK(fig11.rows.back()[2] > 100.0 * fig11.rows.back()[1]);
  CHECK(fig11.rows.back()[2] > fig11.rows[fig11.rows.size() / 2][2] * 1.5);

  const auto fig7 = emit_figure_series(Figure::Fig7, p, 101);
  CHECK(std::isinf(fig7.rows.back()[2]));
  CHECK(std::isfinite(fig7.rows.back()[1]));

  for (auto fig : {Figure::Fig4, Figure::Fig5, Figure::Fig10, Figure::Fig12}) {
    const auto series = emit_figure_series(fig, p, 11);
    CHECK(series.rows.size() == 11);
    for (const auto& r : series.rows) CHECK(r.size() == series.columns.size());
  }
  CHECK(parse_figure("fig12") == Figure::Fig12);
  CHECK_THROWS_AS(parse_figure("fig13"), ModelError);
}

TEST_CASE("level names resolve to cycle points") {
  const auto pts = cycle_points(ModelParams::primer());
  const auto levels = resolve_levels({"s_hat", "s_star", "s_tilde", "s_m", "12.5"}, pts);
  CHECK(levels == std::vector<double>{pts.s_hat, pts.s_star, pts.s_tilde, pts.s_m_market, 12.5});
  CHECK_THROWS_AS(resolve_levels({"nowhere"}, pts), ModelError);
  CHECK_THROWS_AS(resolve_levels({"-3"}, pts), ModelError);
}
