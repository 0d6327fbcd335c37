#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/debt_valuation.hpp"
#include "credit_cycle/stochastic_sim.hpp"

namespace credit_cycle {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "CREDIT_CYCLE_OUT";

enum class Subcommand { Validate, Points, Table, SnapshotGrid, Simulate, Herding, Temporal, Ledger, Figure };

std::string_view to_string(Subcommand cmd);
Subcommand parse_subcommand(std::string_view text);

enum class Figure { Fig3, Fig4, Fig5, Fig7, Fig9, Fig10, Fig11, Fig12 };

std::string_view to_string(Figure fig);
Figure parse_figure(std::string_view text);

struct RunConfig {
  std::filesystem::path params_path;
  Subcommand subcommand = Subcommand::Table;
  Mode mode = Mode::FullPrecision;
  std::filesystem::path out_dir = ".";
  SimConfig sim;
  std::vector<std::string> levels = {"s_hat", "s_star", "s_tilde"};  // names or numbers
  std::uint64_t sample_paths = 0;  // raw paths written by `simulate`
  std::size_t grid_points = 1001;
  Figure figure = Figure::Fig9;
};

/// Exit codes returned by run().
enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitValidation = 4,
  kExitModel = 5,
};

int exit_status_for(ErrorKind kind);

/// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_number(double value);

/// Writes header and rows with LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Series emit_figure_series(Figure which, const ModelParams& params, std::size_t points = 401);

/// Table rows as CSV text. PaperRounded prints the printed precision
/// (one decimal for amounts, three for probabilities); FullPrecision prints
/// round-trip decimals.
std::string table_csv(const std::vector<TableRow>& rows, Mode mode);

std::string snapshot_grid_csv(const ModelParams& params, std::size_t points, double s_max);

/// Machine-readable summary: params, roots, points, table, probabilities,
/// natural-cycle check, diagnostics. Keys keep insertion order.
nlohmann::ordered_json build_report(const ModelParams& params, Mode mode);

/// Resolves level names (s_hat, s_star, s_tilde, s_m) or numeric strings.
std::vector<double> resolve_levels(const std::vector<std::string>& names, const CyclePoints& points);

/// Executes one subcommand, writing its artifacts under config.out_dir and a
/// human-readable summary to `log`. Errors are reported on `err`.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace credit_cycle
