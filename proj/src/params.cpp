#include "credit_cycle/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace credit_cycle {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DegenerateEquation: return "degenerate-equation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NoFreeBoundary: return "no-free-boundary";
    case ErrorKind::NoBifurcation: return "no-bifurcation";
    case ErrorKind::PostCollapse: return "post-collapse";
    case ErrorKind::Singularity: return "singularity-domain";
    case ErrorKind::SchemeFailure: return "scheme-failure";
    case ErrorKind::Io: return "io";
    case ErrorKind::Validation: return "validation";
  }
  return "unknown";
}

std::string Diagnostic::render() const {
  return fmt::format("PAPER-NOTE [{}]: {}", location, message);
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void require_valid(const ModelParams& p, bool allow_zero_sigma) {
  const std::pair<const char*, double> positive[] = {
      {"r", p.r}, {"delta", p.delta}, {"sigma", p.sigma}, {"F", p.F}, {"s0", p.s0}};
  for (const auto& [name, value] : positive) {
    if (!std::isfinite(value))
      throw ModelError(ErrorKind::InvalidParameter, fmt::format("{} is not finite", name));
    if (allow_zero_sigma && value == 0.0 && std::string_view(name) == "sigma") continue;
    if (value <= 0.0)
      throw ModelError(ErrorKind::InvalidParameter,
                       fmt::format("{} must be positive, got {}", name, value));
  }
  if (!std::isfinite(p.a))
    throw ModelError(ErrorKind::InvalidParameter, "a is not finite");
}

double characteristic_polynomial(const ModelParams& p, double beta) {
  return 0.5 * p.sigma * p.sigma * beta * (beta - 1.0) + (p.r - p.delta) * beta - p.r;
}

CharacteristicRoots characteristic_roots(const ModelParams& p) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw ModelError(ErrorKind::DegenerateEquation,
                     "characteristic equation is not quadratic for sigma = 0");
  if (!(p.r >= 0.0) || !std::isfinite(p.r) || !std::isfinite(p.delta))
    throw ModelError(ErrorKind::InvalidParameter, "characteristic equation needs r >= 0");

  const double qa = 0.5 * p.sigma * p.sigma;
  const double qb = (p.r - p.delta) - qa;
  const double qc = -p.r;
  // qa > 0 and qc <= 0, so the discriminant is at least qb^2.
  const double disc = qb * qb - 4.0 * qa * qc;
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb == 0.0 ? 1.0 : qb));
  double x1 = q / qa;
  double x2 = (q != 0.0) ? qc / q : 0.0;
  if (x1 > x2) std::swap(x1, x2);
  return {x1, x2};
}

double implied_risk_price(const ModelParams& p) {
  if (p.sigma == 0.0)
    throw ModelError(ErrorKind::Domain, "risk price undefined for sigma = 0");
  return (p.mu() - p.r) / p.sigma;
}

bool is_primer_economy(const ModelParams& p) {
  const ModelParams q = ModelParams::primer();
  auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
  return same(p.r, q.r) && same(p.delta, q.delta) && same(p.a, q.a) && same(p.sigma, q.sigma);
}

ValidationReport validate_params(const ModelParams& p) {
  require_valid(p);
  ValidationReport rep;
  constexpr double tol = 1e-12;

  const double lambda = implied_risk_price(p);
  const double mu = p.mu();
  const auto roots = characteristic_roots(p);

  rep.checks.push_back({"positivity", true, std::min({p.r, p.delta, p.sigma, p.F, p.s0}), 0.0, 0.0});
  rep.checks.push_back({"risk_adjusted_rate mu = delta + a", true, mu, p.delta + p.a, tol});
  {
    const double rhs = p.r + lambda * p.sigma;
    rep.checks.push_back({"capm_decomposition mu = r + lambda*sigma",
                          std::abs(mu - rhs) <= tol * std::max(1.0, std::abs(mu)), mu, rhs, tol});
  }
  {
    const double lhs = p.r - p.delta;
    const double rhs = p.a - lambda * p.sigma;
    rep.checks.push_back({"rate_difference r - delta = a - lambda*sigma",
                          std::abs(lhs - rhs) <= tol, lhs, rhs, tol});
  }
  {
    const double vm = roots.beta_plus * (1.0 - p.delta);
    rep.checks.push_back({"von_mises beta*(1-delta) > 1", vm > 1.0, vm, 1.0, 0.0});
  }
  rep.checks.push_back({"log_drift a - sigma^2/2 > 0", p.log_drift() > 0.0, p.log_drift(), 0.0, 0.0});

  if (is_primer_economy(p)) {
    const double printed_rhs = p.r + primer_printed::lambda * p.sigma;
    rep.checks.push_back({"printed_lambda satisfies mu = r + lambda*sigma",
                          std::abs(mu - printed_rhs) <= tol, mu, printed_rhs, tol});
    rep.diagnostics.push_back(
        {"Numerical primer, unit risk price",
         fmt::format("printed lambda = {} with mu = {}, r = {}, sigma = {} gives r + lambda*sigma = "
                     "{:.4f} != mu; the rate identities imply lambda = {:.4f}",
                     primer_printed::lambda, primer_printed::mu, p.r, p.sigma, printed_rhs, lambda)});

    const double residual = characteristic_polynomial(p, primer_printed::beta_minus);
    rep.checks.push_back({"printed_beta_minus is a root", std::abs(residual) <= tol, residual, 0.0, tol});
    rep.diagnostics.push_back(
        {"Numerical primer, characteristic roots",
         fmt::format("printed beta1 = {} leaves residual {:.6f} in the characteristic quadratic; "
                     "the negative root is {:.6f}",
                     primer_printed::beta_minus, residual, roots.beta_minus)});

    rep.checks.push_back({"printed_beta_plus matches root",
                          std::abs(roots.beta_plus - primer_printed::beta_plus) <= 1e-3,
                          roots.beta_plus, primer_printed::beta_plus, 1e-3});
  }
  return rep;
}

ModelParams parse_params(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(ErrorKind::Validation, fmt::format("params file is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object())
    throw ModelError(ErrorKind::Validation, "params file must hold a flat JSON object");

  static const std::set<std::string> known = {"r", "delta", "a", "sigma", "F", "s0"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key))
      throw ModelError(ErrorKind::Validation, fmt::format("unknown params key '{}'", key));
    if (!value.is_number())
      throw ModelError(ErrorKind::Validation, fmt::format("params key '{}' must be a number", key));
  }
  for (const auto& key : known)
    if (!doc.contains(key))
      throw ModelError(ErrorKind::Validation, fmt::format("params key '{}' is missing", key));

  ModelParams p;
  p.r = doc["r"].get<double>();
  p.delta = doc["delta"].get<double>();
  p.a = doc["a"].get<double>();
  p.sigma = doc["sigma"].get<double>();
  p.F = doc["F"].get<double>();
  p.s0 = doc["s0"].get<double>();
  try {
    require_valid(p);
  } catch (const ModelError& e) {
    throw ModelError(ErrorKind::Validation, e.what());
  }
  return p;
}

ModelParams load_params_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ModelError(ErrorKind::Io, fmt::format("cannot read params file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

}  // namespace credit_cycle
