#pragma once

#include <limits>

#include "credit_cycle/cycle_geometry.hpp"
#include "credit_cycle/params.hpp"

namespace credit_cycle {

/// Switch and exponent of the herding singularity h (s* - s)^(-gamma).
struct HerdingParams {
  bool herding = true;
  double gamma = primer_printed::gamma;
  double s_star = 0.0;
};

/// Value returned by the singular term once (s* - s) is within 1e-12 s* of
/// the singularity, or whenever the term would overflow.
inline constexpr double kSingularityCap = std::numeric_limits<double>::max();

/// h (s* - s)^(-gamma), evaluated in log space next to s*.
double herding_singular_term(const HerdingParams& herding, double s);
double herding_singular_derivative(const HerdingParams& herding, double s);

/// K s^beta + h (s* - s)^(-gamma).
double herding_new_debt(double K, double beta, const HerdingParams& herding, double s);

/// d/ds of the singular term divided by (s* - s)^(-gamma-1). Equals gamma.
double singular_derivative_check(const HerdingParams& herding, double s);

struct RegimeQuantities {
  double equity = 0.0;
  double leverage = 0.0;  // +infinity once equity is exhausted
  double default_probability = 0.0;
};

struct HerdingRegime {
  double s = 0.0;
  RegimeQuantities no_herding;  // investors track market debt: E = A - D
  RegimeQuantities herding;     // investors track expected debt: E = A - B
};

/// Equity, leverage and default probability on [0, s_star] with and without
/// herding. At s_star the herding branch gives (0, infinity, 1).
HerdingRegime herding_regime_quantities(const ModelParams& params, const CyclePoints& points,
                                        double s);

}  // namespace credit_cycle
