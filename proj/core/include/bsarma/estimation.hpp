#pragma once

#include <utility>

#include <Eigen/Core>

#include "bsarma/likelihood.hpp"
#include "bsarma/model.hpp"

namespace bsarma {

struct FitOptions {
  int max_iterations = 500;
  // Converged when max|score| <= gradient_tolerance * (n - m) ...
  double gradient_tolerance = 1e-8;
  // ... or when the relative step falls below step_tolerance.
  double step_tolerance = 1e-10;
};

struct FittedModel {
  ModelOrder order;
  Link link;
  ParamVector estimates;
  Eigen::MatrixXd covariance;  // inverse Fisher information at the estimates
  bool covariance_ok = false;  // false when the information was singular
  double loglik = 0.0;
  PredictorPath path;
  bool converged = false;
  int iterations = 0;
  SeriesData series;

  int n() const { return series.size(); }
  int m() const { return burn_in(order); }
  int k() const { return order.dimension(); }
};

// OLS of g(y_t) on lagged g(y) at lags 1..p and S..PS with intercept; moving
// average coefficients start at zero; precision from the moment match
// phi0 = max(mean[mu(1-mu)]/sigma^2 - 1, 0.1). Falls back to
// beta = mean g(y), phi0 = 1 on a rank-deficient design.
ParamVector starting_values(const ModelOrder& order, const SeriesData& series,
                            const Link& link = logit_link());

// Conditional maximum likelihood via BFGS with the analytic score. Points
// with precision <= 0 are rejected by the line search. Non-convergence is
// flagged, not thrown; a singular information matrix leaves covariance_ok
// false with the estimates intact.
FittedModel fit(const ModelOrder& order, const SeriesData& series,
                const FitOptions& options = {},
                const Link& link = logit_link());

// Asymptotic-normal interval for the parameter at `index` (canonical order).
std::pair<double, double> confidence_interval(const FittedModel& fit,
                                              int index, double level);

struct WaldZ {
  double z;
  double p_value;  // two-sided
};

// Signed square root of the Wald statistic for H0: gamma_r = null_value.
WaldZ wald_z(const FittedModel& fit, int index, double null_value);

struct SeasonalityTest {
  double statistic;  // W
  int df;            // P + Q
  double p_value;
};

// Wald test of H0: all seasonal coefficients zero, chi-squared with P + Q
// degrees of freedom. Requires P + Q >= 1.
SeasonalityTest seasonality_test(const FittedModel& fit);

}  // namespace bsarma
