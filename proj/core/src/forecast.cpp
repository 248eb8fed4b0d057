#include "bsarma/forecast.hpp"

#include <cmath>
#include <stdexcept>

namespace bsarma {

std::vector<double> fitted_values(const FittedModel& fit) {
  return {fit.path.mu.begin() + fit.m(), fit.path.mu.end()};
}

ForecastResult forecast(const FittedModel& fit, int horizon) {
  if (horizon < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
  const int n = fit.n();
  const ExpandedPredictor ex = expand_polynomials(fit.order, fit.estimates);
  const Link& link = fit.link;

  // Observed history carries g(y_t) and the in-sample errors; beyond the
  // sample, g(y) is replaced by the predictor and errors by zero.
  std::vector<double> gval(n + horizon), rval(n + horizon, 0.0);
  for (int t = 0; t < n; ++t) {
    gval[t] = link.g(fit.series.values[t]);
    rval[t] = fit.path.err[t];
  }

  ForecastResult out;
  out.means.reserve(horizon);
  for (int t = n; t < n + horizon; ++t) {
    double eta = fit.estimates.beta;
    for (const LagTerm& term : ex.g_lags) eta += term.coef * gval[t - term.lag];
    for (const LagTerm& term : ex.r_lags) eta += term.coef * rval[t - term.lag];
    gval[t] = eta;  // g(mu-hat) for later lags
    rval[t] = 0.0;
    out.means.push_back(link.g_inv(eta));
  }
  return out;
}

Accuracy accuracy(std::span<const double> forecasts,
                  std::span<const double> actuals) {
  if (forecasts.size() != actuals.size() || forecasts.empty())
    throw std::invalid_argument("accuracy: inputs must be nonempty and equal length");
  double mse = 0.0, mape = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    const double a = actuals[i];
    if (!(a > 0.0 && a < 1.0))
      throw std::domain_error("accuracy: actuals must lie strictly inside (0,1)");
    const double e = forecasts[i] - a;
    mse += e * e;
    mape += std::abs(e) / a;
  }
  const double count = static_cast<double>(forecasts.size());
  return {mse / count, mape / count};
}

}  // namespace bsarma
