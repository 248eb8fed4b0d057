#include "bsarma/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bsarma/special_functions.hpp"

namespace bsarma {

ResidualSeries residuals(const FittedModel& fit, ResidualKind kind) {
  const int n = fit.n();
  const int m = fit.m();
  const double phi = fit.estimates.precision;
  const Link& link = fit.link;

  ResidualSeries out;
  out.kind = kind;
  out.values.resize(n - m);
  for (int t = m; t < n; ++t) {
    const double y = fit.series.values[t];
    const double mu = fit.path.mu[t];
    double value = 0.0;
    switch (kind) {
      case ResidualKind::standardized: {
        const double var = mu * (1.0 - mu) / (1.0 + phi);
        value = (y - mu) / std::sqrt(var);
        break;
      }
      case ResidualKind::predictor_scale: {
        const double gp = link.g_deriv(mu);
        const double var = gp * gp * mu * (1.0 - mu) / (1.0 + phi);
        value = (link.g(y) - fit.path.eta[t]) / std::sqrt(var);
        break;
      }
      case ResidualKind::weighted: {
        const double ystar = std::log(y) - std::log1p(-y);
        const double mustar =
            digamma(mu * phi) - digamma((1.0 - mu) * phi);
        const double var = trigamma(mu * phi) + trigamma((1.0 - mu) * phi);
        value = (ystar - mustar) / std::sqrt(var);
        break;
      }
    }
    out.values[t - m] = value;
  }
  return out;
}

std::vector<double> acf(std::span<const double> values, int max_lag,
                        AcfDenominator denom) {
  const int n = static_cast<int>(values.size());
  if (max_lag < 0) throw std::invalid_argument("acf: max_lag must be nonnegative");
  if (n < max_lag + 2)
    throw std::invalid_argument("acf: series too short for the requested lags");

  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n;
  std::vector<double> dev(n);
  for (int t = 0; t < n; ++t) dev[t] = values[t] - mean;

  const double full_ss =
      std::inner_product(dev.begin(), dev.end(), dev.begin(), 0.0);
  const double degenerate = n * std::pow(1e-12 * (std::abs(mean) + 1.0), 2);
  if (full_ss <= degenerate)
    throw std::domain_error("acf: correlation undefined for constant input");

  std::vector<double> rho(max_lag + 1);
  for (int i = 0; i <= max_lag; ++i) {
    double num = 0.0;
    for (int t = 0; t + i < n; ++t) num += dev[t] * dev[t + i];
    double den = full_ss;
    if (denom == AcfDenominator::truncated) {
      den = 0.0;
      for (int t = 0; t + i < n; ++t) den += dev[t] * dev[t];
    }
    rho[i] = num / den;
  }
  return rho;
}

std::vector<double> pacf(std::span<const double> values, int max_lag,
                         AcfDenominator denom) {
  const std::vector<double> rho = acf(values, max_lag, denom);

  // Durbin-Levinson on the sample autocorrelations.
  std::vector<double> partial(max_lag + 1, 1.0);
  std::vector<double> prev(max_lag + 1, 0.0), cur(max_lag + 1, 0.0);
  for (int k = 1; k <= max_lag; ++k) {
    double num = rho[k];
    double den = 1.0;
    for (int j = 1; j < k; ++j) {
      num -= prev[j] * rho[k - j];
      den -= prev[j] * rho[j];
    }
    const double phi_kk = num / den;
    cur[k] = phi_kk;
    for (int j = 1; j < k; ++j) cur[j] = prev[j] - phi_kk * prev[k - j];
    partial[k] = phi_kk;
    std::swap(prev, cur);
  }
  return partial;
}

int default_portmanteau_lags(const ModelOrder& order) {
  return std::max(10, 2 * order.S);
}

namespace {

WhiteNoiseResult portmanteau(const std::vector<double>& correlations, int n,
                             const ModelOrder& order, int b) {
  const int df = b - order.p - order.q - order.P - order.Q;
  if (df < 1)
    throw std::invalid_argument(
        "portmanteau test: b - p - q - P - Q must be at least 1");
  double stat = 0.0;
  for (int i = 1; i <= b; ++i)
    stat += correlations[i] * correlations[i] / (n - i);
  stat *= static_cast<double>(n) * (n + 2);
  return {stat, b, df, chi_squared_upper_tail(std::max(stat, 0.0), df)};
}

}  // namespace

WhiteNoiseResult ljung_box(const ResidualSeries& resid, const ModelOrder& order,
                           int b) {
  return portmanteau(acf(resid.values, b), resid.size(), order, b);
}

WhiteNoiseResult monti(const ResidualSeries& resid, const ModelOrder& order,
                       int b) {
  return portmanteau(pacf(resid.values, b), resid.size(), order, b);
}

Deviance deviance(const FittedModel& fit) {
  const int n = fit.n();
  const int m = fit.m();
  const double phi = fit.estimates.precision;
  double saturated = 0.0;
  for (int t = m; t < n; ++t)
    saturated += beta_log_density(fit.series.values[t],
                                  {fit.series.values[t], phi});
  const double d = 2.0 * (saturated - fit.loglik);
  return {d, d / (n - m - fit.k())};
}

InformationCriteria information_criteria(const FittedModel& fit) {
  const double n = fit.n();
  const double m = fit.m();
  const double k = fit.k();
  const double rescaled = fit.loglik * n / (n - m);
  return {-2.0 * rescaled + 2.0 * k,
          -2.0 * rescaled + std::log(n) * k,
          -2.0 * rescaled + std::log(std::log(n)) * k};
}

}  // namespace bsarma
