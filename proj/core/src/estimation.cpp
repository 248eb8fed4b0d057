#include "bsarma/estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "bsarma/special_functions.hpp"

namespace bsarma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ParamVector fallback_start(const ModelOrder& order,
                           const std::vector<double>& gy) {
  ParamVector start;
  double mean = 0.0;
  for (double v : gy) mean += v;
  start.beta = mean / static_cast<double>(gy.size());
  start.ar.assign(order.p, 0.0);
  start.ma.assign(order.q, 0.0);
  start.sar.assign(order.P, 0.0);
  start.sma.assign(order.Q, 0.0);
  start.precision = 1.0;
  return start;
}

}  // namespace

ParamVector starting_values(const ModelOrder& order, const SeriesData& series,
                            const Link& link) {
  order.validate();
  series.validate();
  const int n = series.size();
  const int m = burn_in(order);
  if (n <= m + order.p + order.P + 1)
    throw std::invalid_argument("starting_values: series too short for the lag design");

  std::vector<double> gy(n);
  for (int t = 0; t < n; ++t) gy[t] = link.g(series.values[t]);

  const int max_lag = std::max(order.p, order.P * order.S);
  const int rows = n - max_lag;
  const int ncols = 1 + order.p + order.P;

  Eigen::MatrixXd design(rows, ncols);
  Eigen::VectorXd response(rows);
  for (int r = 0; r < rows; ++r) {
    const int t = max_lag + r;
    response[r] = gy[t];
    design(r, 0) = 1.0;
    for (int i = 1; i <= order.p; ++i) design(r, i) = gy[t - i];
    for (int I = 1; I <= order.P; ++I)
      design(r, order.p + I) = gy[t - I * order.S];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < ncols) return fallback_start(order, gy);

  const Eigen::VectorXd coef = qr.solve(response);

  ParamVector start;
  start.beta = coef[0];
  start.ar.assign(coef.data() + 1, coef.data() + 1 + order.p);
  start.sar.assign(coef.data() + 1 + order.p, coef.data() + ncols);
  start.ma.assign(order.q, 0.0);
  start.sma.assign(order.Q, 0.0);

  // Moment match for the precision: Var(y) ~ mu(1-mu)/(1+phi).
  const Eigen::VectorXd fitted_eta = design * coef;
  double mean_v = 0.0, mean_e = 0.0;
  Eigen::VectorXd resid(rows);
  for (int r = 0; r < rows; ++r) {
    const double mu = link.g_inv(fitted_eta[r]);
    mean_v += mu * (1.0 - mu);
    resid[r] = series.values[max_lag + r] - mu;
    mean_e += resid[r];
  }
  mean_v /= rows;
  mean_e /= rows;
  double sigma2 = 0.0;
  for (int r = 0; r < rows; ++r) sigma2 += (resid[r] - mean_e) * (resid[r] - mean_e);
  sigma2 /= std::max(rows - 1, 1);

  double phi0;
  if (sigma2 > 0.0 && std::isfinite(sigma2))
    phi0 = std::max(mean_v / sigma2 - 1.0, 0.1);
  else
    phi0 = 1e6;              // noise-free input; keep the start finite
  start.precision = std::min(phi0, 1e6);
  return start;
}

FittedModel fit(const ModelOrder& order, const SeriesData& series,
                const FitOptions& options, const Link& link) {
  order.validate();
  series.validate();
  const int n = series.size();
  const int m = burn_in(order);
  const int k = order.dimension();
  if (n <= m + k)
    throw std::invalid_argument("fit: series length must exceed burn-in + parameter count");

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    if (!(x[k - 1] > 0.0)) return kNegInf;  // precision must stay positive
    return conditional_loglik(order, unflatten(order, x), series, link);
  };
  auto objective_and_grad = [&](const Eigen::VectorXd& x) {
    return loglik_and_score(order, unflatten(order, x), series, link);
  };

  Eigen::VectorXd x = flatten(starting_values(order, series, link));
  double value = objective(x);
  if (!std::isfinite(value)) {
    std::vector<double> gy(n);
    for (int t = 0; t < n; ++t) gy[t] = link.g(series.values[t]);
    x = flatten(fallback_start(order, gy));
    value = objective(x);
  }

  Eigen::VectorXd grad(k);
  if (std::isfinite(value)) grad = objective_and_grad(x).second;
  else grad.setZero();

  const double h0_scale = 1.0 / static_cast<double>(n - m);
  Eigen::MatrixXd hinv = h0_scale * Eigen::MatrixXd::Identity(k, k);

  const double grad_target = options.gradient_tolerance * (n - m);
  constexpr double kArmijo = 1e-4;

  bool converged = std::isfinite(value) &&
                   grad.lpNorm<Eigen::Infinity>() <= grad_target;
  int iterations = 0;
  bool reset_used = false;

  while (!converged && iterations < options.max_iterations &&
         std::isfinite(value)) {
    ++iterations;

    Eigen::VectorXd direction = hinv * grad;  // ascent direction
    double slope = direction.dot(grad);
    if (!(slope > 0.0)) {
      hinv = h0_scale * Eigen::MatrixXd::Identity(k, k);
      direction = hinv * grad;
      slope = direction.dot(grad);
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double value_new = value;
    for (int halvings = 0; halvings < 60; ++halvings) {
      x_new = x + step * direction;
      value_new = objective(x_new);
      if (std::isfinite(value_new) &&
          value_new >= value + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    if (!accepted) {
      if (!reset_used) {  // one retry from a fresh curvature model
        reset_used = true;
        hinv = h0_scale * Eigen::MatrixXd::Identity(k, k);
        continue;
      }
      break;
    }

    const auto [value_next, grad_next] = objective_and_grad(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = grad - grad_next;  // minimization convention
    const double ys = yv.dot(s);
    if (ys > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd left =
          Eigen::MatrixXd::Identity(k, k) - rho * s * yv.transpose();
      hinv = left * hinv * left.transpose() + rho * s * s.transpose();
    }

    const double step_rel = s.norm() / std::max(1.0, x.norm());
    x = x_new;
    value = value_next;
    grad = grad_next;

    if (grad.lpNorm<Eigen::Infinity>() <= grad_target ||
        step_rel <= options.step_tolerance) {
      converged = true;
    }
  }

  FittedModel result;
  result.order = order;
  result.link = link;
  result.estimates = unflatten(order, x);
  result.loglik = value;
  result.converged = converged;
  result.iterations = iterations;
  result.series = series;
  result.path = predictor_path(order, result.estimates, series, link);

  const Eigen::MatrixXd info = fisher_information(order, result.estimates, series, link);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
  if (info.allFinite() && lu.isInvertible()) {
    result.covariance = lu.inverse();
    result.covariance_ok = result.covariance.allFinite() &&
                           (result.covariance.diagonal().array() >= 0.0).all();
  } else {
    result.covariance = Eigen::MatrixXd::Constant(
        k, k, std::numeric_limits<double>::quiet_NaN());
    result.covariance_ok = false;
  }
  return result;
}

std::pair<double, double> confidence_interval(const FittedModel& fit, int index,
                                              double level) {
  if (!fit.covariance_ok)
    throw std::runtime_error("confidence_interval: covariance unavailable");
  if (index < 0 || index >= fit.k())
    throw std::invalid_argument("confidence_interval: parameter index out of range");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence_interval: level must lie in (0,1)");
  const double estimate = flatten(fit.estimates)[index];
  const double se = std::sqrt(fit.covariance(index, index));
  const double z = normal_quantile(0.5 * (1.0 + level));
  return {estimate - z * se, estimate + z * se};
}

WaldZ wald_z(const FittedModel& fit, int index, double null_value) {
  if (!fit.covariance_ok)
    throw std::runtime_error("wald_z: covariance unavailable");
  if (index < 0 || index >= fit.k())
    throw std::invalid_argument("wald_z: parameter index out of range");
  const double estimate = flatten(fit.estimates)[index];
  const double se = std::sqrt(fit.covariance(index, index));
  const double z = (estimate - null_value) / se;
  const double p = std::erfc(std::abs(z) / std::sqrt(2.0));
  return {z, p};
}

SeasonalityTest seasonality_test(const FittedModel& fit) {
  const ModelOrder& order = fit.order;
  const int df = order.P + order.Q;
  if (df < 1)
    throw std::invalid_argument("seasonality_test: model has no seasonal coefficients");
  if (!fit.covariance_ok)
    throw std::runtime_error("seasonality_test: covariance unavailable");

  // Seasonal coefficient positions in the canonical order.
  std::vector<int> idx;
  for (int I = 0; I < order.P; ++I) idx.push_back(1 + order.p + I);
  for (int J = 0; J < order.Q; ++J)
    idx.push_back(1 + order.p + order.P + order.q + J);

  const Eigen::VectorXd all = flatten(fit.estimates);
  Eigen::VectorXd seasonal(df);
  Eigen::MatrixXd block(df, df);
  for (int a = 0; a < df; ++a) {
    seasonal[a] = all[idx[a]];
    for (int b = 0; b < df; ++b) block(a, b) = fit.covariance(idx[a], idx[b]);
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
  if (!lu.isInvertible())
    throw std::runtime_error("seasonality_test: singular covariance block");
  const double w = seasonal.dot(lu.solve(seasonal));
  return {w, df, chi_squared_upper_tail(std::max(w, 0.0), df)};
}

}  // namespace bsarma
