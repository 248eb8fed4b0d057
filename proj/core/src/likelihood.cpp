#include "bsarma/likelihood.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bsarma/special_functions.hpp"

namespace bsarma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double loglik_from_path(const PredictorPath& path, const SeriesData& series,
                        double precision, int m) {
  const int n = series.size();
  const double lg_phi = log_gamma(precision);
  double sum = 0.0;
  for (int t = m; t < n; ++t) {
    const double mu = path.mu[t];
    if (!std::isfinite(path.eta[t]) || !std::isfinite(mu)) return kNegInf;
    const double y = series.values[t];
    const double a = mu * precision;
    const double b = (1.0 - mu) * precision;
    sum += lg_phi - log_gamma(a) - log_gamma(b) + (a - 1.0) * std::log(y) +
           (b - 1.0) * std::log1p(-y);
  }
  return std::isfinite(sum) ? sum : kNegInf;
}

EtaJacobian jacobian_from_path(const ModelOrder& order,
                               const ParamVector& params,
                               const std::vector<double>& gy,
                               const PredictorPath& path) {
  const ExpandedPredictor ex = expand_polynomials(order, params);
  const int n = static_cast<int>(gy.size());
  const int m = burn_in(order);
  const int S = order.S;

  EtaJacobian jac;
  jac.p = order.p;
  jac.q = order.q;
  jac.P = order.P;
  jac.Q = order.Q;
  jac.cols.resize(n - m, order.dimension() - 1);

  // Derivatives are zero for t <= m; each column then follows
  //   D_t = lead_t + sum_j theta_j D_{t-j} + sum_J Theta_J D_{t-JS}
  //                - sum_{j,J} theta_j Theta_J D_{t-j-JS},
  // which is lead_t minus the expanded MA polynomial applied to D.
  std::vector<double> deriv(n);
  auto fill_column = [&](int col, auto&& lead) {
    std::fill(deriv.begin(), deriv.end(), 0.0);
    for (int t = m; t < n; ++t) {
      double acc = lead(t);
      for (const LagTerm& term : ex.r_lags) acc -= term.coef * deriv[t - term.lag];
      deriv[t] = acc;
    }
    for (int t = m; t < n; ++t) jac.cols(t - m, col) = deriv[t];
  };

  int col = 0;
  fill_column(col++, [](int) { return 1.0; });

  for (int i = 1; i <= order.p; ++i) {
    fill_column(col++, [&, i](int t) {
      double v = gy[t - i];
      for (int I = 1; I <= order.P; ++I)
        v -= params.sar[I - 1] * gy[t - i - I * S];
      return v;
    });
  }
  for (int I = 1; I <= order.P; ++I) {
    fill_column(col++, [&, I](int t) {
      double v = gy[t - I * S];
      for (int i = 1; i <= order.p; ++i)
        v -= params.ar[i - 1] * gy[t - i - I * S];
      return v;
    });
  }
  for (int j = 1; j <= order.q; ++j) {
    fill_column(col++, [&, j](int t) {
      double v = path.err[t - j];
      for (int J = 1; J <= order.Q; ++J)
        v -= params.sma[J - 1] * path.err[t - j - J * S];
      return -v;
    });
  }
  for (int J = 1; J <= order.Q; ++J) {
    fill_column(col++, [&, J](int t) {
      double v = path.err[t - J * S];
      for (int j = 1; j <= order.q; ++j)
        v -= params.ma[j - 1] * path.err[t - j - J * S];
      return -v;
    });
  }
  return jac;
}

std::vector<double> link_transformed(const SeriesData& series, const Link& link) {
  std::vector<double> gy(series.values.size());
  for (std::size_t t = 0; t < gy.size(); ++t) gy[t] = link.g(series.values[t]);
  return gy;
}

}  // namespace

double conditional_loglik(const ModelOrder& order, const ParamVector& params,
                          const SeriesData& series, const Link& link) {
  const PredictorPath path = predictor_path(order, params, series, link);
  return loglik_from_path(path, series, params.precision, burn_in(order));
}

EtaJacobian eta_jacobian(const ModelOrder& order, const ParamVector& params,
                         const SeriesData& series, const Link& link) {
  const PredictorPath path = predictor_path(order, params, series, link);
  return jacobian_from_path(order, params, link_transformed(series, link), path);
}

Eigen::VectorXd score(const ModelOrder& order, const ParamVector& params,
                      const SeriesData& series, const Link& link) {
  return loglik_and_score(order, params, series, link).second;
}

std::pair<double, Eigen::VectorXd> loglik_and_score(
    const ModelOrder& order, const ParamVector& params,
    const SeriesData& series, const Link& link) {
  const int m = burn_in(order);
  const int n = series.size();
  const int k = order.dimension();
  const double phi = params.precision;

  const PredictorPath path = predictor_path(order, params, series, link);
  const EtaJacobian jac =
      jacobian_from_path(order, params, link_transformed(series, link), path);

  Eigen::VectorXd resid_t(n - m);  // (y*_t - mu*_t) / g'(mu_t)
  double u_precision = 0.0;
  const double psi_phi = digamma(phi);
  for (int t = m; t < n; ++t) {
    const double y = series.values[t];
    const double mu = path.mu[t];
    const double ystar = std::log(y) - std::log1p(-y);
    const double mustar = digamma(mu * phi) - digamma((1.0 - mu) * phi);
    resid_t[t - m] = (ystar - mustar) / link.g_deriv(mu);
    u_precision +=
        mu * (ystar - mustar) + std::log1p(-y) - digamma((1.0 - mu) * phi) + psi_phi;
  }

  Eigen::VectorXd u(k);
  u.head(k - 1) = phi * (jac.cols.transpose() * resid_t);
  u[k - 1] = u_precision;
  return {loglik_from_path(path, series, phi, m), u};
}

Eigen::MatrixXd fisher_information(const ModelOrder& order,
                                   const ParamVector& params,
                                   const SeriesData& series, const Link& link) {
  const int m = burn_in(order);
  const int n = series.size();
  const int k = order.dimension();
  const double phi = params.precision;

  const PredictorPath path = predictor_path(order, params, series, link);
  const EtaJacobian jac =
      jacobian_from_path(order, params, link_transformed(series, link), path);

  Eigen::VectorXd wt2(n - m);  // w_t / g'(mu_t)^2
  Eigen::VectorXd ct(n - m);   // c_t / g'(mu_t)
  double trace_d = 0.0;
  const double tri_phi = trigamma(phi);
  for (int t = m; t < n; ++t) {
    const double mu = path.mu[t];
    const double tri_a = trigamma(mu * phi);
    const double tri_b = trigamma((1.0 - mu) * phi);
    const double gp = link.g_deriv(mu);
    wt2[t - m] = phi * phi * (tri_a + tri_b) / (gp * gp);
    ct[t - m] = phi * (tri_a * mu - tri_b * (1.0 - mu)) / gp;
    trace_d += tri_a * mu * mu + tri_b * (1.0 - mu) * (1.0 - mu) - tri_phi;
  }

  Eigen::MatrixXd info(k, k);
  info.topLeftCorner(k - 1, k - 1) =
      jac.cols.transpose() * wt2.asDiagonal() * jac.cols;
  info.block(0, k - 1, k - 1, 1) = jac.cols.transpose() * ct;
  info(k - 1, k - 1) = trace_d;
  // Mirror the lambda/precision column so symmetry holds to exact equality.
  info.block(k - 1, 0, 1, k - 1) = info.block(0, k - 1, k - 1, 1).transpose();
  for (int i = 0; i < k - 1; ++i)
    for (int j = i + 1; j < k - 1; ++j) info(j, i) = info(i, j);
  return info;
}

}  // namespace bsarma
