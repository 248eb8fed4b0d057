#include "bsarma/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace bsarma {

void ModelOrder::validate() const {
  if (p < 0 || q < 0 || P < 0 || Q < 0)
    throw std::invalid_argument("ModelOrder: polynomial orders must be nonnegative");
  if (S < 1)
    throw std::invalid_argument("ModelOrder: seasonal period S must be >= 1");
}

int burn_in(const ModelOrder& order) {
  order.validate();
  return std::max(order.P * order.S + order.p, order.Q * order.S + order.q);
}

void ParamVector::validate(const ModelOrder& order) const {
  order.validate();
  if (static_cast<int>(ar.size()) != order.p ||
      static_cast<int>(ma.size()) != order.q ||
      static_cast<int>(sar.size()) != order.P ||
      static_cast<int>(sma.size()) != order.Q)
    throw std::invalid_argument("ParamVector: coefficient lengths do not match the order");
  if (!std::isfinite(beta))
    throw std::invalid_argument("ParamVector: beta must be finite");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(ar) || !finite(ma) || !finite(sar) || !finite(sma))
    throw std::invalid_argument("ParamVector: coefficients must be finite");
  if (!std::isfinite(precision) || precision <= 0.0)
    throw std::invalid_argument("ParamVector: precision must be positive");
}

Eigen::VectorXd flatten(const ParamVector& params) {
  const int p = static_cast<int>(params.ar.size());
  const int P = static_cast<int>(params.sar.size());
  const int q = static_cast<int>(params.ma.size());
  const int Q = static_cast<int>(params.sma.size());
  Eigen::VectorXd out(p + q + P + Q + 2);
  int at = 0;
  out[at++] = params.beta;
  for (double v : params.ar) out[at++] = v;
  for (double v : params.sar) out[at++] = v;
  for (double v : params.ma) out[at++] = v;
  for (double v : params.sma) out[at++] = v;
  out[at] = params.precision;
  return out;
}

ParamVector unflatten(const ModelOrder& order, const Eigen::VectorXd& values) {
  order.validate();
  if (values.size() != order.dimension())
    throw std::invalid_argument("unflatten: wrong vector length");
  ParamVector out;
  int at = 0;
  out.beta = values[at++];
  out.ar.assign(values.data() + at, values.data() + at + order.p);
  at += order.p;
  out.sar.assign(values.data() + at, values.data() + at + order.P);
  at += order.P;
  out.ma.assign(values.data() + at, values.data() + at + order.q);
  at += order.q;
  out.sma.assign(values.data() + at, values.data() + at + order.Q);
  at += order.Q;
  out.precision = values[at];
  return out;
}

std::vector<std::string> param_names(const ModelOrder& order) {
  std::vector<std::string> names;
  names.reserve(order.dimension());
  names.emplace_back("beta");
  for (int i = 1; i <= order.p; ++i) names.push_back("ar" + std::to_string(i));
  for (int i = 1; i <= order.P; ++i) names.push_back("sar" + std::to_string(i));
  for (int i = 1; i <= order.q; ++i) names.push_back("ma" + std::to_string(i));
  for (int i = 1; i <= order.Q; ++i) names.push_back("sma" + std::to_string(i));
  names.emplace_back("precision");
  return names;
}

namespace {

double logit_g(double mu) {
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0)
    throw std::domain_error("logit: argument must lie strictly inside (0,1)");
  return std::log(mu) - std::log1p(-mu);
}

double logit_inv(double eta) {
  double mu = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                         : std::exp(eta) / (1.0 + std::exp(eta));
  // Hold the value inside the open interval when the sigmoid saturates.
  if (mu >= 1.0) mu = std::nextafter(1.0, 0.0);
  if (mu <= 0.0) mu = std::numeric_limits<double>::min();
  return mu;
}

double logit_deriv(double mu) {
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0)
    throw std::domain_error("logit derivative: argument must lie strictly inside (0,1)");
  return 1.0 / (mu * (1.0 - mu));
}

}  // namespace

const Link& logit_link() {
  static const Link link{"logit", &logit_g, &logit_inv, &logit_deriv};
  return link;
}

const Link& link_by_name(const std::string& name) {
  if (name == "logit") return logit_link();
  throw std::invalid_argument("unknown link function: " + name);
}

void SeriesData::validate() const {
  if (values.empty()) throw std::domain_error("SeriesData: series is empty");
  if (!labels.empty() && labels.size() != values.size())
    throw std::domain_error("SeriesData: labels must parallel the values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    double y = values[i];
    if (!std::isfinite(y) || y <= 0.0 || y >= 1.0)
      throw std::domain_error("SeriesData: observation " + std::to_string(i + 1) +
                              " lies outside the open unit interval");
  }
}

ExpandedPredictor expand_polynomials(const ModelOrder& order,
                                     const ParamVector& params) {
  params.validate(order);
  std::map<int, double> g_map, r_map;
  auto add = [](std::map<int, double>& m, int lag, double coef) {
    m[lag] += coef;
  };

  for (int i = 1; i <= order.p; ++i) add(g_map, i, params.ar[i - 1]);
  for (int I = 1; I <= order.P; ++I) add(g_map, I * order.S, params.sar[I - 1]);
  for (int i = 1; i <= order.p; ++i)
    for (int I = 1; I <= order.P; ++I)
      add(g_map, i + I * order.S, -params.ar[i - 1] * params.sar[I - 1]);

  for (int j = 1; j <= order.q; ++j) add(r_map, j, -params.ma[j - 1]);
  for (int J = 1; J <= order.Q; ++J) add(r_map, J * order.S, -params.sma[J - 1]);
  for (int j = 1; j <= order.q; ++j)
    for (int J = 1; J <= order.Q; ++J)
      add(r_map, j + J * order.S, params.ma[j - 1] * params.sma[J - 1]);

  ExpandedPredictor out;
  for (auto [lag, coef] : g_map)
    if (coef != 0.0) out.g_lags.push_back({lag, coef});
  for (auto [lag, coef] : r_map)
    if (coef != 0.0) out.r_lags.push_back({lag, coef});
  return out;
}

PredictorPath predictor_path(const ModelOrder& order, const ParamVector& params,
                             const SeriesData& series, const Link& link) {
  params.validate(order);
  series.validate();
  const int n = series.size();
  const int m = burn_in(order);
  if (n <= m)
    throw std::invalid_argument("predictor_path: series length " + std::to_string(n) +
                                " does not exceed the burn-in " + std::to_string(m));

  const ExpandedPredictor ex = expand_polynomials(order, params);

  std::vector<double> gy(n);
  for (int t = 0; t < n; ++t) gy[t] = link.g(series.values[t]);

  PredictorPath path;
  path.eta.resize(n);
  path.mu.resize(n);
  path.err.resize(n);

  for (int t = 0; t < m; ++t) {
    path.eta[t] = gy[t];
    path.mu[t] = link.g_inv(gy[t]);
    path.err[t] = 0.0;
  }
  for (int t = m; t < n; ++t) {
    double acc = params.beta;
    for (const LagTerm& term : ex.g_lags) acc += term.coef * gy[t - term.lag];
    for (const LagTerm& term : ex.r_lags) acc += term.coef * path.err[t - term.lag];
    path.eta[t] = acc;
    path.mu[t] = link.g_inv(acc);
    path.err[t] = gy[t] - acc;
  }
  return path;
}

}  // namespace bsarma
