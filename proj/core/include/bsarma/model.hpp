#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace bsarma {

// Orders of the four lag polynomials plus the seasonal period S.
struct ModelOrder {
  int p = 0;  // non-seasonal AR order
  int q = 0;  // non-seasonal MA order
  int P = 0;  // seasonal AR order
  int Q = 0;  // seasonal MA order
  int S = 1;  // seasonal period; inert when P = Q = 0

  // Number of free parameters, p + q + P + Q + 2.
  int dimension() const { return p + q + P + Q + 2; }

  void validate() const;  // throws std::invalid_argument
};

// Observations conditioned on: m = max(P*S + p, Q*S + q).
int burn_in(const ModelOrder& order);

// Parameter vector gamma = (beta, ar, sar, ma, sma, precision).
struct ParamVector {
  double beta = 0.0;
  std::vector<double> ar;   // phi_1..phi_p
  std::vector<double> ma;   // theta_1..theta_q
  std::vector<double> sar;  // seasonal AR Phi_1..Phi_P
  std::vector<double> sma;  // seasonal MA Theta_1..Theta_Q
  double precision = 1.0;   // phi > 0

  void validate(const ModelOrder& order) const;  // throws std::invalid_argument
};

// Canonical flattening order used for the score vector, the information
// matrix, and every report: beta, ar, sar, ma, sma, precision.
Eigen::VectorXd flatten(const ParamVector& params);
ParamVector unflatten(const ModelOrder& order, const Eigen::VectorXd& values);
std::vector<std::string> param_names(const ModelOrder& order);

// Strictly monotone, twice differentiable map (0,1) -> R, carried as a value
// so alternative links can be plugged in. Logit is the only shipped instance.
struct Link {
  const char* name;
  double (*g)(double mu);        // link
  double (*g_inv)(double eta);   // inverse link, range the open (0,1)
  double (*g_deriv)(double mu);  // d g / d mu
};

const Link& logit_link();
const Link& link_by_name(const std::string& name);  // throws on unknown name

// Ordered observations, each strictly inside (0,1). Labels, when present,
// parallel the values (one timestamp per observation).
struct SeriesData {
  std::vector<double> values;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(values.size()); }
  void validate() const;  // throws std::domain_error naming the bad index
};

// One term of an expanded lag polynomial.
struct LagTerm {
  int lag;
  double coef;
};

// Coefficients of Phi(B^S)phi(B) applied to g(y) and of Theta(B^S)theta(B)
// applied to r, expanded so that
//   eta_t = beta + sum g_lags[l] * g(y_{t-l}) + sum r_lags[l] * r_{t-l}.
// Terms are sorted by lag; colliding lags are merged; zero coefficients drop.
struct ExpandedPredictor {
  std::vector<LagTerm> g_lags;
  std::vector<LagTerm> r_lags;

  int max_g_lag() const { return g_lags.empty() ? 0 : g_lags.back().lag; }
  int max_r_lag() const { return r_lags.empty() ? 0 : r_lags.back().lag; }
};

ExpandedPredictor expand_polynomials(const ModelOrder& order,
                                     const ParamVector& params);

// Linear predictor, mean, and error paths over t = 1..n (stored 0-based).
// For t <= m: eta_t = g(y_t) and err_t = 0. For t > m the recursion of the
// model definition applies and err_t = g(y_t) - eta_t.
struct PredictorPath {
  std::vector<double> eta;
  std::vector<double> mu;
  std::vector<double> err;
};

PredictorPath predictor_path(const ModelOrder& order, const ParamVector& params,
                             const SeriesData& series,
                             const Link& link = logit_link());

}  // namespace bsarma
