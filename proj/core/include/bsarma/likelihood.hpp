#pragma once

#include <Eigen/Core>

#include "bsarma/model.hpp"

namespace bsarma {

// Derivatives of the linear predictor with respect to the mean parameters,
// row i holding d eta_{m+1+i}. Columns follow the canonical order
// (beta, ar, sar, ma, sma); named blocks below slice it.
struct EtaJacobian {
  int p = 0, q = 0, P = 0, Q = 0;
  Eigen::MatrixXd cols;  // (n - m) x (k - 1)

  auto d_beta() const { return cols.col(0); }
  auto d_ar() const { return cols.middleCols(1, p); }
  auto d_sar() const { return cols.middleCols(1 + p, P); }
  auto d_ma() const { return cols.middleCols(1 + p + P, q); }
  auto d_sma() const { return cols.middleCols(1 + p + P + q, Q); }
};

// Conditional log-likelihood, summed over t = m+1..n. Returns -infinity if
// the predictor recursion overflows (an optimizer can propose such points);
// invalid inputs throw.
double conditional_loglik(const ModelOrder& order, const ParamVector& params,
                          const SeriesData& series,
                          const Link& link = logit_link());

// The five linear-predictor derivative recursions, all zero for t <= m.
EtaJacobian eta_jacobian(const ModelOrder& order, const ParamVector& params,
                         const SeriesData& series,
                         const Link& link = logit_link());

// Analytic score vector, length k, canonical order.
Eigen::VectorXd score(const ModelOrder& order, const ParamVector& params,
                      const SeriesData& series,
                      const Link& link = logit_link());

// Log-likelihood and score from one pass over the series; what the
// optimizer calls in its hot loop.
std::pair<double, Eigen::VectorXd> loglik_and_score(
    const ModelOrder& order, const ParamVector& params,
    const SeriesData& series, const Link& link = logit_link());

// Conditional Fisher information, k x k, symmetric, canonical order.
Eigen::MatrixXd fisher_information(const ModelOrder& order,
                                   const ParamVector& params,
                                   const SeriesData& series,
                                   const Link& link = logit_link());

}  // namespace bsarma
