#pragma once

#include <random>

namespace bsarma {

// Beta distribution in mean/precision form. The usual shape parameters are
// derived as (mu * precision, (1 - mu) * precision).
struct BetaParams {
  double mu = 0.5;        // mean, in (0,1)
  double precision = 1.0; // phi > 0; conditional variance is mu(1-mu)/(1+phi)

  // Throws std::domain_error unless 0 < mu < 1 and precision > 0 (finite).
  void validate() const;
};

// ln Gamma(x) for x > 0. Throws std::domain_error outside the domain.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

// psi'(x) for x > 0.
double trigamma(double x);

// Log density of Beta(mu * phi, (1 - mu) * phi) at y in the open unit
// interval. Boundary y is a domain error, never clamped.
double beta_log_density(double y, const BetaParams& params);

// Draw from Beta(mu * phi, (1 - mu) * phi) as the normalized ratio of two
// independent gamma variates. Result is strictly inside (0,1).
double beta_sample(std::mt19937_64& gen, const BetaParams& params);

// --- tail probabilities and quantiles used by the inference layer ---

// Standard normal CDF.
double normal_cdf(double z);

// Standard normal quantile, prob in (0,1).
double normal_quantile(double prob);

// P(X > x) for X ~ chi-squared with df degrees of freedom.
double chi_squared_upper_tail(double x, double df);

}  // namespace bsarma
