#pragma once

#include <span>
#include <vector>

#include "bsarma/estimation.hpp"

namespace bsarma {

enum class ResidualKind { standardized, predictor_scale, weighted };

// Residuals over t = m+1..n.
struct ResidualSeries {
  ResidualKind kind;
  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
};

ResidualSeries residuals(const FittedModel& fit, ResidualKind kind);

// Denominator of the sample autocorrelation: the standard full-sample sum of
// squares, or the truncated sum (squares only up to n - i).
enum class AcfDenominator { full_sample, truncated };

// rho(0..max_lag); rho(0) = 1. Constant input is an error.
std::vector<double> acf(std::span<const double> values, int max_lag,
                        AcfDenominator denom = AcfDenominator::full_sample);

// Partial autocorrelations via Durbin-Levinson on the ACF; index 0 is 1.
std::vector<double> pacf(std::span<const double> values, int max_lag,
                         AcfDenominator denom = AcfDenominator::full_sample);

struct WhiteNoiseResult {
  double statistic;
  int b;         // lags tested
  int df;        // b - p - q - P - Q
  double p_value;
};

// Rule-of-thumb lag count, max(10, 2S).
int default_portmanteau_lags(const ModelOrder& order);

// Ljung-Box Q1 on residual autocorrelations; chi-squared with
// b - p - q - P - Q degrees of freedom. df < 1 is an error.
WhiteNoiseResult ljung_box(const ResidualSeries& resid, const ModelOrder& order,
                           int b);

// Monti's Q2, same form on partial autocorrelations.
WhiteNoiseResult monti(const ResidualSeries& resid, const ModelOrder& order,
                       int b);

struct Deviance {
  double statistic;  // D = 2 (saturated loglik - fitted loglik)
  double scaled;     // D / (n - m - k)
};

Deviance deviance(const FittedModel& fit);

// Criteria on the rescaled log-likelihood l* = l * n/(n-m), so models with
// larger burn-in are not penalized for the shorter likelihood sum.
struct InformationCriteria {
  double maic;  // -2 l* + 2k
  double msic;  // -2 l* + ln(n) k
  double mhq;   // -2 l* + ln(ln(n)) k
};

InformationCriteria information_criteria(const FittedModel& fit);

}  // namespace bsarma
