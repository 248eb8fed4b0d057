#include "bsarma/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bsarma/rng.hpp"

namespace bsarma {

namespace {

void require_positive(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error(std::string(fn) + ": argument must be positive and finite");
}

constexpr double kAsymptoticCutoff = 8.0;

// Regularized lower incomplete gamma by series, x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Regularized upper incomplete gamma by continued fraction, x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace

void BetaParams::validate() const {
  if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0)
    throw std::domain_error("BetaParams: mu must lie strictly inside (0,1)");
  if (!std::isfinite(precision) || precision <= 0.0)
    throw std::domain_error("BetaParams: precision must be positive");
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double digamma(double x) {
  require_positive(x, "digamma");
  // Shift upward until the asymptotic expansion applies.
  double acc = 0.0;
  while (x < kAsymptoticCutoff) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double z = 1.0 / (x * x);
  const double series =
      z * (1.0 / 12.0 -
      z * (1.0 / 120.0 -
      z * (1.0 / 252.0 -
      z * (1.0 / 240.0 -
      z * (1.0 / 132.0 -
      z * (691.0 / 32760.0 -
      z * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < kAsymptoticCutoff) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double z = 1.0 / (x * x);
  const double tail =
      z * (1.0 / 6.0 -
      z * (1.0 / 30.0 -
      z * (1.0 / 42.0 -
      z * (1.0 / 30.0 -
      z * (5.0 / 66.0 -
      z * (691.0 / 2730.0 -
      z * (7.0 / 6.0)))))));
  return acc + 1.0 / x + 0.5 * z + tail / x;
}

double beta_log_density(double y, const BetaParams& params) {
  params.validate();
  if (!std::isfinite(y) || y <= 0.0 || y >= 1.0)
    throw std::domain_error("beta_log_density: y must lie strictly inside (0,1)");
  const double a = params.mu * params.precision;
  const double b = (1.0 - params.mu) * params.precision;
  return log_gamma(params.precision) - log_gamma(a) - log_gamma(b) +
         (a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y);
}

double beta_sample(std::mt19937_64& gen, const BetaParams& params) {
  params.validate();
  const double x = gamma_draw(gen, params.mu * params.precision);
  const double y = gamma_draw(gen, (1.0 - params.mu) * params.precision);
  double r = x / (x + y);
  // Keep draws inside the open interval even when a gamma variate underflows.
  if (!(r > 0.0)) r = std::numeric_limits<double>::min();
  if (!(r < 1.0)) r = std::nextafter(1.0, 0.0);
  return r;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double prob) {
  if (!std::isfinite(prob) || prob <= 0.0 || prob >= 1.0)
    throw std::domain_error("normal_quantile: prob must lie strictly inside (0,1)");

  // Acklam's rational approximation, then one Halley refinement.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (prob < p_low) {
    double r = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (prob <= 1.0 - p_low) {
    double r = prob - 0.5;
    double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    double r = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }

  const double e = normal_cdf(x) - prob;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double chi_squared_upper_tail(double x, double df) {
  if (!std::isfinite(df) || df <= 0.0)
    throw std::domain_error("chi_squared_upper_tail: df must be positive");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("chi_squared_upper_tail: statistic must be nonnegative");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_cf(a, half);
}

}  // namespace bsarma
