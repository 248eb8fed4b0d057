#include <doctest.h>

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "bsarma/diagnostics.hpp"
#include "bsarma/montecarlo.hpp"
#include "bsarma/rng.hpp"
#include "bsarma/special_functions.hpp"
#include "test_support.hpp"

using namespace bsarma;

namespace {

// A fitted model assembled by hand so the residual definitions can be probed
// against chosen paths.
FittedModel manual_fit(std::vector<double> y, std::vector<double> mu,
                       double precision) {
  FittedModel out;
  out.order = {0, 0, 0, 0, 1};
  out.link = logit_link();
  out.estimates.precision = precision;
  out.series.values = std::move(y);
  const int n = out.series.size();
  out.path.mu = std::move(mu);
  out.path.eta.resize(n);
  out.path.err.resize(n);
  for (int t = 0; t < n; ++t) {
    out.path.eta[t] = out.link.g(out.path.mu[t]);
    out.path.err[t] = out.link.g(out.series.values[t]) - out.path.eta[t];
  }
  out.converged = true;
  double ll = 0.0;
  for (int t = 0; t < n; ++t)
    ll += beta_log_density(out.series.values[t], {out.path.mu[t], precision});
  out.loglik = ll;
  return out;
}

ParamVector design_111112() {
  ParamVector params;
  params.beta = -1.0;
  params.ar = {-0.5};
  params.sar = {0.3};
  params.ma = {0.4};
  params.sma = {-0.35};
  params.precision = 120.0;
  return params;
}

// Spaced-spike vector: nonzero entries four apart, alternating sign, so the
// sample autocorrelations at lags 1..3 vanish exactly.
std::vector<double> spaced_spikes() {
  std::vector<double> v(32, 0.0);
  for (int i = 0; i < 8; ++i) v[4 * i] = (i % 2 == 0) ? 1.0 : -1.0;
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("diagnostics");

TEST_CASE("residual definitions at constructed paths") {
  // Perfect in-sample fit: r1 and r2 vanish, the weighted residual does not.
  {
    const std::vector<double> y{0.3, 0.6, 0.45, 0.8};
    const FittedModel fit = manual_fit(y, y, 11.0);
    const ResidualSeries r1 = residuals(fit, ResidualKind::standardized);
    const ResidualSeries r2 = residuals(fit, ResidualKind::predictor_scale);
    const ResidualSeries rw = residuals(fit, ResidualKind::weighted);
    for (int t = 0; t < 4; ++t) {
      CHECK(r1.values[t] == 0.0);
      CHECK(r2.values[t] == 0.0);
      CHECK(rw.values[t] != 0.0);  // y* != mu* in general
    }
  }

  // mu = 1/2: the weighted variance term is 2 psi'(phi/2).
  {
    const double phi = 9.0;
    const FittedModel fit =
        manual_fit({0.62, 0.41, 0.55}, {0.5, 0.5, 0.5}, phi);
    const ResidualSeries rw = residuals(fit, ResidualKind::weighted);
    for (int t = 0; t < 3; ++t) {
      const double y = fit.series.values[t];
      const double ystar = std::log(y / (1.0 - y));
      const double want = ystar / std::sqrt(2.0 * trigamma(phi / 2.0));
      CHECK(rw.values[t] == doctest::Approx(want).epsilon(1e-13));
    }
  }

  // Explicit formulas for all three kinds on an imperfect fit.
  {
    const double phi = 30.0;
    const FittedModel fit = manual_fit({0.3, 0.72}, {0.35, 0.66}, phi);
    const Link& link = logit_link();
    const ResidualSeries r1 = residuals(fit, ResidualKind::standardized);
    const ResidualSeries r2 = residuals(fit, ResidualKind::predictor_scale);
    const ResidualSeries rw = residuals(fit, ResidualKind::weighted);
    for (int t = 0; t < 2; ++t) {
      const double y = fit.series.values[t];
      const double mu = fit.path.mu[t];
      const double var = mu * (1.0 - mu) / (1.0 + phi);
      CHECK(r1.values[t] ==
            doctest::Approx((y - mu) / std::sqrt(var)).epsilon(1e-13));
      const double gp = link.g_deriv(mu);
      CHECK(r2.values[t] ==
            doctest::Approx((link.g(y) - fit.path.eta[t]) /
                            std::sqrt(gp * gp * var))
                .epsilon(1e-13));
      const double ystar = std::log(y / (1.0 - y));
      const double mustar = digamma(mu * phi) - digamma((1.0 - mu) * phi);
      const double wvar = trigamma(mu * phi) + trigamma((1.0 - mu) * phi);
      CHECK(rw.values[t] ==
            doctest::Approx((ystar - mustar) / std::sqrt(wvar)).epsilon(1e-13));
    }
  }
}

TEST_CASE("weighted residuals of a correct fit are close to standard normal") {
  const ModelOrder order{1, 1, 1, 1, 12};
  std::mt19937_64 rng = make_stream(61);
  const SeriesData series = simulate_series(order, design_111112(), 500, rng);
  const FittedModel fitted = fit(order, series);
  REQUIRE(fitted.converged);

  const ResidualSeries rw = residuals(fitted, ResidualKind::weighted);
  const int count = rw.size();
  const double mean =
      std::accumulate(rw.values.begin(), rw.values.end(), 0.0) / count;
  double var = 0.0;
  for (double v : rw.values) var += (v - mean) * (v - mean);
  var /= count - 1;
  CHECK(std::abs(mean) < 0.2);
  CHECK(var > 0.8);
  CHECK(var < 1.2);
}

TEST_CASE("acf basics and the white-noise band") {
  const auto series = testsup::synthetic_series(400, 97);
  const auto rho = acf(series.values, 30);
  CHECK(rho[0] == 1.0);

  // ~95% of the autocorrelations of white noise stay inside the band.
  int inside = 0, total = 0;
  for (int rep = 0; rep < 10; ++rep) {
    std::mt19937_64 rng = make_stream(880, rep);
    std::vector<double> noise(500);
    for (double& v : noise) v = standard_normal(rng);
    const auto r = acf(noise, 40);
    const double band = 1.96 / std::sqrt(500.0);
    for (int i = 1; i <= 40; ++i) {
      total += 1;
      inside += std::abs(r[i]) <= band ? 1 : 0;
    }
  }
  const double frac = static_cast<double>(inside) / total;
  CHECK(frac > 0.90);
  CHECK(frac < 0.99);

  std::vector<double> constant(50, 0.77);
  CHECK_THROWS_AS(acf(constant, 5), std::domain_error);
  CHECK_THROWS_AS(acf(std::vector<double>(6, 0.0), 10), std::invalid_argument);
}

TEST_CASE("acf truncated denominator variant") {
  const auto series = testsup::synthetic_series(60, 23);
  const auto standard = acf(series.values, 5, AcfDenominator::full_sample);
  const auto truncated = acf(series.values, 5, AcfDenominator::truncated);
  CHECK(truncated[0] == 1.0);
  // The truncated denominator shrinks with the lag, inflating the magnitude.
  for (int i = 1; i <= 5; ++i) {
    if (standard[i] != 0.0)
      CHECK(std::abs(truncated[i]) >= std::abs(standard[i]) * 0.999);
  }
}

TEST_CASE("pacf equals the solved autoregression system") {
  const auto series = testsup::synthetic_series(200, 3);
  const int max_lag = 6;
  const auto rho = acf(series.values, max_lag);
  const auto partial = pacf(series.values, max_lag);
  CHECK(partial[0] == 1.0);
  CHECK(partial[1] == doctest::Approx(rho[1]).epsilon(1e-12));

  // Independent route: solve the order-i normal equations directly.
  for (int i = 1; i <= max_lag; ++i) {
    Eigen::MatrixXd toeplitz(i, i);
    Eigen::VectorXd rhs(i);
    for (int a = 0; a < i; ++a) {
      rhs[a] = rho[a + 1];
      for (int b = 0; b < i; ++b) toeplitz(a, b) = rho[std::abs(a - b)];
    }
    const Eigen::VectorXd coef = toeplitz.fullPivLu().solve(rhs);
    CHECK(partial[i] == doctest::Approx(coef[i - 1]).epsilon(1e-8));
  }
}

TEST_CASE("portmanteau statistics vanish exactly on spike-spaced input") {
  ResidualSeries resid{ResidualKind::weighted, spaced_spikes()};
  const ModelOrder order{0, 0, 0, 0, 1};
  const WhiteNoiseResult q1 = ljung_box(resid, order, 3);
  CHECK(q1.statistic == 0.0);
  CHECK(q1.p_value == 1.0);
  CHECK(q1.df == 3);
  const WhiteNoiseResult q2 = monti(resid, order, 3);
  CHECK(q2.statistic == 0.0);
  CHECK(q2.p_value == 1.0);
}

TEST_CASE("ljung_box and monti match a direct scalar computation") {
  const auto series = testsup::synthetic_series(20, 15);
  ResidualSeries resid{ResidualKind::weighted, series.values};
  const ModelOrder order{1, 0, 0, 0, 1};
  const int b = 5;
  const int n = 20;

  // Direct scalar route: definitional ACF, then the weighted sum of squares.
  const double mean =
      std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;
  double denom = 0.0;
  for (double v : series.values) denom += (v - mean) * (v - mean);
  std::vector<double> rho(b + 1, 0.0);
  for (int i = 1; i <= b; ++i) {
    double num = 0.0;
    for (int t = 0; t + i < n; ++t)
      num += (series.values[t] - mean) * (series.values[t + i] - mean);
    rho[i] = num / denom;
  }
  double want = 0.0;
  for (int i = 1; i <= b; ++i) want += rho[i] * rho[i] / (n - i);
  want *= n * (n + 2.0);

  const WhiteNoiseResult q1 = ljung_box(resid, order, b);
  CHECK(q1.statistic == doctest::Approx(want).epsilon(1e-10));
  CHECK(q1.df == 4);
  CHECK(q1.statistic >= 0.0);

  const WhiteNoiseResult q2 = monti(resid, order, b);
  CHECK(q2.statistic >= 0.0);

  // Degrees of freedom must stay positive.
  const ModelOrder big{3, 2, 0, 0, 1};
  CHECK_THROWS_AS(ljung_box(resid, big, 5), std::invalid_argument);
}

TEST_CASE("default portmanteau lag rule is max(10, 2S)") {
  CHECK(default_portmanteau_lags({1, 0, 1, 1, 12}) == 24);
  CHECK(default_portmanteau_lags({1, 0, 0, 0, 1}) == 10);
  CHECK(default_portmanteau_lags({1, 0, 1, 0, 4}) == 10);
  CHECK(default_portmanteau_lags({0, 0, 1, 0, 7}) == 14);
}

TEST_CASE("monti test power grows with AR contamination") {
  const int n = 150, reps = 300, b = 10;
  const ModelOrder order{0, 0, 0, 0, 1};
  std::vector<double> rates;
  for (double ar : {0.15, 0.45}) {
    int rejected = 0;
    for (int rep = 0; rep < reps; ++rep) {
      std::mt19937_64 rng = make_stream(5500 + static_cast<int>(ar * 100), rep);
      std::vector<double> resid(n);
      double prev = 0.0;
      for (int t = 0; t < n; ++t) {
        prev = ar * prev + standard_normal(rng);
        resid[t] = prev;
      }
      const WhiteNoiseResult q2 =
          monti({ResidualKind::weighted, resid}, order, b);
      rejected += q2.p_value < 0.05 ? 1 : 0;
    }
    rates.push_back(static_cast<double>(rejected) / reps);
  }
  CHECK(rates[1] > rates[0] + 0.10);
  CHECK(rates[1] > 0.5);
}

TEST_CASE("deviance: saturated fit gives zero, real fits are nonnegative") {
  {
    const std::vector<double> y{0.3, 0.6, 0.45, 0.8, 0.2};
    const FittedModel saturated = manual_fit(y, y, 14.0);
    const Deviance d = deviance(saturated);
    CHECK(d.statistic == doctest::Approx(0.0).epsilon(1e-12));
  }
  {
    const ModelOrder order{1, 0, 1, 0, 4};
    ParamVector truth;
    truth.beta = -0.2;
    truth.ar = {0.3};
    truth.sar = {0.25};
    truth.precision = 45.0;
    std::mt19937_64 rng = make_stream(777);
    const SeriesData series = simulate_series(order, truth, 150, rng);
    const FittedModel fitted = fit(order, series);
    REQUIRE(fitted.converged);
    CHECK(deviance(fitted).statistic >= 0.0);
  }
}

TEST_CASE("scaled deviance hovers near one for correct specifications") {
  const ModelOrder order{1, 0, 1, 0, 4};
  ParamVector truth;
  truth.beta = -0.2;
  truth.ar = {0.3};
  truth.sar = {0.25};
  truth.precision = 45.0;

  double total = 0.0;
  int used = 0;
  for (int rep = 0; rep < 300; ++rep) {
    std::mt19937_64 rng = make_stream(1234, rep);
    const SeriesData series = simulate_series(order, truth, 100, rng);
    FittedModel fitted;
    try {
      fitted = fit(order, series);
    } catch (const std::exception&) {
      continue;
    }
    if (!fitted.converged) continue;
    total += deviance(fitted).scaled;
    ++used;
  }
  REQUIRE(used > 250);
  const double mean_scaled = total / used;
  CHECK(mean_scaled > 0.7);
  CHECK(mean_scaled < 1.3);
}

TEST_CASE("information criteria arithmetic") {
  // m = 10, k = 5 via the (0,2,1,0)_10 order; loglik fixed at -100, n = 110.
  FittedModel stub;
  stub.order = {0, 2, 1, 0, 10};
  REQUIRE(burn_in(stub.order) == 10);
  REQUIRE(stub.order.dimension() == 5);
  stub.series.values.assign(110, 0.5);
  stub.loglik = -100.0;
  const InformationCriteria ic = information_criteria(stub);
  CHECK(ic.maic == doctest::Approx(230.0).epsilon(1e-12));
  CHECK(ic.msic == doctest::Approx(220.0 + std::log(110.0) * 5).epsilon(1e-12));
  CHECK(ic.mhq ==
        doctest::Approx(220.0 + std::log(std::log(110.0)) * 5).epsilon(1e-12));
  CHECK(ic.maic - ic.msic ==
        doctest::Approx((2.0 - std::log(110.0)) * 5).epsilon(1e-12));

  // m = 0 reduces MAIC to the classic AIC.
  FittedModel plain;
  plain.order = {0, 0, 0, 0, 1};
  plain.series.values.assign(80, 0.5);
  plain.loglik = -42.0;
  CHECK(information_criteria(plain).maic ==
        doctest::Approx(2.0 * 42.0 + 2.0 * 2).epsilon(1e-12));
}

TEST_CASE("MAIC prefers the true order over an underfit in most replications") {
  const ModelOrder truth_order{1, 0, 1, 0, 4};
  ParamVector truth;
  truth.beta = -0.2;
  truth.ar = {0.35};
  truth.sar = {0.45};
  truth.precision = 50.0;
  const ModelOrder underfit{1, 0, 0, 0, 4};

  int prefers_truth = 0, used = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::mt19937_64 rng = make_stream(4321, rep);
    const SeriesData series = simulate_series(truth_order, truth, 120, rng);
    FittedModel a, b;
    try {
      a = fit(truth_order, series);
      b = fit(underfit, series);
    } catch (const std::exception&) {
      continue;
    }
    if (!a.converged || !b.converged) continue;
    ++used;
    if (information_criteria(a).maic < information_criteria(b).maic)
      ++prefers_truth;
  }
  REQUIRE(used > 80);
  CHECK(prefers_truth * 2 > used);  // strict majority
}

TEST_SUITE_END();
