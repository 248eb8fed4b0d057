#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bsarma/estimation.hpp"

namespace bsarma {

enum class McStudy { estimation, size, power };

struct McConfig {
  ModelOrder order;
  ParamVector true_params;
  std::vector<int> sample_sizes;
  int replications = 100;
  std::uint64_t seed = 1;
  McStudy study = McStudy::estimation;
  // Power studies follow the two published designs: scenario 1 varies the MA
  // coefficient (theta_1 = delta, fitted order (1,0)x(1,1)); scenario 2
  // varies a second AR coefficient (phi_2 = -delta, fitted order (1,1)x(1,1)).
  int scenario = 1;
  std::vector<double> power_grid;                    // delta values
  std::vector<double> nominal_levels = {0.10, 0.05, 0.01};
  int portmanteau_lags = 0;  // 0 = max(10, 2S)
  int threads = 0;           // 0 = hardware concurrency
  FitOptions fit_options;
  int warmup = -1;           // -1 = 50 + m

  void validate() const;
};

struct McEstimationRow {
  std::string param;
  double truth, mean, bias, rb_percent, sd, mse;
};

struct McRateRow {
  std::string test;   // "ljung_box" or "monti"
  double level;       // nominal level
  double rate;        // rejection frequency in [0,1]
};

struct McReport {
  McStudy study;

  struct Block {
    int n = 0;
    double delta = 0.0;  // power studies only
    int completed = 0;   // replications entering the statistics
    int failed = 0;      // non-converged fits, excluded but counted
    std::vector<McEstimationRow> estimation;
    std::vector<McRateRow> rates;
  };
  std::vector<Block> blocks;

  std::string to_text() const;  // human table, fixed 4 decimals
  std::string to_csv() const;   // machine table, full precision
};

// Generate n observations from the model: the predictor recursion runs
// forward with y_t ~ Beta(mu_t phi, (1-mu_t) phi) and r_t = g(y_t) - eta_t
// fed back. Pre-history starts at mu = g^{-1}(beta), r = 0; the first
// `warmup` draws (default 50 + m) are discarded.
SeriesData simulate_series(const ModelOrder& order, const ParamVector& params,
                           int n, std::mt19937_64& rng, int warmup = -1,
                           const Link& link = logit_link());

// Per-parameter Mean / Bias / RB% / SD / MSE across replications, one block
// per sample size. Non-converged fits are excluded and counted.
McReport estimation_study(const McConfig& config);

// Hook for swapping the estimator; the default study uses fit().
using Fitter = std::function<FittedModel(
    const ModelOrder&, const SeriesData&, const FitOptions&)>;
McReport estimation_study(const McConfig& config, const Fitter& fitter);

// Null rejection rates of the Ljung-Box and Monti tests on the weighted
// residuals of correctly specified fits.
McReport size_study(const McConfig& config);

// Nonnull rejection rates per delta in power_grid for the configured
// scenario, one block per delta (first sample size in the config is used).
McReport power_study(const McConfig& config);

}  // namespace bsarma
