#pragma once

#include <span>
#include <vector>

#include "bsarma/estimation.hpp"

namespace bsarma {

// In-sample fitted means mu_t for t = m+1..n.
std::vector<double> fitted_values(const FittedModel& fit);

struct ForecastResult {
  std::vector<double> means;  // mu_{n+1} .. mu_{n+h}, each in (0,1)

  int horizon() const { return static_cast<int>(means.size()); }
};

// h-step-ahead forecasts: future g(y) values are replaced by g(mu-hat) and
// future errors by zero, then the predictor recursion is iterated forward.
ForecastResult forecast(const FittedModel& fit, int horizon);

struct Accuracy {
  double mse;
  double mape;
};

// MSE and MAPE of forecasts against actuals (actuals in (0,1)).
Accuracy accuracy(std::span<const double> forecasts,
                  std::span<const double> actuals);

}  // namespace bsarma
