#include "bsarma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bsarma/diagnostics.hpp"
#include "bsarma/rng.hpp"
#include "bsarma/special_functions.hpp"

namespace bsarma {

namespace {

// Runs body(rep) for rep = 0..count-1 over a small worker pool. Each
// replication owns its output slot, so results do not depend on scheduling.
void run_replications(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int rep = 0; rep < count; ++rep) body(rep);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int rep = next.fetch_add(1); rep < count; rep = next.fetch_add(1))
        body(rep);
    });
  }
  for (std::thread& t : pool) t.join();
}

std::uint64_t stream_id(std::uint64_t salt, std::uint64_t block, std::uint64_t rep) {
  return (salt << 56) ^ (block << 32) ^ rep;
}

constexpr std::uint64_t kEstimationSalt = 1;
constexpr std::uint64_t kSizeSalt = 2;
constexpr std::uint64_t kPowerSalt = 3;

struct TestOutcome {
  bool converged = false;
  double ljung_box_p = 1.0;
  double monti_p = 1.0;
};

std::vector<McRateRow> rate_rows(const std::vector<TestOutcome>& outcomes,
                                 const std::vector<double>& levels) {
  int completed = 0;
  for (const TestOutcome& o : outcomes) completed += o.converged ? 1 : 0;
  std::vector<McRateRow> rows;
  for (double level : levels) {
    int lb = 0, mt = 0;
    for (const TestOutcome& o : outcomes) {
      if (!o.converged) continue;
      lb += o.ljung_box_p < level ? 1 : 0;
      mt += o.monti_p < level ? 1 : 0;
    }
    const double denom = std::max(completed, 1);
    rows.push_back({"ljung_box", level, lb / denom});
    rows.push_back({"monti", level, mt / denom});
  }
  return rows;
}

// One size/power replication: simulate, fit, test the weighted residuals.
TestOutcome test_replication(const ModelOrder& gen_order,
                             const ParamVector& gen_params,
                             const ModelOrder& fit_order, int n,
                             std::mt19937_64& rng, const McConfig& config) {
  TestOutcome out;
  SeriesData series = simulate_series(gen_order, gen_params, n, rng, config.warmup);
  FittedModel fitted;
  try {
    fitted = fit(fit_order, series, config.fit_options);
  } catch (const std::exception&) {
    return out;
  }
  if (!fitted.converged) return out;
  const int b = config.portmanteau_lags > 0 ? config.portmanteau_lags
                                            : default_portmanteau_lags(fit_order);
  try {
    const ResidualSeries resid = residuals(fitted, ResidualKind::weighted);
    out.ljung_box_p = ljung_box(resid, fit_order, b).p_value;
    out.monti_p = monti(resid, fit_order, b).p_value;
  } catch (const std::exception&) {
    return out;
  }
  out.converged = true;
  return out;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%10.4f", v);
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void McConfig::validate() const {
  order.validate();
  if (study != McStudy::power) {
    true_params.validate(order);
    if (sample_sizes.empty())
      throw std::invalid_argument("McConfig: sample_sizes must be nonempty");
  } else {
    if (scenario != 1 && scenario != 2)
      throw std::invalid_argument("McConfig: power scenario must be 1 or 2");
    if (power_grid.empty())
      throw std::invalid_argument("McConfig: power_grid must be nonempty");
    if (sample_sizes.empty())
      throw std::invalid_argument("McConfig: power study needs one sample size");
  }
  if (replications < 1)
    throw std::invalid_argument("McConfig: replications must be >= 1");
  if (nominal_levels.empty())
    throw std::invalid_argument("McConfig: nominal_levels must be nonempty");
  for (double level : nominal_levels)
    if (!(level > 0.0 && level <= 1.0))
      throw std::invalid_argument("McConfig: nominal levels must lie in (0,1]");
  const int needed = burn_in(order) + order.dimension();
  for (int n : sample_sizes)
    if (n <= needed)
      throw std::invalid_argument("McConfig: sample sizes must exceed burn-in + k");
}

SeriesData simulate_series(const ModelOrder& order, const ParamVector& params,
                           int n, std::mt19937_64& rng, int warmup,
                           const Link& link) {
  params.validate(order);
  if (n < 1) throw std::invalid_argument("simulate_series: n must be >= 1");
  const int m = burn_in(order);
  if (warmup < 0) warmup = 50 + m;

  const ExpandedPredictor ex = expand_polynomials(order, params);
  const int hist = std::max({ex.max_g_lag(), ex.max_r_lag(), 1});
  const int total = warmup + n;

  // Pre-history sits at the marginal point mu = g^{-1}(beta) with zero errors.
  std::vector<double> gval(hist + total, params.beta);
  std::vector<double> rval(hist + total, 0.0);
  std::vector<double> yval(hist + total, link.g_inv(params.beta));

  for (int t = hist; t < hist + total; ++t) {
    double eta = params.beta;
    for (const LagTerm& term : ex.g_lags) eta += term.coef * gval[t - term.lag];
    for (const LagTerm& term : ex.r_lags) eta += term.coef * rval[t - term.lag];
    const double mu = link.g_inv(eta);
    const double y = beta_sample(rng, {mu, params.precision});
    yval[t] = y;
    gval[t] = link.g(y);
    rval[t] = gval[t] - eta;
  }

  SeriesData out;
  out.values.assign(yval.end() - n, yval.end());
  return out;
}

McReport estimation_study(const McConfig& config) {
  return estimation_study(config, [](const ModelOrder& order,
                                     const SeriesData& series,
                                     const FitOptions& options) {
    return fit(order, series, options);
  });
}

McReport estimation_study(const McConfig& config, const Fitter& fitter) {
  config.validate();
  if (config.study != McStudy::estimation)
    throw std::invalid_argument("estimation_study: config.study mismatch");

  const int k = config.order.dimension();
  const Eigen::VectorXd truth = flatten(config.true_params);
  const std::vector<std::string> names = param_names(config.order);
  const int reps = config.replications;

  McReport report;
  report.study = McStudy::estimation;

  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    const int n = config.sample_sizes[ni];
    std::vector<Eigen::VectorXd> estimates(reps);
    std::vector<char> ok(reps, 0);

    run_replications(reps, config.threads, [&](int rep) {
      std::mt19937_64 rng =
          make_stream(config.seed, stream_id(kEstimationSalt, ni, rep));
      SeriesData series =
          simulate_series(config.order, config.true_params, n, rng, config.warmup);
      try {
        FittedModel fitted = fitter(config.order, series, config.fit_options);
        if (fitted.converged) {
          estimates[rep] = flatten(fitted.estimates);
          ok[rep] = 1;
        }
      } catch (const std::exception&) {
        // counted below as a failed replication
      }
    });

    McReport::Block block;
    block.n = n;
    block.completed = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
    block.failed = reps - block.completed;

    for (int j = 0; j < k; ++j) {
      double mean = 0.0;
      for (int rep = 0; rep < reps; ++rep)
        if (ok[rep]) mean += estimates[rep][j];
      const int completed = std::max(block.completed, 1);
      mean /= completed;
      double var = 0.0, mse = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        if (!ok[rep]) continue;
        var += (estimates[rep][j] - mean) * (estimates[rep][j] - mean);
        mse += (estimates[rep][j] - truth[j]) * (estimates[rep][j] - truth[j]);
      }
      var /= completed;
      mse /= completed;
      const double bias = mean - truth[j];
      const double rb = truth[j] != 0.0
                            ? 100.0 * bias / truth[j]
                            : std::numeric_limits<double>::quiet_NaN();
      block.estimation.push_back(
          {names[j], truth[j], mean, bias, rb, std::sqrt(var), mse});
    }
    report.blocks.push_back(std::move(block));
  }
  return report;
}

McReport size_study(const McConfig& config) {
  config.validate();
  if (config.study != McStudy::size)
    throw std::invalid_argument("size_study: config.study mismatch");

  McReport report;
  report.study = McStudy::size;
  const int reps = config.replications;

  for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
    const int n = config.sample_sizes[ni];
    std::vector<TestOutcome> outcomes(reps);

    run_replications(reps, config.threads, [&](int rep) {
      std::mt19937_64 rng =
          make_stream(config.seed, stream_id(kSizeSalt, ni, rep));
      outcomes[rep] = test_replication(config.order, config.true_params,
                                       config.order, n, rng, config);
    });

    McReport::Block block;
    block.n = n;
    for (const TestOutcome& o : outcomes) block.completed += o.converged ? 1 : 0;
    block.failed = reps - block.completed;
    block.rates = rate_rows(outcomes, config.nominal_levels);
    report.blocks.push_back(std::move(block));
  }
  return report;
}

McReport power_study(const McConfig& config) {
  config.validate();
  if (config.study != McStudy::power)
    throw std::invalid_argument("power_study: config.study mismatch");

  const int n = config.sample_sizes.front();
  const int reps = config.replications;

  McReport report;
  report.study = McStudy::power;

  for (std::size_t di = 0; di < config.power_grid.size(); ++di) {
    const double delta = config.power_grid[di];

    ModelOrder gen_order, fit_order;
    ParamVector gen_params;
    if (config.scenario == 1) {
      gen_order = {1, 1, 1, 1, 12};
      gen_params.beta = -1.0;
      gen_params.ar = {-0.5};
      gen_params.ma = {delta};
      gen_params.sar = {0.3};
      gen_params.sma = {-0.35};
      gen_params.precision = 120.0;
      fit_order = {1, 0, 1, 1, 12};
    } else {
      gen_order = {2, 1, 1, 1, 12};
      gen_params.beta = -1.0;
      gen_params.ar = {-0.5, -delta};
      gen_params.ma = {0.4};
      gen_params.sar = {0.3};
      gen_params.sma = {-0.35};
      gen_params.precision = 120.0;
      fit_order = {1, 1, 1, 1, 12};
    }

    std::vector<TestOutcome> outcomes(reps);
    run_replications(reps, config.threads, [&](int rep) {
      std::mt19937_64 rng =
          make_stream(config.seed, stream_id(kPowerSalt, di, rep));
      outcomes[rep] =
          test_replication(gen_order, gen_params, fit_order, n, rng, config);
    });

    McReport::Block block;
    block.n = n;
    block.delta = delta;
    for (const TestOutcome& o : outcomes) block.completed += o.converged ? 1 : 0;
    block.failed = reps - block.completed;
    block.rates = rate_rows(outcomes, config.nominal_levels);
    report.blocks.push_back(std::move(block));
  }
  return report;
}

std::string McReport::to_text() const {
  std::ostringstream os;
  const char* title = study == McStudy::estimation ? "estimation"
                      : study == McStudy::size     ? "size"
                                                   : "power";
  os << "Monte Carlo " << title << " study\n";
  for (const Block& block : blocks) {
    os << "\n";
    if (study == McStudy::power)
      os << "n = " << block.n << ", delta = " << format_fixed(block.delta) << "\n";
    else
      os << "n = " << block.n << "\n";
    os << "completed = " << block.completed << ", non-converged = " << block.failed
       << "\n";
    if (study == McStudy::estimation) {
      os << " parameter       truth        mean        bias         RB%"
            "          SD         MSE\n";
      for (const McEstimationRow& row : block.estimation) {
        char name[16];
        std::snprintf(name, sizeof name, " %-10s", row.param.c_str());
        os << name << format_fixed(row.truth) << "  " << format_fixed(row.mean)
           << "  " << format_fixed(row.bias) << "  " << format_fixed(row.rb_percent)
           << "  " << format_fixed(row.sd) << "  " << format_fixed(row.mse) << "\n";
      }
    } else {
      os << " test             level        rate\n";
      for (const McRateRow& row : block.rates) {
        char name[16];
        std::snprintf(name, sizeof name, " %-12s", row.test.c_str());
        os << name << format_fixed(row.level) << "  " << format_fixed(row.rate)
           << "\n";
      }
    }
  }
  return os.str();
}

std::string McReport::to_csv() const {
  std::ostringstream os;
  if (study == McStudy::estimation) {
    os << "n,param,truth,mean,bias,rb_percent,sd,mse,completed,failed\n";
    for (const Block& block : blocks)
      for (const McEstimationRow& row : block.estimation)
        os << block.n << ',' << row.param << ',' << format_full(row.truth) << ','
           << format_full(row.mean) << ',' << format_full(row.bias) << ','
           << format_full(row.rb_percent) << ',' << format_full(row.sd) << ','
           << format_full(row.mse) << ',' << block.completed << ','
           << block.failed << "\n";
  } else {
    os << "n,delta,test,level,rate,completed,failed\n";
    for (const Block& block : blocks)
      for (const McRateRow& row : block.rates)
        os << block.n << ',' << format_full(block.delta) << ',' << row.test << ','
           << format_full(row.level) << ',' << format_full(row.rate) << ','
           << block.completed << ',' << block.failed << "\n";
  }
  return os.str();
}

}  // namespace bsarma
