#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bsarma/diagnostics.hpp"
#include "bsarma/estimation.hpp"
#include "bsarma/forecast.hpp"
#include "bsarma/montecarlo.hpp"
#include "bsarma/rng.hpp"
#include "bsarma/special_functions.hpp"

namespace bsarma::cli {

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string full17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Paper-style p-value display: values below 1e-4 print as "<0.0001".
std::string pvalue4(double p) {
  if (p < 1e-4) return "<0.0001";
  return fixed4(p);
}

ModelOrder parse_order(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      parts.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("malformed order component '" + item + "' in '" + text + "'");
    }
  }
  if (parts.size() != 5)
    throw UsageError("order must be five comma-separated integers p,q,P,Q,S, got '" +
                     text + "'");
  ModelOrder order{parts[0], parts[1], parts[2], parts[3], parts[4]};
  try {
    order.validate();
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid order: ") + e.what());
  }
  return order;
}

// Published simulation design for the default (1,1)x(1,1)_12 order.
ParamVector default_study_design() {
  ParamVector params;
  params.beta = -1.0;
  params.ar = {-0.5};
  params.sar = {0.3};
  params.ma = {0.4};
  params.sma = {-0.35};
  params.precision = 120.0;
  return params;
}

ParamVector params_from_flags(const CliConfig& config, bool require) {
  if (!config.params.empty()) {
    Eigen::VectorXd values(config.params.size());
    for (std::size_t i = 0; i < config.params.size(); ++i)
      values[i] = config.params[i];
    if (values.size() != config.order.dimension())
      throw UsageError("--params needs " + std::to_string(config.order.dimension()) +
                       " values (beta, ar.., sar.., ma.., sma.., precision)");
    return unflatten(config.order, values);
  }
  const ModelOrder d = config.order;
  if (d.p == 1 && d.q == 1 && d.P == 1 && d.Q == 1 && d.S == 12)
    return default_study_design();
  if (require)
    throw UsageError("--params is required for orders other than 1,1,1,1,12");
  ParamVector zero;
  zero.ar.assign(d.p, 0.0);
  zero.ma.assign(d.q, 0.0);
  zero.sar.assign(d.P, 0.0);
  zero.sma.assign(d.Q, 0.0);
  zero.precision = 120.0;
  return zero;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string fit_report(const FittedModel& fitted, int b, double level) {
  std::ostringstream os;
  const ModelOrder& o = fitted.order;
  os << "beta SARMA(" << o.p << "," << o.q << ")x(" << o.P << "," << o.Q << ")["
     << o.S << "] fit, link = " << fitted.link.name << "\n";
  os << "n = " << fitted.n() << ", conditioning observations m = " << fitted.m()
     << ", k = " << fitted.k() << "\n";
  os << "converged = " << (fitted.converged ? "yes" : "no")
     << ", iterations = " << fitted.iterations << "\n\n";

  const std::vector<std::string> names = param_names(o);
  const Eigen::VectorXd estimates = flatten(fitted.estimates);

  os << " parameter     estimate   std.error     z stat.     p-value\n";
  for (int i = 0; i < fitted.k(); ++i) {
    char row[160];
    if (fitted.covariance_ok) {
      const WaldZ wz = wald_z(fitted, i, 0.0);
      const double se = std::sqrt(fitted.covariance(i, i));
      std::snprintf(row, sizeof row, " %-10s %11s %11s %11s %11s\n",
                    names[i].c_str(), fixed4(estimates[i]).c_str(),
                    fixed4(se).c_str(), fixed4(wz.z).c_str(),
                    pvalue4(wz.p_value).c_str());
    } else {
      std::snprintf(row, sizeof row, " %-10s %11s %11s %11s %11s\n",
                    names[i].c_str(), fixed4(estimates[i]).c_str(), "--", "--",
                    "--");
    }
    os << row;
  }

  if (fitted.covariance_ok) {
    os << "\n " << fixed4(100.0 * level) << "% confidence intervals\n";
    for (int i = 0; i < fitted.k(); ++i) {
      const auto [lo, hi] = confidence_interval(fitted, i, level);
      char row[160];
      std::snprintf(row, sizeof row, " %-10s [%s, %s]\n", names[i].c_str(),
                    fixed4(lo).c_str(), fixed4(hi).c_str());
      os << row;
    }
  } else {
    os << "\nstandard errors unavailable: information matrix is singular\n";
  }

  const Deviance dev = deviance(fitted);
  const InformationCriteria ic = information_criteria(fitted);
  os << "\nLog-likelihood = " << fixed4(fitted.loglik) << "\n";
  os << "Deviance = " << fixed4(dev.statistic)
     << " (scaled = " << fixed4(dev.scaled) << ")\n";
  os << "MAIC = " << fixed4(ic.maic) << "   MSIC = " << fixed4(ic.msic)
     << "   MHQ = " << fixed4(ic.mhq) << "\n";

  if (o.P + o.Q >= 1 && fitted.covariance_ok) {
    const SeasonalityTest st = seasonality_test(fitted);
    os << "Seasonality test: W = " << fixed4(st.statistic) << ", df = " << st.df
       << ", p-value = " << pvalue4(st.p_value) << "\n";
  } else if (o.P + o.Q >= 1) {
    os << "Seasonality test: unavailable (singular information matrix)\n";
  } else {
    os << "Seasonality test: not applicable (P = Q = 0)\n";
  }

  const ResidualSeries resid = residuals(fitted, ResidualKind::weighted);
  const WhiteNoiseResult q1 = ljung_box(resid, o, b);
  const WhiteNoiseResult q2 = monti(resid, o, b);
  os << "Ljung-Box test: Q1 = " << fixed4(q1.statistic) << ", b = " << q1.b
     << ", df = " << q1.df << ", p-value = " << pvalue4(q1.p_value) << "\n";
  os << "Monti test: Q2 = " << fixed4(q2.statistic) << ", b = " << q2.b
     << ", df = " << q2.df << ", p-value = " << pvalue4(q2.p_value) << "\n";
  return os.str();
}

int run_fit(const CliConfig& config, std::ostream& out) {
  const SeriesData series = read_series(config.input);
  const FittedModel fitted =
      fit(config.order, series, {}, link_by_name(config.link));
  const int b =
      config.b > 0 ? config.b : default_portmanteau_lags(config.order);
  const std::string report = fit_report(fitted, b, config.level);
  out << report;
  if (!config.output.empty()) write_file(config.output, report);
  return fitted.converged || config.allow_nonconverged ? 0 : 3;
}

int run_diagnose(const CliConfig& config, std::ostream& out) {
  if (config.output.empty())
    throw UsageError("diagnose needs --output DIR for the CSV artifacts");
  const SeriesData series = read_series(config.input);
  const FittedModel fitted =
      fit(config.order, series, {}, link_by_name(config.link));
  const int b =
      config.b > 0 ? config.b : default_portmanteau_lags(config.order);

  std::filesystem::create_directories(config.output);
  const std::filesystem::path dir(config.output);

  const std::string report = fit_report(fitted, b, config.level);
  out << report;
  write_file((dir / "report.txt").string(), report);

  const int n = fitted.n();
  const int m = fitted.m();
  const ResidualSeries r1 = residuals(fitted, ResidualKind::standardized);
  const ResidualSeries r2 = residuals(fitted, ResidualKind::predictor_scale);
  const ResidualSeries rw = residuals(fitted, ResidualKind::weighted);

  {
    std::ostringstream csv;
    const bool dated = !series.labels.empty();
    csv << "t," << (dated ? "date," : "")
        << "y,mu,residual_standardized,residual_predictor,residual_weighted\n";
    for (int t = m; t < n; ++t) {
      csv << (t + 1) << ',';
      if (dated) csv << series.labels[t] << ',';
      csv << full17(series.values[t]) << ',' << full17(fitted.path.mu[t]) << ','
          << full17(r1.values[t - m]) << ',' << full17(r2.values[t - m]) << ','
          << full17(rw.values[t - m]) << "\n";
    }
    write_file((dir / "residuals.csv").string(), csv.str());
  }

  {
    const std::vector<double> rho = acf(rw.values, b);
    const std::vector<double> part = pacf(rw.values, b);
    const double band = 1.96 / std::sqrt(static_cast<double>(n - m));
    std::ostringstream csv;
    csv << "lag,acf,pacf,band_lower,band_upper\n";
    for (int i = 1; i <= b; ++i)
      csv << i << ',' << full17(rho[i]) << ',' << full17(part[i]) << ','
          << full17(-band) << ',' << full17(band) << "\n";
    write_file((dir / "acf.csv").string(), csv.str());
  }

  {
    std::vector<double> sorted = rw.values;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream csv;
    csv << "theoretical,sample\n";
    const int count = static_cast<int>(sorted.size());
    for (int i = 0; i < count; ++i) {
      const double prob = (i + 0.5) / count;
      csv << full17(normal_quantile(prob)) << ',' << full17(sorted[i]) << "\n";
    }
    write_file((dir / "qq.csv").string(), csv.str());
  }

  return fitted.converged || config.allow_nonconverged ? 0 : 3;
}

int run_forecast(const CliConfig& config, std::ostream& out) {
  const SeriesData full = read_series(config.input);
  const int holdout = config.holdout;
  if (holdout < 0) throw UsageError("--holdout must be nonnegative");
  if (holdout >= full.size())
    throw std::runtime_error("holdout leaves no observations to fit on");

  SeriesData train;
  train.values.assign(full.values.begin(), full.values.end() - holdout);
  if (!full.labels.empty())
    train.labels.assign(full.labels.begin(), full.labels.end() - holdout);

  const FittedModel fitted =
      fit(config.order, train, {}, link_by_name(config.link));

  const int horizon =
      config.horizon > 0 ? config.horizon : (holdout > 0 ? holdout : 12);
  const ForecastResult fc = forecast(fitted, horizon);

  std::ostringstream csv;
  const bool dated = !full.labels.empty();
  csv << "step" << (dated ? ",date" : "") << ",forecast"
      << (holdout > 0 ? ",actual" : "") << "\n";
  for (int h = 0; h < horizon; ++h) {
    csv << (h + 1);
    const int source = train.size() + h;  // row in the full series, 0-based
    if (dated) csv << ',' << (source < full.size() ? full.labels[source] : "");
    csv << ',' << full17(fc.means[h]);
    if (holdout > 0)
      csv << ','
          << (source < full.size() ? full17(full.values[source]) : "");
    csv << "\n";
  }
  if (!config.output.empty()) write_file(config.output, csv.str());
  else out << csv.str();

  if (holdout > 0) {
    const int scored = std::min(holdout, horizon);
    const Accuracy acc =
        accuracy(std::span(fc.means).first(scored),
                 std::span(full.values).subspan(train.size(), scored));
    out << "holdout = " << scored << ", MSE = " << full17(acc.mse)
        << ", MAPE = " << full17(acc.mape) << "\n";
  }
  return fitted.converged || config.allow_nonconverged ? 0 : 3;
}

int run_simulate(const CliConfig& config, std::ostream& out) {
  const ParamVector params = params_from_flags(config, /*require=*/false);
  std::mt19937_64 rng = make_stream(config.seed);
  const SeriesData series =
      simulate_series(config.order, params, config.n, rng, -1,
                      link_by_name(config.link));
  std::ostringstream csv;
  csv << "y\n";
  for (double y : series.values) csv << full17(y) << "\n";
  if (!config.output.empty()) write_file(config.output, csv.str());
  else out << csv.str();
  return 0;
}

int run_mc_study(const CliConfig& config, std::ostream& out) {
  McConfig mc;
  mc.order = config.order;
  mc.true_params = params_from_flags(config, /*require=*/true);
  mc.sample_sizes = config.sizes.empty() ? std::vector<int>{500} : config.sizes;
  mc.replications = config.replications;
  mc.seed = config.seed;
  mc.portmanteau_lags = config.b;
  mc.scenario = config.scenario;
  mc.threads = config.threads;
  mc.power_grid = config.deltas;

  McReport report;
  if (config.study == "estimation") {
    mc.study = McStudy::estimation;
    report = estimation_study(mc);
  } else if (config.study == "size") {
    mc.study = McStudy::size;
    report = size_study(mc);
  } else if (config.study == "power") {
    mc.study = McStudy::power;
    if (mc.power_grid.empty()) mc.power_grid = {0.1, 0.3, 0.6};
    report = power_study(mc);
  } else {
    throw UsageError("--study must be one of estimation, size, power");
  }

  out << report.to_text();
  if (!config.output.empty()) write_file(config.output, report.to_csv());
  return 0;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CliConfig config;
  std::string order_text;

  CLI::App app{"beta seasonal ARMA modeling toolkit"};
  app.name("bsarma");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool needs_input, bool needs_order = true) {
    auto* order_opt =
        cmd->add_option("--order", order_text, "model order p,q,P,Q,S");
    if (needs_order) order_opt->required();
    cmd->add_option("--link", config.link, "link function (logit)");
    auto* in = cmd->add_option("--input", config.input, "input CSV path");
    if (needs_input) in->required();
    cmd->add_option("--output", config.output, "output path");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a model to a series");
  add_common(fit_cmd, true);
  fit_cmd->add_option("--b", config.b, "portmanteau lags, default max(10,2S)");
  fit_cmd->add_option("--level", config.level, "confidence level");
  fit_cmd->add_flag("--allow-nonconverged", config.allow_nonconverged);

  CLI::App* diag_cmd =
      app.add_subcommand("diagnose", "fit plus residual/ACF/QQ artifacts");
  add_common(diag_cmd, true);
  diag_cmd->add_option("--b", config.b, "portmanteau lags, default max(10,2S)");
  diag_cmd->add_option("--level", config.level, "confidence level");
  diag_cmd->add_flag("--allow-nonconverged", config.allow_nonconverged);

  CLI::App* fc_cmd = app.add_subcommand("forecast", "out-of-sample forecasts");
  add_common(fc_cmd, true);
  fc_cmd->add_option("--holdout", config.holdout,
                     "observations held out for forecast evaluation");
  fc_cmd->add_option("--horizon", config.horizon, "steps ahead");
  fc_cmd->add_flag("--allow-nonconverged", config.allow_nonconverged);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a series");
  add_common(sim_cmd, false);
  sim_cmd->add_option("--n", config.n, "series length");
  sim_cmd->add_option("--seed", config.seed, "RNG seed");
  sim_cmd->add_option("--params", config.params,
                      "true parameters (beta, ar.., sar.., ma.., sma.., precision)")
      ->delimiter(',');

  CLI::App* mc_cmd = app.add_subcommand("mc-study", "Monte Carlo study");
  add_common(mc_cmd, false, /*needs_order=*/false);
  mc_cmd->add_option("--study", config.study, "estimation, size, or power");
  mc_cmd->add_option("--replications", config.replications, "replications R");
  mc_cmd->add_option("--seed", config.seed, "RNG seed");
  mc_cmd->add_option("--sizes", config.sizes, "sample sizes")->delimiter(',');
  mc_cmd->add_option("--deltas", config.deltas, "power study delta grid")
      ->delimiter(',');
  mc_cmd->add_option("--scenario", config.scenario, "power scenario, 1 or 2");
  mc_cmd->add_option("--params", config.params,
                     "true parameters (beta, ar.., sar.., ma.., sma.., precision)")
      ->delimiter(',');
  mc_cmd->add_option("--b", config.b, "portmanteau lags override");
  mc_cmd->add_option("--threads", config.threads, "worker threads, 0 = auto");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    config.command = "help";
    config.help_text = app.help();
    return config;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (CLI::App* cmd : {fit_cmd, diag_cmd, fc_cmd, sim_cmd, mc_cmd}) {
    if (cmd->parsed()) {
      config.command = cmd->get_name();
      break;
    }
  }
  if (!order_text.empty()) config.order = parse_order(order_text);
  return config;
}

SeriesData read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  auto next_line = [&](std::string& line) -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw std::runtime_error("empty input file: " + path);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);

  bool dated;
  if (line == "y") dated = false;
  else if (line == "date,y") dated = true;
  else
    throw std::runtime_error("expected header 'y' or 'date,y', got '" + line + "'");

  SeriesData series;
  int line_no = 1;
  while (next_line(line)) {
    ++line_no;
    std::string date, value_text = line;
    if (dated) {
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected 'date,y'");
      date = line.substr(0, comma);
      value_text = line.substr(comma + 1);
    }
    char* end = nullptr;
    const double y = std::strtod(value_text.c_str(), &end);
    if (end == value_text.c_str() || *end != '\0')
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": cannot parse '" + value_text + "'");
    if (!(y > 0.0 && y < 1.0))
      throw std::domain_error("line " + std::to_string(line_no) + ": value " +
                              value_text + " must lie strictly inside (0,1)");
    series.values.push_back(y);
    if (dated) series.labels.push_back(date);
  }
  if (series.values.empty())
    throw std::runtime_error("no observations in " + path);
  return series;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "help") {
      out << config.help_text;
      return 0;
    }
    if (config.command == "fit") return run_fit(config, out);
    if (config.command == "diagnose") return run_diagnose(config, out);
    if (config.command == "forecast") return run_forecast(config, out);
    if (config.command == "simulate") return run_simulate(config, out);
    if (config.command == "mc-study") return run_mc_study(config, out);
    err << "unknown command: " << config.command << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliConfig config;
  try {
    config = parse_args(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nrun 'bsarma --help' for usage\n";
    return 2;
  }
  return run(config, out, err);
}

}  // namespace bsarma::cli
