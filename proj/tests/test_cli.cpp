#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace bsarma;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bsarma_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int value = 0;
    return value;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int code;
  try {
    const cli::CliConfig config = cli::parse_args(args);
    code = cli::run(config, out, err);
  } catch (const cli::UsageError&) {
    code = 2;
  }
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

// A deterministic on-disk series for fit/diagnose/forecast commands.
std::string make_series_file(const TempDir& dir, int n, bool dated = false,
                             std::uint64_t seed = 7) {
  const std::string path = dir.file("series.csv");
  std::string simulated;
  run_cli({"simulate", "--order", "1,0,1,1,12", "--params",
           "0.1,0.4,0.5,0.3,90", "--n", std::to_string(n), "--seed",
           std::to_string(seed)},
          &simulated);
  if (!dated) {
    write_text(path, simulated);
    return path;
  }
  std::istringstream in(simulated);
  std::ostringstream out;
  std::string line;
  std::getline(in, line);
  out << "date,y\n";
  int row = 0;
  while (std::getline(in, line))
    if (!line.empty()) out << "2003-" << 1000 + row++ << "," << line << "\n";
  write_text(path, out.str());
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("parse_args: orders, commands, usage errors") {
  const cli::CliConfig fit_config =
      cli::parse_args({"fit", "--order", "1,0,1,1,12", "--input", "rh.csv"});
  CHECK(fit_config.command == "fit");
  CHECK(fit_config.order.p == 1);
  CHECK(fit_config.order.q == 0);
  CHECK(fit_config.order.P == 1);
  CHECK(fit_config.order.Q == 1);
  CHECK(fit_config.order.S == 12);
  CHECK(fit_config.input == "rh.csv");
  CHECK(fit_config.link == "logit");

  const cli::CliConfig sim_config = cli::parse_args(
      {"simulate", "--order", "1,1,1,1,12", "--seed", "7", "--n", "500"});
  CHECK(sim_config.command == "simulate");
  CHECK(sim_config.seed == 7);
  CHECK(sim_config.n == 500);

  CHECK_THROWS_AS(
      cli::parse_args({"fit", "--order", "1,0", "--input", "rh.csv"}),
      cli::UsageError);
  CHECK_THROWS_AS(
      cli::parse_args({"fit", "--order", "1,0,0,0,0", "--input", "x.csv"}),
      cli::UsageError);
  CHECK_THROWS_AS(cli::parse_args({"fit", "--order", "1,0,0,0,12"}),
                  cli::UsageError);  // missing input
  CHECK_THROWS_AS(cli::parse_args({"fit", "--order", "1,0,0,0,12", "--input",
                                   "x.csv", "--bogus"}),
                  cli::UsageError);
  CHECK_THROWS_AS(cli::parse_args({"frobnicate"}), cli::UsageError);
  CHECK_THROWS_AS(cli::parse_args({}), cli::UsageError);

  const cli::CliConfig help = cli::parse_args({"--help"});
  CHECK(help.command == "help");
  CHECK(help.help_text.find("bsarma") != std::string::npos);
}

TEST_CASE("read_series accepts y and date,y layouts and rejects bad rows") {
  TempDir dir;

  write_text(dir.file("plain.csv"), "y\n0.5\n0.6\n");
  const SeriesData plain = cli::read_series(dir.file("plain.csv"));
  CHECK(plain.values == std::vector<double>{0.5, 0.6});
  CHECK(plain.labels.empty());

  write_text(dir.file("dated.csv"), "date,y\n2003-01,0.5\n2003-02,0.61\n");
  const SeriesData dated = cli::read_series(dir.file("dated.csv"));
  CHECK(dated.values == std::vector<double>{0.5, 0.61});
  CHECK(dated.labels == std::vector<std::string>{"2003-01", "2003-02"});

  write_text(dir.file("boundary.csv"), "y\n0.5\n1.0\n0.4\n");
  CHECK_THROWS_WITH_AS(cli::read_series(dir.file("boundary.csv")),
                       doctest::Contains("line 3"), std::domain_error);

  write_text(dir.file("empty.csv"), "");
  CHECK_THROWS_AS(cli::read_series(dir.file("empty.csv")), std::runtime_error);

  write_text(dir.file("headeronly.csv"), "y\n");
  CHECK_THROWS_AS(cli::read_series(dir.file("headeronly.csv")),
                  std::runtime_error);

  write_text(dir.file("badheader.csv"), "value\n0.5\n");
  CHECK_THROWS_AS(cli::read_series(dir.file("badheader.csv")),
                  std::runtime_error);

  write_text(dir.file("garbage.csv"), "y\n0.5\npotato\n");
  CHECK_THROWS_WITH_AS(cli::read_series(dir.file("garbage.csv")),
                       doctest::Contains("line 3"), std::runtime_error);

  CHECK_THROWS_AS(cli::read_series(dir.file("missing.csv")),
                  std::runtime_error);
}

TEST_CASE("simulate writes a valid series and honors the seed") {
  TempDir dir;
  const std::string out_path = dir.file("sim.csv");
  std::string stdout_text;
  const int code = run_cli({"simulate", "--order", "1,1,1,1,12", "--seed", "7",
                            "--n", "100", "--output", out_path},
                           &stdout_text);
  CHECK(code == 0);
  const SeriesData series = cli::read_series(out_path);
  CHECK(series.size() == 100);

  // Byte-identical on repetition, different under another seed.
  const std::string first = read_text(out_path);
  run_cli({"simulate", "--order", "1,1,1,1,12", "--seed", "7", "--n", "100",
           "--output", out_path});
  CHECK(read_text(out_path) == first);
  run_cli({"simulate", "--order", "1,1,1,1,12", "--seed", "8", "--n", "100",
           "--output", out_path});
  CHECK(read_text(out_path) != first);
}

TEST_CASE("fit report carries the full table in canonical order") {
  TempDir dir;
  const std::string input = make_series_file(dir, 200);
  const std::string report_path = dir.file("report.txt");

  std::string stdout_text;
  const int code = run_cli({"fit", "--order", "1,0,1,1,12", "--input", input,
                            "--output", report_path},
                           &stdout_text);
  CHECK(code == 0);
  const std::string report = read_text(report_path);
  CHECK(report == stdout_text);

  // k = 5 parameter rows, in (beta, ar, sar, ma, sma, precision) order.
  const std::vector<std::string> names{"beta", "ar1", "sar1", "sma1",
                                       "precision"};
  std::size_t at = report.find(" parameter");
  REQUIRE(at != std::string::npos);
  for (const std::string& name : names) {
    const std::size_t next = report.find("\n " + name, at);
    REQUIRE_MESSAGE(next != std::string::npos, name);
    at = next;
  }
  CHECK(report.find("Log-likelihood") != std::string::npos);
  CHECK(report.find("Deviance") != std::string::npos);
  CHECK(report.find("MAIC") != std::string::npos);
  CHECK(report.find("Seasonality test") != std::string::npos);
  CHECK(report.find("Ljung-Box test") != std::string::npos);
  CHECK(report.find("Monti test") != std::string::npos);
  CHECK(report.find("confidence intervals") != std::string::npos);
}

TEST_CASE("diagnose writes the plotting artifacts") {
  TempDir dir;
  const std::string input = make_series_file(dir, 180);
  const std::string out_dir = dir.file("diag");

  const int code = run_cli({"diagnose", "--order", "1,0,1,1,12", "--input",
                            input, "--output", out_dir});
  CHECK(code == 0);
  CHECK(fs::exists(fs::path(out_dir) / "report.txt"));
  CHECK(fs::exists(fs::path(out_dir) / "residuals.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "acf.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "qq.csv"));

  const std::string acf_text = read_text((fs::path(out_dir) / "acf.csv").string());
  // header + b = max(10, 2*12) rows
  CHECK(std::count(acf_text.begin(), acf_text.end(), '\n') == 1 + 24);
  CHECK(acf_text.rfind("lag,acf,pacf,band_lower,band_upper", 0) == 0);

  const std::string resid_text =
      read_text((fs::path(out_dir) / "residuals.csv").string());
  // header + (n - m) rows
  CHECK(std::count(resid_text.begin(), resid_text.end(), '\n') == 1 + 180 - 13);

  // diagnose without --output is a usage error
  std::string err;
  const int bad = run_cli(
      {"diagnose", "--order", "1,0,1,1,12", "--input", input}, nullptr, &err);
  CHECK(bad == 2);
}

TEST_CASE("forecast splits the holdout and reports accuracy") {
  TempDir dir;
  const std::string input = make_series_file(dir, 178, /*dated=*/true);
  const std::string fc_path = dir.file("forecast.csv");

  std::string stdout_text;
  const int code =
      run_cli({"forecast", "--order", "1,0,1,1,12", "--input", input,
               "--holdout", "10", "--output", fc_path},
              &stdout_text);
  CHECK(code == 0);

  const std::string csv = read_text(fc_path);
  CHECK(csv.rfind("step,date,forecast,actual", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 10);
  // Labels of the held-out tail round-trip into the report: the training
  // set ends at row 168, so the first forecast row carries date index 1168.
  CHECK(csv.find("1,2003-1168,") != std::string::npos);
  CHECK(csv.find("10,2003-1177,") != std::string::npos);

  CHECK(stdout_text.find("holdout = 10") != std::string::npos);
  CHECK(stdout_text.find("MSE = ") != std::string::npos);
  CHECK(stdout_text.find("MAPE = ") != std::string::npos);

  // Horizon beyond the holdout leaves the actual column empty.
  const int code2 =
      run_cli({"forecast", "--order", "1,0,1,1,12", "--input", input,
               "--holdout", "10", "--horizon", "12", "--output", fc_path},
              &stdout_text);
  CHECK(code2 == 0);
  const std::string csv2 = read_text(fc_path);
  CHECK(std::count(csv2.begin(), csv2.end(), '\n') == 1 + 12);
  CHECK(csv2.find("12,,") != std::string::npos);  // no date, no actual
}

TEST_CASE("mc-study runs all three studies end to end") {
  TempDir dir;
  const std::string csv_path = dir.file("mc.csv");

  std::string text;
  int code = run_cli({"mc-study", "--study", "estimation", "--sizes", "60",
                      "--replications", "6", "--seed", "13", "--output",
                      csv_path},
                     &text);
  CHECK(code == 0);
  CHECK(text.find("Monte Carlo estimation study") != std::string::npos);
  const std::string csv = read_text(csv_path);
  CHECK(csv.rfind("n,param,truth,", 0) == 0);
  const std::string first_run = csv;

  // Determinism of the full pipeline.
  run_cli({"mc-study", "--study", "estimation", "--sizes", "60",
           "--replications", "6", "--seed", "13", "--output", csv_path});
  CHECK(read_text(csv_path) == first_run);

  code = run_cli({"mc-study", "--study", "size", "--sizes", "60",
                  "--replications", "5", "--seed", "3", "--b", "6",
                  "--output", csv_path},
                 &text);
  CHECK(code == 0);
  CHECK(read_text(csv_path).rfind("n,delta,test,level,rate", 0) == 0);

  code = run_cli({"mc-study", "--study", "power", "--scenario", "1", "--sizes",
                  "60", "--replications", "4", "--deltas", "0.2,0.5", "--seed",
                  "5", "--b", "6", "--output", csv_path},
                 &text);
  CHECK(code == 0);
  CHECK(text.find("power study") != std::string::npos);

  std::string err;
  code = run_cli({"mc-study", "--study", "banana"}, nullptr, &err);
  CHECK(code == 2);
}

TEST_CASE("runtime problems exit nonzero with a message") {
  TempDir dir;
  std::string err;
  const int code = run_cli({"fit", "--order", "1,0,1,1,12", "--input",
                            dir.file("absent.csv")},
                           nullptr, &err);
  CHECK(code == 1);
  CHECK(err.find("error:") != std::string::npos);
}

TEST_SUITE_END();
