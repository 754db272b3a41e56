#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "riskbound/cli.hpp"

namespace fs = std::filesystem;
using namespace riskbound::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "riskbound_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("sweep syntax") {
  CHECK(parse_sweep("0.5") == std::vector<double>{0.5});
  CHECK(parse_sweep("1,2,3") == std::vector<double>{1, 2, 3});
  const auto lin = parse_sweep("0:1:5");
  REQUIRE(lin.size() == 5);
  CHECK(lin[1] == doctest::Approx(0.25));
  CHECK(lin.back() == 1.0);
  const auto lg = parse_sweep("0.01:100:5", true);
  REQUIRE(lg.size() == 5);
  CHECK(lg[1] == doctest::Approx(0.1));
  CHECK(lg[2] == doctest::Approx(1.0));
  CHECK(std::isinf(parse_sweep("inf")[0]));
  CHECK(parse_sweep("-inf")[0] < 0);
  CHECK_THROWS((void)parse_sweep("abc"));
  CHECK_THROWS((void)parse_sweep("0:1:1"));
  CHECK_THROWS((void)parse_sweep("0:1:2.5"));
  CHECK_THROWS((void)parse_sweep("-1:1:3", true));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0 / 3) == "0.3333333333");
  CHECK(format_number(HUGE_VAL) == "inf");
  CHECK(format_number(-HUGE_VAL) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("golden outputs") {
  const fs::path golden = RISKBOUND_GOLDEN_DIR;
  const std::pair<const char*, std::vector<std::string>> cases[] = {
      {"bayes_linear.csv",
       {"bound", "bayes-linear", "--alpha", "0.1,0.5,1.5", "--sigma2", "1", "--es", "1", "--n0", "1"}},
      {"nonbayes_linear.csv",
       {"bound", "nonbayes-linear", "--alpha", "0.25:1:4", "--es", "1", "--n0", "1"}},
      {"bayes_ww.csv", {"bound", "bayes-ww", "--alpha", "1", "--gamma", "1", "--tau", "1"}},
      {"phase_roots.csv", {"phase", "roots", "--mu", "0.3", "--a", "1"}},
      {"phase_diagram.csv", {"phase", "diagram", "--mu", "0,0.3", "--a", "0.5,1"}},
  };
  for (const auto& [file, args] : cases) {
    INFO(file);
    const auto r = run(args);
    CHECK(r.code == kExitOk);
    CHECK(r.out == slurp(golden / file));
  }
}

TEST_CASE("column headers") {
  const auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  CHECK(first_line(run({"bound", "bayes-lpcb", "--alpha", "0.5", "--snr", "0.01"}).out) ==
        "alpha,snr,bound,beta,status");
  CHECK(first_line(run({"bound", "bayes-tilted", "--alpha", "0.2", "--es-over-n0", "1"}).out) ==
        "alpha,beta,bound,fisher_info,kl,status");
  CHECK(first_line(run({"phase", "exponent", "--a", "1", "--q-steps", "101", "--t-steps", "101",
                        "--theta-steps", "101"})
                       .out) == "a,E");
  CHECK(first_line(run({"verify", "bernoulli-exact", "--n", "20", "--a", "1", "--theta", "0.3"}).out) ==
        "n,a,theta,estimator,lambda,lambda_per_n,exponent");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bound"}).code == kExitUsage);
  CHECK(run({"bound", "bayes-linear", "--alpha", "x"}).code == kExitUsage);
  CHECK(run({"bound", "bayes-linear", "--nonsense", "1"}).code == kExitUsage);
  CHECK(run({"bound", "bayes-ww", "--alpha", "1"}).code == kExitUsage);
  const auto domain = run({"bound", "bayes-linear", "--alpha", "-1"});
  CHECK(domain.code == kExitDomain);
  CHECK(domain.err.find("error") != std::string::npos);
  CHECK(run({"verify", "mc", "--alpha-frac", "0.9"}).code == kExitDomain);
  CHECK(run({"verify", "mc", "--alpha", "0.1", "--alpha-frac", "0.1"}).code == kExitUsage);
}

TEST_CASE("config files") {
  const auto cfg = scratch("linear.cfg");
  {
    std::ofstream f(cfg);
    f << "# linear model\nalpha = 0.5\nsigma2 = 1\n--es = 1\nn0 = 1  # unit noise\n";
  }
  const auto entries = read_config(cfg.string());
  REQUIRE(entries.size() == 4);
  CHECK(entries[2].first == "es");
  CHECK(entries[3].second == "1");

  const auto from_cfg = run({"bound", "bayes-linear", "--config", cfg.string()});
  REQUIRE(from_cfg.code == kExitOk);
  CHECK(from_cfg.out.rfind("# config:", 0) == 0);
  CHECK(from_cfg.out.find("0.5,1,1,1,0.2027325541") != std::string::npos);

  // Flags on the command line win.
  const auto override_ = run({"bound", "bayes-linear", "--config", cfg.string(), "--alpha", "0.1"});
  CHECK(override_.out.find("0.1,1,1,1,0.03449643574") != std::string::npos);
  CHECK(override_.out.find("0.5,1,1,1") == std::string::npos);

  // No echo without a config file.
  CHECK(run({"bound", "bayes-linear", "--alpha", "0.5"}).out.rfind("alpha,", 0) == 0);
  CHECK(run({"bound", "bayes-linear", "--config", "/nonexistent.cfg"}).code != kExitOk);
}

TEST_CASE("determinism and output files") {
  const std::vector<std::string> mc = {"verify", "mc", "--alpha", "0.3", "--samples", "20000",
                                       "--seed", "5"};
  auto one = mc, four = mc;
  one.insert(one.begin(), {"--threads", "1"});
  four.insert(four.begin(), {"--threads", "4"});
  const auto a = run(one), b = run(four), c = run(one);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  const auto path = scratch("ww.csv");
  fs::remove(path);
  const auto r = run({"-o", path.string(), "bound", "bayes-ww", "--alpha", "1", "--gamma", "1",
                      "--tau", "1"});
  CHECK(r.code == kExitOk);
  CHECK(slurp(path) == slurp(fs::path(RISKBOUND_GOLDEN_DIR) / "bayes_ww.csv"));
}

TEST_CASE("plot scripts") {
  const auto lpcb = scratch("lpcb.csv");
  REQUIRE(run({"-o", lpcb.string(), "bound", "bayes-lpcb", "--alpha", "0.2,0.5,0.9", "--snr",
               "0.001,0.01,0.1"})
              .code == kExitOk);
  const auto script = run({"emit-plot", "--csv", lpcb.string(), "--ceiling", "5"});
  REQUIRE(script.code == kExitOk);
  CHECK(script.out.find("file = '" + lpcb.string() + "'") != std::string::npos);
  CHECK(script.out.find("$2 == 0.001") != std::string::npos);
  CHECK(script.out.find("$2 == 0.1") != std::string::npos);
  CHECK(script.out.find("set yrange [*:5]") != std::string::npos);
  CHECK(script.out == plot_script(lpcb.string(), 5.0));

  const auto diagram = scratch("diagram.csv");
  REQUIRE(run({"-o", diagram.string(), "phase", "diagram", "--mu", "0,0.3", "--a", "0.5,1"}).code ==
          kExitOk);
  CHECK(plot_script(diagram.string(), 10).find("with labels") != std::string::npos);

  const auto junk = scratch("junk.csv");
  {
    std::ofstream f(junk);
    f << "x,y\n1,2\n";
  }
  CHECK(run({"emit-plot", "--csv", junk.string()}).code == kExitDomain);
  CHECK(run({"emit-plot"}).code == kExitUsage);
}
