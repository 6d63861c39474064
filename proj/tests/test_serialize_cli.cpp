#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mwc/serialize.hpp"

using namespace mwc;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the CLI binary with stdout captured to a file.
CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("mwc_cli_out_" + std::to_string(::getpid()) + "_" +
                                                    std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(MWC_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(out);
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("mwc_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST(Serialize, ComplexRoundTrip) {
  const Complex z(1.5, -2.25);
  EXPECT_EQ(complex_from_json(complex_to_json(z)), z);
  EXPECT_EQ(complex_from_json(json(3.0)), Complex(3.0));
  EXPECT_THROW(complex_from_json(json::parse("[1]")), std::invalid_argument);
  EXPECT_THROW(complex_from_json(json("x")), std::invalid_argument);
}

TEST(Serialize, MatrixRoundTrip) {
  CMatrix m(2, 3);
  m << 1, Complex(0, 2), 3, -4, 5.5, Complex(1e-300, -7);
  EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  EXPECT_EQ(matrix_from_json(json::parse("[[3,10],[2,7]]")), matrix_from_json(json::parse(R"({"rows":[[3,10],[2,7]]})")));
}

TEST(Serialize, MalformedMatricesRejected) {
  EXPECT_THROW(matrix_from_json(json::parse("[[1,2],[3]]")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(json::parse("[]")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"cols":[[1]]})")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(json::parse(R"([["a"]])")), std::invalid_argument);
}

TEST(Serialize, IntMatricesAndCurves) {
  EXPECT_EQ(int_matrix_from_json(json::parse(R"([[1,2],["-3","40000000000000000000"]])"))(1, 1),
            mpz_class("40000000000000000000"));
  EXPECT_THROW(int_matrix_from_json(json::parse("[[1.5]]")), std::invalid_argument);
  const IntMatrix m{{1, 2}, {3, 4}};
  EXPECT_EQ(int_matrix_from_json(to_json(m)), m);

  const auto samples = curve_samples_from_json(json::parse(
      R"({"samples":[{"t":0,"matrix":[[1,0],[0,1]]},{"t":1,"matrix":{"rows":[[3,10],[2,7]]}}]})"));
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[1].first, 1.0);
  EXPECT_EQ(samples[1].second(0, 1), Complex(10.0));
  EXPECT_THROW(curve_samples_from_json(json::parse(R"({"points":[]})")), std::invalid_argument);
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), std::invalid_argument);
}

TEST(Serialize, RunReportEnvelope) {
  RunReport r;
  r.command = "factor";
  r.argv = {"mwc", "factor"};
  r.seed = 7;
  r.status = "ok";
  const json j = r.to_json();
  for (const char* key : {"command", "argv", "seed", "tolerances", "status", "outcome", "citations"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["seed"], 7);
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    g_ = write_temp("g.json", "[[3,10],[2,7]]");
    upper_ = write_temp("upper.json", "[[1,5],[0,1]]");
    perm_ = write_temp("perm.json", "[[0,1],[1,0]]");
    not_sl2_ = write_temp("bad.json", "[[2,0],[0,1]]");
    ragged_ = write_temp("ragged.json", "[[1,2],[3]]");
  }
  static void TearDownTestSuite() {
    for (const auto& p : {g_, upper_, perm_, not_sl2_, ragged_}) fs::remove(p);
  }
  static inline std::string g_, upper_, perm_, not_sl2_, ragged_;
};

TEST_F(Cli, FactorExitCodes) {
  const CliResult ok = run_cli("factor --group sl2 --word 121 --target " + g_ + " --json");
  EXPECT_EQ(ok.exit_code, 0);
  const json j = json::parse(ok.out);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["command"], "factor");

  EXPECT_EQ(run_cli("factor --group sl2 --word 121 --target " + upper_).exit_code, 2);
  EXPECT_EQ(run_cli("factor --group sl2 --word 1212 --target " + upper_).exit_code, 0);
  const CliResult lu = run_cli("factor --group gln --n 2 --word 12 --target " + perm_ + " --json");
  EXPECT_EQ(lu.exit_code, 2);
  EXPECT_EQ(json::parse(lu.out)["outcome"]["failing_minor"], 1);
  EXPECT_EQ(run_cli("factor --group gln --n 2 --word 212 --target " + perm_).exit_code, 0);
  EXPECT_EQ(run_cli("factor --group sl2 --word 121 --target " + not_sl2_).exit_code, 1);
  EXPECT_EQ(run_cli("factor --group sl2 --word 121 --target " + ragged_).exit_code, 1);
}

TEST_F(Cli, CheckExitCodes) {
  EXPECT_EQ(run_cli("check --group sl2 --word 121212 --property irreducible").exit_code, 0);
  EXPECT_EQ(run_cli("check --group sl2 --word 12121 --property irreducible").exit_code, 3);
  EXPECT_EQ(run_cli("check --group torus2 --word 1212 --property irreducible").exit_code, 3);
  EXPECT_EQ(run_cli("check --group sl2 --word 12 --property dominant").exit_code, 3);
  EXPECT_EQ(run_cli("check --group sp2n --n 2 --word 121 --property dominant").exit_code, 4);
  EXPECT_EQ(run_cli("check --group sl2 --word 121 --property compact").exit_code, 1);
}

TEST_F(Cli, FiberTorusAndLift) {
  const CliResult fiber = run_cli("fiber --group sl2 --word 1212 --identity --starts 40 --json");
  EXPECT_EQ(fiber.exit_code, 0);
  EXPECT_EQ(json::parse(fiber.out)["outcome"]["unclassified"], 0);
  EXPECT_EQ(run_cli("torus-components --matrix \"[[1,2,1,2],[2,1,2,1]]\"").exit_code, 0);
  EXPECT_EQ(run_cli("torus-components --word 1212").exit_code, 0);
  EXPECT_EQ(run_cli("torus-components --matrix \"[[1,1],[2,2]]\"").exit_code, 1);
  EXPECT_EQ(run_cli("lift --group sl2 --word 1212 --builtin shear-path --steps 50").exit_code, 0);
  EXPECT_EQ(run_cli("lift --group sl2 --word 121 --builtin cross-locus").exit_code, 5);
}

TEST_F(Cli, JsonOutputIsDeterministic) {
  for (const std::string& args : std::vector<std::string>{"fiber --group sl2 --word 12121 --identity --starts 30 --seed 4 --json",
                                 "check --group sl2 --word 1221 --property dominant --json",
                                 "factor --group gln --n 2 --word one-param --target " + perm_ + " --json"}) {
    const CliResult a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.exit_code, b.exit_code) << args;
    EXPECT_FALSE(a.out.empty()) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
