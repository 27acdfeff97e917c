#include <gtest/gtest.h>

#include <sys/wait.h>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support/bridge.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CQED_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cqed_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name), std::ios::binary) << body;
    return path(name);
  }

  fs::path dir_;
};

const std::string kDevice = bridge::fixture("two_qubit_chip.json");

}  // namespace

TEST_F(Cli, AnalyzePassesAndIsByteIdentical) {
  const auto a = path("a.json"), b = path("b.json");
  EXPECT_EQ(run("analyze " + kDevice + " --json " + a).code, 0);
  EXPECT_EQ(run("analyze " + kDevice + " --json " + b).code, 0);
  const auto ta = bridge::slurp(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, bridge::slurp(b));
}

TEST_F(Cli, DigestMatchesInputBytes) {
  const auto doc = json::parse(run("analyze " + kDevice).out);
  const std::string digest = doc.at("provenance").at("input_sha256");
  EXPECT_EQ(digest.size(), 64u);
  // same content, different whitespace: different bytes, different digest
  const auto copy = write("spaced.json", bridge::slurp(kDevice) + "\n\n");
  const auto other = json::parse(run("analyze " + copy).out);
  EXPECT_NE(other.at("provenance").at("input_sha256"), digest);
  const auto same = write("same.json", bridge::slurp(kDevice));
  EXPECT_EQ(json::parse(run("analyze " + same).out).at("provenance").at("input_sha256"), digest);
  const auto empty = write("empty.json", "");
  EXPECT_EQ(run("analyze " + empty).code, 2);
}

TEST_F(Cli, TextReport) {
  const auto r = run("analyze " + kDevice + " --text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("== qubits =="), std::string::npos);
  EXPECT_NE(r.out.find("overall_pass: yes"), std::string::npos);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
}

TEST_F(Cli, StrictThresholdsExitOne) {
  EXPECT_EQ(run("analyze " + kDevice + " --thresholds " + bridge::fixture("thresholds_strict.json")).code, 1);
  const auto bad = write("bad.json", R"({"unknown_rule": 1})");
  EXPECT_EQ(run("analyze " + kDevice + " --thresholds " + bad).code, 2);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("analyze " + path("missing.json")).code, 2);
  EXPECT_EQ(run("analyze " + write("x.json", R"({"qubits": [], "extra": 1})")).code, 2);
  EXPECT_EQ(run("analyze " + write("y.json", "{not json")).code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("analyze").code, 2);
}

TEST_F(Cli, CheckReplaysRules) {
  const auto report = path("r.json");
  ASSERT_EQ(run("analyze " + kDevice + " --json " + report).code, 0);
  const auto pass = run("check " + report);
  EXPECT_EQ(pass.code, 0);
  EXPECT_TRUE(json::parse(pass.out).at("overall_pass").get<bool>());
  const auto fail = run("check " + report + " --thresholds " + bridge::fixture("thresholds_strict.json"));
  EXPECT_EQ(fail.code, 1);
  EXPECT_EQ(run("check " + write("junk.json", "{}")).code, 2);
}

TEST_F(Cli, TuneCurveCsv) {
  const auto csv = path("q2.csv");
  ASSERT_EQ(run("tune-curve " + kDevice + " --element q2 --points 201 --csv " + csv).code, 0);
  std::istringstream in(bridge::slurp(csv));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "flux_phi0,e01_ghz,anharmonicity_ghz");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    std::array<double, 3> r{};
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]), 3) << line;
    rows.push_back(r);
  }
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_EQ(rows.front()[0], -0.5);
  EXPECT_EQ(rows.back()[0], 0.5);
  EXPECT_NEAR(rows[100][1], 5.16, 0.0516);
  EXPECT_NEAR(rows.front()[1], rows.back()[1], 1e-9);
  EXPECT_LT(rows[100][2], 0.0);
  EXPECT_EQ(run("tune-curve " + kDevice + " --element q1").code, 2);
  EXPECT_EQ(run("tune-curve " + kDevice + " --element q9").code, 2);
  EXPECT_EQ(run("tune-curve " + kDevice + " --element q2 --points 1").code, 2);
}

TEST_F(Cli, CapmatrixReduceAndExtract) {
  const auto m = bridge::fixture("three_net.csv");
  const auto reduced = run("capmatrix " + m + " --keep q1,q2");
  EXPECT_EQ(reduced.code, 0);
  EXPECT_EQ(reduced.out, "# units: fF\nq1,q2\n110,-20\n-20,120\n");
  const auto ext = run("capmatrix " + m + " --keep q1,q2 --ground 0");
  ASSERT_EQ(ext.code, 0);
  const auto doc = json::parse(ext.out);
  EXPECT_DOUBLE_EQ(doc.at("shunt_ff").at("q1").get<double>(), 90.0);
  EXPECT_DOUBLE_EQ(doc.at("shunt_ff").at("q2").get<double>(), 100.0);
  EXPECT_DOUBLE_EQ(doc.at("couplings_ff").at(0).at("capacitance_ff").get<double>(), 20.0);
  EXPECT_EQ(run("capmatrix " + write("bad.csv", "# units: fF\na,b\n1,5\n5,1\n")).code, 2);
  EXPECT_EQ(run("capmatrix " + m + " --keep zz").code, 2);
}

TEST_F(Cli, FitTargets) {
  const auto r = run("fit-targets --f01 4.43 --alpha 0.198");
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc.at("transmon").at("c_shunt_ff").get<double>(), 108.0, 5.4);
  EXPECT_NEAR(doc.at("transmon").at("ic_total_na").get<double>(), 30.0, 1.5);
  EXPECT_EQ(run("fit-targets --f01 4.43 --alpha 10").code, 2);
  EXPECT_EQ(run("fit-targets").code, 2);
  const auto res = run("fit-targets --resonator-f 6.55 --inductance 1.96");
  ASSERT_EQ(res.code, 0);
  EXPECT_NEAR(json::parse(res.out).at("resonator").at("c_total_ff").get<double>(), 744.0, 3.7);
}
