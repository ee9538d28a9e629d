#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "morgan/cli.hpp"
#include "support.hpp"

using namespace morgan;
using namespace support;
namespace fs = std::filesystem;

namespace {

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("morgan_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun solve_cmd(cli::SolveCommand cmd) {
  std::ostringstream out, err;
  int code = cli::run_solve(cmd, out, err);
  return {code, out.str(), err.str()};
}

CliRun verify_cmd(const std::string& sys, const std::string& sol, bool as_json = false) {
  std::ostringstream out, err;
  int code = cli::run_verify(sys, sol, as_json, out, err);
  return {code, out.str(), err.str()};
}

std::string write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
  return path;
}

}  // namespace

using CliTest = Scratch;

TEST(Analyze, Example1Text) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_analyze(data("example1.json"), false, out, err), cli::kOk);
  EXPECT_NE(out.str().find("controllability indices: (1,1,3,4)"), std::string::npos);
  EXPECT_NE(out.str().find("(1,1,3) (1,1,4) (1,1,5) (1,1,6) (1,1,7) (1,3,4) (1,3,5) (1,4,4) (2,3,4)"), std::string::npos);
  EXPECT_NE(out.str().find("{1} {2} {5} {9}"), std::string::npos);
  EXPECT_NE(out.str().find("search bound: 36"), std::string::npos);
}

TEST(Analyze, Example2Json) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_analyze(data("example2.json"), true, out, err), cli::kOk);
  json a = json::parse(out.str());
  EXPECT_EQ(a["sigma"], json({1, 2, 2, 2, 2}));
  EXPECT_EQ(a["tuples"].size(), 16u);
  EXPECT_EQ(a["row_configs"].size(), 10u);
  EXPECT_EQ(a["row_configs"][1]["s_positions"], json({1, 5}));
  EXPECT_EQ(a["search_bound"], 160);
}

TEST_F(CliTest, AnalyzeIdentityInputMatrix) {
  json sys = {{"A", {{0, 1}, {1, 0}}}, {"B", {{1, 0}, {0, 1}}}, {"C", {{1, 0}, {0, 1}}}};
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_analyze(write_json(path("s.json"), sys), true, out, err), cli::kOk);
  json a = json::parse(out.str());
  EXPECT_EQ(a["sigma"], json({1, 1}));
  EXPECT_EQ(a["tuples"], json({{1, 1}}));
}

TEST_F(CliTest, MalformedInputIsAnError) {
  std::ostringstream out, err;
  write_text(path("bad.json"), "{\"A\": [[1, \"x/2\"]]}");
  EXPECT_EQ(cli::run_analyze(path("bad.json"), false, out, err), cli::kError);
  EXPECT_FALSE(err.str().empty());
  json dims = {{"A", {{0, 1}, {0, 0}}}, {"B", {{0}, {1}}}, {"C", {{1, 0, 0}}}};
  EXPECT_EQ(cli::run_analyze(write_json(path("dims.json"), dims), false, out, err), cli::kError);
  EXPECT_EQ(cli::run_analyze(path("missing.json"), false, out, err), cli::kError);
}

TEST(Verify, PublishedExample1) {
  CliRun r = verify_cmd(data("example1.json"), data("example1_published.json"));
  EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS: H(s) = diag{1/(s^4+2s-3), 1/(s+3), 1/(s^4+s-1)}"), std::string::npos) << r.out;
}

TEST(Verify, PublishedExample2) {
  CliRun r = verify_cmd(data("example2.json"), data("example2_published.json"));
  EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS: H(s) = diag{1/(s+10), 1/(s+3), 1/(s+1)}"), std::string::npos) << r.out;
}

TEST_F(CliTest, PerturbedFeedbackFailsOffDiagonal) {
  json sol = parse_json(read_text(data("example1_published.json")), "published");
  StateSpace sys = example1();
  // A perturbation may keep H diagonal but move a pole, so record the expected diagonal.
  cli::VerifyReport good = cli::verify_solution(sys, sol);
  ASSERT_TRUE(good.pass);
  json recorded = json::array();
  for (const auto& h : good.diagonal) recorded.push_back(to_json(h));
  sol["diagonal"] = recorded;
  int off_diagonal = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      json bad = sol;
      bad["F"][i][j] = bad["F"][i][j].get<long>() + 1;
      cli::VerifyReport rep = cli::verify_solution(sys, bad);
      EXPECT_FALSE(rep.pass) << i << "," << j;
      if (rep.failure.rfind("off-diagonal entry", 0) == 0) {
        ++off_diagonal;
        RationalMatrix F = matrix_from_json(bad["F"], "F"), G = matrix_from_json(bad["G"], "G");
        auto h = oracle::transfer(sys.A + sys.B * F, sys.B * G, sys.C);
        bool nonzero = false;
        for (std::size_t r = 0; r < 3; ++r)
          for (std::size_t c = 0; c < 3; ++c) nonzero = nonzero || (r != c && !h.num[r][c].empty());
        EXPECT_TRUE(nonzero);
      }
    }
  EXPECT_GT(off_diagonal, 0);
  json bad = sol;
  bad["F"][0][0] = bad["F"][0][0].get<long>() + 1;
  CliRun r = verify_cmd(data("example1.json"), write_json(path("bad.json"), bad));
  EXPECT_EQ(r.code, cli::kError);
  EXPECT_NE(r.out.find("FAIL: off-diagonal entry ("), std::string::npos) << r.out;
}

TEST_F(CliTest, DiagonalPlantWithIdentityFeedback) {
  json sys = {{"A", {{-1, 0}, {0, -2}}}, {"B", {{1, 0}, {0, 1}}}, {"C", {{1, 0}, {0, 3}}}};
  json sol = {{"F", {{0, 0}, {0, 0}}}, {"G", {{1, 0}, {0, 1}}}};
  CliRun r = verify_cmd(write_json(path("s.json"), sys), write_json(path("f.json"), sol));
  EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
  EXPECT_NE(r.out.find("diag{1/(s+1), 3/(s+2)}"), std::string::npos) << r.out;
}

TEST_F(CliTest, SolveThenVerifyRoundTrip) {
  for (const char* name : {"example1.json", "example2.json"}) {
    cli::SolveCommand cmd;
    cmd.system_path = data(name);
    cmd.out_path = path("sol.json");
    CliRun s = solve_cmd(cmd);
    ASSERT_EQ(s.code, cli::kOk) << s.err;
    CliRun v = verify_cmd(data(name), path("sol.json"), true);
    EXPECT_EQ(v.code, cli::kOk) << v.out;
    json rep = json::parse(v.out);
    EXPECT_EQ(rep["status"], "PASS");
    json sol = parse_json(read_text(path("sol.json")), "sol");
    EXPECT_EQ(sol["status"], "solved");
    EXPECT_EQ(sol["seed"], kDefaultSeed);
    EXPECT_EQ(rep["diagonal"], sol["diagonal"]);
  }
}

TEST_F(CliTest, SolveWithTargetsRoundTrip) {
  cli::SolveCommand cmd;
  cmd.system_path = data("example2.json");
  cmd.dz_target = "s^2+3s+2";
  cmd.out_path = path("sol.json");
  ASSERT_EQ(solve_cmd(cmd).code, cli::kOk);
  json sol = parse_json(read_text(path("sol.json")), "sol");
  EXPECT_EQ(sol["fixed_poles"]["input_decoupling_zeros"]["display"], "s^2+3s+2");
  EXPECT_EQ(verify_cmd(data("example2.json"), path("sol.json")).code, cli::kOk);

  cli::SolveCommand diag;
  diag.system_path = data("example1.json");
  diag.diag_polys = "s^4+2s-3;s+3;s^4+s-1";
  diag.out_path = path("diag.json");
  ASSERT_EQ(solve_cmd(diag).code, cli::kOk);
  CliRun v = verify_cmd(data("example1.json"), path("diag.json"));
  EXPECT_NE(v.out.find("diag{1/(s^4+2s-3), 1/(s+3), 1/(s^4+s-1)}"), std::string::npos) << v.out;
}

TEST_F(CliTest, NoSolutionExitCode) {
  cli::SolveCommand cmd;
  cmd.system_path = data("zero_output_row.json");
  cmd.as_json = true;
  CliRun r = solve_cmd(cmd);
  EXPECT_EQ(r.code, cli::kNoSolution);
  json sol = json::parse(r.out);
  EXPECT_EQ(sol["status"], "no-solution");
  EXPECT_EQ(sol["audit"].size(), sol["search_bound"].get<std::size_t>());
  for (const auto& a : sol["audit"]) EXPECT_FALSE(a["reason"].get<std::string>().empty());
}

TEST_F(CliTest, ByteIdenticalOutputs) {
  cli::SolveCommand cmd;
  cmd.system_path = data("example2.json");
  cmd.all = true;
  cmd.out_path = path("a.json");
  ASSERT_EQ(solve_cmd(cmd).code, cli::kOk);
  cmd.out_path = path("b.json");
  ASSERT_EQ(solve_cmd(cmd).code, cli::kOk);
  cmd.jobs = 4;
  cmd.out_path = path("c.json");
  ASSERT_EQ(solve_cmd(cmd).code, cli::kOk);
  std::string a = read_text(path("a.json"));
  EXPECT_EQ(a, read_text(path("b.json")));
  EXPECT_EQ(a, read_text(path("c.json")));
}

TEST_F(CliTest, FixedPolesReport) {
  cli::SolveCommand cmd;
  cmd.system_path = data("example1.json");
  cmd.out_path = path("sol.json");
  ASSERT_EQ(solve_cmd(cmd).code, cli::kOk);
  std::ostringstream out, err;
  EXPECT_EQ(cli::run_fixed_poles(data("example1.json"), path("sol.json"), true, out, err), cli::kOk);
  json rep = json::parse(out.str());
  json sol = parse_json(read_text(path("sol.json")), "sol");
  EXPECT_EQ(rep["remaining_fixed_factor"]["coefficients"], sol["fixed_poles"]["fixed_decoupling_poles"]["coefficients"]);
  EXPECT_EQ(rep["input_decoupling_zeros"]["display"], "1");
}

TEST_F(CliTest, BadFlagsAreErrors) {
  cli::SolveCommand cmd;
  cmd.system_path = data("example1.json");
  cmd.dz_target = "s^2+";
  EXPECT_EQ(solve_cmd(cmd).code, cli::kError);
  cmd.dz_target.clear();
  cmd.diag_polys = "s+1";
  EXPECT_EQ(solve_cmd(cmd).code, cli::kError);
}
