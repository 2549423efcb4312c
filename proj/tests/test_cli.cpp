#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef NUMLAB_CLI
#error "NUMLAB_CLI must name the numeraire-lab binary"
#endif

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(NUMLAB_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("numlab-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    write("seg.json", R"({"points": [["1","1"], ["2","0"]], "g": ["1","1"]})");
    write("dom.json", R"({"points": [["1","1"], ["2","1"]]})");
    write("one.json", R"({"points": [["2","1/3","4"]]})");
    write("bad.json", "{");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes the report and runs verify on it.
  Outcome verify(const std::string& report) { return run("verify " + write("report.json", report)); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CheckNumeraire) {
  const auto r = run("check " + path("seg.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = r.json();
  EXPECT_EQ(j["verdict"], "numeraire");
  EXPECT_EQ(j["certificate"]["q"], Json::parse(R"(["1/2","1/2"])"));
  EXPECT_EQ(verify(r.out).code, 0);
}

TEST_F(Cli, CheckDominated) {
  const auto r = run("check " + path("dom.json") + " --g 1,1");
  ASSERT_EQ(r.code, 1);
  const auto j = r.json();
  EXPECT_EQ(j["reason"], "not-maximal");
  EXPECT_TRUE(j.contains("maximality_witness"));
  EXPECT_EQ(verify(r.out).code, 0);
}

TEST_F(Cli, CheckByIndexAndStrictPositivity) {
  EXPECT_EQ(run("check " + path("seg.json") + " --g-index 0").code, 0);
  const auto r = run("check " + path("seg.json") + " --g 2,0");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.json()["reason"], "not-strictly-positive");
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run("check " + path("missing.json")).code, 2);
  EXPECT_EQ(run("check " + path("bad.json") + " --g 1,1").code, 2);
  EXPECT_EQ(run("check " + path("dom.json")).code, 2);
  EXPECT_EQ(run("check " + path("seg.json") + " --g 3,3").code, 2);
  EXPECT_EQ(run("check " + path("seg.json") + " --g 1,x").code, 2);
  EXPECT_EQ(run("check " + path("seg.json") + " --g-index 7").code, 2);
  EXPECT_EQ(run("example --grid 1/3").code, 2);
  EXPECT_NE(run("no-such-command").code, 0);
}

TEST_F(Cli, ClosureExitCodes) {
  const auto bounded = run("closure " + path("seg.json"));
  EXPECT_EQ(bounded.code, 0);
  EXPECT_EQ(bounded.json()["closure"]["verdict"], "bounded");
  EXPECT_EQ(verify(bounded.out).code, 0);

  const auto unbounded = run("closure " + path("dom.json") + " --g 1,1");
  EXPECT_EQ(unbounded.code, 1);
  EXPECT_EQ(unbounded.json()["closure"]["ray"], Json::parse(R"(["1","0"])"));
  EXPECT_EQ(verify(unbounded.out).code, 0);

  EXPECT_EQ(run("closure " + path("one.json") + " --g-index 0").code, 0);
}

TEST_F(Cli, ProveExamples) {
  const auto ok = run("prove " + path("seg.json"));
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.json()["proof"]["pulled_back_q"], Json::parse(R"(["1/2","1/2"])"));
  EXPECT_EQ(verify(ok.out).code, 0);

  const auto bad = run("prove " + path("dom.json") + " --g 1,1");
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.json()["proof"]["first_failure"], "solid_hull/one_is_maximal");

  write("scaled.json", R"({"points": [["2","2"], ["4","0"]], "g": ["2","2"]})");
  const auto scaled = run("prove " + path("scaled.json"));
  EXPECT_EQ(scaled.code, 0);
  EXPECT_EQ(scaled.json()["proof"]["pulled_back_q"], Json::parse(R"(["1/2","1/2"])"));
}

TEST_F(Cli, ExampleGrids) {
  const auto a = run("example");
  ASSERT_EQ(a.code, 0);
  const auto ja = a.json();
  EXPECT_EQ(ja["threshold_gamma"], "1/81");
  EXPECT_EQ(ja["scenario"]["numeraire"], true);
  EXPECT_EQ(verify(a.out).code, 0);

  const auto b = run("example --grid 0,1/100,1/25,1/4,1");
  ASSERT_EQ(b.code, 0);
  const auto jb = b.json();
  EXPECT_EQ(jb["scenario"]["numeraire"], false);
  EXPECT_EQ(jb["scenario"]["closure"]["ray"], Json::parse(R"(["1/1000","1/10","109/100"])"));
  EXPECT_EQ(verify(b.out).code, 0);
}

TEST_F(Cli, ExampleFromModelFile) {
  write("model.json", R"({"p": ["1/2","1/4","1/4"], "xi": ["1/5","2","3"], "grid": ["0","1/9","1"]})");
  const auto r = run("example --model " + path("model.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["threshold_gamma"], "1/16");
  EXPECT_EQ(r.json()["scenario"]["numeraire"], true);
}

TEST_F(Cli, FuzzDeterministicAndClean) {
  const auto a = run("fuzz --seed 1 --count 40");
  const auto b = run("fuzz --seed 1 --count 40 --jobs 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.json()["summary"]["inconsistent"], 0);
  const auto empty = run("fuzz --count 0");
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.json()["summary"]["instances"], 0);
}

TEST_F(Cli, Oracle) {
  const auto r = run("oracle " + path("seg.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["agree"], true);
  EXPECT_EQ(verify(r.out).code, 0);
  EXPECT_EQ(run("oracle " + path("dom.json") + " --g 1,1").code, 0);
}

TEST_F(Cli, VerifyRejectsTampering) {
  auto j = run("check " + path("seg.json")).json();
  j["certificate"]["q"] = Json::parse(R"(["9/10","1/10"])");
  EXPECT_EQ(verify(j.dump()).code, 1);
  EXPECT_EQ(run("verify " + path("bad.json")).code, 2);
}

TEST_F(Cli, ReadsStdin) {
  const auto r = run("check - --g 1,1 < " + path("seg.json"));
  EXPECT_EQ(r.code, 0);
}
