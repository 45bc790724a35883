#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sparsecut_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with --out pointing at `out` (relative to the test directory).
  int run(const std::string& args, const std::string& out = ".") {
    const std::string cmd = "cd '" + dir_.string() + "' && '" SPARSECUT_CLI "' --out '" + out + "' " +
                            args + " > last.log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

  fs::path dir_;
};

// Value of the first line starting with `key `.
double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
  return -1.0;
}

const char* kPathEdge = "graphpair v1\nn 3\ng 0 1 1\ng 1 2 1\nh 0 2 1\n";

}  // namespace

TEST_F(Cli, SolveWritesWitnessThatVerifies) {
  write("pe.gp", kPathEdge);
  for (const std::string kind : {"spectral", "lr", "sdp"}) {
    ASSERT_EQ(run("solve " + kind + " pe.gp"), 0) << read("last.log");
    ASSERT_TRUE(exists("pe." + kind + ".witness"));
    EXPECT_EQ(run("verify pe.gp pe." + kind + ".witness"), 0) << read("last.log");
  }
  EXPECT_EQ(run("solve --kind sdp pe.gp"), 0);
  EXPECT_EQ(run("solve pe.gp"), 1);
  EXPECT_EQ(run("solve qp pe.gp"), 1);
}

TEST_F(Cli, VerifyRejectsCorruptedWitness) {
  write("pe.gp", kPathEdge);
  ASSERT_EQ(run("solve lr pe.gp"), 0);
  std::string w = read("pe.lr.witness");
  const auto pos = w.find("metric 0 1 ");
  ASSERT_NE(pos, std::string::npos);
  w.replace(pos, w.find('\n', pos) - pos, "metric 0 1 0.1");
  write("bad.witness", w);
  EXPECT_EQ(run("verify pe.gp bad.witness"), 3);
  EXPECT_NE(read("last.log").find("worst "), std::string::npos);
}

TEST_F(Cli, OracleGuard) {
  std::string text = "n 30\n";
  for (int v = 0; v + 1 < 30; ++v) text += "g " + std::to_string(v) + " " + std::to_string(v + 1) + " 1\n";
  text += "h 0 29 1\n";
  write("big.gp", text);
  EXPECT_EQ(run("oracle big.gp"), 1);
  EXPECT_NE(read("last.log").find("instance too large for oracle"), std::string::npos);
  write("pe.gp", kPathEdge);
  EXPECT_EQ(run("oracle pe.gp"), 0);
  EXPECT_NEAR(field(read("pe.oracle"), "sparsity"), 0.5, 1e-15);
}

TEST_F(Cli, DegenerateInputsAreValidationErrors) {
  write("empty.gp", "");
  write("noh.gp", "n 2\ng 0 1 1\n");
  write("neg.gp", "n 2\ng 0 1 -1\nh 0 1 1\n");
  write("pe.gp", kPathEdge);
  for (const std::string f : {"empty.gp", "noh.gp", "neg.gp", "missing.gp"}) {
    EXPECT_EQ(run("solve sdp " + f), 1) << f;
    EXPECT_EQ(run("round rank1 " + f + " --seed 1"), 1) << f;
    EXPECT_EQ(run("oracle " + f), 1) << f;
    EXPECT_EQ(run("mincut " + f + " --s 0 --t 1"), 1) << f;
    EXPECT_EQ(run("mix " + f + " --eps 0.1 --delta 0.2"), 1) << f;
    EXPECT_EQ(run("verify " + f + " pe.gp"), 1) << f;
  }
  EXPECT_EQ(run("round rank1 pe.gp --seed 1"), 1);   // demand not rank-1
  EXPECT_EQ(run("mincut pe.gp --s 0 --t 0"), 1);
  EXPECT_EQ(run("mix pe.gp --eps 0.6 --delta 0.5"), 1);
  EXPECT_EQ(run("gen random --n 5"), 1);             // seed is mandatory
  EXPECT_EQ(run("gen expander-clique --n 15 --d 3 --seed 1"), 1);
  EXPECT_EQ(run("suite nonsense --seed 1"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("oracle pe.gp --no-such-flag"), 1);
}

TEST_F(Cli, RoundAndMincutArtifacts) {
  ASSERT_EQ(run("gen expander-clique --n 10 --d 3 --seed 2 -o ec.gp"), 0) << read("last.log");
  ASSERT_EQ(run("round rank1 ec.gp --seed 7"), 0) << read("last.log");
  const std::string cert = read("ec.rank1.certificate");
  EXPECT_NE(cert.find("branch "), std::string::npos);
  EXPECT_NE(cert.find("bound_holds true"), std::string::npos);
  ASSERT_EQ(run("round rank1-approx ec.gp --approx ec.gp --seed 7"), 0) << read("last.log");
  EXPECT_NEAR(field(read("ec.rank1-approx.certificate"), "c1"), 1.0, 1e-12);
  write("pe.gp", kPathEdge);
  ASSERT_EQ(run("mincut pe.gp --s 0 --t 2"), 0) << read("last.log");
  const std::string flow = read("pe.flow");
  EXPECT_NEAR(field(flow, "epsilon"), 0.25, 1e-12);
  EXPECT_NEAR(field(flow, "flow_value"), 0.25, 1e-12);
  EXPECT_NEAR(field(flow, "flow 0 1"), 0.25, 1e-12);
}

TEST_F(Cli, MixWritesMixedInstance) {
  write("pe.gp", kPathEdge);
  ASSERT_EQ(run("mix pe.gp --eps 0.5 --delta 1"), 0) << read("last.log");
  EXPECT_NE(read("pe.mixed.gp").find("graphpair v1"), std::string::npos);
}

TEST_F(Cli, ArtifactsGoToOutDirectory) {
  ASSERT_EQ(run("gen lollipop --k 4 --seed 1", "arts"), 0) << read("last.log");
  EXPECT_TRUE(exists("arts/lollipop_k4_s1.gp"));
  EXPECT_TRUE(exists("arts/lollipop_k4_s1.witness"));
  EXPECT_EQ(run("verify arts/lollipop_k4_s1.gp arts/lollipop_k4_s1.witness"), 0) << read("last.log");
}

TEST_F(Cli, ByteIdenticalReruns) {
  for (const std::string out : {"a", "b"}) {
    const std::string cmds[] = {
        "gen random --n 9 --rank1 --seed 5 -o r.gp",
        "gen expander-clique --n 12 --d 3 --seed 5 -o e.gp",
        "gen lollipop --k 8 --seed 5 -o l.gp",
        "round rank1 " + out + "/r.gp --seed 5",
        "round rank1 " + out + "/e.gp --seed 5",
        "suite stcut --seed 5 --count 4",
        "suite rounding --seed 5 --count 3",
    };
    for (const std::string& c : cmds) ASSERT_EQ(run(c, out), 0) << c << "\n" << read("last.log");
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const std::string name = entry.path().filename().string();
    ASSERT_TRUE(exists("b/" + name)) << name;
    EXPECT_EQ(read("a/" + name), read("b/" + name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 8);
}
