#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "mpgreedy/io.hpp"

namespace fs = std::filesystem;
using namespace mpgreedy;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("mpgreedy_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (workdir() / name).string(); }

int cli(const std::string& args) {
  std::string cmd = std::string(MPGREEDY_CLI_PATH) + " " + args + " > " + at("last.log") + " 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Drops the echoed configuration, which records output paths.
std::string body(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# config.", 0) != 0) out += line + "\n";
  }
  return out;
}

class CleanUp : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(workdir()); }
};

const auto* const clean_up = ::testing::AddGlobalTestEnvironment(new CleanUp);

std::map<std::string, std::string> report(const std::string& path) {
  std::ifstream in(path);
  return io::parse_key_values(in);
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing key " + key);
  return std::stod(it->second);
}

// Runs the shared default pipeline once.
void pipeline() {
  static bool done = false;
  if (done) return;
  ASSERT_EQ(cli("constants --out " + at("c.txt")), 0);
  ASSERT_EQ(cli("solve_f --out_dir " + at("sf")), 0);
  ASSERT_EQ(cli("make_phi --f " + at("sf/f.csv") + " --out " + at("phi.csv") + " --report " + at("phi.txt")), 0);
  ASSERT_EQ(cli("build --phi " + at("phi.csv") + " --out " + at("inst.txt") + " --report " + at("build.txt")), 0)
      << slurp(at("last.log"));
  ASSERT_EQ(cli("run --instance " + at("inst.txt") + " --out " + at("trace.csv")), 0);
  ASSERT_EQ(cli("rate --trace " + at("trace.csv") + " --out " + at("rate.txt")), 0);
  done = true;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("constants --shrinkage 2"), 1);
  EXPECT_EQ(cli("no_such_command"), 1);
  EXPECT_EQ(cli("rate --trace " + at("missing.csv")), 1);
}

TEST(Cli, ShrinkageLimitConstants) {
  ASSERT_EQ(cli("constants --shrinkage 1e-6 --out " + at("c6.txt")), 0);
  double a = num(report(at("c6.txt")), "alpha");
  EXPECT_GE(a, 0.304);
  EXPECT_LE(a, 0.306);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  {
    std::ofstream cfg(at("cfg.txt"));
    cfg << "# defaults\nshrinkage=0.5\n";
  }
  ASSERT_EQ(cli("--config " + at("cfg.txt") + " constants --out " + at("cc.txt")), 0);
  auto kv = report(at("cc.txt"));
  EXPECT_EQ(num(kv, "shrinkage"), 0.5);
  ASSERT_EQ(cli("--config " + at("cfg.txt") + " constants --shrinkage 1 --out " + at("cc1.txt")), 0);
  EXPECT_EQ(num(report(at("cc1.txt")), "shrinkage"), 1.0);
  EXPECT_NE(slurp(at("cc1.txt")).find("# config.shrinkage=1"), std::string::npos);
}

TEST(Cli, DefaultPipelineReproducesTheRate) {
  pipeline();
  auto c = report(at("c.txt"));
  auto b = report(at("build.txt"));
  auto r = report(at("rate.txt"));
  double beta = num(b, "beta");
  EXPECT_LT(std::abs(beta - num(c, "beta_star")), 0.01);
  EXPECT_EQ(b.at("verify.pass"), "true");
  EXPECT_NEAR(num(r, "fit.slope"), -(0.5 - beta), 0.005);
  EXPECT_EQ(num(r, "fit.n_min"), 500);
  EXPECT_EQ(num(r, "fit.n_max"), 5000);
}

TEST(Cli, VerifyRejectsCorruptedSequences) {
  pipeline();
  ASSERT_EQ(cli("verify --instance " + at("inst.txt") + " --report " + at("v.txt")), 0);
  EXPECT_EQ(report(at("v.txt")).at("verify.pass"), "true");

  std::ifstream in(at("inst.txt"));
  std::ostringstream out;
  std::string line;
  bool seq = false, done = false;
  while (std::getline(in, line)) {
    if (line == "[sequences]") seq = true;
    if (seq && !done && line.rfind("2500,", 0) == 0) {
      auto parts = io::split(line, ',');
      double alpha = std::stod(parts[3]) + 1e-3;
      line = parts[0] + "," + parts[1] + "," + parts[2] + "," + io::fmt(alpha) + "," + parts[4];
      done = true;
    }
    out << line << "\n";
  }
  ASSERT_TRUE(done);
  {
    std::ofstream bad(at("bad.txt"));
    bad << out.str();
  }
  EXPECT_EQ(cli("verify --instance " + at("bad.txt") + " --report " + at("vbad.txt")), 3);
  EXPECT_EQ(report(at("vbad.txt")).at("verify.pass"), "false");
}

TEST(Cli, RerunsAreByteIdentical) {
  ASSERT_EQ(cli("constants --out " + at("r1.txt")), 0);
  ASSERT_EQ(cli("constants --out " + at("r2.txt")), 0);
  EXPECT_EQ(body(slurp(at("r1.txt"))), body(slurp(at("r2.txt"))));
  pipeline();
  std::string args = "build --phi " + at("phi.csv") + " --n_max 1200 --max_doublings 2";
  ASSERT_EQ(cli(args + " --out " + at("i1.txt") + " --report " + at("b1.txt")), 0) << slurp(at("last.log"));
  ASSERT_EQ(cli(args + " --out " + at("i1b.txt") + " --report " + at("b1b.txt")), 0);
  EXPECT_EQ(body(slurp(at("b1.txt"))), body(slurp(at("b1b.txt"))));
  EXPECT_EQ(body(slurp(at("i1.txt"))), body(slurp(at("i1b.txt"))));
}

TEST(Cli, IteratePlotShowsPositiveF3) {
  pipeline();
  std::string inputs;
  for (int j = 0; j < 4; ++j) inputs += " --input " + at("sf/f" + std::to_string(j) + ".csv");
  ASSERT_EQ(cli("plot" + inputs + " --title iterates --out " + at("fig.svg")), 0);
  std::string svg = slurp(at("fig.svg"));
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<polyline class=\"series\""); p != std::string::npos;
       p = svg.find("<polyline class=\"series\"", p + 1))
    ++lines;
  EXPECT_EQ(lines, 4u);
  std::ifstream in(at("sf/f3.csv"));
  GridFunction f3 = io::read_grid_csv(in);
  EXPECT_GT(f3.min_value(), 0.0);
}

TEST(Cli, CompareTable) {
  pipeline();
  ASSERT_EQ(cli("compare --instance " + at("inst.txt") + " --algorithms pga,pga_shrink --steps 600 --n_min 850 --out " +
                at("cmp.csv")),
            0)
      << slurp(at("last.log"));
  std::ifstream in(at("cmp.csv"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("algorithm,steps,final_residual,slope,r2"), std::string::npos);
  EXPECT_NE(text.find("\npga,600,"), std::string::npos);
  EXPECT_NE(text.find("\npga_shrink,600,"), std::string::npos);
}
