#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run run(const std::string& args) {
  const std::string cmd = std::string(SINCMF_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) row.push_back(f);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sincmf_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, PolesFirstDegree) {
  const auto r = run("poles --family E --n 1");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"re", "im"}));
  // E_1: the origin and -3/2 +- i sqrt(3)/2 scaled by i
  double origin = 1e300;
  for (std::size_t i = 1; i < rows.size(); ++i)
    origin = std::min(origin, std::hypot(std::stod(rows[i][0]), std::stod(rows[i][1])));
  EXPECT_EQ(origin, 0.0);
}

TEST(Cli, MatrixMarketLaplacian) {
  const auto r = run("matrix --name lap1d --n 8");
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream is(r.out);
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header.rfind("%%MatrixMarket", 0), 0u);
  int rows = 0, cols = 0, nnz = 0;
  is >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 8);
  EXPECT_EQ(cols, 8);
  EXPECT_EQ(nnz, 22);
}

TEST(Cli, ErrorsCarryCategoryAndExitCode) {
  const auto bad_family = run("poles --family Q --n 3");
  EXPECT_EQ(bad_family.code, 1);
  EXPECT_NE(bad_family.out.find("error[invalid_argument]"), std::string::npos) << bad_family.out;
  const auto bad_matrix = run("matrix --name lap2d --n 10");
  EXPECT_EQ(bad_matrix.code, 1);
  const auto bad_option = run("poles --family E");
  EXPECT_EQ(bad_option.code, 2);
  EXPECT_NE(bad_option.out.find("error[parse_error]"), std::string::npos) << bad_option.out;
  const auto bad_backend = run("converge --backend nonsense --quiet");
  EXPECT_EQ(bad_backend.code, 1);
  EXPECT_NE(bad_backend.out.find("parse_error"), std::string::npos) << bad_backend.out;
}

TEST(Cli, PolesBenchDeterministic) {
  const auto a = scratch("pb_a.csv"), b = scratch("pb_b.csv");
  const std::string common = " poles-bench --small --no-timing --quiet --n-max 4 --seed 7 --out ";
  ASSERT_EQ(run(common + a.string()).code, 0);
  ASSERT_EQ(run(common + b.string()).code, 0);
  const std::string sa = slurp(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, slurp(b));
  const auto rows = csv(sa);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "n", "k", "rel_error", "seconds", "stagnated"}));
  EXPECT_EQ(rows.size(), 1u + 4 + 4 + 4 + 2);
}

TEST(Cli, ConvergeObservesSecondOrder) {
  const auto r = run("converge --N 20 --h-list 1e-1,5e-2,2.5e-2 --quiet --no-timing");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"h", "n_poles", "rel_error", "observed_order", "seconds"}));
  EXPECT_TRUE(rows[1][3].empty());
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double p = std::stod(rows[i][3]);
    EXPECT_GE(p, 1.8);
    EXPECT_LE(p, 2.2);
  }
}

TEST(Cli, ExpSumBenchConverges) {
  const auto r = run("expsum-bench --small --quiet --no-timing --nu-max 12");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 13u);
  const double last = std::stod(rows.back()[1]);
  EXPECT_LE(last, 1e-8);
  // monotone once past the initial hump
  for (std::size_t i = 5; i + 1 < rows.size(); ++i)
    if (std::stod(rows[i + 1][1]) > 1e-12) {
      EXPECT_LE(std::stod(rows[i + 1][1]), std::stod(rows[i][1])) << i;
    }
}

TEST(Cli, WaveWritesEnergyAndSolution) {
  const auto prefix = scratch("wave");
  const auto r = run("wave --small --quiet --h 0.02 --T 0.5 --out-prefix " + prefix.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto energy = csv(slurp(prefix.string() + "_energy.csv"));
  ASSERT_EQ(energy.size(), 1u + 26);
  const double e0 = std::stod(energy[1][1]);
  for (std::size_t i = 1; i < energy.size(); ++i) EXPECT_NEAR(std::stod(energy[i][1]) / e0, 1.0, 0.02);
  const auto sol = csv(slurp(prefix.string() + "_solution.csv"));
  EXPECT_EQ(sol.size(), 1u + 81);
}

TEST(Cli, WaveReadsMeshFile) {
  const auto mesh = scratch("tri.mesh");
  {
    std::ofstream os(mesh);
    // one interior vertex; the last triangle is clockwise
    os << "5 4 4\n-1 -1\n1 -1\n1 1\n-1 1\n0 0\n0 1 4\n1 2 4\n2 3 4\n0 3 4\n0\n1\n2\n3\n";
  }
  const auto prefix = scratch("wave_mesh");
  const auto r = run("wave --quiet --h 0.1 --T 0.2 --mesh " + mesh.string() + " --out-prefix " + prefix.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("warning"), std::string::npos) << r.out;
}
