#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace weaktie;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "weaktie");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("weaktie_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    // A random weighted network in Pajek form.
    std::mt19937_64 rng(12);
    auto g = weaktie::testing::random_graph(rng, 120, 0.06);
    std::ofstream net(path("net.net"));
    net << "*Vertices " << g.node_count() << "\n";
    for (std::size_t i = 0; i < g.node_count(); ++i) net << i + 1 << " \"node " << i << "\"\n";
    net << "*Edges\n";
    for (const Edge& e : g.edges()) net << e.u.index + 1 << ' ' << e.v.index + 1 << ' ' << e.weight << "\n";
    nodes_ = g.node_count();
    edges_ = g.edge_count();
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::size_t nodes_ = 0, edges_ = 0;
};

}  // namespace

TEST_F(CliTest, EvalWritesCsvAndIsReproducible) {
  auto a = run({"eval", "--format", "pajek", "--data", path("net.net"), "--index", "ra", "--runs", "5",
                "--seed", "7", "--L", "20", "--out", path("a.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out.rfind("RA 0.", 0), 0u) << a.out;
  EXPECT_NE(a.err.find("fnv1a64="), std::string::npos);
  EXPECT_NE(a.err.find("seed=7"), std::string::npos);
  auto b = run({"eval", "--format", "pajek", "--data", path("net.net"), "--index", "ra", "--runs", "5",
                "--seed", "7", "--L", "20", "--threads", "3", "--out", path("b.csv")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  const std::string csv = slurp(path("a.csv"));
  EXPECT_EQ(csv.rfind("index,mode,alpha,L,n_runs,probe_fraction,seed,mean_precision,std_precision\n", 0), 0u);
  EXPECT_NE(csv.find("\nra,unweighted,,20,5,0.100000,7,0."), std::string::npos) << csv;
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST_F(CliTest, EvalJsonAndWeightedModes) {
  auto r = run({"eval", "--data", path("net.net"), "--index", "cn", "--mode", "-0.5", "--runs", "2",
                "--out", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_EQ(j["index"], "cn");
  EXPECT_EQ(j["mode"], "parameterized");
  EXPECT_EQ(j["alpha"], -0.5);
  EXPECT_EQ(j["n_runs"], 2);
  EXPECT_EQ(j["per_run"].size(), 2u);

  auto w = run({"eval", "--data", path("net.net"), "--index", "aa", "--mode", "weighted", "--runs", "2"});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(w.out.rfind("WAA(alpha=1)", 0), 0u) << w.out;
}

TEST_F(CliTest, ErrorExitCodes) {
  auto missing = run({"eval", "--data", path("missing.net"), "--index", "ra"});
  EXPECT_EQ(missing.code, cli::Data);
  EXPECT_NE(missing.err.find("missing.net"), std::string::npos);

  EXPECT_EQ(run({"eval", "--data", path("net.net")}).code, cli::Usage);
  EXPECT_EQ(run({"eval", "--data", path("net.net"), "--index", "katz"}).code, cli::Usage);
  EXPECT_EQ(run({"eval", "--data", path("net.net"), "--index", "cn", "--mode", "heavy"}).code, cli::Usage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::Usage);

  std::ofstream(path("bad.net")) << "*Vertices 2\n*Edges\n1 3\n";
  auto bad = run({"eval", "--data", path("bad.net"), "--index", "cn"});
  EXPECT_EQ(bad.code, cli::Data);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;

  std::ofstream(path("tiny.txt")) << "a b\nb c\n";
  auto degenerate = run({"eval", "--format", "edgelist", "--data", path("tiny.txt"), "--index", "cn"});
  EXPECT_EQ(degenerate.code, cli::Runtime);

  auto counts = run({"eval", "--data", path("net.net"), "--index", "cn", "--verify-counts", "332,2126"});
  EXPECT_EQ(counts.code, cli::Data);
  auto ok = run({"eval", "--data", path("net.net"), "--index", "cn", "--runs", "1", "--verify-counts",
                 std::to_string(nodes_) + "," + std::to_string(edges_)});
  EXPECT_EQ(ok.code, cli::Ok) << ok.err;
}

TEST_F(CliTest, SweepCurveAndOptimum) {
  auto bad = run({"sweep", "--data", path("net.net"), "--index", "cn", "--grid", "1:-1:0.1"});
  EXPECT_EQ(bad.code, cli::Usage);

  auto s = run({"sweep", "--data", path("net.net"), "--index", "cn", "--grid", "-1:1:0.5", "--runs", "4",
                "--seed", "3", "--out", path("curve.csv")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.out.rfind("WCN* alpha=", 0), 0u) << s.out;
  const std::string csv = slurp(path("curve.csv"));
  EXPECT_EQ(csv.rfind("alpha,mean_precision,std_precision,n_runs\n-1.000000,", 0), 0u) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);

  auto again = run({"sweep", "--data", path("net.net"), "--index", "cn", "--grid", "-1:1:0.5", "--runs", "4",
                    "--seed", "3", "--threads", "2", "--out", path("curve2.csv")});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(csv, slurp(path("curve2.csv")));
}

TEST_F(CliTest, SweepAtZeroMatchesUnweightedEval) {
  auto s = run({"sweep", "--data", path("net.net"), "--index", "cn", "--grid", "0:0:1", "--runs", "6",
                "--seed", "5", "--out", path("c.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  auto e = run({"eval", "--data", path("net.net"), "--index", "cn", "--runs", "6", "--seed", "5", "--out",
                path("e.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  auto curve = nlohmann::json::parse(slurp(path("c.json")));
  auto report = nlohmann::json::parse(slurp(path("e.json")));
  EXPECT_EQ(curve["optimum"]["alpha"], 0.0);
  EXPECT_EQ(curve["optimum"]["precision"], report["mean_precision"]);
}

TEST_F(CliTest, ConvertPapersAndIdempotence) {
  std::ofstream(path("papers.txt")) << "A;B;C\n";
  auto c = run({"convert", "--format", "papers", "--data", path("papers.txt"), "--out", path("p.tsv")});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(slurp(path("p.tsv")), "A\tB\t0.5\nA\tC\t0.5\nB\tC\t0.5\n");

  ASSERT_EQ(run({"convert", "--data", path("net.net"), "--out", path("once.tsv")}).code, 0);
  ASSERT_EQ(run({"convert", "--format", "edgelist", "--data", path("once.tsv"), "--out", path("twice.tsv")}).code, 0);
  const std::string once = slurp(path("once.tsv"));
  EXPECT_EQ(once, slurp(path("twice.tsv")));
  EXPECT_EQ(static_cast<std::size_t>(std::count(once.begin(), once.end(), '\n')), edges_);
}
