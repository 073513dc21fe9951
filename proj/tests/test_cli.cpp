#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string output;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("t2alg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const std::string log = path("out.log");
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" T2ALG_CLI "' " + args + " > '" + log +
                            "' 2>&1";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(log)};
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  static std::string spec(const std::string& name) { return std::string(T2ALG_SOURCE_DIR) + "/specs/" + name; }

  fs::path dir_;
};

nlohmann::json without_timing(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("timing");
  return j;
}

// Drops the trailing witness_file column, which names per-run files.
std::string without_witness(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_F(Cli, OpsBuildAndValidation) {
  const Outcome ok = run("ops build --spec " + spec("nullnorm-disj-i.spec") + " --n 8 --out t.csv");
  EXPECT_EQ(ok.status, 0) << ok.output;
  EXPECT_TRUE(fs::exists(path("t.csv")));
  EXPECT_TRUE(fs::exists(path("t.csv.manifest.json")));

  write("bad.spec", "family=nullnorm-disj-i\ne=0.6\nk=0.5\nblock.S1=SL\nblock.S2=SL\nblock.T=TL\n");
  const Outcome bad = run("ops build --spec bad.spec --n 8");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.output.find("requires e<k"), std::string::npos) << bad.output;

  write("missing.spec", "family=nullnorm-disj-i\ne=1/4\nk=1/2\nblock.S1=SL\nblock.T=TL\n");
  EXPECT_EQ(run("ops build --spec missing.spec --n 8").status, 2);
  EXPECT_EQ(run("ops build --spec nowhere.spec --n 8").status, 2);
  EXPECT_EQ(run("ops frobnicate").status, 2);
}

TEST_F(Cli, OpsChecks) {
  EXPECT_EQ(run("ops check --spec " + spec("overline-uninorm.spec") + " --n 16").status, 0);
  const std::string pair = " --F-spec " + spec("nullnorm-disj-i.spec") + " --U-spec " + spec("uninorm-disj-i.spec");
  EXPECT_EQ(run("ops cd-check" + pair + " --n 16").status, 0);
  const std::string iii =
      " --F-spec " + spec("nullnorm-conj-iii.spec") + " --U-spec " + spec("uninorm-conj-iii.spec");
  EXPECT_EQ(run("ops cd-check" + iii + " --n 16").status, 1);
}

TEST_F(Cli, FtvConvolution) {
  write("f.csv", "n=4\n0,1,0,0,0\n");
  write("g.csv", "n=4\n0,0,0.5,0,0\n");
  const Outcome r = run("ftv join --f f.csv --g g.csv --out j.csv");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(slurp(path("j.csv")), "n=4\n0,0,0.5,0,0\n");
  write("short.csv", "n=4\n0,1\n");
  EXPECT_EQ(run("ftv meet --f short.csv --g g.csv").status, 2);
}

TEST_F(Cli, SuiteExitCodes) {
  const Outcome ok = run("dist suite --theorem T-MIN-MAX-i --n 16 --trials 20 --mode exact --comparison strict "
                     "--report r.csv");
  EXPECT_EQ(ok.status, 0) << ok.output;
  const std::string csv = slurp(path("r.csv"));
  EXPECT_EQ(csv.rfind("theorem_id,n,trials,mode,comparison,tol,passes,max_deviation,witness_file\n", 0), 0u)
      << csv;
  EXPECT_NE(csv.find("T-MIN-MAX-i,16,20,exact,strict,"), std::string::npos) << csv;

  EXPECT_EQ(run("dist suite --theorem T-MIN-MAX-i --n 16 --trials 0").status, 2);
  EXPECT_EQ(run("dist suite --theorem T-BOGUS --n 16").status, 2);
  const Outcome rejected = run("dist suite --theorem T-CD-DISJ --n 16 --trials 5 --spec-U " + spec("uninorm-conj-ii.spec"));
  EXPECT_EQ(rejected.status, 2);
  EXPECT_NE(rejected.output.find("hypothesis failed"), std::string::npos) << rejected.output;

  // A failing suite exits 1 and names its witness files.
  const Outcome fails = run("dist suite --theorem T-IDEM --n 16 --trials 40 --mode exact --comparison strict "
                        "--report idem.csv");
  EXPECT_EQ(fails.status, 1) << fails.output;
  EXPECT_TRUE(fs::exists(path("idem_witness_f.csv")));
  EXPECT_NE(slurp(path("idem.csv")).find("idem_witness_f.csv;"), std::string::npos);
}

TEST_F(Cli, ReportsAreReproducible) {
  const std::string args = "dist suite --theorem T-CD-DISJ --n 16 --trials 30 --seed 5 --jobs ";
  run(args + "1 --report a.csv --manifest a.json");
  run(args + "4 --report b.csv --manifest b.json");
  EXPECT_EQ(without_witness(slurp(path("a.csv"))), without_witness(slurp(path("b.csv"))));
  auto ja = without_timing(slurp(path("a.json")));
  auto jb = without_timing(slurp(path("b.json")));
  for (auto* j : {&ja, &jb}) (*j)["config"].erase("report");
  ja["config"].erase("jobs");
  jb["config"].erase("jobs");
  ja.erase("outputs");
  jb.erase("outputs");
  EXPECT_EQ(ja, jb);
  // Same command again: byte-identical apart from timing.
  const std::string first_csv = slurp(path("a.csv")), first_json = slurp(path("a.json"));
  const std::string first_w = slurp(path("a_witness_g.csv"));
  run(args + "1 --report a.csv --manifest a.json");
  EXPECT_EQ(slurp(path("a.csv")), first_csv);
  EXPECT_EQ(slurp(path("a_witness_g.csv")), first_w);
  EXPECT_EQ(without_timing(slurp(path("a.json"))).dump(), without_timing(first_json).dump());
}

TEST_F(Cli, SeedFromEnvironment) {
  const std::string args = "dist suite --theorem T-CD-DISJ --n 16 --trials 10 ";
  run(args + "--seed 17 --report a.csv --manifest a.json");
  run(args + "--report b.csv --manifest b.json", "T2ALG_SEED=17");
  run(args + "--report c.csv --manifest c.json", "T2ALG_SEED=18");
  EXPECT_EQ(without_timing(slurp(path("a.json")))["config"]["seed"], 17);
  EXPECT_EQ(without_timing(slurp(path("b.json")))["config"]["seed"], 17);
  EXPECT_EQ(without_timing(slurp(path("c.json")))["config"]["seed"], 18);
  EXPECT_EQ(without_witness(slurp(path("a.csv"))), without_witness(slurp(path("b.csv"))));
}

TEST_F(Cli, SearchWritesWitness) {
  const Outcome r = run("dist search --theorem T-IDEM --n 8 --seed 0 --out w");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(slurp(path("w_f.csv")), slurp(std::string(T2ALG_SOURCE_DIR) + "/tests/fixtures/idem_witness_f.csv"));
  EXPECT_TRUE(fs::exists(path("w_g.csv")));
  EXPECT_TRUE(fs::exists(path("w_h.csv")));
  const auto m = nlohmann::json::parse(slurp(path("w.manifest.json")));
  EXPECT_EQ(m["exit_status"], 0);
  EXPECT_EQ(m["config"]["theorem"], "T-IDEM");

  const Outcome none = run("dist search --theorem T-MIN-MAX-i --n 8 --trials 50 --perturb g --out x");
  EXPECT_EQ(none.status, 1) << none.output;
}
