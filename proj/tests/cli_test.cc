#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "flexplan/cli.h"
#include "oracles/oracles.h"

using namespace flexplan;
using flexplan::testing::DataDir;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "flexplan");
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("flexplan_cli_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Fixture(const char* name) { return DataDir(name).string(); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate") {
    const Result r = Invoke({"validate", Fixture("fuel_cell")});
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("4 assets") != std::string::npos);
  }

  TEST_CASE("validate reports rule violations") {
    TempDir tmp;
    fs::copy(DataDir("fuel_cell"), tmp.path(), fs::copy_options::recursive);
    std::ofstream(tmp.path() / "flows.csv") << "from,to,efficiency,resolution\nH2,a,0,\n";
    const Result r = Invoke({"validate", tmp.path().string()});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("nonpositive efficiency") != std::string::npos);
  }

  TEST_CASE("missing input is an io failure") {
    TempDir tmp;
    CHECK(Invoke({"validate", tmp / "absent"}).code == kExitIo);
    CHECK(Invoke({"solve", tmp.path().string()}).code == kExitIo);
  }

  TEST_CASE("build writes the lp file") {
    TempDir tmp;
    const Result r = Invoke({"build", Fixture("fuel_cell"), "--lp", tmp / "m.lp"});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(tmp / "m.lp"));
    CHECK(Slurp(tmp / "m.lp").rfind("Minimize\n", 0) == 0);
    CHECK(Invoke({"build", Fixture("fuel_cell"), "--lp", tmp / "x/y/m.lp"}).code == kExitIo);
  }

  TEST_CASE("solve prints the summary line") {
    const Result r = Invoke({"solve", Fixture("investment_toy")});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "status=optimal objective=3200\n");
  }

  TEST_CASE("relaxed solve") {
    const Result r = Invoke({"solve", Fixture("investment_toy"), "--relax-integrality"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "status=optimal objective=2700\n");
  }

  TEST_CASE("infeasible scenario exits with the solver code") {
    TempDir tmp;
    fs::copy(DataDir("investment_toy"), tmp.path(), fs::copy_options::recursive);
    std::ofstream(tmp.path() / "asset_years.csv")
        << "asset,year,potential,initial_units,var_op_cost,invest_cost,salvage_value\n"
        << "gen,2030,10,0,2,120,20\n";
    const Result r = Invoke({"solve", tmp.path().string()});
    CHECK(r.code == kExitNotOptimal);
    CHECK(r.out == "status=infeasible objective=nan\n");
  }

  TEST_CASE("report and graph") {
    TempDir tmp;
    CHECK(Invoke({"report", Fixture("storage"), "--out", tmp / "rep"}).code == kExitOk);
    for (const char* f : {"flows.csv", "storage.csv", "units.csv", "objective.csv"}) {
      CHECK(fs::exists(tmp.path() / "rep" / f));
    }
    CHECK(Invoke({"graph", Fixture("storage"), "--dot", tmp / "g.dot"}).code == kExitOk);
    CHECK(Slurp(tmp / "g.dot").rfind("digraph", 0) == 0);
  }

  TEST_CASE("storage cycle override") {
    const Result cyclic = Invoke({"solve", Fixture("storage"), "--storage-cycle", "cyclic"});
    const Result fixed = Invoke({"solve", Fixture("storage"), "--storage-cycle", "fixed"});
    CHECK(cyclic.code == kExitOk);
    CHECK(fixed.code == kExitOk);
    CHECK(Invoke({"solve", Fixture("storage"), "--storage-cycle", "loop"}).code ==
          kExitInvalid);
  }

  TEST_CASE("usage errors") {
    CHECK(Invoke({}).code == kExitInvalid);
    CHECK(Invoke({"frobnicate"}).code == kExitInvalid);
    CHECK(Invoke({"build", Fixture("fuel_cell")}).code == kExitInvalid);
    CHECK(Invoke({"solve", Fixture("fuel_cell"), "--max-nodes", "-3"}).code == kExitInvalid);
    CHECK(Invoke({"--help"}).code == kExitOk);
  }

  TEST_CASE("outputs are byte-identical across runs") {
    TempDir a;
    TempDir b;
    for (const TempDir* t : {&a, &b}) {
      REQUIRE(Invoke({"build", Fixture("storage"), "--lp", *t / "m.lp"}).code == 0);
      REQUIRE(Invoke({"report", Fixture("transport"), "--out", *t / "rep"}).code == 0);
      REQUIRE(Invoke({"graph", Fixture("methane"), "--dot", *t / "g.dot"}).code == 0);
    }
    CHECK(Slurp(a / "m.lp") == Slurp(b / "m.lp"));
    CHECK(Slurp(a / "g.dot") == Slurp(b / "g.dot"));
    for (const auto& entry : fs::directory_iterator(a.path() / "rep")) {
      CHECK(Slurp(entry.path()) == Slurp(b.path() / "rep" / entry.path().filename()));
    }
    CHECK(Invoke({"solve", Fixture("lifetime")}).out ==
          Invoke({"solve", Fixture("lifetime")}).out);
  }
}
