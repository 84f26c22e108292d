#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "qap/cli.hpp"
#include "qap/instance.hpp"

using namespace qap;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "qap_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate command") {
  const auto dir = test_dir();
  const std::string out = (dir / "gen.json").string();
  SUBCASE("writes a valid instance") {
    CHECK(run_cli({"generate", "--n", "12", "--m", "4", "--alpha0", "0.5", "--u-on0", "5", "--seed", "1",
                   "--out", out}) == 0);
    const Instance inst = read_instance(out);
    CHECK(validate(inst).empty());
    CHECK(inst.n == 12);
    CHECK(inst.num_online() == 4);
  }
  SUBCASE("n < m fails") {
    CHECK(run_cli({"generate", "--n", "2", "--m", "3", "--out", out}) == 1);
  }
  SUBCASE("byte-identical rerun") {
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();
    REQUIRE(run_cli({"generate", "--n", "30", "--m", "5", "--luce", "--seed", "3", "--out", a}) == 0);
    REQUIRE(run_cli({"generate", "--n", "30", "--m", "5", "--luce", "--seed", "3", "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
  }
}

TEST_CASE("solve command on the toy instance") {
  const auto dir = test_dir();
  const std::string in = (dir / "table1.json").string();
  write_instance(test::table1_instance(), in);

  SUBCASE("ch method hits the reference objective") {
    const std::string out = (dir / "sol.json").string();
    const std::string stats = (dir / "stats.csv").string();
    fs::remove(stats);
    CHECK(run_cli({"solve", "--in", in, "--method", "ch", "--out", out, "--stats", stats}) == 0);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(std::abs(doc["objective"].get<double>() - 9.1096) < 1e-3);
    CHECK(doc["offline"] == nlohmann::json::array({1, 3}));
    const std::string csv = slurp(stats);
    CHECK(csv.find("instance,method,obj,bound,gap,nodes,cuts,rounds,time_s") != std::string::npos);
    CHECK(csv.find("table1,ch-2,") != std::string::npos);
  }
  SUBCASE("ro method") {
    const std::string out = (dir / "ro.json").string();
    CHECK(run_cli({"solve", "--in", in, "--method", "ro", "--out", out}) == 0);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(std::abs(doc["objective"].get<double>() - 7.9406) < 1e-3);
  }
  SUBCASE("oracle refuses large instances") {
    const std::string big = (dir / "big.json").string();
    REQUIRE(run_cli({"generate", "--n", "20", "--m", "2", "--out", big, "--seed", "4"}) == 0);
    CHECK(run_cli({"solve", "--in", big, "--method", "oracle"}) == 1);
  }
  SUBCASE("missing file is a usage error") {
    CHECK(run_cli({"solve", "--in", (dir / "nope.json").string()}) == 1);
  }
  SUBCASE("limit-terminated solves exit with code 2") {
    const std::string big = (dir / "limit.json").string();
    REQUIRE(run_cli({"generate", "--n", "14", "--m", "3", "--seed", "8", "--out", big}) == 0);
    CHECK(run_cli({"solve", "--in", big, "--method", "ch", "--k", "0", "--time-limit", "1e-9"}) == 2);
  }
}

TEST_CASE("bench command produces the CSV set") {
  const auto dir = test_dir();
  const std::string cfg = (dir / "bench.json").string();
  {
    std::ofstream out(cfg);
    out << R"({"n": 5, "m": 2, "u_on0": [2], "seeds": [1, 2, 3], "methods": ["ch", "milp"], "gap": 1e-9})";
  }
  const std::string out_dir = (dir / "bench_out").string();
  CHECK(run_cli({"bench", "--config", cfg, "--out-dir", out_dir, "--jobs", "2"}) == 0);
  CHECK(fs::exists(fs::path(out_dir) / "runs.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "aggregate.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "perf_profile.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "assort_n5_m2_u2_luce0_s1.csv"));

  // cross-method identity on each instance
  std::ifstream runs(fs::path(out_dir) / "runs.csv");
  std::string line;
  std::getline(runs, line);  // header
  std::map<std::string, std::vector<double>> by_instance;
  while (std::getline(runs, line)) {
    std::stringstream ss(line);
    std::string instance, method, obj;
    std::getline(ss, instance, ',');
    std::getline(ss, method, ',');
    std::getline(ss, obj, ',');
    by_instance[instance].push_back(std::stod(obj));
  }
  CHECK(by_instance.size() == 3);
  for (const auto& [id, objs] : by_instance) {
    REQUIRE(objs.size() == 2);
    CHECK(std::abs(objs[0] - objs[1]) < 1e-6);
  }
}

TEST_CASE("idm command") {
  const auto dir = test_dir();
  const std::string in = (dir / "idm.json").string();
  IdmInstance idm;
  idm.base.n = 1;
  idm.base.segments.push_back({0.5, 1.0, {10.0}, {1.0}});
  idm.base.segments.push_back({0.5, 1.0, {10.0}, {0.0}});
  idm.theta.push_back({0.3});
  write_idm_instance(idm, in);
  const std::string out = (dir / "idm_out.json").string();
  CHECK(run_cli({"idm", "--in", in, "--out", out, "--samples", "5", "--seed", "2"}) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(std::abs(doc["objective"].get<double>() - 4.0) < 1e-6);
  CHECK(doc["samples"].size() == 5);
}

TEST_CASE("simulate command emits decreasing-gap rows") {
  const auto dir = test_dir();
  const std::string in = (dir / "sim.json").string();
  REQUIRE(run_cli({"generate", "--n", "10", "--m", "3", "--u-on0", "2", "--seed", "5", "--out", in}) == 0);
  const std::string out = (dir / "sim.csv").string();
  CHECK(run_cli({"simulate", "--in", in, "--t", "100,400", "--paths", "200", "--cost", "1", "--seed", "3",
                 "--out", out, "--gap", "1e-9"}) == 0);
  std::ifstream csv(out);
  std::string header, r1, r2;
  std::getline(csv, header);
  std::getline(csv, r1);
  std::getline(csv, r2);
  CHECK(header == "instance,T,paths,V_fluid,V_sim_mean,V_sim_se,gap_pct");
  const auto gap_of = [](const std::string& row) {
    const auto pos = row.rfind(',');
    return std::stod(row.substr(pos + 1));
  };
  CHECK(gap_of(r1) > gap_of(r2));
}
