#include "qap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qap/heuristics.hpp"
#include "qap/idm.hpp"
#include "qap/instance.hpp"
#include "qap/inventory.hpp"
#include "qap/oracle.hpp"
#include "qap/rng.hpp"
#include "qap/solver.hpp"

namespace qap {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string stats_csv_header() { return "instance,method,obj,bound,gap,nodes,cuts,rounds,time_s"; }

std::string stats_csv_line(const std::string& instance_id, const QapSolution& sol) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.9f,%.9f,%.3e,%ld,%d,%d,%.3f", instance_id.c_str(),
                sol.method.c_str(), sol.objective, sol.stats.bound, sol.stats.gap, sol.stats.nodes,
                sol.stats.cuts_total, static_cast<int>(sol.stats.rounds.empty() ? 0 : sol.stats.rounds.size() - 1),
                sol.stats.time_s);
  return buf;
}

QapSolution run_method(const Instance& inst, const std::string& method, int k, double gap,
                       double time_limit) {
  if (method == "ch" || method == "milp") {
    SolveOptions opt;
    opt.formulation = method == "ch" ? QapFormulation::CH : QapFormulation::MILP;
    opt.k_rounds = method == "ch" ? k : 0;
    opt.mip.mip_gap = gap;
    opt.mip.time_limit = time_limit;
    return solve_qap(inst, opt);
  }
  if (method == "ro") return two_step_ro(inst);
  if (method == "iro") return improved_ro(inst);
  if (method == "oracle") return brute_force_qap(inst);
  throw std::invalid_argument("unknown method '" + method + "' (want ch|milp|ro|iro|oracle)");
}

void write_assortment_matrix(const Instance& inst, const QapSolution& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "segment";
  for (int j = 0; j < inst.n; ++j) out << ",p" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < sol.choice.size(); ++i) {
    const Segment& seg = inst.segments[i];
    out << i;
    for (int j = 0; j < inst.n; ++j) {
      const double prob = seg.weight[static_cast<std::size_t>(j)] * sol.choice[i].y[static_cast<std::size_t>(j)];
      char buf[32];
      std::snprintf(buf, sizeof(buf), ",%.6f", prob);
      out << buf;
    }
    out << "\n";
  }
}

int cmd_generate(int n, int m, double alpha0, double u_on0, bool luce, std::uint64_t seed,
                 const std::string& out_path) {
  Instance inst = generate_synthetic(n, m, alpha0, u_on0, seed);
  if (luce) inst.orders = generate_partial_orders(n, m, seed);
  const auto violations = validate(inst);
  if (!violations.empty()) {
    std::cerr << "generated instance failed validation: " << violations.front().field << ": "
              << violations.front().message << "\n";
    return 1;
  }
  write_instance(inst, out_path);
  return 0;
}

int cmd_solve(const std::string& in_path, const std::string& method, int k, double gap,
              double time_limit, const std::string& out_path, const std::string& stats_path) {
  const Instance inst = read_instance(in_path);
  const auto violations = validate(inst);
  if (!violations.empty()) {
    std::cerr << "invalid instance: " << violations.front().field << ": " << violations.front().message << "\n";
    return 1;
  }
  const QapSolution sol = run_method(inst, method, k, gap, time_limit);
  if (!out_path.empty()) write_solution(sol, out_path);
  const std::string line = stats_csv_line(fs::path(in_path).stem().string(), sol);
  if (stats_path.empty()) {
    std::cout << stats_csv_header() << "\n" << line << "\n";
  } else {
    const bool fresh = !fs::exists(stats_path);
    std::ofstream out(stats_path, std::ios::app);
    if (fresh) out << stats_csv_header() << "\n";
    out << line << "\n";
  }
  return sol.method.size() >= 6 && sol.method.substr(sol.method.size() - 6) == "-limit" ? 2 : 0;
}

struct BenchRun {
  std::string instance_id;
  std::string config_id;
  std::string method;
  Instance instance;
  int k = 2;
  double gap = 1e-4;
  double time_limit = kInf;
};

struct BenchOutcome {
  bool ok = false;
  bool solved = false;
  std::string error;
  QapSolution solution;
};

int cmd_bench(const std::string& config_path, const std::string& out_dir, int jobs) {
  std::ifstream cfg_in(config_path);
  if (!cfg_in) {
    std::cerr << "cannot open " << config_path << "\n";
    return 1;
  }
  json cfg = json::parse(cfg_in);
  const auto as_list = [&](const char* key, std::vector<long long> dflt) -> std::vector<long long> {
    if (!cfg.contains(key)) return dflt;
    if (cfg[key].is_array()) return cfg[key].get<std::vector<long long>>();
    return {cfg[key].get<long long>()};
  };
  const std::vector<long long> ns = as_list("n", {30});
  const std::vector<long long> ms = as_list("m", {10});
  const std::vector<long long> u_on0s = as_list("u_on0", {2, 5, 10});
  const std::vector<long long> seeds = as_list("seeds", {1, 2, 3});
  const bool luce = cfg.value("luce", false);
  const double alpha0 = cfg.value("alpha0", 0.5);
  const int k = cfg.value("k", 2);
  const double gap = cfg.value("gap", 1e-4);
  const double time_limit = cfg.value("time_limit", 3600.0);
  std::vector<std::string> methods = cfg.value("methods", std::vector<std::string>{"ch"});

  fs::create_directories(out_dir);

  std::vector<BenchRun> runs;
  for (long long n : ns) {
    for (long long m : ms) {
      for (long long u : u_on0s) {
        for (long long seed : seeds) {
          Instance inst = generate_synthetic(static_cast<int>(n), static_cast<int>(m), alpha0,
                                             static_cast<double>(u), static_cast<std::uint64_t>(seed));
          if (luce) {
            inst.orders = generate_partial_orders(static_cast<int>(n), static_cast<int>(m),
                                                  static_cast<std::uint64_t>(seed));
          }
          std::ostringstream id;
          id << "n" << n << "_m" << m << "_u" << u << "_luce" << (luce ? 1 : 0) << "_s" << seed;
          std::ostringstream config;
          config << "n=" << n << " m=" << m << " u_on0=" << u << " luce=" << (luce ? 1 : 0);
          for (const auto& method : methods) {
            BenchRun run;
            run.instance_id = id.str();
            run.config_id = config.str() + " method=" + method;
            run.method = method;
            run.instance = inst;
            run.k = k;
            run.gap = gap;
            run.time_limit = time_limit;
            runs.push_back(std::move(run));
          }
        }
      }
    }
  }

  std::vector<BenchOutcome> outcomes(runs.size());
  std::size_t cursor = 0;
  std::mutex mtx;
  const auto worker = [&]() {
    while (true) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(mtx);
        if (cursor >= runs.size()) return;
        idx = cursor++;
      }
      BenchOutcome& out = outcomes[idx];
      try {
        out.solution = run_method(runs[idx].instance, runs[idx].method, runs[idx].k, runs[idx].gap,
                                  runs[idx].time_limit);
        out.ok = true;
        out.solved = out.solution.method.find("-limit") == std::string::npos;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  const int workers = std::max(1, jobs);
  std::vector<std::thread> threads;
  for (int t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::ofstream runs_csv(fs::path(out_dir) / "runs.csv");
  runs_csv << stats_csv_header() << ",error\n";
  std::ofstream profile_csv(fs::path(out_dir) / "perf_profile.csv");
  profile_csv << "method,instance,time_s,solved\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (outcomes[i].ok) {
      runs_csv << stats_csv_line(runs[i].instance_id, outcomes[i].solution) << ",\n";
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s,%s,%.3f,%d\n", runs[i].method.c_str(), runs[i].instance_id.c_str(),
                    outcomes[i].solution.stats.time_s, outcomes[i].solved ? 1 : 0);
      profile_csv << buf;
    } else {
      runs_csv << runs[i].instance_id << "," << runs[i].method << ",,,,,,,," << outcomes[i].error << "\n";
      profile_csv << runs[i].method << "," << runs[i].instance_id << ",,0\n";
    }
  }

  // aggregate by configuration: Time/Min/Max/Std of solve time, mean node
  // count, number solved
  std::ofstream agg(fs::path(out_dir) / "aggregate.csv");
  agg << "config,Time,Min,Max,Std,Nds,Solved\n";
  std::vector<std::string> config_order;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (std::find(config_order.begin(), config_order.end(), runs[i].config_id) == config_order.end()) {
      config_order.push_back(runs[i].config_id);
    }
  }
  for (const auto& cfg_id : config_order) {
    std::vector<double> times;
    double nodes = 0.0;
    int solved = 0, count = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].config_id != cfg_id) continue;
      ++count;
      if (!outcomes[i].ok) continue;
      times.push_back(outcomes[i].solution.stats.time_s);
      nodes += static_cast<double>(outcomes[i].solution.stats.nodes);
      if (outcomes[i].solved) ++solved;
    }
    double mean = 0.0, mn = 0.0, mx = 0.0, sd = 0.0;
    if (!times.empty()) {
      mean = 0.0;
      mn = times[0];
      mx = times[0];
      for (double t : times) {
        mean += t;
        mn = std::min(mn, t);
        mx = std::max(mx, t);
      }
      mean /= static_cast<double>(times.size());
      for (double t : times) sd += (t - mean) * (t - mean);
      sd = times.size() > 1 ? std::sqrt(sd / static_cast<double>(times.size() - 1)) : 0.0;
    }
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%.3f,%.3f,%.3f,%.3f,%.1f,%d/%d\n", cfg_id.c_str(), mean, mn, mx, sd,
                  times.empty() ? 0.0 : nodes / static_cast<double>(times.size()), solved, count);
    agg << buf;
  }

  // purchase-probability matrices, one per instance from its first solved run
  std::vector<std::string> done_instances;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!outcomes[i].ok) continue;
    if (std::find(done_instances.begin(), done_instances.end(), runs[i].instance_id) != done_instances.end()) {
      continue;
    }
    done_instances.push_back(runs[i].instance_id);
    write_assortment_matrix(runs[i].instance, outcomes[i].solution,
                            (fs::path(out_dir) / ("assort_" + runs[i].instance_id + ".csv")).string());
  }

  for (const auto& o : outcomes) {
    if (!o.ok) return 2;  // partial failure, rows recorded
  }
  return 0;
}

int cmd_idm(const std::string& in_path, const std::string& out_path, int samples, std::uint64_t seed) {
  const IdmInstance inst = read_idm_instance(in_path);
  for (const auto& v : validate(inst)) {
    std::cerr << "warning: " << v.field << ": " << v.message << "\n";
  }
  const IdmLpPoint point = solve_qap_idm(inst);
  const RoundingDistribution dist = build_rounding(point, inst);

  json doc;
  doc["objective"] = point.objective;
  doc["x"] = point.x;
  doc["y0"] = point.y0;
  doc["y"] = point.y;
  doc["expected_revenue"] = expected_revenue(dist, inst);
  doc["distribution"] = json::parse(distribution_to_json(dist));
  if (samples > 0) {
    Rng root(seed);
    json arr = json::array();
    for (int s = 0; s < samples; ++s) {
      json set = json::array();
      for (int j : sample_assortment(dist, root.next_u64())) set.push_back(j + 1);
      arr.push_back(std::move(set));
    }
    doc["samples"] = std::move(arr);
  }
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& in_path, const std::vector<int>& horizons, int paths, double cost,
                 std::uint64_t seed, const std::string& out_path, int k, double gap) {
  const Instance inst = read_instance(in_path);
  SolveOptions opt;
  opt.k_rounds = k;
  opt.mip.mip_gap = gap;
  const QapSolution sol = solve_qap(inst, opt);
  const std::vector<double> costs(static_cast<std::size_t>(inst.n), cost);

  std::ostringstream csv;
  csv << "instance,T,paths,V_fluid,V_sim_mean,V_sim_se,gap_pct\n";
  const std::string id = fs::path(in_path).stem().string();
  for (int t : horizons) {
    const RoundedInventory q = round_inventory(inst, sol, static_cast<double>(t));
    const SimulationReport rep = simulate(inst, sol, q.quantity, t, paths, costs, seed);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.4f,%.4f,%.4f,%.4f\n", id.c_str(), t, paths, rep.v_fluid,
                  rep.v_sim_mean, rep.v_sim_se, 100.0 * rep.gap);
    csv << buf;
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Quick-commerce assortment planning solver"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic instance");
  int g_n = 10, g_m = 2;
  double g_alpha0 = 0.5, g_u_on0 = 5.0;
  bool g_luce = false;
  std::uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("--n", g_n, "products")->required();
  gen->add_option("--m", g_m, "online segments")->required();
  gen->add_option("--alpha0", g_alpha0, "offline arrival probability");
  gen->add_option("--u-on0", g_u_on0, "online no-purchase weight");
  gen->add_flag("--luce", g_luce, "attach generated partial orders");
  gen->add_option("--seed", g_seed, "seed");
  gen->add_option("--out", g_out, "output instance path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string s_in, s_method = "ch", s_out, s_stats;
  int s_k = 2;
  double s_gap = 1e-4, s_time = kInf;
  solve->add_option("--in", s_in, "instance path")->required();
  solve->add_option("--method", s_method, "ch|milp|ro|iro|oracle");
  solve->add_option("--k", s_k, "cut rounds (ch)");
  solve->add_option("--gap", s_gap, "relative MIP gap");
  solve->add_option("--time-limit", s_time, "seconds");
  solve->add_option("--out", s_out, "solution JSON path");
  solve->add_option("--stats", s_stats, "append a stats CSV record here");

  // bench
  auto* bench = app.add_subcommand("bench", "run a configuration grid");
  std::string b_config, b_out_dir = "bench_out";
  int b_jobs = 1;
  bench->add_option("--config", b_config, "grid JSON")->required();
  bench->add_option("--out-dir", b_out_dir, "output directory");
  bench->add_option("--jobs", b_jobs, "parallel workers");

  // idm
  auto* idm = app.add_subcommand("idm", "independent-demand LP and rounding");
  std::string i_in, i_out;
  int i_samples = 0;
  std::uint64_t i_seed = 1;
  idm->add_option("--in", i_in, "instance path (with idm block)")->required();
  idm->add_option("--out", i_out, "output JSON path");
  idm->add_option("--samples", i_samples, "emit this many sampled assortments");
  idm->add_option("--seed", i_seed, "sampling seed");

  // simulate
  auto* sim = app.add_subcommand("simulate", "inventory rounding and simulation");
  std::string m_in, m_out;
  std::vector<int> m_horizons{500, 1000, 2000};
  int m_paths = 1000, m_k = 2;
  double m_cost = 1.0, m_gap = 1e-4;
  std::uint64_t m_seed = 1;
  sim->add_option("--in", m_in, "instance path")->required();
  sim->add_option("--t", m_horizons, "horizons")->delimiter(',');
  sim->add_option("--paths", m_paths, "sample paths");
  sim->add_option("--cost", m_cost, "unit cost for every product");
  sim->add_option("--seed", m_seed, "simulation seed");
  sim->add_option("--k", m_k, "cut rounds for the solve");
  sim->add_option("--gap", m_gap, "relative MIP gap for the solve");
  sim->add_option("--out", m_out, "output CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate(g_n, g_m, g_alpha0, g_u_on0, g_luce, g_seed, g_out);
    if (solve->parsed()) return cmd_solve(s_in, s_method, s_k, s_gap, s_time, s_out, s_stats);
    if (bench->parsed()) return cmd_bench(b_config, b_out_dir, b_jobs);
    if (idm->parsed()) return cmd_idm(i_in, i_out, i_samples, i_seed);
    if (sim->parsed()) return cmd_simulate(m_in, m_horizons, m_paths, m_cost, m_seed, m_out, m_k, m_gap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace qap
