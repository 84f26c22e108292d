#include "qap/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qap {

using nlohmann::json;

void finalize_solution(const Instance& inst, QapSolution& sol) {
  const int nseg = inst.num_online() + 1;
  sol.choice.clear();
  sol.choice.reserve(static_cast<std::size_t>(nseg));
  double obj = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    const std::vector<int>& set = (i == 0) ? sol.offline : sol.online[static_cast<std::size_t>(i - 1)];
    sol.choice.push_back(cc_transform(seg, set));
    obj += seg.alpha * mnl_revenue(seg, set);
  }
  sol.objective = obj;
}

std::vector<Violation> check_solution(const Instance& inst, const QapSolution& sol) {
  std::vector<Violation> out;
  std::vector<bool> in_offline(static_cast<std::size_t>(inst.n), false);
  for (int j : sol.offline) {
    if (j < 0 || j >= inst.n) {
      out.push_back({"offline", "product index out of range"});
      return out;
    }
    in_offline[static_cast<std::size_t>(j)] = true;
  }
  if (static_cast<int>(sol.online.size()) != inst.num_online()) {
    out.push_back({"online", "segment count mismatch"});
    return out;
  }
  for (std::size_t i = 0; i < sol.online.size(); ++i) {
    for (int j : sol.online[i]) {
      if (j < 0 || j >= inst.n || !in_offline[static_cast<std::size_t>(j)]) {
        out.push_back({"online[" + std::to_string(i + 1) + "]", "not contained in the offline set"});
        break;
      }
    }
    const PartialOrder* order = inst.order_for(static_cast<int>(i) + 1);
    if (order != nullptr) {
      auto und = undominated(*order, inst.n, sol.online[i]);
      std::vector<int> sorted = sol.online[i];
      std::sort(sorted.begin(), sorted.end());
      std::sort(und.begin(), und.end());
      if (und != sorted) {
        out.push_back({"online[" + std::to_string(i + 1) + "]", "not a fixed point of undominated()"});
      }
    }
  }
  const auto& oc = inst.offline_constraint;
  if (oc.kind == OfflineConstraint::Kind::Cardinality &&
      static_cast<int>(sol.offline.size()) > oc.cardinality) {
    out.push_back({"offline", "cardinality constraint violated"});
  } else if (oc.kind == OfflineConstraint::Kind::Linear) {
    for (std::size_t r = 0; r < oc.rows.size(); ++r) {
      double lhs = 0.0;
      for (int j : sol.offline) lhs += oc.rows[r][static_cast<std::size_t>(j)];
      if (lhs > oc.rhs[r] + 1e-9) {
        out.push_back({"offline", "linear constraint row " + std::to_string(r) + " violated"});
      }
    }
  }
  double obj = 0.0;
  for (int i = 0; i <= inst.num_online(); ++i) {
    const std::vector<int>& set = (i == 0) ? sol.offline : sol.online[static_cast<std::size_t>(i - 1)];
    obj += inst.segments[static_cast<std::size_t>(i)].alpha * mnl_revenue(inst.segments[static_cast<std::size_t>(i)], set);
  }
  if (std::abs(obj - sol.objective) > 1e-9 * (1.0 + std::abs(obj))) {
    out.push_back({"objective", "does not match the recomputed revenue"});
  }
  return out;
}

std::string solution_to_json(const QapSolution& sol) {
  json doc;
  const auto to_1based = [](const std::vector<int>& v) {
    json arr = json::array();
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int j : sorted) arr.push_back(j + 1);
    return arr;
  };
  doc["method"] = sol.method;
  doc["objective"] = sol.objective;
  doc["offline"] = to_1based(sol.offline);
  json online = json::array();
  for (const auto& s : sol.online) online.push_back(to_1based(s));
  doc["online"] = std::move(online);
  json choice = json::array();
  for (const auto& p : sol.choice) {
    choice.push_back(json{{"y0", p.y0}, {"y", p.y}});
  }
  doc["choice"] = std::move(choice);
  doc["stats"] = json{{"nodes", sol.stats.nodes},
                      {"cuts", sol.stats.cuts_total},
                      {"rounds", static_cast<int>(sol.stats.rounds.size())},
                      {"bound", sol.stats.bound},
                      {"gap", sol.stats.gap},
                      {"time_s", sol.stats.time_s}};
  json rounds = json::array();
  for (const auto& r : sol.stats.rounds) {
    rounds.push_back(json{{"relax_value", r.relax_value}, {"cuts_added", r.cuts_added}});
  }
  doc["stats"]["round_values"] = std::move(rounds);
  return doc.dump(2);
}

void write_solution(const QapSolution& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << solution_to_json(sol) << '\n';
}

}  // namespace qap
