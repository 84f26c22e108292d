#include "qap/idm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "qap/rng.hpp"
#include "qap/simplex.hpp"

namespace qap {

namespace {

// Minimum over all S of the Under upper bound on x_j; attained on a prefix of
// the probability order, so one sorted scan suffices.
double tight_x_bound(const Segment& off, int j, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  std::vector<int> order;
  for (int t = 0; t < n; ++t) {
    if (t != j) order.push_back(t);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return y[static_cast<std::size_t>(a)] != y[static_cast<std::size_t>(b)]
               ? y[static_cast<std::size_t>(a)] > y[static_cast<std::size_t>(b)]
               : a < b;
  });
  double cap = off.u0 + off.weight[static_cast<std::size_t>(j)];
  double tail = 0.0;
  for (int t : order) tail += off.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
  double best = cap * y[static_cast<std::size_t>(j)] + tail;
  for (int t : order) {
    cap += off.weight[static_cast<std::size_t>(t)];
    tail -= off.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
    best = std::min(best, cap * y[static_cast<std::size_t>(j)] + tail);
  }
  return best;
}

// Order products so that equal-y ties respect the precedence arcs; strongly
// connected components (equality cycles) stay together.
std::vector<int> rounding_order(const IdmInstance& inst, const std::vector<double>& y) {
  const int n = inst.base.n;
  // Kahn ranks on the precedence graph with cycle fallback: repeatedly peel
  // zero-indegree nodes; if a cycle blocks, peel the smallest remaining index.
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& [j, k] : inst.precedence) {
    out[static_cast<std::size_t>(j)].push_back(k);
    ++indeg[static_cast<std::size_t>(k)];
  }
  std::vector<int> rank(static_cast<std::size_t>(n), 0);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::set<int> ready;
  for (int v = 0; v < n; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) ready.insert(v);
  }
  int next_rank = 0;
  int remaining = n;
  while (remaining > 0) {
    int v;
    if (!ready.empty()) {
      v = *ready.begin();
      ready.erase(ready.begin());
    } else {
      v = -1;
      for (int c = 0; c < n; ++c) {
        if (!done[static_cast<std::size_t>(c)]) {
          v = c;
          break;
        }
      }
    }
    done[static_cast<std::size_t>(v)] = true;
    rank[static_cast<std::size_t>(v)] = next_rank++;
    --remaining;
    for (int w : out[static_cast<std::size_t>(v)]) {
      if (!done[static_cast<std::size_t>(w)] && --indeg[static_cast<std::size_t>(w)] == 0) ready.insert(w);
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ya = y[static_cast<std::size_t>(a)];
    const double yb = y[static_cast<std::size_t>(b)];
    if (ya != yb) return ya > yb;
    if (rank[static_cast<std::size_t>(a)] != rank[static_cast<std::size_t>(b)]) {
      return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  return order;
}

}  // namespace

IdmLpPoint solve_qap_idm(const IdmInstance& inst) {
  const int n = inst.base.n;
  IdmLp lp = build_idm_lp(inst);
  const Segment& off = inst.base.offline();

  SimplexSolver solver(lp.model);
  Basis basis;
  std::set<std::vector<int>> pool;
  LpResult res;
  const int max_rounds = 10 * std::max(1, n);
  int round = 0;
  while (true) {
    if (round++ > max_rounds) throw std::runtime_error("solve_qap_idm: separation did not converge");
    res = solver.solve(basis.status.empty() ? nullptr : &basis);
    if (res.status != LpStatus::Optimal) throw std::runtime_error("solve_qap_idm: LP solve failed");
    basis = res.basis;

    std::vector<double> y(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] = res.x[static_cast<std::size_t>(lp.vars.y[static_cast<std::size_t>(j)])];
    const double y0 = res.x[static_cast<std::size_t>(lp.vars.y0)];

    std::vector<RowSpec> rows;
    for (int j = 0; j < n; ++j) {
      const double xj = std::clamp(res.x[static_cast<std::size_t>(lp.vars.x[static_cast<std::size_t>(j)])], 0.0, 1.0 + 1e-9);
      // separate below the advertised 1e-7 so the polished point is clean
      if (auto cut = separate_under(off, j, xj, y0, y, 1e-9, 0)) {
        std::vector<int> key = cut->subset;
        key.push_back(~j);  // product tag
        if (pool.insert(key).second) {
          rows.push_back(under_row(off, j, cut->subset, lp.vars.x[static_cast<std::size_t>(j)], lp.vars.y0, lp.vars.y));
        }
      }
    }
    if (rows.empty()) break;
    lp.model.add_rows(rows);
    solver.load(lp.model);
    basis.status.insert(basis.status.end(), rows.size(), VarStatus::Basic);
  }

  IdmLpPoint point;
  point.y0 = res.x[static_cast<std::size_t>(lp.vars.y0)];
  point.y.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) point.y[static_cast<std::size_t>(j)] = res.x[static_cast<std::size_t>(lp.vars.y[static_cast<std::size_t>(j)])];
  point.x.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // pin x to the binding Under bound; with nonnegative revenues this never
    // hurts the objective and makes every product Under-tight
    point.x[static_cast<std::size_t>(j)] = tight_x_bound(off, j, point.y);
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j) {
    obj += off.alpha * off.revenue[static_cast<std::size_t>(j)] * off.weight[static_cast<std::size_t>(j)] *
           point.y[static_cast<std::size_t>(j)];
    double cx = 0.0;
    for (std::size_t i = 0; i < inst.theta.size(); ++i) {
      const Segment& seg = inst.base.segments[i + 1];
      cx += seg.alpha * seg.revenue[static_cast<std::size_t>(j)] * inst.theta[i][static_cast<std::size_t>(j)];
    }
    obj += cx * point.x[static_cast<std::size_t>(j)];
  }
  point.objective = obj;
  return point;
}

RoundingDistribution build_rounding(const IdmLpPoint& point, const IdmInstance& inst) {
  const int n = inst.base.n;
  const Segment& off = inst.base.offline();
  const std::vector<int> order = rounding_order(inst, point.y);

  // tightness of the prefix Under inequality at every product
  for (int pos = 0; pos < n; ++pos) {
    const int j = order[static_cast<std::size_t>(pos)];
    double cap = off.u0 + off.weight[static_cast<std::size_t>(j)];
    double tail = 0.0;
    for (int q = pos + 1; q < n; ++q) {
      const int t = order[static_cast<std::size_t>(q)];
      tail += off.weight[static_cast<std::size_t>(t)] * point.y[static_cast<std::size_t>(t)];
    }
    for (int q = 0; q < pos; ++q) cap += off.weight[static_cast<std::size_t>(order[static_cast<std::size_t>(q)])];
    const double rhs = (point.x[static_cast<std::size_t>(j)] - tail) / cap;
    if (std::abs(point.y[static_cast<std::size_t>(j)] - rhs) > 1e-6) {
      throw std::runtime_error("build_rounding: point not LP-optimal (Under inequality not tight)");
    }
  }

  RoundingDistribution dist;
  dist.source = point;
  dist.sets.resize(static_cast<std::size_t>(n) + 1);
  dist.lambda.assign(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> prefix;
  dist.sets[0] = {};
  double cap = off.u0;
  const double y_first = n > 0 ? point.y[static_cast<std::size_t>(order[0])] : 0.0;
  dist.lambda[0] = std::max(0.0, cap * (point.y0 - y_first));
  for (int k = 1; k <= n; ++k) {
    const int j = order[static_cast<std::size_t>(k - 1)];
    prefix.push_back(j);
    std::vector<int> sorted = prefix;
    std::sort(sorted.begin(), sorted.end());
    dist.sets[static_cast<std::size_t>(k)] = std::move(sorted);
    cap += off.weight[static_cast<std::size_t>(j)];
    const double yk = point.y[static_cast<std::size_t>(j)];
    const double ynext = (k < n) ? point.y[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] : 0.0;
    dist.lambda[static_cast<std::size_t>(k)] = std::max(0.0, cap * (yk - ynext));
  }
  double total = 0.0;
  for (double l : dist.lambda) total += l;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::runtime_error("build_rounding: weights do not sum to one");
  }
  return dist;
}

std::vector<int> sample_assortment(const RoundingDistribution& dist, std::uint64_t seed) {
  Rng rng(seed);
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.lambda.size(); ++k) {
    acc += dist.lambda[k];
    if (u < acc) return dist.sets[k];
  }
  return dist.sets.back();
}

double idm_value(const IdmInstance& inst, const std::vector<int>& offline_set) {
  const Segment& off = inst.base.offline();
  double v = off.alpha * mnl_revenue(off, offline_set);
  for (int j : offline_set) {
    for (std::size_t i = 0; i < inst.theta.size(); ++i) {
      const Segment& seg = inst.base.segments[i + 1];
      v += seg.alpha * seg.revenue[static_cast<std::size_t>(j)] * inst.theta[i][static_cast<std::size_t>(j)];
    }
  }
  return v;
}

double expected_revenue(const RoundingDistribution& dist, const IdmInstance& inst) {
  double v = 0.0;
  for (std::size_t k = 0; k < dist.lambda.size(); ++k) {
    if (dist.lambda[k] > 0.0) v += dist.lambda[k] * idm_value(inst, dist.sets[k]);
  }
  return v;
}

std::string distribution_to_json(const RoundingDistribution& dist) {
  nlohmann::json doc = nlohmann::json::array();
  for (std::size_t k = 0; k < dist.lambda.size(); ++k) {
    nlohmann::json entry;
    nlohmann::json set = nlohmann::json::array();
    for (int j : dist.sets[k]) set.push_back(j + 1);
    entry["set"] = std::move(set);
    entry["probability"] = dist.lambda[k];
    doc.push_back(std::move(entry));
  }
  return doc.dump(2);
}

}  // namespace qap
