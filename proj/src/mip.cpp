#include "qap/mip.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace qap {

namespace {

struct Node {
  double bound;
  long id;
  std::vector<std::pair<int, int>> fixings;  // (binary var, 0/1)
  std::shared_ptr<Basis> basis;              // may be null -> cold solve
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;                                // FIFO among ties
  }
};

}  // namespace

MipResult solve_mip(const LinearModel& model, const MipOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MipResult res;
  res.objective = options.warm_objective;

  SimplexSolver solver(model);
  const std::vector<int>& binaries = model.binaries();

  const auto prune_eps = [&](double incumbent) {
    const double scale = std::max(1.0, std::abs(incumbent));
    return std::max(options.mip_gap * scale, 1e-9 * scale);
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  std::shared_ptr<Basis> root;
  if (!options.root_basis.status.empty()) root = std::make_shared<Basis>(options.root_basis);
  open.push(Node{kInf, next_id++, {}, root});

  const auto apply_fixings = [&](const std::vector<std::pair<int, int>>& fixings) {
    for (const auto& [j, v] : fixings) {
      solver.set_var_bounds(j, static_cast<double>(v), static_cast<double>(v));
    }
  };
  const auto clear_fixings = [&](const std::vector<std::pair<int, int>>& fixings) {
    for (const auto& [j, v] : fixings) {
      (void)v;
      solver.restore_var_bounds(j);
    }
  };

  bool hit_limit = false;
  double best_open_bound = kInf;

  while (!open.empty()) {
    if (res.nodes >= options.node_limit || elapsed() > options.time_limit) {
      hit_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    best_open_bound = node.bound;
    if (std::isfinite(res.objective) && node.bound <= res.objective + prune_eps(res.objective)) {
      best_open_bound = node.bound;
      break;  // best-bound order: everything left is no better
    }

    apply_fixings(node.fixings);
    LpResult lp = solver.solve(node.basis.get());
    if (lp.status == LpStatus::NumericalFailure || lp.status == LpStatus::IterLimit) {
      lp = solver.solve(nullptr);  // one cold retry
    }
    clear_fixings(node.fixings);
    ++res.nodes;

    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status == LpStatus::Unbounded) {
      res.status = MipStatus::NumericalFailure;  // bounded models expected
      res.time_s = elapsed();
      return res;
    }
    if (lp.status != LpStatus::Optimal) {
      res.status = MipStatus::NumericalFailure;
      res.time_s = elapsed();
      return res;
    }

    const double node_bound = std::min(node.bound, lp.objective);
    if (std::isfinite(res.objective) && node_bound <= res.objective + prune_eps(res.objective)) continue;

    int branch_var = -1;
    double branch_score = options.integrality_tol;
    for (int j : binaries) {
      const double v = lp.x[static_cast<std::size_t>(j)];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      const double dist = std::min(v - std::floor(v), 1.0 - (v - std::floor(v)));
      (void)frac;
      if (dist > branch_score) {
        branch_score = dist;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      // integral: new incumbent
      if (lp.objective > res.objective + 1e-12 * (1.0 + std::abs(lp.objective)) || !res.has_incumbent) {
        if (lp.objective >= res.objective) {
          res.objective = lp.objective;
          res.x = lp.x;
          res.has_incumbent = true;
        }
      }
      continue;
    }

    auto basis = std::make_shared<Basis>(std::move(lp.basis));
    for (int side = 0; side <= 1; ++side) {
      Node child;
      child.bound = node_bound;
      child.id = next_id++;
      child.fixings = node.fixings;
      child.fixings.emplace_back(branch_var, side);
      // cap the memory spent on stored bases; cold-solving deep nodes is fine
      child.basis = open.size() < 4096 ? basis : nullptr;
      open.push(std::move(child));
    }
  }

  res.time_s = elapsed();
  if (hit_limit) {
    res.bound = open.empty() ? best_open_bound : std::max(best_open_bound, open.top().bound);
    if (!std::isfinite(res.bound)) res.bound = kInf;
    res.status = res.has_incumbent || std::isfinite(res.objective) ? MipStatus::Feasible : MipStatus::Infeasible;
  } else {
    if (!res.has_incumbent && !std::isfinite(res.objective)) {
      res.status = MipStatus::Infeasible;
      res.bound = -kInf;
      res.gap = 0.0;
      return res;
    }
    res.bound = std::max(res.objective, open.empty() ? -kInf : best_open_bound);
    res.status = MipStatus::Optimal;
  }
  res.gap = std::isfinite(res.objective)
                ? std::max(0.0, (res.bound - res.objective) / std::max(1.0, std::abs(res.objective)))
                : kInf;
  return res;
}

}  // namespace qap
