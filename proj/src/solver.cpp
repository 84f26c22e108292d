#include "qap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qap/heuristics.hpp"

namespace qap {

namespace {

using CutKey = std::tuple<int, int, int, std::vector<int>>;

CutKey key_of(const Cut& cut) {
  return {cut.segment, cut.product, static_cast<int>(cut.kind), cut.subset};
}

std::vector<int> revenue_order_of(const Segment& seg, const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = seg.revenue[static_cast<std::size_t>(a)];
    const double rb = seg.revenue[static_cast<std::size_t>(b)];
    return ra != rb ? ra > rb : a < b;
  });
  return order;
}

}  // namespace

Basis cutting_plane_rounds(LinearModel& model, const VarMap& vars, const Instance& inst, int k_rounds,
                           double cut_tol, std::vector<RoundStats>& stats, int* cuts_added_total) {
  std::set<CutKey> pool;
  Basis basis;
  int total = 0;
  const int nseg = inst.num_online() + 1;

  for (int round = 0; round <= k_rounds; ++round) {
    SimplexSolver solver(model);
    LpResult lp = solver.solve(basis.status.empty() ? nullptr : &basis);
    if (lp.status != LpStatus::Optimal) {
      throw std::runtime_error("cutting_plane_rounds: relaxation not optimal (the base model is always feasible)");
    }
    stats.push_back({lp.objective, 0});
    basis = lp.basis;
    if (round == k_rounds) break;

    std::vector<RowSpec> new_rows;
    std::vector<double> ybuf(static_cast<std::size_t>(inst.n));
    for (int i = 0; i < nseg; ++i) {
      const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
      const double y0 = lp.x[static_cast<std::size_t>(vars.y0[static_cast<std::size_t>(i)])];
      for (int j = 0; j < inst.n; ++j) {
        ybuf[static_cast<std::size_t>(j)] = lp.x[static_cast<std::size_t>(vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])];
      }
      for (int j = 0; j < inst.n; ++j) {
        const double xj = lp.x[static_cast<std::size_t>(vars.x[static_cast<std::size_t>(j)])];
        if (i == 0) {
          if (auto cut = separate_under(seg, j, xj, y0, ybuf, cut_tol, i)) {
            if (pool.insert(key_of(*cut)).second) new_rows.push_back(cut_to_row(*cut, seg, vars));
          }
        }
        if (auto cut = separate_over(seg, j, xj, y0, ybuf, cut_tol, i)) {
          if (pool.insert(key_of(*cut)).second) new_rows.push_back(cut_to_row(*cut, seg, vars));
        }
      }
      // refresh the no-purchase under-estimator at the current point
      double wbar = seg.u0;
      for (int j = 0; j < inst.n; ++j) {
        wbar += seg.weight[static_cast<std::size_t>(j)] * lp.x[static_cast<std::size_t>(vars.x[static_cast<std::size_t>(j)])];
      }
      if (y0 < 1.0 / wbar - cut_tol) {
        new_rows.push_back(no_purchase_tangent_row(seg, wbar, vars.y0[static_cast<std::size_t>(i)], vars.x));
      }
    }
    stats.back().cuts_added = static_cast<int>(new_rows.size());
    total += static_cast<int>(new_rows.size());
    if (new_rows.empty()) {
      // relaxation already clean; later rounds would be identical
      for (int r = round + 1; r <= k_rounds; ++r) stats.push_back({lp.objective, 0});
      break;
    }
    model.add_rows(new_rows);
    // appended rows enter the basis through their logicals
    basis.status.insert(basis.status.end(), new_rows.size(), VarStatus::Basic);
  }
  if (cuts_added_total != nullptr) *cuts_added_total = total;
  return basis;
}

std::pair<std::vector<int>, std::vector<std::vector<int>>> extract_assortments(
    const Instance& inst, const std::vector<double>& x_values, const std::vector<double>& y_values) {
  (void)y_values;
  if (static_cast<int>(x_values.size()) < inst.n) throw std::invalid_argument("extract_assortments: x too short");
  std::vector<int> offline;
  for (int j = 0; j < inst.n; ++j) {
    const double v = x_values[static_cast<std::size_t>(j)];
    if (std::abs(v - std::round(v)) > 1e-6) {
      throw std::invalid_argument("extract_assortments: x not integral");
    }
    if (v >= 0.5) offline.push_back(j);
  }

  const int m = inst.num_online();
  std::vector<std::vector<int>> online(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    const PartialOrder* order = inst.order_for(i);
    if (order == nullptr || order->arcs.empty()) {
      // restricted revenue-ordered scan, exact for MNL
      const std::vector<int> ro = revenue_order_of(seg, offline);
      std::vector<int> cur, best;
      double best_val = 0.0, num = 0.0, den = seg.u0;
      for (int j : ro) {
        cur.push_back(j);
        num += seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
        den += seg.weight[static_cast<std::size_t>(j)];
        if (num / den > best_val + 1e-15) {
          best_val = num / den;
          best = cur;
        }
      }
      std::sort(best.begin(), best.end());
      online[static_cast<std::size_t>(i - 1)] = std::move(best);
    } else {
      // restricted chain LP; sequential exclusion leaves a unique optimal
      // vertex, so the final point is a Charnes-Cooper point
      ConsMnlHull hull;
      hull.kind = ConsMnlHull::Kind::Chain;
      hull.order = order;
      ConsMnlLp lp = build_cons_mnl_lp(seg, hull);
      std::vector<bool> in_offline(static_cast<std::size_t>(inst.n), false);
      for (int j : offline) in_offline[static_cast<std::size_t>(j)] = true;
      for (int j = 0; j < inst.n; ++j) {
        if (!in_offline[static_cast<std::size_t>(j)]) lp.model.set_var_bounds(lp.y[static_cast<std::size_t>(j)], 0.0, 0.0);
      }
      SimplexSolver solver(lp.model);
      LpResult res = solver.solve();
      if (res.status != LpStatus::Optimal) throw std::runtime_error("extract_assortments: restricted chain LP failed");
      const double v_star = res.objective;
      const double tol = 1e-9 * (1.0 + std::abs(v_star));
      Basis basis = res.basis;
      for (int j : offline) {
        solver.set_var_bounds(lp.y[static_cast<std::size_t>(j)], 0.0, 0.0);
        LpResult probe = solver.solve(&basis);
        if (probe.status == LpStatus::Optimal && probe.objective >= v_star - tol) {
          basis = probe.basis;  // product removable at no cost
        } else {
          solver.restore_var_bounds(lp.y[static_cast<std::size_t>(j)]);
          if (!in_offline[static_cast<std::size_t>(j)]) {
            solver.set_var_bounds(lp.y[static_cast<std::size_t>(j)], 0.0, 0.0);
          }
        }
      }
      LpResult fin = solver.solve(&basis);
      if (fin.status != LpStatus::Optimal) throw std::runtime_error("extract_assortments: purification failed");
      ChoicePoint p;
      p.y0 = fin.x[static_cast<std::size_t>(lp.y0)];
      p.y.resize(static_cast<std::size_t>(inst.n));
      for (int j = 0; j < inst.n; ++j) p.y[static_cast<std::size_t>(j)] = fin.x[static_cast<std::size_t>(lp.y[static_cast<std::size_t>(j)])];
      online[static_cast<std::size_t>(i - 1)] = cc_inverse(seg, p, 1e-6 * std::max(1.0, p.y0));
    }
  }
  return {offline, online};
}

QapSolution solve_qap(const Instance& inst, const SolveOptions& options) {
  {
    const auto violations = validate(inst);
    if (!violations.empty()) {
      throw std::invalid_argument("solve_qap: invalid instance: " + violations.front().field + ": " +
                                  violations.front().message);
    }
  }
  const auto t0 = std::chrono::steady_clock::now();

  QapSolution warm;
  bool have_warm = false;
  if (options.warm_heuristic && inst.offline_constraint.kind != OfflineConstraint::Kind::Linear) {
    warm = improved_ro(inst);
    have_warm = true;
  }

  BuiltModel built =
      options.formulation == QapFormulation::CH ? build_ch0(inst) : build_milp_bigm(inst);

  SolveStats stats;
  MipOptions mip_options = options.mip;
  if (options.formulation == QapFormulation::CH && options.k_rounds > 0) {
    mip_options.root_basis = cutting_plane_rounds(built.model, built.vars, inst, options.k_rounds,
                                                  options.cut_tol, stats.rounds, &stats.cuts_total);
  }
  if (have_warm) mip_options.warm_objective = std::max(mip_options.warm_objective, warm.objective);

  const MipResult mip = solve_mip(built.model, mip_options);
  if (mip.status == MipStatus::NumericalFailure) {
    throw std::runtime_error("solve_qap: MIP solve failed numerically");
  }
  if (mip.status == MipStatus::Infeasible) {
    throw std::runtime_error("solve_qap: MIP reported infeasible (the empty assortment is always feasible)");
  }

  QapSolution sol;
  if (mip.has_incumbent) {
    std::vector<double> xvals(static_cast<std::size_t>(inst.n));
    for (int j = 0; j < inst.n; ++j) {
      xvals[static_cast<std::size_t>(j)] = mip.x[static_cast<std::size_t>(built.vars.x[static_cast<std::size_t>(j)])];
    }
    auto [offline, online] = extract_assortments(inst, xvals);
    sol.offline = std::move(offline);
    sol.online = std::move(online);
  } else if (have_warm) {
    sol.offline = warm.offline;
    sol.online = warm.online;
  } else {
    throw std::runtime_error("solve_qap: no incumbent available");
  }

  sol.method = options.formulation == QapFormulation::CH
                   ? "ch-" + std::to_string(options.k_rounds)
                   : "milp";
  finalize_solution(inst, sol);

  if (mip.status == MipStatus::Optimal && mip.has_incumbent &&
      std::abs(sol.objective - mip.objective) > 1e-6 * (1.0 + std::abs(sol.objective))) {
    throw std::logic_error("solve_qap: recomputed objective disagrees with the MIP objective");
  }

  sol.stats = std::move(stats);
  sol.stats.nodes = mip.nodes;
  sol.stats.bound = mip.bound;
  sol.stats.gap = mip.gap;
  sol.stats.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (mip.status == MipStatus::Feasible) sol.method += "-limit";
  return sol;
}

}  // namespace qap
