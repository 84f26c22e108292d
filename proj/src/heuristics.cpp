#include "qap/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qap/formulations.hpp"
#include "qap/simplex.hpp"

namespace qap {

namespace {

std::vector<int> revenue_order(const Segment& seg, const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = seg.revenue[static_cast<std::size_t>(a)];
    const double rb = seg.revenue[static_cast<std::size_t>(b)];
    return ra != rb ? ra > rb : a < b;
  });
  return order;
}

// Unconstrained MNL optimum over the candidates: best revenue-ordered prefix.
std::pair<std::vector<int>, double> ro_scan(const Segment& seg, const std::vector<int>& candidates) {
  const std::vector<int> order = revenue_order(seg, candidates);
  std::vector<int> best, cur;
  double best_val = 0.0, num = 0.0, den = seg.u0;
  for (int j : order) {
    cur.push_back(j);
    num += seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
    den += seg.weight[static_cast<std::size_t>(j)];
    if (num / den > best_val + 1e-15) {
      best_val = num / den;
      best = cur;
    }
  }
  return {best, best_val};
}

struct EnumResult {
  std::vector<std::vector<int>> sets;
  double value = 0.0;  // arrival-weighted online revenue
};

// Per-segment nested scan over the offline pool. MNL segments stop on the
// first revenue decrease (ties keep extending); 2SLM segments score every
// prefix through the first-stage removal and take the argmax.
EnumResult enum_online(const Instance& inst, const std::vector<int>& pool,
                       const std::vector<const DominanceClosure*>& closures) {
  EnumResult res;
  const int m = inst.num_online();
  res.sets.resize(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    const std::vector<int> order = revenue_order(seg, pool);
    const DominanceClosure* closure = closures[static_cast<std::size_t>(i)];
    double zi = 0.0;
    std::vector<int> chosen;
    if (closure == nullptr) {
      double num = 0.0, den = seg.u0;
      std::vector<int> cur;
      for (int j : order) {
        cur.push_back(j);
        num += seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
        den += seg.weight[static_cast<std::size_t>(j)];
        const double v = num / den;
        if (v >= zi) {
          zi = v;
          chosen = cur;
        } else {
          break;
        }
      }
    } else {
      std::vector<int> cur;
      std::vector<int> best_prefix;
      for (int j : order) {
        cur.push_back(j);
        const double v = mnl_revenue(seg, closure->undominated(cur));
        if (v > zi + 1e-15) {
          zi = v;
          best_prefix = cur;
        }
      }
      chosen = closure->undominated(best_prefix);
    }
    std::sort(chosen.begin(), chosen.end());
    res.sets[static_cast<std::size_t>(i - 1)] = std::move(chosen);
    res.value += seg.alpha * zi;
  }
  return res;
}

std::vector<const DominanceClosure*> make_closures(const Instance& inst, std::vector<DominanceClosure>& storage) {
  const int m = inst.num_online();
  std::vector<const DominanceClosure*> closures(static_cast<std::size_t>(m) + 1, nullptr);
  storage.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    const PartialOrder* order = inst.order_for(i);
    if (order != nullptr && !order->arcs.empty()) {
      storage.emplace_back(*order, inst.n);
      closures[static_cast<std::size_t>(i)] = &storage.back();
    }
  }
  return closures;
}

std::vector<int> cardinality_offline_set(const Instance& inst) {
  ConsMnlHull hull;
  hull.kind = ConsMnlHull::Kind::Cardinality;
  hull.cardinality = inst.offline_constraint.cardinality;
  ConsMnlLp lp = build_cons_mnl_lp(inst.offline(), hull);
  const LpResult res = solve_lp(lp.model);
  if (res.status != LpStatus::Optimal) throw std::runtime_error("cardinality offline LP did not solve");
  ChoicePoint p;
  p.y0 = res.x[static_cast<std::size_t>(lp.y0)];
  p.y.resize(static_cast<std::size_t>(inst.n));
  for (int j = 0; j < inst.n; ++j) p.y[static_cast<std::size_t>(j)] = res.x[static_cast<std::size_t>(lp.y[static_cast<std::size_t>(j)])];
  return cc_inverse(inst.offline(), p, 1e-6 * std::max(1.0, p.y0));
}

}  // namespace

QapSolution two_step_ro(const Instance& inst) {
  const auto kind = inst.offline_constraint.kind;
  if (kind == OfflineConstraint::Kind::Linear) {
    throw std::invalid_argument("two_step_ro: general linear offline constraints are not supported");
  }
  std::vector<int> all;
  for (int j = 0; j < inst.n; ++j) all.push_back(j);

  QapSolution sol;
  sol.method = "ro";
  if (kind == OfflineConstraint::Kind::Unconstrained) {
    sol.offline = ro_scan(inst.offline(), all).first;
  } else {
    sol.offline = cardinality_offline_set(inst);
  }
  std::sort(sol.offline.begin(), sol.offline.end());

  const int m = inst.num_online();
  sol.online.resize(static_cast<std::size_t>(m));
  std::vector<DominanceClosure> storage;
  const auto closures = make_closures(inst, storage);
  for (int i = 1; i <= m; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    const DominanceClosure* closure = closures[static_cast<std::size_t>(i)];
    if (closure == nullptr) {
      sol.online[static_cast<std::size_t>(i - 1)] = ro_scan(seg, sol.offline).first;
    } else {
      const std::vector<int> order = revenue_order(seg, sol.offline);
      std::vector<int> cur, best_prefix;
      double best_val = 0.0;
      for (int j : order) {
        cur.push_back(j);
        const double v = mnl_revenue(seg, closure->undominated(cur));
        if (v > best_val + 1e-15) {
          best_val = v;
          best_prefix = cur;
        }
      }
      sol.online[static_cast<std::size_t>(i - 1)] = closure->undominated(best_prefix);
    }
    std::sort(sol.online[static_cast<std::size_t>(i - 1)].begin(), sol.online[static_cast<std::size_t>(i - 1)].end());
  }
  finalize_solution(inst, sol);
  return sol;
}

QapSolution improved_ro(const Instance& inst) {
  const auto kind = inst.offline_constraint.kind;
  if (kind == OfflineConstraint::Kind::Linear) {
    throw std::invalid_argument("improved_ro: unsupported offline constraint, use solve_qap");
  }
  std::vector<DominanceClosure> storage;
  const auto closures = make_closures(inst, storage);

  QapSolution sol;
  sol.method = "iro";
  if (kind == OfflineConstraint::Kind::Cardinality) {
    sol.offline = cardinality_offline_set(inst);
  } else {
    std::vector<int> all;
    for (int j = 0; j < inst.n; ++j) all.push_back(j);
    const std::vector<int> order = revenue_order(inst.offline(), all);
    std::vector<int> prefix;
    std::vector<int> best_prefix;
    double best_total = -kInf;
    double num = 0.0, den = inst.offline().u0;
    for (int j : order) {
      prefix.push_back(j);
      num += inst.offline().revenue[static_cast<std::size_t>(j)] * inst.offline().weight[static_cast<std::size_t>(j)];
      den += inst.offline().weight[static_cast<std::size_t>(j)];
      const double total = inst.offline().alpha * (num / den) + enum_online(inst, prefix, closures).value;
      if (total > best_total + 1e-15) {
        best_total = total;
        best_prefix = prefix;
      }
    }
    sol.offline = best_prefix;
  }
  std::sort(sol.offline.begin(), sol.offline.end());
  sol.online = enum_online(inst, sol.offline, closures).sets;
  finalize_solution(inst, sol);
  return sol;
}

}  // namespace qap
