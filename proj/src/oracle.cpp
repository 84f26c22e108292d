#include "qap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qap {

namespace {

std::vector<int> mask_to_set(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (mask & (1u << j)) out.push_back(j);
  }
  return out;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double mnl_of_mask(const Segment& seg, std::uint32_t mask, int n) {
  double num = 0.0, den = seg.u0;
  for (int j = 0; j < n; ++j) {
    if (mask & (1u << j)) {
      num += seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
      den += seg.weight[static_cast<std::size_t>(j)];
    }
  }
  return mask == 0 ? 0.0 : num / den;
}

// Best revenue-ordered subset of the candidate set; exact for plain MNL.
std::pair<std::vector<int>, double> best_mnl_subset(const Segment& seg, const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ra = seg.revenue[static_cast<std::size_t>(a)];
    const double rb = seg.revenue[static_cast<std::size_t>(b)];
    return ra != rb ? ra > rb : a < b;
  });
  std::vector<int> best, cur;
  double best_val = 0.0;
  double num = 0.0, den = seg.u0;
  for (int j : order) {
    cur.push_back(j);
    num += seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
    den += seg.weight[static_cast<std::size_t>(j)];
    const double v = num / den;
    if (v > best_val + 1e-15) {
      best_val = v;
      best = cur;
    }
  }
  std::sort(best.begin(), best.end());
  return {best, best_val};
}

}  // namespace

QapSolution brute_force_qap(const Instance& inst) {
  if (inst.n > 12) throw std::invalid_argument("brute_force_qap: refusing n > 12");
  const int n = inst.n;
  const int m = inst.num_online();
  const auto& oc = inst.offline_constraint;

  std::vector<const DominanceClosure*> closures(static_cast<std::size_t>(m) + 1, nullptr);
  std::vector<DominanceClosure> storage;
  storage.reserve(static_cast<std::size_t>(m));
  std::vector<std::vector<std::uint32_t>> dom_masks(static_cast<std::size_t>(m) + 1);
  for (int i = 1; i <= m; ++i) {
    const PartialOrder* order = inst.order_for(i);
    if (order != nullptr && !order->arcs.empty()) {
      storage.emplace_back(*order, n);
      closures[static_cast<std::size_t>(i)] = &storage.back();
      dom_masks[static_cast<std::size_t>(i)] = storage.back().dominator_masks();
    }
  }

  const auto feasible_offline = [&](std::uint32_t mask) {
    if (oc.kind == OfflineConstraint::Kind::Cardinality) {
      return __builtin_popcount(mask) <= oc.cardinality;
    }
    if (oc.kind == OfflineConstraint::Kind::Linear) {
      for (std::size_t r = 0; r < oc.rows.size(); ++r) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) {
          if (mask & (1u << j)) lhs += oc.rows[r][static_cast<std::size_t>(j)];
        }
        if (lhs > oc.rhs[r] + 1e-12) return false;
      }
    }
    return true;
  };

  QapSolution best;
  best.objective = -kInf;
  bool found = false;

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!feasible_offline(mask)) continue;
    QapSolution cand;
    cand.offline = mask_to_set(mask, n);
    cand.online.resize(static_cast<std::size_t>(m));
    double value = inst.offline().alpha * mnl_of_mask(inst.offline(), mask, n);
    for (int i = 1; i <= m; ++i) {
      const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
      if (closures[static_cast<std::size_t>(i)] == nullptr) {
        auto [set, v] = best_mnl_subset(seg, cand.offline);
        cand.online[static_cast<std::size_t>(i - 1)] = std::move(set);
        value += seg.alpha * v;
      } else {
        // try every subset of the offline set through the first-stage removal
        const auto& dm = dom_masks[static_cast<std::size_t>(i)];
        std::uint32_t best_und = 0;
        double best_v = 0.0;
        std::uint32_t sub = mask;
        while (true) {
          std::uint32_t und = 0;
          for (int j = 0; j < n; ++j) {
            if ((sub & (1u << j)) && (dm[static_cast<std::size_t>(j)] & sub) == 0) und |= (1u << j);
          }
          const double v = mnl_of_mask(seg, und, n);
          if (v > best_v + 1e-15 ||
              (std::abs(v - best_v) <= 1e-15 && und != best_und &&
               lex_less(mask_to_set(und, n), mask_to_set(best_und, n)))) {
            best_v = v;
            best_und = und;
          }
          if (sub == 0) break;
          sub = (sub - 1) & mask;
        }
        cand.online[static_cast<std::size_t>(i - 1)] = mask_to_set(best_und, n);
        value += seg.alpha * best_v;
      }
    }
    cand.objective = value;
    const bool better =
        !found || value > best.objective + 1e-12 ||
        (std::abs(value - best.objective) <= 1e-12 &&
         (lex_less(cand.offline, best.offline) ||
          (cand.offline == best.offline && cand.online < best.online)));
    if (better) {
      best = std::move(cand);
      found = true;
    }
  }
  best.method = "oracle";
  finalize_solution(inst, best);
  return best;
}

std::pair<std::vector<int>, double> brute_force_cons_mnl(const Segment& segment, const ConsMnlHull& hull) {
  const int n = static_cast<int>(segment.weight.size());
  if (n > 15) throw std::invalid_argument("brute_force_cons_mnl: refusing n > 15");

  std::vector<std::uint32_t> dom;
  if (hull.kind == ConsMnlHull::Kind::Chain) {
    if (hull.order == nullptr) throw std::invalid_argument("brute_force_cons_mnl: chain hull needs an order");
    dom = DominanceClosure(*hull.order, n).dominator_masks();
  }

  std::vector<int> best;
  double best_val = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::uint32_t eff = mask;
    if (hull.kind == ConsMnlHull::Kind::Cardinality && __builtin_popcount(mask) > hull.cardinality) continue;
    if (hull.kind == ConsMnlHull::Kind::Linear) {
      bool ok = true;
      for (std::size_t r = 0; r < hull.rows.size() && ok; ++r) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) {
          if (mask & (1u << j)) lhs += hull.rows[r][static_cast<std::size_t>(j)];
        }
        ok = lhs <= hull.rhs[r] + 1e-12;
      }
      if (!ok) continue;
    }
    if (hull.kind == ConsMnlHull::Kind::Chain) {
      eff = 0;
      for (int j = 0; j < n; ++j) {
        if ((mask & (1u << j)) && (dom[static_cast<std::size_t>(j)] & mask) == 0) eff |= (1u << j);
      }
    }
    const double v = mnl_of_mask(segment, eff, n);
    if (v > best_val + 1e-15) {
      best_val = v;
      best = mask_to_set(eff, n);
    }
  }
  return {best, best_val};
}

}  // namespace qap
