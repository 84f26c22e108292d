#include "qap/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qap/rng.hpp"

namespace qap {

std::vector<double> purchase_probabilities(const Instance& inst, const QapSolution& sol) {
  std::vector<double> beta(static_cast<std::size_t>(inst.n), 0.0);
  for (std::size_t i = 0; i < sol.choice.size(); ++i) {
    const Segment& seg = inst.segments[i];
    for (int j = 0; j < inst.n; ++j) {
      beta[static_cast<std::size_t>(j)] +=
          seg.alpha * seg.weight[static_cast<std::size_t>(j)] * sol.choice[i].y[static_cast<std::size_t>(j)];
    }
  }
  return beta;
}

RoundedInventory round_inventory(const Instance& inst, const QapSolution& sol, double horizon) {
  if (horizon < 1.0) throw std::invalid_argument("round_inventory: horizon must be >= 1");
  const std::vector<double> beta = purchase_probabilities(inst, sol);
  std::vector<double> q(static_cast<std::size_t>(inst.n));
  double total = 0.0;
  double floor_sum = 0.0;
  for (int j = 0; j < inst.n; ++j) {
    q[static_cast<std::size_t>(j)] = horizon * beta[static_cast<std::size_t>(j)];
    total += q[static_cast<std::size_t>(j)];
    floor_sum += std::floor(q[static_cast<std::size_t>(j)]);
  }
  const long long delta = static_cast<long long>(std::ceil(total) - floor_sum);

  // arrival-weighted price ranks the round-up candidates
  std::vector<double> wprice(static_cast<std::size_t>(inst.n), 0.0);
  for (const auto& seg : inst.segments) {
    for (int j = 0; j < inst.n; ++j) {
      wprice[static_cast<std::size_t>(j)] += seg.alpha * seg.revenue[static_cast<std::size_t>(j)];
    }
  }
  std::vector<int> candidates;
  for (int j : sol.offline) {
    if (q[static_cast<std::size_t>(j)] > std::floor(q[static_cast<std::size_t>(j)])) candidates.push_back(j);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const double wa = wprice[static_cast<std::size_t>(a)];
    const double wb = wprice[static_cast<std::size_t>(b)];
    return wa != wb ? wa > wb : a < b;
  });

  RoundedInventory out;
  out.quantity.assign(static_cast<std::size_t>(inst.n), 0);
  for (int j = 0; j < inst.n; ++j) {
    out.quantity[static_cast<std::size_t>(j)] = static_cast<long long>(std::floor(q[static_cast<std::size_t>(j)]));
  }
  long long ups = std::min<long long>(delta, static_cast<long long>(candidates.size()));
  for (long long k = 0; k < ups; ++k) {
    const int j = candidates[static_cast<std::size_t>(k)];
    out.quantity[static_cast<std::size_t>(j)] =
        static_cast<long long>(std::ceil(q[static_cast<std::size_t>(j)]));
  }
  out.shortfall = static_cast<int>(delta - ups);
  for (long long v : out.quantity) out.total += v;
  return out;
}

SimulationReport simulate(const Instance& inst, const QapSolution& sol,
                          const std::vector<long long>& order_quantity, int horizon, int paths,
                          const std::vector<double>& unit_costs, std::uint64_t seed) {
  if (paths < 1) throw std::invalid_argument("simulate: need at least one path");
  for (double c : unit_costs) {
    if (c < 0.0) throw std::invalid_argument("simulate: unit costs must be >= 0");
  }
  const int nseg = inst.num_online() + 1;
  std::vector<const std::vector<int>*> assortments(static_cast<std::size_t>(nseg));
  assortments[0] = &sol.offline;
  for (int i = 1; i < nseg; ++i) assortments[static_cast<std::size_t>(i)] = &sol.online[static_cast<std::size_t>(i - 1)];

  double fixed_cost = 0.0;
  for (int j = 0; j < inst.n; ++j) {
    fixed_cost += static_cast<double>(order_quantity[static_cast<std::size_t>(j)]) * unit_costs[static_cast<std::size_t>(j)];
  }

  Rng root(seed);
  SimulationReport rep;
  rep.horizon = horizon;
  rep.paths = paths;
  rep.seed = seed;
  rep.path_net_revenue.resize(static_cast<std::size_t>(paths));

  std::vector<long long> stock(static_cast<std::size_t>(inst.n));
  double sum = 0.0, sumsq = 0.0;
  for (int l = 0; l < paths; ++l) {
    Rng rng = root.substream(static_cast<std::uint64_t>(l));
    std::copy(order_quantity.begin(), order_quantity.end(), stock.begin());
    double v = -fixed_cost;
    for (int t = 0; t < horizon; ++t) {
      // segment draw
      double u = rng.next_double();
      int i = 0;
      for (; i < nseg - 1; ++i) {
        u -= inst.segments[static_cast<std::size_t>(i)].alpha;
        if (u < 0.0) break;
      }
      const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
      // MNL choice over in-stock offer
      double wsum = seg.u0;
      for (int j : *assortments[static_cast<std::size_t>(i)]) {
        if (stock[static_cast<std::size_t>(j)] > 0) wsum += seg.weight[static_cast<std::size_t>(j)];
      }
      double draw = rng.next_double() * wsum - seg.u0;
      if (draw < 0.0) continue;  // no purchase
      int chosen = -1;
      for (int j : *assortments[static_cast<std::size_t>(i)]) {
        if (stock[static_cast<std::size_t>(j)] <= 0) continue;
        draw -= seg.weight[static_cast<std::size_t>(j)];
        if (draw < 0.0) {
          chosen = j;
          break;
        }
      }
      if (chosen < 0) continue;  // numerical edge of the roulette wheel
      v += seg.revenue[static_cast<std::size_t>(chosen)] + unit_costs[static_cast<std::size_t>(chosen)];
      --stock[static_cast<std::size_t>(chosen)];
    }
    rep.path_net_revenue[static_cast<std::size_t>(l)] = v;
    sum += v;
    sumsq += v * v;
  }
  rep.v_fluid = static_cast<double>(horizon) * sol.objective;
  rep.v_sim_mean = sum / paths;
  const double var = std::max(0.0, (sumsq - sum * sum / paths) / std::max(1, paths - 1));
  rep.v_sim_se = std::sqrt(var / paths);
  rep.gap = rep.v_fluid != 0.0 ? (rep.v_fluid - rep.v_sim_mean) / rep.v_fluid : 0.0;
  return rep;
}

}  // namespace qap
