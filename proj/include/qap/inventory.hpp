#pragma once

#include <cstdint>

#include "qap/solution.hpp"

namespace qap {

// beta_j = sum_i alpha_i u_ij y*_ij from the solution's choice points.
std::vector<double> purchase_probabilities(const Instance& instance, const QapSolution& solution);

struct RoundedInventory {
  std::vector<long long> quantity;
  long long total = 0;
  int shortfall = 0;  // round-up slots that could not be placed (degenerate)
};

// Integer order quantities: Q_j = T*beta_j rounded so the total matches
// ceil(sum Q_j), with the round-ups going to the offered products of highest
// arrival-weighted price.
RoundedInventory round_inventory(const Instance& instance, const QapSolution& solution, double horizon);

struct SimulationReport {
  double v_fluid = 0.0;
  double v_sim_mean = 0.0;
  double v_sim_se = 0.0;
  double gap = 0.0;  // (v_fluid - v_sim_mean) / v_fluid
  int horizon = 0;
  int paths = 0;
  std::uint64_t seed = 0;
  std::vector<double> path_net_revenue;
};

// Make-to-stock Monte Carlo: per period one consumer arrives, chooses by MNL
// over their assortment intersected with what is still in stock, and pays the
// effective price r + c. Each path starts at minus the inventory cost and
// draws from its own (seed, path) substream.
SimulationReport simulate(const Instance& instance, const QapSolution& solution,
                          const std::vector<long long>& order_quantity, int horizon, int paths,
                          const std::vector<double>& unit_costs, std::uint64_t seed);

}  // namespace qap
