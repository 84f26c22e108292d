#pragma once

#include <algorithm>
#include <vector>

#include "qap/choice.hpp"
#include "qap/instance.hpp"
#include "qap/rng.hpp"

namespace qap::test {

// Three products, one offline plus two online MNL segments; the optimum
// offers {1,3}/{1,3}/{1} at 9.1096 while the plain revenue-ordered policy
// stalls at {1}/{1}/{1} and 7.94.
inline Instance table1_instance() {
  Instance inst;
  inst.n = 3;
  inst.segments.resize(3);
  inst.segments[0] = {0.4, 1.0, {10, 9, 8}, {100, 100, 1}};
  inst.segments[1] = {0.4, 1.0, {10, 9, 8}, {1, 1, 100}};
  inst.segments[2] = {0.2, 1.0, {10, 9, 8}, {100, 1, 1}};
  return inst;
}

// Second toy: optimum 18.386, plain policy 15.528, prefix enumeration 15.722.
inline Instance example3_instance() {
  Instance inst;
  inst.n = 3;
  inst.segments.resize(3);
  inst.segments[0] = {0.7, 1.0, {20, 14, 14}, {100, 200, 1}};
  inst.segments[1] = {0.2, 1.0, {10, 10, 18}, {1, 1, 100}};
  inst.segments[2] = {0.1, 1.0, {10, 10, 20}, {2, 2, 1}};
  return inst;
}

// Random DAG on index-increasing pairs; suits small-n tests where the
// production generator degenerates to an empty arc set.
inline PartialOrder random_order(int n, int segment, std::uint64_t seed, double density = 0.3) {
  Rng rng(seed);
  PartialOrder order;
  order.segment = segment;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.next_double() < density) {
        order.arcs.emplace_back(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
      }
    }
  }
  return order;
}

struct RandomInstanceSpec {
  int n = 6;
  int m = 2;
  double u_on0 = 5.0;
  double alpha0 = 0.5;
  bool luce = false;
  int cardinality = 0;  // 0 = unconstrained
};

inline Instance random_instance(const RandomInstanceSpec& spec, std::uint64_t seed) {
  Instance inst = generate_synthetic(spec.n, spec.m, spec.alpha0, spec.u_on0, seed);
  if (spec.luce) {
    for (int i = 1; i <= spec.m; ++i) {
      inst.orders.push_back(random_order(spec.n, i, seed * 977 + static_cast<std::uint64_t>(i)));
    }
  }
  if (spec.cardinality > 0) {
    inst.offline_constraint.kind = OfflineConstraint::Kind::Cardinality;
    inst.offline_constraint.cardinality = spec.cardinality;
  }
  return inst;
}

// Definition-level oracle for the first-stage removal: j stays iff no k in S
// reaches j through the raw arcs (per-query DFS, independent of the library's
// closure machinery).
inline std::vector<int> undominated_oracle(const PartialOrder& order, int n, const std::vector<int>& s) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (const auto& [a, b] : order.arcs) out[static_cast<std::size_t>(a)].push_back(b);
  const auto reaches = [&](int from, int to) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (int w : out[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
      }
    }
    return false;
  };
  std::vector<int> kept;
  for (int j : s) {
    bool dominated = false;
    for (int k : s) {
      if (k != j && reaches(k, j)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(j);
  }
  return kept;
}

inline std::vector<int> mask_to_set(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (mask & (1u << j)) out.push_back(j);
  }
  return out;
}

}  // namespace qap::test
