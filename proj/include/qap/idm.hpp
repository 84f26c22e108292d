#pragma once

#include <cstdint>

#include "qap/formulations.hpp"
#include "qap/solution.hpp"

namespace qap {

struct IdmLpPoint {
  std::vector<double> x;
  double y0 = 0.0;
  std::vector<double> y;
  double objective = 0.0;
};

// Solves the independent-demand LP by lazy Under separation, then pushes every
// x_j up to its binding Under bound so that the rounding construction's
// tightness requirement holds even for products with zero objective weight.
IdmLpPoint solve_qap_idm(const IdmInstance& instance);

// Nested prefix sets C_0 subset ... subset C_n with convex weights; sampling
// from it reproduces the LP point in expectation.
struct RoundingDistribution {
  std::vector<std::vector<int>> sets;
  std::vector<double> lambda;
  IdmLpPoint source;
};

RoundingDistribution build_rounding(const IdmLpPoint& point, const IdmInstance& instance);
std::vector<int> sample_assortment(const RoundingDistribution& dist, std::uint64_t seed);

// Exact expectation of the objective under the distribution (no sampling).
double expected_revenue(const RoundingDistribution& dist, const IdmInstance& instance);

// alpha0 * MNL(offline set) + sum_i alpha_i sum_{j in set} r_ij theta_ij
double idm_value(const IdmInstance& instance, const std::vector<int>& offline_set);

std::string distribution_to_json(const RoundingDistribution& dist);

}  // namespace qap
