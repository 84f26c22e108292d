#pragma once

#include <vector>

#include "qap/linear_model.hpp"
#include "qap/simplex.hpp"

namespace qap {

enum class MipStatus { Optimal, Feasible, Infeasible, NumericalFailure };

struct MipOptions {
  double mip_gap = 1e-4;  // relative, matches the default 0.01% optimality gap
  long node_limit = 100000000L;
  double time_limit = kInf;  // seconds
  double integrality_tol = 1e-6;
  // Objective of a known feasible solution used for pruning; the caller keeps
  // the solution itself.
  double warm_objective = -kInf;
  // Starting basis for the root relaxation (e.g. from the cutting-plane loop).
  Basis root_basis;
};

struct MipResult {
  MipStatus status = MipStatus::NumericalFailure;
  bool has_incumbent = false;
  std::vector<double> x;
  double objective = -kInf;  // incumbent value (or warm objective if better)
  double bound = kInf;       // proven upper bound, max sense
  double gap = kInf;         // (bound - objective) / max(1, |objective|)
  long nodes = 0;
  double time_s = 0.0;
};

// Best-bound branch and bound over the binary variables of `model`; branching
// picks the most fractional binary, ties by lowest index.
MipResult solve_mip(const LinearModel& model, const MipOptions& options = {});

}  // namespace qap
