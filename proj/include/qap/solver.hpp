#pragma once

#include "qap/formulations.hpp"
#include "qap/mip.hpp"
#include "qap/solution.hpp"

namespace qap {

enum class QapFormulation { CH, MILP };

struct SolveOptions {
  int k_rounds = 2;  // cut-generation rounds before the MIP solve
  QapFormulation formulation = QapFormulation::CH;
  MipOptions mip;
  bool warm_heuristic = true;
  double cut_tol = 1e-7;
};

// Runs K rounds of relaxation solving and cut generation on a CH-0 style
// model: Under cuts on the offline segment, Over cuts on every segment, plus
// refreshed no-purchase tangents. Records the relaxation value seen at each
// solve (so stats.rounds.front() is the CH-0 relaxation and .back() the final
// one) and returns the basis of the last relaxation.
Basis cutting_plane_rounds(LinearModel& model, const VarMap& vars, const Instance& instance, int k_rounds,
                           double cut_tol, std::vector<RoundStats>& stats, int* cuts_added_total);

// End-to-end exact solve: build the formulation (chain variant automatically
// when partial orders are present), run the cut loop, solve the MIP warm
// started by improved_ro, then extract and re-verify the assortments.
QapSolution solve_qap(const Instance& instance, const SolveOptions& options = {});

// Offline set from integral x plus segment-optimal online sets: restricted
// revenue-ordered scan for MNL segments, restricted chain LP with sequential
// purification for 2SLM segments.
std::pair<std::vector<int>, std::vector<std::vector<int>>> extract_assortments(
    const Instance& instance, const std::vector<double>& x_values, const std::vector<double>& y_values = {});

}  // namespace qap
