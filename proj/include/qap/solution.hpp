#pragma once

#include <string>
#include <vector>

#include "qap/choice.hpp"
#include "qap/instance.hpp"

namespace qap {

struct RoundStats {
  double relax_value = 0.0;
  int cuts_added = 0;
};

struct SolveStats {
  std::vector<RoundStats> rounds;  // relaxation value before each cut round, then final
  int cuts_total = 0;
  long nodes = 0;
  double bound = 0.0;
  double gap = 0.0;
  double time_s = 0.0;
};

// Offline set, per-segment online sets and their Charnes-Cooper points, and the
// exact recomputed objective.
struct QapSolution {
  std::vector<int> offline;
  std::vector<std::vector<int>> online;  // one per online segment
  std::vector<ChoicePoint> choice;       // one per segment, offline first
  double objective = 0.0;
  std::string method;
  SolveStats stats;
};

// Fills choice points and the exact objective from the stored sets.
void finalize_solution(const Instance& instance, QapSolution& solution);

// Invariant check: linkage, offline constraint, undominated fixed point for
// 2SLM segments, and the objective identity. Empty result means the solution
// is internally consistent.
std::vector<Violation> check_solution(const Instance& instance, const QapSolution& solution);

std::string solution_to_json(const QapSolution& solution);
void write_solution(const QapSolution& solution, const std::string& path);

}  // namespace qap
