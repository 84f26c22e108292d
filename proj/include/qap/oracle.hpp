#pragma once

#include "qap/formulations.hpp"
#include "qap/solution.hpp"

namespace qap {

// Exhaustive ground truth for tiny instances. Refuses n > 12; ties between
// equally good profiles break toward the lexicographically smallest offline
// set, then smallest online sets.
QapSolution brute_force_qap(const Instance& instance);

// Best feasible assortment of a single segment by enumeration (n <= 15).
std::pair<std::vector<int>, double> brute_force_cons_mnl(const Segment& segment, const ConsMnlHull& hull);

}  // namespace qap
