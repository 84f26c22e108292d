#pragma once

#include <optional>
#include <vector>

#include "qap/instance.hpp"
#include "qap/linear_model.hpp"

namespace qap {

enum class CutKind { Under, Over };

// One inequality from the Under/Over family, identified by (segment, product,
// subset, kind). The subset is stored sorted ascending; product is never in it.
struct Cut {
  int segment = 0;
  int product = 0;
  std::vector<int> subset;
  CutKind kind = CutKind::Under;
  double violation = 0.0;
};

// Choice-probability-ordered separation: sorts y over N\{j} descending (ties
// by ascending product index) and takes the longest qualifying prefix. The
// prefix minimizes the inequality's implied bound on x_j over every subset,
// so it is violated iff any member of the family is, and its U(S+j)-scaled
// violation is the family-wide maximum. The reported violation is the plain
// slack of the inequality (RHS - y_j for Under, y_j - RHS for Over); a cut is
// returned only when that slack exceeds `tol`.
std::optional<Cut> separate_under(const Segment& segment, int j, double xj, double y0,
                                  const std::vector<double>& y, double tol = 1e-7, int segment_index = 0);
std::optional<Cut> separate_over(const Segment& segment, int j, double xj, double y0,
                                 const std::vector<double>& y, double tol = 1e-7, int segment_index = 0);

// Evaluate the inequality right-hand sides at a point (for tests and oracles).
double under_rhs(const Segment& segment, int j, const std::vector<int>& subset, double xj,
                 const std::vector<double>& y);
double over_rhs(const Segment& segment, int j, const std::vector<int>& subset, double xj, double y0,
                const std::vector<double>& y);

// Model rows for given variable handles: x_var for x_j, y0_var for y_{i0},
// y_vars[t] for y_{it}.
RowSpec under_row(const Segment& segment, int j, const std::vector<int>& subset, int x_var, int y0_var,
                  const std::vector<int>& y_vars);
RowSpec over_row(const Segment& segment, int j, const std::vector<int>& subset, int x_var, int y0_var,
                 const std::vector<int>& y_vars);

}  // namespace qap
