#pragma once

#include <vector>

#include "qap/choice.hpp"
#include "qap/instance.hpp"
#include "qap/linear_model.hpp"
#include "qap/separation.hpp"

namespace qap {

// Variable handles shared between the formulation builders, the separation
// loop and the solver. x holds the offline binaries; y[i][j] the segment-i
// choice probability variables (y0[i] is the no-purchase coordinate);
// z[i][j] >= 0 only for 2SLM segments (-1 elsewhere). x_seg is populated by
// the big-M MILP, which carries explicit per-segment assortment binaries.
struct VarMap {
  int n = 0;
  int m = 0;
  std::vector<int> x;
  std::vector<int> y0;
  std::vector<std::vector<int>> y;
  std::vector<std::vector<int>> z;
  std::vector<std::vector<int>> x_seg;
  std::vector<int> norm_row;
};

struct BuiltModel {
  LinearModel model;
  VarMap vars;
};

// Base convex-hull formulation CH-0 (CH-Chain-0 when partial orders are
// attached): binaries only on the offline assortment, McCormickPlus rows, and
// tangent under-estimators of the no-purchase probability.
BuiltModel build_ch0(const Instance& instance);

// Big-M linearization with one binary per (segment, product) and linkage rows.
BuiltModel build_milp_bigm(const Instance& instance);

// Appends the chain-polytope extended formulation for one 2SLM segment:
// monotone z along dominance, cover gaps capping dominated products, y = z on
// products dominated by none. Products outside the order keep the plain box.
void add_chain_constraints(LinearModel& model, VarMap& vars, const Instance& instance, int segment,
                           const PartialOrder& order);

// Tangent row of y_{i0} >= 1/(u_{i0} + sum_j u_{ij} x_j) at linearization point wbar.
RowSpec no_purchase_tangent_row(const Segment& segment, double wbar, int y0_var, const std::vector<int>& x_vars);

// Materialize an Under/Over cut against the formulation's variable handles.
RowSpec cut_to_row(const Cut& cut, const Segment& segment, const VarMap& vars);

// Single-segment constrained-MNL LP over a convex-hull description of the
// feasible assortments, homogenized by y0.
struct ConsMnlHull {
  enum class Kind { Unconstrained, Cardinality, Chain, Linear };
  Kind kind = Kind::Unconstrained;
  int cardinality = 0;
  const PartialOrder* order = nullptr;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

struct ConsMnlLp {
  LinearModel model;
  int y0 = -1;
  std::vector<int> y;
  std::vector<int> z;  // chain auxiliaries, -1 when absent
  int norm_row = -1;
};

ConsMnlLp build_cons_mnl_lp(const Segment& segment, const ConsMnlHull& hull);

// Independent-demand LP: offline Charnes-Cooper block plus unbounded-above
// availability variables x_j tied to y through seeded Under rows; the full
// Under family is supplied lazily by the caller.
struct IdmVarMap {
  std::vector<int> x;
  std::vector<int> y;
  int y0 = -1;
  int norm_row = -1;
};

struct IdmLp {
  LinearModel model;
  IdmVarMap vars;
};

IdmLp build_idm_lp(const IdmInstance& instance);

}  // namespace qap
