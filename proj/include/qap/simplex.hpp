#pragma once

#include <cstdint>
#include <vector>

#include "qap/linear_model.hpp"

namespace qap {

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure, IterLimit };

enum class VarStatus : std::uint8_t { Basic = 0, AtLower = 1, AtUpper = 2, Free = 3 };

// Basis of the computational form [A | -I]; one status per structural variable
// followed by one per row logical. Usable to warm start a later solve, also
// after rows were appended (new logicals enter basic).
struct Basis {
  std::vector<VarStatus> status;
};

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;  // structural values
  Basis basis;
  long iterations = 0;
};

// Bounded-variable primal revised simplex over the computational form
// A x - s = 0 with s carrying the row bounds. Dantzig pricing with a Bland
// fallback once 50*(rows+cols) pivots pass without objective progress; sparse
// left-looking LU refreshed every `refactor_every` pivots with product-form
// updates in between.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearModel& model) { load(model); }

  // Re-reads the model structure (used after add_rows); bound overrides are kept
  // for variables that still exist.
  void load(const LinearModel& model);

  void set_var_bounds(int var, double lo, double up);
  void restore_var_bounds(int var);

  LpResult solve(const Basis* warm = nullptr);

  int num_rows() const { return m_; }
  int num_structural() const { return ns_; }
  int num_total() const { return nv_; }

  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int refactor_every = 100;
  long iter_limit = 0;  // 0 = automatic

 private:
  struct Eta {
    int slot;
    double inv_pivot;
    std::vector<std::pair<int, double>> terms;  // (slot, w_i), i != slot
  };

  // model data, computational form
  int m_ = 0, ns_ = 0, nv_ = 0;
  std::vector<int> cptr_, crow_;
  std::vector<double> cval_;
  std::vector<double> cost_;
  std::vector<double> lo_, up_;
  std::vector<double> model_lo_, model_up_;
  double bound_scale_ = 1.0;
  double cost_scale_ = 1.0;

  // basis state
  std::vector<VarStatus> status_;
  std::vector<double> value_;
  std::vector<int> heading_;   // slot -> var
  std::vector<int> slot_of_;   // var -> slot or -1

  // factorization, step space
  std::vector<int> prow_, pinv_row_;
  std::vector<std::vector<std::pair<int, double>>> lcols_, ucols_;
  std::vector<double> udiag_;
  std::vector<Eta> etas_;

  // workspace
  std::vector<double> work_, work2_;
  std::vector<int> mark_, stack_, pattern_;
  int stamp_ = 0;

  bool factorize();
  void ftran(std::vector<double>& row_vec_in_slot_out) const;
  void btran(std::vector<double>& slot_vec_in_row_out) const;
  void compute_basic_values();
  double infeasibility() const;
  double objective_value() const;
  void column_of(int var, std::vector<std::pair<int, double>>& out) const;
  void default_basis();
  void basis_from_statuses();

  friend LpResult solve_lp(const LinearModel&, const Basis*);
};

LpResult solve_lp(const LinearModel& model, const Basis* warm = nullptr);

}  // namespace qap
