#pragma once

#include <limits>
#include <string>
#include <vector>

namespace qap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct RowSpec {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  double lo = -kInf;
  double up = kInf;
};

// Mixed-binary linear model, objective sense is always maximize. Rows are
// stored as ranges [lo, up]; a <= row has lo = -inf, a >= row up = +inf and an
// equality lo == up.
class LinearModel {
 public:
  int add_var(const std::string& name, double lo, double up, bool binary = false);
  int add_row(const RowSpec& row);
  int add_le(const std::vector<std::pair<int, double>>& coeffs, double rhs);
  int add_ge(const std::vector<std::pair<int, double>>& coeffs, double rhs);
  int add_eq(const std::vector<std::pair<int, double>>& coeffs, double rhs);
  void add_rows(const std::vector<RowSpec>& rows);
  void set_objective(int var, double coeff);
  void set_var_bounds(int var, double lo, double up);

  int num_vars() const { return static_cast<int>(var_lo_.size()); }
  int num_rows() const { return static_cast<int>(row_lo_.size()); }

  const std::vector<double>& obj() const { return obj_; }
  double var_lo(int j) const { return var_lo_[static_cast<std::size_t>(j)]; }
  double var_up(int j) const { return var_up_[static_cast<std::size_t>(j)]; }
  bool is_binary(int j) const { return binary_[static_cast<std::size_t>(j)]; }
  double row_lo(int i) const { return row_lo_[static_cast<std::size_t>(i)]; }
  double row_up(int i) const { return row_up_[static_cast<std::size_t>(i)]; }
  const std::vector<std::pair<int, double>>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  const std::string& var_name(int j) const { return names_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& binaries() const { return binary_list_; }

  double max_abs_rhs() const;
  // CPLEX LP text format, for cross-checking against external solvers.
  void write_lp(const std::string& path) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> var_lo_, var_up_;
  std::vector<bool> binary_;
  std::vector<int> binary_list_;
  std::vector<double> obj_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> row_lo_, row_up_;
};

}  // namespace qap
