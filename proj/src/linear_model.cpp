#include "qap/linear_model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qap {

int LinearModel::add_var(const std::string& name, double lo, double up, bool binary) {
  if (lo > up) throw std::invalid_argument("add_var: lo > up for " + name);
  names_.push_back(name);
  var_lo_.push_back(lo);
  var_up_.push_back(up);
  binary_.push_back(binary);
  obj_.push_back(0.0);
  const int j = num_vars() - 1;
  if (binary) binary_list_.push_back(j);
  return j;
}

int LinearModel::add_row(const RowSpec& row) {
  for (const auto& [j, c] : row.coeffs) {
    if (j < 0 || j >= num_vars()) throw std::invalid_argument("add_row: unknown variable index " + std::to_string(j));
    (void)c;
  }
  rows_.push_back(row.coeffs);
  row_lo_.push_back(row.lo);
  row_up_.push_back(row.up);
  return num_rows() - 1;
}

int LinearModel::add_le(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  return add_row({coeffs, -kInf, rhs});
}

int LinearModel::add_ge(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  return add_row({coeffs, rhs, kInf});
}

int LinearModel::add_eq(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  return add_row({coeffs, rhs, rhs});
}

void LinearModel::add_rows(const std::vector<RowSpec>& rows) {
  for (const auto& r : rows) add_row(r);
}

void LinearModel::set_objective(int var, double coeff) { obj_[static_cast<std::size_t>(var)] = coeff; }

void LinearModel::set_var_bounds(int var, double lo, double up) {
  if (lo > up) throw std::invalid_argument("set_var_bounds: lo > up");
  var_lo_[static_cast<std::size_t>(var)] = lo;
  var_up_[static_cast<std::size_t>(var)] = up;
}

double LinearModel::max_abs_rhs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < row_lo_.size(); ++i) {
    if (std::isfinite(row_lo_[i])) m = std::max(m, std::abs(row_lo_[i]));
    if (std::isfinite(row_up_[i])) m = std::max(m, std::abs(row_up_[i]));
  }
  return m;
}

void LinearModel::write_lp(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "Maximize\n obj:";
  bool any = false;
  for (int j = 0; j < num_vars(); ++j) {
    const double c = obj_[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    out << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << names_[static_cast<std::size_t>(j)];
    any = true;
  }
  if (!any) out << " 0 " << (num_vars() > 0 ? names_[0] : "x0");
  out << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    const auto emit_expr = [&]() {
      for (const auto& [j, c] : rows_[static_cast<std::size_t>(i)]) {
        out << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << names_[static_cast<std::size_t>(j)];
      }
    };
    const double lo = row_lo_[static_cast<std::size_t>(i)];
    const double up = row_up_[static_cast<std::size_t>(i)];
    if (lo == up) {
      out << " c" << i << ":";
      emit_expr();
      out << " = " << lo << "\n";
    } else {
      if (std::isfinite(up)) {
        out << " c" << i << "u:";
        emit_expr();
        out << " <= " << up << "\n";
      }
      if (std::isfinite(lo)) {
        out << " c" << i << "l:";
        emit_expr();
        out << " >= " << lo << "\n";
      }
    }
  }
  out << "Bounds\n";
  for (int j = 0; j < num_vars(); ++j) {
    const double lo = var_lo_[static_cast<std::size_t>(j)];
    const double up = var_up_[static_cast<std::size_t>(j)];
    out << " ";
    if (std::isfinite(lo))
      out << lo << " <= ";
    else
      out << "-inf <= ";
    out << names_[static_cast<std::size_t>(j)];
    if (std::isfinite(up)) out << " <= " << up;
    out << "\n";
  }
  if (!binary_list_.empty()) {
    out << "Binaries\n";
    for (int j : binary_list_) out << " " << names_[static_cast<std::size_t>(j)];
    out << "\n";
  }
  out << "End\n";
}

}  // namespace qap
