#include "qap/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qap {

namespace {

// Products t != j sorted by descending y_t, ties by ascending index.
std::vector<int> probability_order(int n, int j, const std::vector<double>& y) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n) - 1);
  for (int t = 0; t < n; ++t) {
    if (t != j) order.push_back(t);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ya = y[static_cast<std::size_t>(a)];
    const double yb = y[static_cast<std::size_t>(b)];
    return ya != yb ? ya > yb : a < b;
  });
  return order;
}

}  // namespace

double under_rhs(const Segment& seg, int j, const std::vector<int>& subset, double xj,
                 const std::vector<double>& y) {
  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  for (int t : subset) cap += seg.weight[static_cast<std::size_t>(t)];
  const double alpha = 1.0 / cap;
  double tail = 0.0;
  std::vector<bool> in(y.size(), false);
  for (int t : subset) in[static_cast<std::size_t>(t)] = true;
  for (int t = 0; t < static_cast<int>(y.size()); ++t) {
    if (t != j && !in[static_cast<std::size_t>(t)]) tail += seg.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
  }
  return alpha * xj - alpha * tail;
}

double over_rhs(const Segment& seg, int j, const std::vector<int>& subset, double xj, double y0,
                const std::vector<double>& y) {
  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  for (int t : subset) cap += seg.weight[static_cast<std::size_t>(t)];
  const double alpha = 1.0 / cap;
  double inner = 0.0;
  for (int t : subset) inner += seg.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
  return alpha * xj + (1.0 - (seg.u0 + seg.weight[static_cast<std::size_t>(j)]) * alpha) * y0 - alpha * inner;
}

std::optional<Cut> separate_under(const Segment& seg, int j, double xj, double y0,
                                  const std::vector<double>& y, double tol, int segment_index) {
  (void)y0;
  const int n = static_cast<int>(y.size());
  const std::vector<int> order = probability_order(n, j, y);
  const double yj = y[static_cast<std::size_t>(j)];

  double total_tail = 0.0;  // sum over t not in S* and t != j of u_t y_t
  for (int t : order) total_tail += seg.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];

  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  std::vector<int> subset;
  for (int t : order) {
    if (y[static_cast<std::size_t>(t)] < yj) break;
    subset.push_back(t);
    cap += seg.weight[static_cast<std::size_t>(t)];
    total_tail -= seg.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
  }
  const double alpha = 1.0 / cap;
  const double violation = alpha * xj - alpha * total_tail - yj;
  if (violation <= tol) return std::nullopt;
  std::sort(subset.begin(), subset.end());
  return Cut{segment_index, j, std::move(subset), CutKind::Under, violation};
}

std::optional<Cut> separate_over(const Segment& seg, int j, double xj, double y0,
                                 const std::vector<double>& y, double tol, int segment_index) {
  const int n = static_cast<int>(y.size());
  const std::vector<int> order = probability_order(n, j, y);
  const double yj = y[static_cast<std::size_t>(j)];

  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  double inner = 0.0;
  std::vector<int> subset;
  for (int t : order) {
    if (y[static_cast<std::size_t>(t)] < y0 - yj) break;
    subset.push_back(t);
    cap += seg.weight[static_cast<std::size_t>(t)];
    inner += seg.weight[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
  }
  const double alpha = 1.0 / cap;
  const double rhs = alpha * xj + (1.0 - (seg.u0 + seg.weight[static_cast<std::size_t>(j)]) * alpha) * y0 - alpha * inner;
  const double violation = yj - rhs;
  if (violation <= tol) return std::nullopt;
  std::sort(subset.begin(), subset.end());
  return Cut{segment_index, j, std::move(subset), CutKind::Over, violation};
}

RowSpec under_row(const Segment& seg, int j, const std::vector<int>& subset, int x_var, int y0_var,
                  const std::vector<int>& y_vars) {
  (void)y0_var;
  const int n = static_cast<int>(y_vars.size());
  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int t : subset) {
    in[static_cast<std::size_t>(t)] = true;
    cap += seg.weight[static_cast<std::size_t>(t)];
  }
  const double alpha = 1.0 / cap;
  // y_j - alpha*x_j + alpha * sum_{t outside} u_t y_t >= 0
  RowSpec row;
  row.coeffs.emplace_back(y_vars[static_cast<std::size_t>(j)], 1.0);
  row.coeffs.emplace_back(x_var, -alpha);
  for (int t = 0; t < n; ++t) {
    if (t == j || in[static_cast<std::size_t>(t)]) continue;
    const double u = seg.weight[static_cast<std::size_t>(t)];
    if (u != 0.0) row.coeffs.emplace_back(y_vars[static_cast<std::size_t>(t)], alpha * u);
  }
  row.lo = 0.0;
  row.up = kInf;
  return row;
}

RowSpec over_row(const Segment& seg, int j, const std::vector<int>& subset, int x_var, int y0_var,
                 const std::vector<int>& y_vars) {
  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  for (int t : subset) cap += seg.weight[static_cast<std::size_t>(t)];
  const double alpha = 1.0 / cap;
  // y_j - alpha*x_j - (1-(u0+u_j)alpha) y_0 + alpha * sum_{t in S} u_t y_t <= 0
  RowSpec row;
  row.coeffs.emplace_back(y_vars[static_cast<std::size_t>(j)], 1.0);
  row.coeffs.emplace_back(x_var, -alpha);
  const double y0_coeff = 1.0 - (seg.u0 + seg.weight[static_cast<std::size_t>(j)]) * alpha;
  if (y0_coeff != 0.0) row.coeffs.emplace_back(y0_var, -y0_coeff);
  for (int t : subset) {
    const double u = seg.weight[static_cast<std::size_t>(t)];
    if (u != 0.0) row.coeffs.emplace_back(y_vars[static_cast<std::size_t>(t)], alpha * u);
  }
  row.lo = -kInf;
  row.up = 0.0;
  return row;
}

}  // namespace qap
