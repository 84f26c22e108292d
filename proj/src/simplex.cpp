#include "qap/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qap {

namespace {
constexpr double kZeroTol = 1e-12;
constexpr double kPivotRel = 1e-11;
}  // namespace

void SimplexSolver::load(const LinearModel& model) {
  m_ = model.num_rows();
  ns_ = model.num_vars();
  nv_ = ns_ + m_;

  // CSC of the structural part; duplicates within a row are summed.
  std::vector<int> count(static_cast<std::size_t>(ns_), 0);
  for (int i = 0; i < m_; ++i) {
    for (const auto& [j, c] : model.row(i)) {
      (void)c;
      ++count[static_cast<std::size_t>(j)];
    }
  }
  cptr_.assign(static_cast<std::size_t>(ns_) + 1, 0);
  for (int j = 0; j < ns_; ++j) cptr_[static_cast<std::size_t>(j) + 1] = cptr_[static_cast<std::size_t>(j)] + count[static_cast<std::size_t>(j)];
  crow_.assign(static_cast<std::size_t>(cptr_[static_cast<std::size_t>(ns_)]), 0);
  cval_.assign(crow_.size(), 0.0);
  {
    std::vector<int> next(cptr_.begin(), cptr_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, c] : model.row(i)) {
        int& p = next[static_cast<std::size_t>(j)];
        crow_[static_cast<std::size_t>(p)] = i;
        cval_[static_cast<std::size_t>(p)] = c;
        ++p;
      }
    }
    // merge duplicate rows within each column
    for (int j = 0; j < ns_; ++j) {
      const int b = cptr_[static_cast<std::size_t>(j)];
      const int e = cptr_[static_cast<std::size_t>(j) + 1];
      if (e - b < 2) continue;
      std::vector<std::pair<int, double>> tmp;
      tmp.reserve(static_cast<std::size_t>(e - b));
      for (int p = b; p < e; ++p) tmp.emplace_back(crow_[static_cast<std::size_t>(p)], cval_[static_cast<std::size_t>(p)]);
      std::sort(tmp.begin(), tmp.end());
      int out = b;
      for (std::size_t t = 0; t < tmp.size();) {
        double s = tmp[t].second;
        std::size_t u = t + 1;
        while (u < tmp.size() && tmp[u].first == tmp[t].first) s += tmp[u++].second;
        crow_[static_cast<std::size_t>(out)] = tmp[t].first;
        cval_[static_cast<std::size_t>(out)] = s;
        ++out;
        t = u;
      }
      // pad removed duplicates with zero coefficients on the same row
      while (out < e) {
        crow_[static_cast<std::size_t>(out)] = crow_[static_cast<std::size_t>(out - 1)];
        cval_[static_cast<std::size_t>(out)] = 0.0;
        ++out;
      }
    }
  }

  cost_.assign(static_cast<std::size_t>(nv_), 0.0);
  for (int j = 0; j < ns_; ++j) cost_[static_cast<std::size_t>(j)] = model.obj()[static_cast<std::size_t>(j)];

  model_lo_.assign(static_cast<std::size_t>(nv_), 0.0);
  model_up_.assign(static_cast<std::size_t>(nv_), 0.0);
  for (int j = 0; j < ns_; ++j) {
    model_lo_[static_cast<std::size_t>(j)] = model.var_lo(j);
    model_up_[static_cast<std::size_t>(j)] = model.var_up(j);
  }
  for (int i = 0; i < m_; ++i) {
    model_lo_[static_cast<std::size_t>(ns_ + i)] = model.row_lo(i);
    model_up_[static_cast<std::size_t>(ns_ + i)] = model.row_up(i);
  }
  lo_ = model_lo_;
  up_ = model_up_;

  bound_scale_ = 1.0;
  for (int v = 0; v < nv_; ++v) {
    if (std::isfinite(lo_[static_cast<std::size_t>(v)])) bound_scale_ = std::max(bound_scale_, std::abs(lo_[static_cast<std::size_t>(v)]));
    if (std::isfinite(up_[static_cast<std::size_t>(v)])) bound_scale_ = std::max(bound_scale_, std::abs(up_[static_cast<std::size_t>(v)]));
  }
  cost_scale_ = 1.0;
  for (double c : cost_) cost_scale_ = std::max(cost_scale_, std::abs(c));

  status_.assign(static_cast<std::size_t>(nv_), VarStatus::AtLower);
  value_.assign(static_cast<std::size_t>(nv_), 0.0);
  heading_.clear();
  slot_of_.assign(static_cast<std::size_t>(nv_), -1);
  etas_.clear();
  work_.assign(static_cast<std::size_t>(m_), 0.0);
  work2_.assign(static_cast<std::size_t>(m_), 0.0);
  mark_.assign(static_cast<std::size_t>(m_), 0);
  stamp_ = 0;
}

void SimplexSolver::set_var_bounds(int var, double lo, double up) {
  lo_[static_cast<std::size_t>(var)] = lo;
  up_[static_cast<std::size_t>(var)] = up;
}

void SimplexSolver::restore_var_bounds(int var) {
  lo_[static_cast<std::size_t>(var)] = model_lo_[static_cast<std::size_t>(var)];
  up_[static_cast<std::size_t>(var)] = model_up_[static_cast<std::size_t>(var)];
}

void SimplexSolver::column_of(int var, std::vector<std::pair<int, double>>& out) const {
  out.clear();
  if (var < ns_) {
    for (int p = cptr_[static_cast<std::size_t>(var)]; p < cptr_[static_cast<std::size_t>(var) + 1]; ++p) {
      if (cval_[static_cast<std::size_t>(p)] != 0.0) out.emplace_back(crow_[static_cast<std::size_t>(p)], cval_[static_cast<std::size_t>(p)]);
    }
  } else {
    out.emplace_back(var - ns_, -1.0);
  }
}

void SimplexSolver::default_basis() {
  for (int j = 0; j < ns_; ++j) {
    const double lo = lo_[static_cast<std::size_t>(j)];
    const double up = up_[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      status_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
    } else if (std::isfinite(up)) {
      status_[static_cast<std::size_t>(j)] = VarStatus::AtUpper;
    } else {
      status_[static_cast<std::size_t>(j)] = VarStatus::Free;
    }
  }
  for (int i = 0; i < m_; ++i) status_[static_cast<std::size_t>(ns_ + i)] = VarStatus::Basic;
}

void SimplexSolver::basis_from_statuses() {
  // sanitize nonbasic sides against current bounds
  int basics = 0;
  for (int v = 0; v < nv_; ++v) {
    auto& st = status_[static_cast<std::size_t>(v)];
    const double lo = lo_[static_cast<std::size_t>(v)];
    const double up = up_[static_cast<std::size_t>(v)];
    if (st == VarStatus::Basic) {
      ++basics;
      continue;
    }
    if (lo == up) {
      st = VarStatus::AtLower;
    } else if (st == VarStatus::AtLower && !std::isfinite(lo)) {
      st = std::isfinite(up) ? VarStatus::AtUpper : VarStatus::Free;
    } else if (st == VarStatus::AtUpper && !std::isfinite(up)) {
      st = std::isfinite(lo) ? VarStatus::AtLower : VarStatus::Free;
    } else if (st == VarStatus::Free && (std::isfinite(lo) || std::isfinite(up))) {
      st = std::isfinite(lo) ? VarStatus::AtLower : VarStatus::AtUpper;
    }
  }
  // adjust basic count to exactly m_
  if (basics > m_) {
    for (int v = nv_ - 1; v >= 0 && basics > m_; --v) {
      if (status_[static_cast<std::size_t>(v)] == VarStatus::Basic) {
        status_[static_cast<std::size_t>(v)] =
            std::isfinite(lo_[static_cast<std::size_t>(v)]) ? VarStatus::AtLower
            : std::isfinite(up_[static_cast<std::size_t>(v)]) ? VarStatus::AtUpper
                                                              : VarStatus::Free;
        --basics;
      }
    }
  }
  if (basics < m_) {
    for (int i = 0; i < m_ && basics < m_; ++i) {
      auto& st = status_[static_cast<std::size_t>(ns_ + i)];
      if (st != VarStatus::Basic) {
        st = VarStatus::Basic;
        ++basics;
      }
    }
  }

  // heading: logicals first, then structurals by column size (fill reduction)
  heading_.clear();
  heading_.reserve(static_cast<std::size_t>(m_));
  std::vector<int> structurals;
  for (int v = 0; v < nv_; ++v) {
    if (status_[static_cast<std::size_t>(v)] != VarStatus::Basic) continue;
    if (v >= ns_) {
      heading_.push_back(v);
    } else {
      structurals.push_back(v);
    }
  }
  std::sort(structurals.begin(), structurals.end(), [&](int a, int b) {
    const int na = cptr_[static_cast<std::size_t>(a) + 1] - cptr_[static_cast<std::size_t>(a)];
    const int nb = cptr_[static_cast<std::size_t>(b) + 1] - cptr_[static_cast<std::size_t>(b)];
    return na != nb ? na < nb : a < b;
  });
  heading_.insert(heading_.end(), structurals.begin(), structurals.end());

  std::fill(slot_of_.begin(), slot_of_.end(), -1);
  for (int k = 0; k < static_cast<int>(heading_.size()); ++k) slot_of_[static_cast<std::size_t>(heading_[static_cast<std::size_t>(k)])] = k;

  // nonbasic values
  for (int v = 0; v < nv_; ++v) {
    switch (status_[static_cast<std::size_t>(v)]) {
      case VarStatus::AtLower:
        value_[static_cast<std::size_t>(v)] = lo_[static_cast<std::size_t>(v)];
        break;
      case VarStatus::AtUpper:
        value_[static_cast<std::size_t>(v)] = up_[static_cast<std::size_t>(v)];
        break;
      case VarStatus::Free:
        value_[static_cast<std::size_t>(v)] = 0.0;
        break;
      case VarStatus::Basic:
        break;
    }
  }
}

bool SimplexSolver::factorize() {
  etas_.clear();
  prow_.assign(static_cast<std::size_t>(m_), -1);
  pinv_row_.assign(static_cast<std::size_t>(m_), -1);
  lcols_.assign(static_cast<std::size_t>(m_), {});
  ucols_.assign(static_cast<std::size_t>(m_), {});
  udiag_.assign(static_cast<std::size_t>(m_), 0.0);

  std::vector<double>& x = work_;
  std::fill(x.begin(), x.end(), 0.0);
  std::vector<int> postorder;
  postorder.reserve(64);
  std::vector<std::pair<int, int>> dfs;  // (row, next child index)
  std::vector<std::pair<int, double>> col;

  int repairs = 0;
  for (int k = 0; k < m_; ++k) {
    int var = heading_[static_cast<std::size_t>(k)];
    bool done = false;
    while (!done) {
      column_of(var, col);
      // symbolic: reachable rows through existing L columns
      ++stamp_;
      postorder.clear();
      for (const auto& [r0, v0] : col) {
        (void)v0;
        if (mark_[static_cast<std::size_t>(r0)] == stamp_) continue;
        dfs.clear();
        dfs.emplace_back(r0, 0);
        mark_[static_cast<std::size_t>(r0)] = stamp_;
        while (!dfs.empty()) {
          auto& [r, ci] = dfs.back();
          const int t = pinv_row_[static_cast<std::size_t>(r)];
          bool descended = false;
          if (t >= 0) {
            auto& lc = lcols_[static_cast<std::size_t>(t)];
            while (ci < static_cast<int>(lc.size())) {
              const int child = lc[static_cast<std::size_t>(ci)].first;
              ++ci;
              if (mark_[static_cast<std::size_t>(child)] != stamp_) {
                mark_[static_cast<std::size_t>(child)] = stamp_;
                dfs.emplace_back(child, 0);
                descended = true;
                break;
              }
            }
          }
          if (!descended && (t < 0 || dfs.back().second >= static_cast<int>(lcols_[static_cast<std::size_t>(t)].size()))) {
            postorder.push_back(r);
            dfs.pop_back();
          }
        }
      }
      // numeric
      for (const auto& [r0, v0] : col) x[static_cast<std::size_t>(r0)] += v0;
      for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
        const int r = *it;
        const int t = pinv_row_[static_cast<std::size_t>(r)];
        if (t < 0) continue;
        const double xv = x[static_cast<std::size_t>(r)];
        if (xv == 0.0) continue;
        for (const auto& [rr, lv] : lcols_[static_cast<std::size_t>(t)]) {
          x[static_cast<std::size_t>(rr)] -= lv * xv;
        }
      }
      // pivot among unpivoted pattern rows
      double colmax = 0.0;
      for (int r : postorder) colmax = std::max(colmax, std::abs(x[static_cast<std::size_t>(r)]));
      int piv_row = -1;
      double piv_abs = 0.0;
      for (int r : postorder) {
        if (pinv_row_[static_cast<std::size_t>(r)] >= 0) continue;
        const double a = std::abs(x[static_cast<std::size_t>(r)]);
        if (a > piv_abs) {
          piv_abs = a;
          piv_row = r;
        }
      }
      if (piv_row < 0 || piv_abs <= kPivotRel * std::max(1.0, colmax)) {
        // singular column: swap this basis member for the logical of a free row
        for (int r : postorder) x[static_cast<std::size_t>(r)] = 0.0;
        if (++repairs > m_ + 8) return false;
        int free_row = -1;
        for (int r = 0; r < m_; ++r) {
          if (pinv_row_[static_cast<std::size_t>(r)] < 0 && slot_of_[static_cast<std::size_t>(ns_ + r)] < 0) {
            free_row = r;
            break;
          }
        }
        if (free_row < 0) return false;
        status_[static_cast<std::size_t>(var)] =
            std::isfinite(lo_[static_cast<std::size_t>(var)]) ? VarStatus::AtLower
            : std::isfinite(up_[static_cast<std::size_t>(var)]) ? VarStatus::AtUpper
                                                                 : VarStatus::Free;
        value_[static_cast<std::size_t>(var)] = status_[static_cast<std::size_t>(var)] == VarStatus::AtLower
                                                    ? lo_[static_cast<std::size_t>(var)]
                                                : status_[static_cast<std::size_t>(var)] == VarStatus::AtUpper
                                                    ? up_[static_cast<std::size_t>(var)]
                                                    : 0.0;
        slot_of_[static_cast<std::size_t>(var)] = -1;
        var = ns_ + free_row;
        heading_[static_cast<std::size_t>(k)] = var;
        status_[static_cast<std::size_t>(var)] = VarStatus::Basic;
        slot_of_[static_cast<std::size_t>(var)] = k;
        continue;
      }
      const double piv = x[static_cast<std::size_t>(piv_row)];
      auto& lc = lcols_[static_cast<std::size_t>(k)];
      auto& uc = ucols_[static_cast<std::size_t>(k)];
      for (int r : postorder) {
        const double xv = x[static_cast<std::size_t>(r)];
        x[static_cast<std::size_t>(r)] = 0.0;
        if (xv == 0.0 || r == piv_row) continue;
        const int t = pinv_row_[static_cast<std::size_t>(r)];
        if (t >= 0) {
          uc.emplace_back(t, xv);
        } else if (std::abs(xv) > kZeroTol * std::max(1.0, piv_abs)) {
          lc.emplace_back(r, xv / piv);
        }
      }
      x[static_cast<std::size_t>(piv_row)] = 0.0;
      udiag_[static_cast<std::size_t>(k)] = piv;
      prow_[static_cast<std::size_t>(k)] = piv_row;
      pinv_row_[static_cast<std::size_t>(piv_row)] = k;
      done = true;
    }
  }
  // remap L row indices to step indices
  for (int k = 0; k < m_; ++k) {
    for (auto& [r, v] : lcols_[static_cast<std::size_t>(k)]) {
      (void)v;
      r = pinv_row_[static_cast<std::size_t>(r)];
    }
  }
  return true;
}

void SimplexSolver::ftran(std::vector<double>& v) const {
  // input indexed by row, output indexed by slot
  std::vector<double>& y = const_cast<std::vector<double>&>(work2_);
  for (int k = 0; k < m_; ++k) y[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(prow_[static_cast<std::size_t>(k)])];
  for (int k = 0; k < m_; ++k) {
    const double xv = y[static_cast<std::size_t>(k)];
    if (xv == 0.0) continue;
    for (const auto& [t, lv] : lcols_[static_cast<std::size_t>(k)]) y[static_cast<std::size_t>(t)] -= lv * xv;
  }
  for (int k = m_ - 1; k >= 0; --k) {
    const double xv = y[static_cast<std::size_t>(k)] / udiag_[static_cast<std::size_t>(k)];
    y[static_cast<std::size_t>(k)] = xv;
    if (xv == 0.0) continue;
    for (const auto& [t, uv] : ucols_[static_cast<std::size_t>(k)]) y[static_cast<std::size_t>(t)] -= uv * xv;
  }
  for (const auto& e : etas_) {
    const double piv = y[static_cast<std::size_t>(e.slot)] * e.inv_pivot;
    y[static_cast<std::size_t>(e.slot)] = piv;
    if (piv == 0.0) continue;
    for (const auto& [i, wi] : e.terms) y[static_cast<std::size_t>(i)] -= wi * piv;
  }
  v.swap(y);
}

void SimplexSolver::btran(std::vector<double>& v) const {
  // input indexed by slot, output indexed by row
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[static_cast<std::size_t>(it->slot)];
    for (const auto& [i, wi] : it->terms) acc -= wi * v[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(it->slot)] = acc * it->inv_pivot;
  }
  for (int k = 0; k < m_; ++k) {
    double acc = v[static_cast<std::size_t>(k)];
    for (const auto& [t, uv] : ucols_[static_cast<std::size_t>(k)]) acc -= uv * v[static_cast<std::size_t>(t)];
    v[static_cast<std::size_t>(k)] = acc / udiag_[static_cast<std::size_t>(k)];
  }
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = v[static_cast<std::size_t>(k)];
    for (const auto& [t, lv] : lcols_[static_cast<std::size_t>(k)]) acc -= lv * v[static_cast<std::size_t>(t)];
    v[static_cast<std::size_t>(k)] = acc;
  }
  std::vector<double>& y = const_cast<std::vector<double>&>(work_);
  for (int r = 0; r < m_; ++r) y[static_cast<std::size_t>(r)] = v[static_cast<std::size_t>(pinv_row_[static_cast<std::size_t>(r)])];
  v.swap(y);
}

void SimplexSolver::compute_basic_values() {
  std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
  for (int j = 0; j < ns_; ++j) {
    if (status_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
    const double v = value_[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    for (int p = cptr_[static_cast<std::size_t>(j)]; p < cptr_[static_cast<std::size_t>(j) + 1]; ++p) {
      rhs[static_cast<std::size_t>(crow_[static_cast<std::size_t>(p)])] -= cval_[static_cast<std::size_t>(p)] * v;
    }
  }
  for (int i = 0; i < m_; ++i) {
    const int v = ns_ + i;
    if (status_[static_cast<std::size_t>(v)] == VarStatus::Basic) continue;
    rhs[static_cast<std::size_t>(i)] += value_[static_cast<std::size_t>(v)];
  }
  ftran(rhs);
  for (int k = 0; k < m_; ++k) value_[static_cast<std::size_t>(heading_[static_cast<std::size_t>(k)])] = rhs[static_cast<std::size_t>(k)];
}

double SimplexSolver::infeasibility() const {
  const double ftol = feas_tol * bound_scale_;
  double f = 0.0;
  for (int k = 0; k < m_; ++k) {
    const int v = heading_[static_cast<std::size_t>(k)];
    const double x = value_[static_cast<std::size_t>(v)];
    const double lo = lo_[static_cast<std::size_t>(v)];
    const double up = up_[static_cast<std::size_t>(v)];
    if (x < lo - ftol) f += lo - x;
    if (x > up + ftol) f += x - up;
  }
  return f;
}

double SimplexSolver::objective_value() const {
  double obj = 0.0;
  for (int j = 0; j < ns_; ++j) obj += cost_[static_cast<std::size_t>(j)] * value_[static_cast<std::size_t>(j)];
  return obj;
}

LpResult SimplexSolver::solve(const Basis* warm) {
  LpResult res;
  if (warm != nullptr && warm->status.size() == static_cast<std::size_t>(nv_)) {
    status_ = warm->status;
  } else {
    default_basis();
  }
  basis_from_statuses();
  if (!factorize()) {
    default_basis();
    basis_from_statuses();
    if (!factorize()) return res;  // NumericalFailure
  }
  compute_basic_values();

  const double ftol = feas_tol * bound_scale_;
  const double dtol2 = opt_tol * cost_scale_;
  const long limit = iter_limit > 0 ? iter_limit : 50000 + 400L * (m_ + ns_);

  long iter = 0;
  int pivots_since_refactor = 0;
  bool bland = false;
  long stall = 0;
  const long stall_limit = 50L * (m_ + ns_);
  double best_merit = -kInf;
  int last_phase = -1;

  std::vector<double> cslot(static_cast<std::size_t>(m_));
  std::vector<double> y;
  std::vector<double> w;
  std::vector<std::pair<int, double>> col;

  while (true) {
    if (iter >= limit) {
      res.status = LpStatus::IterLimit;
      res.iterations = iter;
      return res;
    }

    const bool phase1 = infeasibility() > 0.0;
    const double dtol = phase1 ? opt_tol : dtol2;
    if (static_cast<int>(phase1) != last_phase) {
      last_phase = static_cast<int>(phase1);
      best_merit = -kInf;
      stall = 0;
      bland = false;
    }

    // cost vector in slot space
    cslot.assign(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k) {
      const int v = heading_[static_cast<std::size_t>(k)];
      if (phase1) {
        const double x = value_[static_cast<std::size_t>(v)];
        if (x < lo_[static_cast<std::size_t>(v)] - ftol) {
          cslot[static_cast<std::size_t>(k)] = 1.0;
        } else if (x > up_[static_cast<std::size_t>(v)] + ftol) {
          cslot[static_cast<std::size_t>(k)] = -1.0;
        }
      } else {
        cslot[static_cast<std::size_t>(k)] = cost_[static_cast<std::size_t>(v)];
      }
    }
    y = cslot;
    btran(y);  // y now indexed by row

    // pricing
    int q = -1;
    double qd = 0.0;
    int qsigma = 0;
    double best_score = dtol;
    for (int v = 0; v < nv_; ++v) {
      const auto st = status_[static_cast<std::size_t>(v)];
      if (st == VarStatus::Basic) continue;
      if (lo_[static_cast<std::size_t>(v)] == up_[static_cast<std::size_t>(v)]) continue;
      double d = phase1 ? 0.0 : cost_[static_cast<std::size_t>(v)];
      if (v < ns_) {
        for (int p = cptr_[static_cast<std::size_t>(v)]; p < cptr_[static_cast<std::size_t>(v) + 1]; ++p) {
          d -= cval_[static_cast<std::size_t>(p)] * y[static_cast<std::size_t>(crow_[static_cast<std::size_t>(p)])];
        }
      } else {
        d += y[static_cast<std::size_t>(v - ns_)];
      }
      int sigma = 0;
      if (st == VarStatus::AtLower && d > dtol) {
        sigma = 1;
      } else if (st == VarStatus::AtUpper && d < -dtol) {
        sigma = -1;
      } else if (st == VarStatus::Free && std::abs(d) > dtol) {
        sigma = d > 0 ? 1 : -1;
      }
      if (sigma == 0) continue;
      if (bland) {
        q = v;
        qd = d;
        qsigma = sigma;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        q = v;
        qd = d;
        qsigma = sigma;
      }
    }
    (void)qd;

    if (q < 0) {
      // claim only from a fresh factorization
      if (!etas_.empty()) {
        if (!factorize()) {
          res.status = LpStatus::NumericalFailure;
          res.iterations = iter;
          return res;
        }
        compute_basic_values();
        pivots_since_refactor = 0;
        continue;
      }
      res.iterations = iter;
      res.basis.status = status_;
      if (phase1) {
        res.status = LpStatus::Infeasible;
        return res;
      }
      res.status = LpStatus::Optimal;
      res.objective = objective_value();
      res.x.assign(value_.begin(), value_.begin() + ns_);
      return res;
    }

    // entering column in slot space
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    column_of(q, col);
    for (const auto& [r, cv] : col) rhs[static_cast<std::size_t>(r)] += cv;
    ftran(rhs);
    w.swap(rhs);

    const double qlo = lo_[static_cast<std::size_t>(q)];
    const double qup = up_[static_cast<std::size_t>(q)];
    const double t_bound = (std::isfinite(qlo) && std::isfinite(qup)) ? (qup - qlo) : kInf;

    // ratio test; per-slot cap on step length t >= 0
    const auto slot_cap = [&](int k, bool relaxed, double* block_at) -> double {
      const double wk = w[static_cast<std::size_t>(k)];
      if (std::abs(wk) < kZeroTol) return kInf;
      const int v = heading_[static_cast<std::size_t>(k)];
      const double delta = -static_cast<double>(qsigma) * wk;
      const double x = value_[static_cast<std::size_t>(v)];
      const double lo = lo_[static_cast<std::size_t>(v)];
      const double up = up_[static_cast<std::size_t>(v)];
      const double slack = relaxed ? ftol : 0.0;
      if (phase1) {
        if (x < lo - ftol) {
          if (delta > 0) {
            *block_at = lo;
            return std::max(0.0, (lo + slack - x) / delta);
          }
          return kInf;
        }
        if (x > up + ftol) {
          if (delta < 0) {
            *block_at = up;
            return std::max(0.0, (x - (up - slack)) / (-delta));
          }
          return kInf;
        }
      }
      if (delta > 0) {
        if (!std::isfinite(up)) return kInf;
        *block_at = up;
        return std::max(0.0, (up + slack - x) / delta);
      }
      if (!std::isfinite(lo)) return kInf;
      *block_at = lo;
      return std::max(0.0, (x - (lo - slack)) / (-delta));
    };

    int leave_slot = -1;
    double t = kInf;
    double leave_at = 0.0;
    if (!bland) {
      // Harris two-pass
      double t_relax = t_bound;
      double dummy = 0.0;
      for (int k = 0; k < m_; ++k) t_relax = std::min(t_relax, slot_cap(k, true, &dummy));
      double best_piv = 0.0;
      for (int k = 0; k < m_; ++k) {
        double at = 0.0;
        const double cap = slot_cap(k, false, &at);
        if (std::isfinite(cap) && cap <= t_relax && std::abs(w[static_cast<std::size_t>(k)]) > best_piv) {
          best_piv = std::abs(w[static_cast<std::size_t>(k)]);
          leave_slot = k;
          t = cap;
          leave_at = at;
        }
      }
    } else {
      for (int k = 0; k < m_; ++k) {
        double at = 0.0;
        const double cap = slot_cap(k, false, &at);
        if (!std::isfinite(cap)) continue;
        if (cap < t - kZeroTol ||
            (cap < t + kZeroTol && leave_slot >= 0 &&
             heading_[static_cast<std::size_t>(k)] < heading_[static_cast<std::size_t>(leave_slot)])) {
          leave_slot = k;
          t = cap;
          leave_at = at;
        }
      }
    }

    const double merit_before = phase1 ? -infeasibility() : objective_value();

    if (leave_slot < 0 || t_bound <= t) {
      if (!std::isfinite(t_bound)) {
        if (phase1) {
          // keep moving: in phase 1 an unbounded direction still reduces
          // infeasibility only up to the first breakpoint, which must exist
          res.status = LpStatus::NumericalFailure;
          res.iterations = iter;
          return res;
        }
        if (!etas_.empty()) {
          if (!factorize()) {
            res.status = LpStatus::NumericalFailure;
            res.iterations = iter;
            return res;
          }
          compute_basic_values();
          pivots_since_refactor = 0;
          continue;
        }
        res.status = LpStatus::Unbounded;
        res.iterations = iter;
        res.basis.status = status_;
        return res;
      }
      // bound flip
      for (int k = 0; k < m_; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        if (wk == 0.0) continue;
        value_[static_cast<std::size_t>(heading_[static_cast<std::size_t>(k)])] -= qsigma * t_bound * wk;
      }
      status_[static_cast<std::size_t>(q)] = qsigma > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      value_[static_cast<std::size_t>(q)] = qsigma > 0 ? qup : qlo;
    } else {
      if (!std::isfinite(t)) t = 0.0;
      const double piv = w[static_cast<std::size_t>(leave_slot)];
      if (std::abs(piv) < 1e-9) {
        // refuse an unstable pivot; refresh the factorization and retry
        if (!factorize()) {
          res.status = LpStatus::NumericalFailure;
          res.iterations = iter;
          return res;
        }
        compute_basic_values();
        pivots_since_refactor = 0;
        ++iter;
        continue;
      }
      for (int k = 0; k < m_; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        if (wk == 0.0) continue;
        value_[static_cast<std::size_t>(heading_[static_cast<std::size_t>(k)])] -= qsigma * t * wk;
      }
      const int leaving = heading_[static_cast<std::size_t>(leave_slot)];
      value_[static_cast<std::size_t>(q)] =
          (status_[static_cast<std::size_t>(q)] == VarStatus::Free ? 0.0 : value_[static_cast<std::size_t>(q)]) +
          qsigma * t;
      status_[static_cast<std::size_t>(leaving)] =
          (leave_at == lo_[static_cast<std::size_t>(leaving)]) ? VarStatus::AtLower : VarStatus::AtUpper;
      value_[static_cast<std::size_t>(leaving)] = leave_at;
      slot_of_[static_cast<std::size_t>(leaving)] = -1;
      status_[static_cast<std::size_t>(q)] = VarStatus::Basic;
      heading_[static_cast<std::size_t>(leave_slot)] = q;
      slot_of_[static_cast<std::size_t>(q)] = leave_slot;

      Eta eta;
      eta.slot = leave_slot;
      eta.inv_pivot = 1.0 / piv;
      for (int k = 0; k < m_; ++k) {
        const double wk = w[static_cast<std::size_t>(k)];
        if (k != leave_slot && std::abs(wk) > kZeroTol) eta.terms.emplace_back(k, wk);
      }
      etas_.push_back(std::move(eta));

      if (++pivots_since_refactor >= refactor_every) {
        if (!factorize()) {
          res.status = LpStatus::NumericalFailure;
          res.iterations = iter;
          return res;
        }
        compute_basic_values();
        pivots_since_refactor = 0;
      }
    }

    const double merit_after = phase1 ? -infeasibility() : objective_value();
    if (merit_after > std::max(best_merit, merit_before) + 1e-12 * (1.0 + std::abs(merit_before))) {
      best_merit = merit_after;
      stall = 0;
      bland = false;
    } else {
      if (++stall > stall_limit) bland = true;
    }
    ++iter;
  }
}

LpResult solve_lp(const LinearModel& model, const Basis* warm) {
  SimplexSolver solver(model);
  return solver.solve(warm);
}

}  // namespace qap
