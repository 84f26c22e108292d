#include "qap/formulations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qap {

namespace {

double weight_sum(const Segment& seg) {
  double w = seg.u0;
  for (double u : seg.weight) w += u;
  return w;
}

void add_normalization(LinearModel& model, VarMap& vars, const Segment& seg, int i) {
  std::vector<std::pair<int, double>> coeffs;
  coeffs.emplace_back(vars.y0[static_cast<std::size_t>(i)], seg.u0);
  for (int j = 0; j < vars.n; ++j) {
    const double u = seg.weight[static_cast<std::size_t>(j)];
    if (u != 0.0) coeffs.emplace_back(vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], u);
  }
  vars.norm_row[static_cast<std::size_t>(i)] = model.add_eq(coeffs, 1.0);
}

void add_segment_variables(LinearModel& model, VarMap& vars, const Segment& seg, int i) {
  const double cap = 1.0 / seg.u0;
  vars.y0[static_cast<std::size_t>(i)] = model.add_var("y" + std::to_string(i) + "_0", 0.0, cap);
  auto& yi = vars.y[static_cast<std::size_t>(i)];
  yi.resize(static_cast<std::size_t>(vars.n));
  for (int j = 0; j < vars.n; ++j) {
    yi[static_cast<std::size_t>(j)] = model.add_var("y" + std::to_string(i) + "_" + std::to_string(j + 1), 0.0, cap);
  }
}

void add_offline_constraint_rows(LinearModel& model, const VarMap& vars, const Instance& inst) {
  const auto& oc = inst.offline_constraint;
  if (oc.kind == OfflineConstraint::Kind::Cardinality) {
    std::vector<std::pair<int, double>> xrow, yrow;
    for (int j = 0; j < vars.n; ++j) xrow.emplace_back(vars.x[static_cast<std::size_t>(j)], 1.0);
    model.add_le(xrow, static_cast<double>(oc.cardinality));
    for (int j = 0; j < vars.n; ++j) yrow.emplace_back(vars.y[0][static_cast<std::size_t>(j)], 1.0);
    yrow.emplace_back(vars.y0[0], -static_cast<double>(oc.cardinality));
    model.add_le(yrow, 0.0);
  } else if (oc.kind == OfflineConstraint::Kind::Linear) {
    for (std::size_t r = 0; r < oc.rows.size(); ++r) {
      std::vector<std::pair<int, double>> xrow, yrow;
      for (int j = 0; j < vars.n; ++j) {
        const double a = oc.rows[r][static_cast<std::size_t>(j)];
        if (a != 0.0) {
          xrow.emplace_back(vars.x[static_cast<std::size_t>(j)], a);
          yrow.emplace_back(vars.y[0][static_cast<std::size_t>(j)], a);
        }
      }
      model.add_le(xrow, oc.rhs[r]);
      yrow.emplace_back(vars.y0[0], -oc.rhs[r]);
      model.add_le(yrow, 0.0);
    }
  }
}

}  // namespace

RowSpec no_purchase_tangent_row(const Segment& seg, double wbar, int y0_var, const std::vector<int>& x_vars) {
  // 1/w is convex, so y0 >= 2/wbar - w/wbar^2 holds globally for y0 >= 1/w.
  RowSpec row;
  const double inv2 = 1.0 / (wbar * wbar);
  row.coeffs.emplace_back(y0_var, 1.0);
  for (std::size_t j = 0; j < x_vars.size(); ++j) {
    const double u = seg.weight[j];
    if (u != 0.0) row.coeffs.emplace_back(x_vars[j], u * inv2);
  }
  row.lo = 2.0 / wbar - seg.u0 * inv2;
  row.up = kInf;
  return row;
}

void add_chain_constraints(LinearModel& model, VarMap& vars, const Instance& inst, int segment,
                           const PartialOrder& order) {
  const Segment& seg = inst.segments[static_cast<std::size_t>(segment)];
  const double cap = 1.0 / seg.u0;
  DominanceClosure closure(order, inst.n);
  const std::vector<int> involved = closure.involved();
  std::vector<bool> is_involved(static_cast<std::size_t>(inst.n), false);
  for (int j : involved) is_involved[static_cast<std::size_t>(j)] = true;

  auto& zi = vars.z[static_cast<std::size_t>(segment)];
  zi.assign(static_cast<std::size_t>(inst.n), -1);
  for (int j : involved) {
    zi[static_cast<std::size_t>(j)] =
        model.add_var("z" + std::to_string(segment) + "_" + std::to_string(j + 1), 0.0, cap);
  }

  const int y0v = vars.y0[static_cast<std::size_t>(segment)];
  const auto& yi = vars.y[static_cast<std::size_t>(segment)];

  // isolated products keep the unconstrained box
  for (int j = 0; j < inst.n; ++j) {
    if (!is_involved[static_cast<std::size_t>(j)]) {
      model.add_le({{yi[static_cast<std::size_t>(j)], 1.0}, {y0v, -1.0}}, 0.0);
    }
  }
  for (int j : involved) {
    model.add_le({{zi[static_cast<std::size_t>(j)], 1.0}, {y0v, -1.0}}, 0.0);
  }
  // z grows along dominance: dominators sit below the products they dominate
  for (const auto& [a, b] : closure.comparable_pairs()) {
    model.add_le({{zi[static_cast<std::size_t>(a)], 1.0}, {zi[static_cast<std::size_t>(b)], -1.0}}, 0.0);
  }
  // a dominated product's y fits in the gap below its covering dominator's z
  for (const auto& [a, b] : closure.cover_relations()) {
    model.add_le(
        {{yi[static_cast<std::size_t>(b)], 1.0}, {zi[static_cast<std::size_t>(b)], -1.0}, {zi[static_cast<std::size_t>(a)], 1.0}},
        0.0);
  }
  std::vector<bool> dominated(static_cast<std::size_t>(inst.n), false);
  for (const auto& [a, b] : closure.comparable_pairs()) {
    (void)a;
    dominated[static_cast<std::size_t>(b)] = true;
  }
  for (int j : involved) {
    if (!dominated[static_cast<std::size_t>(j)]) {
      model.add_eq({{yi[static_cast<std::size_t>(j)], 1.0}, {zi[static_cast<std::size_t>(j)], -1.0}}, 0.0);
    }
  }
}

BuiltModel build_ch0(const Instance& inst) {
  {
    const auto violations = validate(inst);
    if (!violations.empty()) {
      throw std::invalid_argument("build_ch0: invalid instance: " + violations.front().field + ": " +
                                  violations.front().message);
    }
  }
  BuiltModel built;
  LinearModel& model = built.model;
  VarMap& vars = built.vars;
  vars.n = inst.n;
  vars.m = inst.num_online();
  const int nseg = vars.m + 1;

  vars.x.resize(static_cast<std::size_t>(inst.n));
  for (int j = 0; j < inst.n; ++j) {
    vars.x[static_cast<std::size_t>(j)] = model.add_var("x" + std::to_string(j + 1), 0.0, 1.0, true);
  }
  vars.y0.assign(static_cast<std::size_t>(nseg), -1);
  vars.y.resize(static_cast<std::size_t>(nseg));
  vars.z.resize(static_cast<std::size_t>(nseg));
  vars.norm_row.assign(static_cast<std::size_t>(nseg), -1);

  for (int i = 0; i < nseg; ++i) add_segment_variables(model, vars, inst.segments[static_cast<std::size_t>(i)], i);

  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    add_normalization(model, vars, seg, i);
    const PartialOrder* order = (i >= 1) ? inst.order_for(i) : nullptr;
    if (order != nullptr && !order->arcs.empty()) {
      add_chain_constraints(model, vars, inst, i, *order);
    } else {
      for (int j = 0; j < inst.n; ++j) {
        model.add_le({{vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 1.0},
                      {vars.y0[static_cast<std::size_t>(i)], -1.0}},
                     0.0);
      }
    }
  }

  add_offline_constraint_rows(model, vars, inst);

  // McCormickPlus: lower pair on the offline segment, upper pair everywhere
  const Segment& off = inst.segments[0];
  const double w0 = weight_sum(off);
  for (int j = 0; j < inst.n; ++j) {
    const int xv = vars.x[static_cast<std::size_t>(j)];
    const int yv = vars.y[0][static_cast<std::size_t>(j)];
    model.add_ge({{yv, 1.0}, {xv, -1.0 / w0}}, 0.0);
    const double a_empty = 1.0 / off.u0;
    model.add_le({{xv, a_empty}, {vars.y0[0], 1.0}, {yv, -1.0}}, a_empty);
  }
  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    const double wsum = weight_sum(seg);
    for (int j = 0; j < inst.n; ++j) {
      const int xv = vars.x[static_cast<std::size_t>(j)];
      const int yv = vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const double uj = seg.weight[static_cast<std::size_t>(j)];
      model.add_le({{yv, 1.0}, {xv, -1.0 / (seg.u0 + uj)}}, 0.0);
      const double a_rest = 1.0 / (wsum - uj);
      model.add_le({{yv, 1.0}, {xv, -a_rest}, {vars.y0[static_cast<std::size_t>(i)], -1.0}}, -a_rest);
    }
  }

  // initial no-purchase tangents at both ends of the weight range
  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    model.add_row(no_purchase_tangent_row(seg, seg.u0, vars.y0[static_cast<std::size_t>(i)], vars.x));
    model.add_row(no_purchase_tangent_row(seg, weight_sum(seg), vars.y0[static_cast<std::size_t>(i)], vars.x));
  }

  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    for (int j = 0; j < inst.n; ++j) {
      const double c = seg.alpha * seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
      if (c != 0.0) model.set_objective(vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], c);
    }
  }
  return built;
}

BuiltModel build_milp_bigm(const Instance& inst) {
  {
    const auto violations = validate(inst);
    if (!violations.empty()) {
      throw std::invalid_argument("build_milp_bigm: invalid instance: " + violations.front().field + ": " +
                                  violations.front().message);
    }
  }
  BuiltModel built;
  LinearModel& model = built.model;
  VarMap& vars = built.vars;
  vars.n = inst.n;
  vars.m = inst.num_online();
  const int nseg = vars.m + 1;

  vars.x_seg.resize(static_cast<std::size_t>(nseg));
  for (int i = 0; i < nseg; ++i) {
    auto& xi = vars.x_seg[static_cast<std::size_t>(i)];
    xi.resize(static_cast<std::size_t>(inst.n));
    for (int j = 0; j < inst.n; ++j) {
      xi[static_cast<std::size_t>(j)] =
          model.add_var("x" + std::to_string(i) + "_" + std::to_string(j + 1), 0.0, 1.0, true);
    }
  }
  vars.x = vars.x_seg[0];

  vars.y0.assign(static_cast<std::size_t>(nseg), -1);
  vars.y.resize(static_cast<std::size_t>(nseg));
  vars.z.resize(static_cast<std::size_t>(nseg));
  vars.norm_row.assign(static_cast<std::size_t>(nseg), -1);
  for (int i = 0; i < nseg; ++i) add_segment_variables(model, vars, inst.segments[static_cast<std::size_t>(i)], i);

  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    add_normalization(model, vars, seg, i);
    const int y0v = vars.y0[static_cast<std::size_t>(i)];
    for (int j = 0; j < inst.n; ++j) {
      const int yv = vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int xv = vars.x_seg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      model.add_le({{yv, 1.0}, {y0v, -1.0}}, 0.0);
      model.add_le({{yv, seg.u0}, {xv, -1.0}}, 0.0);
      model.add_le({{y0v, seg.u0}, {yv, -seg.u0}, {xv, 1.0}}, 1.0);
      if (i >= 1) {
        model.add_le({{xv, 1.0}, {vars.x_seg[0][static_cast<std::size_t>(j)], -1.0}}, 0.0);
      }
    }
    if (i >= 1) {
      const PartialOrder* order = inst.order_for(i);
      if (order != nullptr && !order->arcs.empty()) {
        // at most one product from each comparable pair may be recommended
        DominanceClosure closure(*order, inst.n);
        for (const auto& [a, b] : closure.comparable_pairs()) {
          model.add_le({{vars.x_seg[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)], 1.0},
                        {vars.x_seg[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)], 1.0}},
                       1.0);
        }
      }
    }
  }

  if (inst.offline_constraint.kind != OfflineConstraint::Kind::Unconstrained) {
    const auto& oc = inst.offline_constraint;
    if (oc.kind == OfflineConstraint::Kind::Cardinality) {
      std::vector<std::pair<int, double>> xrow;
      for (int j = 0; j < inst.n; ++j) xrow.emplace_back(vars.x[static_cast<std::size_t>(j)], 1.0);
      model.add_le(xrow, static_cast<double>(oc.cardinality));
    } else {
      for (std::size_t r = 0; r < oc.rows.size(); ++r) {
        std::vector<std::pair<int, double>> xrow;
        for (int j = 0; j < inst.n; ++j) {
          const double a = oc.rows[r][static_cast<std::size_t>(j)];
          if (a != 0.0) xrow.emplace_back(vars.x[static_cast<std::size_t>(j)], a);
        }
        model.add_le(xrow, oc.rhs[r]);
      }
    }
  }

  for (int i = 0; i < nseg; ++i) {
    const Segment& seg = inst.segments[static_cast<std::size_t>(i)];
    for (int j = 0; j < inst.n; ++j) {
      const double c = seg.alpha * seg.revenue[static_cast<std::size_t>(j)] * seg.weight[static_cast<std::size_t>(j)];
      if (c != 0.0) model.set_objective(vars.y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], c);
    }
  }
  return built;
}

RowSpec cut_to_row(const Cut& cut, const Segment& segment, const VarMap& vars) {
  const auto& yi = vars.y[static_cast<std::size_t>(cut.segment)];
  const int y0v = vars.y0[static_cast<std::size_t>(cut.segment)];
  const int xv = vars.x[static_cast<std::size_t>(cut.product)];
  if (cut.kind == CutKind::Under) return under_row(segment, cut.product, cut.subset, xv, y0v, yi);
  return over_row(segment, cut.product, cut.subset, xv, y0v, yi);
}

ConsMnlLp build_cons_mnl_lp(const Segment& segment, const ConsMnlHull& hull) {
  ConsMnlLp lp;
  const int n = static_cast<int>(segment.weight.size());
  const double cap = 1.0 / segment.u0;
  lp.y0 = lp.model.add_var("y0", 0.0, cap);
  lp.y.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) lp.y[static_cast<std::size_t>(j)] = lp.model.add_var("y" + std::to_string(j + 1), 0.0, cap);

  std::vector<std::pair<int, double>> norm;
  norm.emplace_back(lp.y0, segment.u0);
  for (int j = 0; j < n; ++j) {
    if (segment.weight[static_cast<std::size_t>(j)] != 0.0) {
      norm.emplace_back(lp.y[static_cast<std::size_t>(j)], segment.weight[static_cast<std::size_t>(j)]);
    }
  }
  lp.norm_row = lp.model.add_eq(norm, 1.0);

  const auto add_box = [&]() {
    for (int j = 0; j < n; ++j) {
      lp.model.add_le({{lp.y[static_cast<std::size_t>(j)], 1.0}, {lp.y0, -1.0}}, 0.0);
    }
  };

  switch (hull.kind) {
    case ConsMnlHull::Kind::Unconstrained:
      add_box();
      break;
    case ConsMnlHull::Kind::Cardinality: {
      add_box();
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j) row.emplace_back(lp.y[static_cast<std::size_t>(j)], 1.0);
      row.emplace_back(lp.y0, -static_cast<double>(hull.cardinality));
      lp.model.add_le(row, 0.0);
      break;
    }
    case ConsMnlHull::Kind::Linear: {
      add_box();
      for (std::size_t r = 0; r < hull.rows.size(); ++r) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j) {
          const double a = hull.rows[r][static_cast<std::size_t>(j)];
          if (a != 0.0) row.emplace_back(lp.y[static_cast<std::size_t>(j)], a);
        }
        row.emplace_back(lp.y0, -hull.rhs[r]);
        lp.model.add_le(row, 0.0);
      }
      break;
    }
    case ConsMnlHull::Kind::Chain: {
      if (hull.order == nullptr) throw std::invalid_argument("build_cons_mnl_lp: chain hull needs an order");
      DominanceClosure closure(*hull.order, n);
      const std::vector<int> involved = closure.involved();
      std::vector<bool> is_involved(static_cast<std::size_t>(n), false);
      for (int j : involved) is_involved[static_cast<std::size_t>(j)] = true;
      lp.z.assign(static_cast<std::size_t>(n), -1);
      for (int j : involved) {
        lp.z[static_cast<std::size_t>(j)] = lp.model.add_var("z" + std::to_string(j + 1), 0.0, cap);
      }
      for (int j = 0; j < n; ++j) {
        if (!is_involved[static_cast<std::size_t>(j)]) {
          lp.model.add_le({{lp.y[static_cast<std::size_t>(j)], 1.0}, {lp.y0, -1.0}}, 0.0);
        }
      }
      for (int j : involved) {
        lp.model.add_le({{lp.z[static_cast<std::size_t>(j)], 1.0}, {lp.y0, -1.0}}, 0.0);
      }
      for (const auto& [a, b] : closure.comparable_pairs()) {
        lp.model.add_le({{lp.z[static_cast<std::size_t>(a)], 1.0}, {lp.z[static_cast<std::size_t>(b)], -1.0}}, 0.0);
      }
      for (const auto& [a, b] : closure.cover_relations()) {
        lp.model.add_le({{lp.y[static_cast<std::size_t>(b)], 1.0},
                         {lp.z[static_cast<std::size_t>(b)], -1.0},
                         {lp.z[static_cast<std::size_t>(a)], 1.0}},
                        0.0);
      }
      std::vector<bool> dominated(static_cast<std::size_t>(n), false);
      for (const auto& [a, b] : closure.comparable_pairs()) {
        (void)a;
        dominated[static_cast<std::size_t>(b)] = true;
      }
      for (int j : involved) {
        if (!dominated[static_cast<std::size_t>(j)]) {
          lp.model.add_eq({{lp.y[static_cast<std::size_t>(j)], 1.0}, {lp.z[static_cast<std::size_t>(j)], -1.0}}, 0.0);
        }
      }
      break;
    }
  }

  for (int j = 0; j < n; ++j) {
    const double c = segment.revenue[static_cast<std::size_t>(j)] * segment.weight[static_cast<std::size_t>(j)];
    if (c != 0.0) lp.model.set_objective(lp.y[static_cast<std::size_t>(j)], c);
  }
  return lp;
}

IdmLp build_idm_lp(const IdmInstance& inst) {
  const Segment& off = inst.base.offline();
  const int n = inst.base.n;
  for (int j = 0; j < n; ++j) {
    if (off.revenue[static_cast<std::size_t>(j)] < 0.0) {
      throw std::invalid_argument("build_idm_lp: negative revenue outside the supported case");
    }
  }
  for (std::size_t i = 0; i < inst.theta.size(); ++i) {
    for (int j = 0; j < n; ++j) {
      if (inst.base.segments[i + 1].revenue[static_cast<std::size_t>(j)] < 0.0) {
        throw std::invalid_argument("build_idm_lp: negative revenue outside the supported case");
      }
    }
  }

  IdmLp lp;
  LinearModel& model = lp.model;
  auto& vars = lp.vars;
  const double cap = 1.0 / off.u0;
  vars.x.resize(static_cast<std::size_t>(n));
  vars.y.resize(static_cast<std::size_t>(n));
  // no upper bound on x: Under rows already cap it, and a hard x <= 1 would
  // break the tightness argument behind the rounding construction
  for (int j = 0; j < n; ++j) {
    vars.x[static_cast<std::size_t>(j)] = model.add_var("x" + std::to_string(j + 1), 0.0, kInf);
  }
  vars.y0 = model.add_var("y0", 0.0, cap);
  for (int j = 0; j < n; ++j) {
    vars.y[static_cast<std::size_t>(j)] = model.add_var("y" + std::to_string(j + 1), 0.0, cap);
  }

  std::vector<std::pair<int, double>> norm;
  norm.emplace_back(vars.y0, off.u0);
  for (int j = 0; j < n; ++j) {
    if (off.weight[static_cast<std::size_t>(j)] != 0.0) norm.emplace_back(vars.y[static_cast<std::size_t>(j)], off.weight[static_cast<std::size_t>(j)]);
  }
  vars.norm_row = model.add_eq(norm, 1.0);

  for (int j = 0; j < n; ++j) {
    model.add_le({{vars.y[static_cast<std::size_t>(j)], 1.0}, {vars.y0, -1.0}}, 0.0);
  }
  for (const auto& [j, k] : inst.precedence) {
    model.add_ge({{vars.y[static_cast<std::size_t>(j)], 1.0}, {vars.y[static_cast<std::size_t>(k)], -1.0}}, 0.0);
  }
  // seeded Under rows: S = empty and S = N \ {j}
  std::vector<int> full;
  for (int j = 0; j < n; ++j) full.push_back(j);
  for (int j = 0; j < n; ++j) {
    std::vector<int> rest;
    for (int t : full) {
      if (t != j) rest.push_back(t);
    }
    model.add_row(under_row(off, j, {}, vars.x[static_cast<std::size_t>(j)], vars.y0, vars.y));
    model.add_row(under_row(off, j, rest, vars.x[static_cast<std::size_t>(j)], vars.y0, vars.y));
  }

  const double alpha0 = off.alpha;
  for (int j = 0; j < n; ++j) {
    const double cy = alpha0 * off.revenue[static_cast<std::size_t>(j)] * off.weight[static_cast<std::size_t>(j)];
    if (cy != 0.0) model.set_objective(vars.y[static_cast<std::size_t>(j)], cy);
    double cx = 0.0;
    for (std::size_t i = 0; i < inst.theta.size(); ++i) {
      const Segment& seg = inst.base.segments[i + 1];
      cx += seg.alpha * seg.revenue[static_cast<std::size_t>(j)] * inst.theta[i][static_cast<std::size_t>(j)];
    }
    if (cx != 0.0) model.set_objective(vars.x[static_cast<std::size_t>(j)], cx);
  }
  return lp;
}

}  // namespace qap
