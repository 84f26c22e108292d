#include "qap/choice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qap {

double mnl_revenue(const Segment& segment, const std::vector<int>& assortment) {
  double num = 0.0;
  double den = segment.u0;
  for (int j : assortment) {
    num += segment.revenue[static_cast<std::size_t>(j)] * segment.weight[static_cast<std::size_t>(j)];
    den += segment.weight[static_cast<std::size_t>(j)];
  }
  return assortment.empty() ? 0.0 : num / den;
}

ChoicePoint cc_transform(const Segment& segment, const std::vector<int>& assortment) {
  double den = segment.u0;
  for (int j : assortment) den += segment.weight[static_cast<std::size_t>(j)];
  ChoicePoint p;
  p.y0 = 1.0 / den;
  p.y.assign(segment.weight.size(), 0.0);
  for (int j : assortment) p.y[static_cast<std::size_t>(j)] = p.y0;
  return p;
}

std::vector<int> cc_inverse(const Segment& segment, const ChoicePoint& point, double tol) {
  std::vector<int> s;
  for (std::size_t j = 0; j < point.y.size(); ++j) {
    const double v = point.y[j];
    if (v >= point.y0 - tol) {
      s.push_back(static_cast<int>(j));
    } else if (v > tol) {
      throw std::runtime_error("cc_inverse: non-vertex point (y[" + std::to_string(j) + "] interior)");
    }
  }
  (void)segment;
  return s;
}

DominanceClosure::DominanceClosure(const PartialOrder& order, int n) : n_(n), words_((n + 63) / 64) {
  reach_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(words_), 0);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : order.arcs) {
    out[static_cast<std::size_t>(a)].push_back(b);
    ++indeg[static_cast<std::size_t>(b)];
  }
  // Reverse topological sweep: reach(a) = union of {b} + reach(b) over arcs a->b.
  std::vector<int> topo;
  topo.reserve(static_cast<std::size_t>(n));
  {
    std::vector<int> stack;
    std::vector<int> deg = indeg;
    for (int v = 0; v < n; ++v) {
      if (deg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      topo.push_back(v);
      for (int w : out[static_cast<std::size_t>(v)]) {
        if (--deg[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
      }
    }
    if (static_cast<int>(topo.size()) != n) throw std::invalid_argument("DominanceClosure: arc set is cyclic");
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int a = *it;
    auto* row = &reach_[static_cast<std::size_t>(a) * static_cast<std::size_t>(words_)];
    for (int b : out[static_cast<std::size_t>(a)]) {
      row[b >> 6] |= (1ULL << (b & 63));
      const auto* rb = &reach_[static_cast<std::size_t>(b) * static_cast<std::size_t>(words_)];
      for (int w = 0; w < words_; ++w) row[w] |= rb[w];
    }
  }
}

bool DominanceClosure::dominates(int a, int b) const { return bit(reach_, a, b); }

std::vector<int> DominanceClosure::minimal_elements() const {
  std::vector<bool> dominated(static_cast<std::size_t>(n_), false);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (dominates(a, b)) dominated[static_cast<std::size_t>(b)] = true;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < n_; ++v) {
    if (!dominated[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<int, int>> DominanceClosure::cover_relations() const {
  std::vector<std::pair<int, int>> covers;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (!dominates(a, b)) continue;
      bool direct = true;
      for (int c = 0; c < n_; ++c) {
        if (c != a && c != b && dominates(a, c) && dominates(c, b)) {
          direct = false;
          break;
        }
      }
      if (direct) covers.emplace_back(a, b);
    }
  }
  return covers;
}

std::vector<std::pair<int, int>> DominanceClosure::comparable_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (dominates(a, b)) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

std::vector<int> DominanceClosure::involved() const {
  std::vector<bool> in(static_cast<std::size_t>(n_), false);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (dominates(a, b)) in[static_cast<std::size_t>(a)] = in[static_cast<std::size_t>(b)] = true;
    }
  }
  std::vector<int> out;
  for (int v = 0; v < n_; ++v) {
    if (in[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<std::uint32_t> DominanceClosure::dominator_masks() const {
  if (n_ > 32) throw std::invalid_argument("dominator_masks: n > 32");
  std::vector<std::uint32_t> mask(static_cast<std::size_t>(n_), 0);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (dominates(a, b)) mask[static_cast<std::size_t>(b)] |= (1u << a);
    }
  }
  return mask;
}

std::vector<int> DominanceClosure::undominated(const std::vector<int>& s) const {
  std::vector<int> out;
  out.reserve(s.size());
  for (int j : s) {
    bool keep = true;
    for (int k : s) {
      if (k != j && dominates(k, j)) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(j);
  }
  return out;
}

std::vector<int> undominated(const PartialOrder& order, int n, const std::vector<int>& s) {
  return DominanceClosure(order, n).undominated(s);
}

std::vector<std::pair<int, int>> cover_relations(const PartialOrder& order, int n) {
  return DominanceClosure(order, n).cover_relations();
}

std::vector<int> minimal_elements(const PartialOrder& order, int n) {
  return DominanceClosure(order, n).minimal_elements();
}

}  // namespace qap
