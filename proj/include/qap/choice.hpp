#pragma once

#include <cstdint>
#include <vector>

#include "qap/instance.hpp"

namespace qap {

// Point in Charnes-Cooper space for one segment: y0 is the scaled no-purchase
// coordinate, y[j] the scaled availability of product j. u_ij*y_j is the
// probability of buying j.
struct ChoicePoint {
  double y0 = 0.0;
  std::vector<double> y;
};

double mnl_revenue(const Segment& segment, const std::vector<int>& assortment);
ChoicePoint cc_transform(const Segment& segment, const std::vector<int>& assortment);
// Inverse of cc_transform on vertex-type points; throws on interior coordinates.
std::vector<int> cc_inverse(const Segment& segment, const ChoicePoint& point, double tol = 1e-7);

// Reflexive-transitive dominance built once, queried many times. Dominance
// always acts through the transitive closure of the arc set.
class DominanceClosure {
 public:
  DominanceClosure() = default;
  DominanceClosure(const PartialOrder& order, int n);

  bool dominates(int a, int b) const;  // a != b and a ->* b
  int size() const { return n_; }
  // Products with no dominator (sources of the DAG, including isolated ones).
  std::vector<int> minimal_elements() const;
  // Transitive reduction of the dominance relation.
  std::vector<std::pair<int, int>> cover_relations() const;
  // All strict comparable pairs (a dominates b).
  std::vector<std::pair<int, int>> comparable_pairs() const;
  // Products that appear in some comparable pair.
  std::vector<int> involved() const;
  // dominator_mask()[j] has bit a set iff a dominates j; only valid for n <= 32.
  std::vector<std::uint32_t> dominator_masks() const;

  std::vector<int> undominated(const std::vector<int>& s) const;

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> reach_;  // reach_[a*words_..]: bits of products dominated by a

  bool bit(const std::vector<std::uint64_t>& v, int a, int b) const {
    return (v[static_cast<std::size_t>(a) * static_cast<std::size_t>(words_) + static_cast<std::size_t>(b >> 6)] >>
            (b & 63)) & 1u;
  }
};

std::vector<int> undominated(const PartialOrder& order, int n, const std::vector<int>& s);
std::vector<std::pair<int, int>> cover_relations(const PartialOrder& order, int n);
std::vector<int> minimal_elements(const PartialOrder& order, int n);

}  // namespace qap
