#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qap/choice.hpp"

using namespace qap;

TEST_CASE("mnl_revenue on the toy segments") {
  const Instance inst = test::table1_instance();
  CHECK(mnl_revenue(inst.segments[0], {0}) == doctest::Approx(10.0 * 100 / 101).epsilon(1e-12));
  CHECK(mnl_revenue(inst.segments[0], {}) == 0.0);
  CHECK(mnl_revenue(inst.segments[1], {0, 2}) == doctest::Approx((10.0 * 1 + 8.0 * 100) / 102).epsilon(1e-12));
}

TEST_CASE("cc_transform and cc_inverse") {
  Segment seg{1.0, 1.0, {5, 5}, {1, 2}};
  const ChoicePoint p1 = cc_transform(seg, {0});
  CHECK(p1.y0 == doctest::Approx(0.5));
  CHECK(p1.y[0] == doctest::Approx(0.5));
  CHECK(p1.y[1] == 0.0);
  CHECK(cc_inverse(seg, p1) == std::vector<int>{0});

  const ChoicePoint empty = cc_transform(seg, {});
  CHECK(empty.y0 == doctest::Approx(1.0));
  CHECK(cc_inverse(seg, empty).empty());

  const ChoicePoint both = cc_transform(seg, {0, 1});
  CHECK(both.y0 == doctest::Approx(0.25));
  CHECK(both.y[0] == doctest::Approx(0.25));
  CHECK(both.y[1] == doctest::Approx(0.25));
  CHECK(cc_inverse(seg, both) == std::vector<int>{0, 1});

  SUBCASE("interior point rejected") {
    ChoicePoint bad = both;
    bad.y[1] = 0.12;
    CHECK_THROWS(cc_inverse(seg, bad));
  }
  SUBCASE("round trip over all subsets") {
    Segment s2{1.0, 2.0, {1, 2, 3, 4}, {0.3, 1.1, 0.7, 2.0}};
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      const auto set = test::mask_to_set(mask, 4);
      CHECK(cc_inverse(s2, cc_transform(s2, set)) == set);
    }
  }
  SUBCASE("revenue identity against the transform") {
    Segment s2{1.0, 1.5, {4, 7, 2}, {0.9, 0.2, 1.4}};
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
      const auto set = test::mask_to_set(mask, 3);
      const ChoicePoint p = cc_transform(s2, set);
      double rhs = 0.0;
      for (int j = 0; j < 3; ++j) {
        rhs += s2.revenue[static_cast<std::size_t>(j)] * s2.weight[static_cast<std::size_t>(j)] *
               p.y[static_cast<std::size_t>(j)];
      }
      CHECK(mnl_revenue(s2, set) == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("undominated removes transitively dominated products") {
  PartialOrder order;
  order.segment = 1;
  order.arcs = {{0, 1}, {1, 2}};  // 1 dominates 2 dominates 3 (1-based speak)
  CHECK(undominated(order, 3, {0, 1}) == std::vector<int>{0});
  CHECK(undominated(order, 3, {1}) == std::vector<int>{1});
  // transitivity: product 3 falls to 1 even though (1,3) is not an arc
  CHECK(undominated(order, 3, {0, 2}) == std::vector<int>{0});
}

TEST_CASE("undominated matches the definition oracle over all subsets") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 4 + static_cast<int>(seed) % 3;
    const PartialOrder order = test::random_order(n, 1, seed, 0.35);
    const DominanceClosure closure(order, n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      const auto set = test::mask_to_set(mask, n);
      CHECK(closure.undominated(set) == test::undominated_oracle(order, n, set));
    }
  }
}

TEST_CASE("undominated is idempotent and shrinking") {
  const PartialOrder order = test::random_order(8, 1, 3, 0.3);
  const DominanceClosure closure(order, 8);
  for (std::uint32_t mask = 0; mask < 256; mask += 7) {
    const auto set = test::mask_to_set(mask, 8);
    const auto once = closure.undominated(set);
    for (int j : once) CHECK(std::find(set.begin(), set.end(), j) != set.end());
    CHECK(closure.undominated(once) == once);
  }
}

TEST_CASE("cover relations are the transitive reduction") {
  PartialOrder order;
  order.segment = 1;
  order.arcs = {{0, 1}, {1, 2}, {0, 2}};
  const auto covers = cover_relations(order, 3);
  CHECK(covers == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(minimal_elements(order, 3) == std::vector<int>{0});

  SUBCASE("empty order") {
    PartialOrder none;
    CHECK(cover_relations(none, 3).empty());
    CHECK(minimal_elements(none, 3) == std::vector<int>{0, 1, 2});
  }
  SUBCASE("covers of a generated order are a subset of its closure") {
    const auto orders = generate_partial_orders(60, 1, 4);
    const DominanceClosure closure(orders[0], 60);
    // transitive reduction oracle: a covers b iff a->b and no c strictly between
    for (const auto& [a, b] : closure.cover_relations()) {
      CHECK(closure.dominates(a, b));
      for (int c = 0; c < 60; ++c) {
        if (c != a && c != b) CHECK(!(closure.dominates(a, c) && closure.dominates(c, b)));
      }
    }
  }
}
