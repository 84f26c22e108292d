#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "qap/instance.hpp"

using namespace qap;

TEST_CASE("validate accepts the toy instance and flags broken ones") {
  Instance inst = test::table1_instance();
  CHECK(validate(inst).empty());

  SUBCASE("arrival probabilities off") {
    inst.segments[0].alpha = 0.5;
    inst.segments[1].alpha = 0.6;
    inst.segments[2].alpha = 0.0;
    bool found = false;
    for (const auto& v : validate(inst)) found |= v.message.find("sum != 1") != std::string::npos;
    CHECK(found);
  }
  SUBCASE("cyclic order") {
    inst.orders.push_back({1, {{0, 1}, {1, 0}}});
    bool found = false;
    for (const auto& v : validate(inst)) found |= v.message.find("cyclic") != std::string::npos;
    CHECK(found);
  }
  SUBCASE("negative weight") {
    inst.segments[1].weight[0] = -0.5;
    CHECK(!validate(inst).empty());
  }
}

TEST_CASE("generate_synthetic matches the documented recipe") {
  const Instance inst = generate_synthetic(3, 2, 0.5, 5.0, 7);
  CHECK(validate(inst).empty());
  for (double r : inst.segments[0].revenue) {
    CHECK(r >= 10.0);
    CHECK(r <= 20.0);
  }
  CHECK(inst.segments[0].u0 == 1.0);
  CHECK(inst.segments[1].u0 == 5.0);
  CHECK(inst.segments[2].u0 == 5.0);

  // one weight exactly 1 per online segment, favorites pairwise distinct
  std::set<int> favorites;
  for (int i = 1; i <= 2; ++i) {
    int count = 0;
    for (int j = 0; j < inst.n; ++j) {
      if (inst.segments[static_cast<std::size_t>(i)].weight[static_cast<std::size_t>(j)] == 1.0) {
        ++count;
        favorites.insert(j);
      }
    }
    CHECK(count == 1);
  }
  CHECK(favorites.size() == 2);

  SUBCASE("arrival split") {
    const Instance tiny = generate_synthetic(1, 1, 0.3, 2.0, 5);
    CHECK(tiny.segments[0].alpha == doctest::Approx(0.3));
    CHECK(tiny.segments[1].alpha == doctest::Approx(0.7));
  }
  SUBCASE("determinism") {
    const Instance again = generate_synthetic(3, 2, 0.5, 5.0, 7);
    CHECK(instance_to_json(again) == instance_to_json(inst));
    const Instance other = generate_synthetic(3, 2, 0.5, 5.0, 8);
    CHECK(instance_to_json(other) != instance_to_json(inst));
  }
  SUBCASE("n < m refused") {
    CHECK_THROWS(generate_synthetic(2, 3, 0.5, 5.0, 1));
  }
  SUBCASE("weight-one favorites stay unique across seeds") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      const Instance g = generate_synthetic(9, 4, 0.3, 2.0, seed);
      CHECK(validate(g).empty());
      std::set<int> favs;
      for (int i = 1; i <= 4; ++i) {
        int ones = 0, fav = -1;
        for (int j = 0; j < g.n; ++j) {
          if (g.segments[static_cast<std::size_t>(i)].weight[static_cast<std::size_t>(j)] == 1.0) {
            ++ones;
            fav = j;
          }
        }
        CHECK(ones == 1);
        favs.insert(fav);
      }
      CHECK(favs.size() == 4);
      double asum = 0.0;
      for (const auto& s : g.segments) asum += s.alpha;
      CHECK(std::abs(asum - 1.0) <= 1e-12);
    }
  }
  SUBCASE("VIP discount on the later half") {
    const Instance big = generate_synthetic(10, 4, 0.5, 5.0, 11);
    for (int i = 1; i <= 2; ++i) {
      for (int j = 0; j < big.n; ++j) {
        CHECK(big.segments[static_cast<std::size_t>(i)].revenue[static_cast<std::size_t>(j)] ==
              big.segments[0].revenue[static_cast<std::size_t>(j)]);
      }
    }
    for (int i = 3; i <= 4; ++i) {
      for (int j = 0; j < big.n; ++j) {
        const double ratio = big.segments[static_cast<std::size_t>(i)].revenue[static_cast<std::size_t>(j)] /
                             big.segments[0].revenue[static_cast<std::size_t>(j)];
        CHECK(ratio >= 0.8);
        CHECK(ratio <= 1.0);
      }
    }
  }
}

TEST_CASE("generate_partial_orders follows the permutation-window scheme") {
  SUBCASE("n=100: 25 involved products, trailing window only receives arcs") {
    const auto orders = generate_partial_orders(100, 1, 1);
    REQUIRE(orders.size() == 1);
    const auto& arcs = orders[0].arcs;
    CHECK(!arcs.empty());
    std::set<int> involved;
    std::set<int> sources;
    for (const auto& [a, b] : arcs) {
      involved.insert(a);
      involved.insert(b);
      sources.insert(a);
    }
    CHECK(involved.size() <= 25);
    // positions s-w+1..s never emit arcs, so at most s-w = 19 distinct sources
    CHECK(sources.size() <= 19);
    // acyclic by construction
    CHECK_NOTHROW(DominanceClosure(orders[0], 100));
  }
  SUBCASE("degenerate range emits no arcs") {
    const auto orders = generate_partial_orders(8, 1, 1);
    CHECK(orders[0].arcs.empty());
  }
  SUBCASE("deterministic") {
    const auto a = generate_partial_orders(40, 2, 9);
    const auto b = generate_partial_orders(40, 2, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].arcs == b[i].arcs);
  }
}

TEST_CASE("instance JSON round-trip is lossless and strict") {
  Instance inst = test::table1_instance();
  inst.orders.push_back({1, {{0, 2}, {2, 1}}});
  inst.offline_constraint.kind = OfflineConstraint::Kind::Cardinality;
  inst.offline_constraint.cardinality = 2;

  const auto dir = std::filesystem::temp_directory_path() / "qap_test_io";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "t1.json").string();
  write_instance(inst, path);
  const Instance back = read_instance(path);
  CHECK(instance_to_json(back) == instance_to_json(inst));

  SUBCASE("missing alpha is a schema error") {
    CHECK_THROWS(instance_from_json(R"({"n":1,"segments":[{"u0":1,"r":[1],"u":[1]}]})"));
  }
  SUBCASE("unknown field is a schema error") {
    CHECK_THROWS(instance_from_json(R"({"n":1,"segments":[{"alpha":1,"u0":1,"r":[1],"u":[1]}],"extra":1})"));
  }
  SUBCASE("arc out of range is a schema error") {
    CHECK_THROWS(instance_from_json(
        R"({"n":1,"segments":[{"alpha":0.5,"u0":1,"r":[1],"u":[1]},{"alpha":0.5,"u0":1,"r":[1],"u":[1]}],)"
        R"("orders":[{"segment":1,"arcs":[[1,2]]}]})"));
  }
  SUBCASE("generated instances round-trip exactly") {
    Instance gen = test::random_instance({.n = 7, .m = 3, .u_on0 = 2.0, .alpha0 = 0.4, .luce = true, .cardinality = 3}, 42);
    const std::string p2 = (dir / "gen.json").string();
    write_instance(gen, p2);
    CHECK(instance_to_json(read_instance(p2)) == instance_to_json(gen));
  }
}
