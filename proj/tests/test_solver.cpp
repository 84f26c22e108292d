#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qap/heuristics.hpp"
#include "qap/oracle.hpp"
#include "qap/solver.hpp"

using namespace qap;

TEST_CASE("solve_qap reproduces the toy optima with both formulations") {
  const Instance inst = test::table1_instance();
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  for (const auto formulation : {QapFormulation::CH, QapFormulation::MILP}) {
    opt.formulation = formulation;
    const QapSolution sol = solve_qap(inst, opt);
    CHECK(sol.objective == doctest::Approx(9.1096).epsilon(1e-4));
    CHECK(sol.offline == std::vector<int>{0, 2});
    CHECK(sol.online[0] == std::vector<int>{0, 2});
    CHECK(sol.online[1] == std::vector<int>{0});
    CHECK(check_solution(inst, sol).empty());
  }
}

TEST_CASE("solve_qap on the second toy instance") {
  const Instance inst = test::example3_instance();
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  const QapSolution sol = solve_qap(inst, opt);
  CHECK(sol.objective == doctest::Approx(18.386).epsilon(1e-4));
  CHECK(sol.offline == std::vector<int>{0, 2});
  CHECK(sol.online[0] == std::vector<int>{2});
  // online type 2 has alternate optima {1,3} and {3}; both pay 10.00
  CHECK(mnl_revenue(inst.segments[2], sol.online[1]) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("offline-only instance reduces to the revenue-ordered optimum") {
  Instance inst;
  inst.n = 3;
  inst.segments.push_back({1.0, 1.0, {10, 9, 8}, {100, 100, 1}});
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  const QapSolution sol = solve_qap(inst, opt);
  const QapSolution ro = two_step_ro(inst);
  CHECK(sol.objective == doctest::Approx(ro.objective).epsilon(1e-9));
}

TEST_CASE("cutting rounds only tighten the relaxation") {
  const Instance inst = test::table1_instance();
  SolveOptions opt;
  opt.k_rounds = 2;
  opt.mip.mip_gap = 1e-9;
  const QapSolution sol = solve_qap(inst, opt);
  REQUIRE(sol.stats.rounds.size() >= 2);
  for (std::size_t k = 1; k < sol.stats.rounds.size(); ++k) {
    CHECK(sol.stats.rounds[k].relax_value <= sol.stats.rounds[k - 1].relax_value + 1e-9);
  }
  SUBCASE("k = 0 adds nothing") {
    SolveOptions plain;
    plain.k_rounds = 0;
    plain.mip.mip_gap = 1e-9;
    const QapSolution base = solve_qap(inst, plain);
    CHECK(base.stats.cuts_total == 0);
    CHECK(base.objective == doctest::Approx(sol.objective).epsilon(1e-9));
  }
}

TEST_CASE("solve_qap equals the oracle on a random mixed suite") {
  int done = 0;
  for (std::uint64_t seed = 101; done < 10; ++seed) {
    test::RandomInstanceSpec spec;
    spec.n = 4 + static_cast<int>(seed % 5);
    spec.m = 1 + static_cast<int>(seed % 3);
    spec.u_on0 = (seed % 3 == 0) ? 10.0 : 2.0;
    spec.luce = (seed % 2) == 0;
    if (seed % 5 == 0) spec.cardinality = (spec.n + 2) / 3;
    const Instance inst = test::random_instance(spec, seed);
    const QapSolution oracle = brute_force_qap(inst);
    SolveOptions opt;
    opt.mip.mip_gap = 1e-9;
    for (const auto formulation : {QapFormulation::CH, QapFormulation::MILP}) {
      opt.formulation = formulation;
      const QapSolution sol = solve_qap(inst, opt);
      CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-6));
      CHECK(check_solution(inst, sol).empty());
      CHECK(sol.objective >= two_step_ro(inst).objective - 1e-9);
      CHECK(sol.objective >= improved_ro(inst).objective - 1e-9);
    }
    ++done;
  }
}

TEST_CASE("extract_assortments") {
  const Instance inst = test::table1_instance();
  SUBCASE("fixed offline set reproduces the reference online sets") {
    auto [offline, online] = extract_assortments(inst, {1.0, 0.0, 1.0});
    CHECK(offline == std::vector<int>{0, 2});
    CHECK(online[0] == std::vector<int>{0, 2});
    CHECK(online[1] == std::vector<int>{0});
  }
  SUBCASE("all-zero x gives empty sets") {
    auto [offline, online] = extract_assortments(inst, {0.0, 0.0, 0.0});
    CHECK(offline.empty());
    CHECK(online[0].empty());
    CHECK(online[1].empty());
  }
  SUBCASE("fractional x is rejected") {
    CHECK_THROWS(extract_assortments(inst, {0.5, 0.0, 1.0}));
  }
  SUBCASE("extraction value matches the recomputed objective on random instances") {
    for (std::uint64_t seed = 11; seed < 15; ++seed) {
      const Instance rnd = test::random_instance({.n = 6, .m = 2, .u_on0 = 5.0, .alpha0 = 0.5, .luce = true, .cardinality = 0}, seed);
      SolveOptions opt;
      opt.mip.mip_gap = 1e-9;
      const QapSolution sol = solve_qap(rnd, opt);
      QapSolution copy = sol;
      finalize_solution(rnd, copy);
      CHECK(copy.objective == doctest::Approx(sol.objective).epsilon(1e-12));
    }
  }
}

TEST_CASE("general linear offline constraints") {
  // weighted shelf-space row: 2x1 + x2 + 3x3 + x4 + 2x5 <= 4
  Instance inst = test::random_instance({.n = 5, .m = 2, .u_on0 = 2.0, .alpha0 = 0.4, .luce = false, .cardinality = 0}, 64);
  inst.offline_constraint.kind = OfflineConstraint::Kind::Linear;
  inst.offline_constraint.rows = {{2, 1, 3, 1, 2}};
  inst.offline_constraint.rhs = {4};
  const QapSolution oracle = brute_force_qap(inst);
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  opt.warm_heuristic = true;  // silently skipped for linear systems
  for (const auto formulation : {QapFormulation::CH, QapFormulation::MILP}) {
    opt.formulation = formulation;
    const QapSolution sol = solve_qap(inst, opt);
    CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-6));
    CHECK(check_solution(inst, sol).empty());
  }
  CHECK_THROWS(two_step_ro(inst));
  CHECK_THROWS(improved_ro(inst));
}

TEST_CASE("front-warehouse configuration: no walk-in traffic, capped shelf") {
  // alpha_0 = 0 turns the offline node into a pure warehouse whose cardinality
  // cap limits what online segments can be served
  Instance inst = test::random_instance({.n = 6, .m = 3, .u_on0 = 2.0, .alpha0 = 0.0, .luce = false, .cardinality = 2}, 31);
  const QapSolution oracle = brute_force_qap(inst);
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  const QapSolution sol = solve_qap(inst, opt);
  CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-6));
  CHECK(static_cast<int>(sol.offline.size()) <= 2);
  CHECK(check_solution(inst, sol).empty());
}

TEST_CASE("CH-Chain and MILP-Chain agree beyond oracle scale") {
  // production order generator only emits arcs from n = 28 upward
  Instance inst = generate_synthetic(32, 3, 0.5, 2.0, 17);
  inst.orders = generate_partial_orders(32, 3, 17);
  int arcs = 0;
  for (const auto& o : inst.orders) arcs += static_cast<int>(o.arcs.size());
  REQUIRE(arcs > 0);
  SolveOptions opt;
  opt.mip.mip_gap = 1e-9;
  const QapSolution ch = solve_qap(inst, opt);
  opt.formulation = QapFormulation::MILP;
  opt.k_rounds = 0;
  const QapSolution milp = solve_qap(inst, opt);
  CHECK(ch.objective == doctest::Approx(milp.objective).epsilon(1e-7));
  CHECK(check_solution(inst, ch).empty());
  CHECK(check_solution(inst, milp).empty());
}

TEST_CASE("oracle invariants") {
  SUBCASE("reference values") {
    CHECK(brute_force_qap(test::table1_instance()).objective == doctest::Approx(9.1096).epsilon(1e-4));
    CHECK(brute_force_qap(test::example3_instance()).objective == doctest::Approx(18.386).epsilon(1e-4));
  }
  SUBCASE("permutation invariance under product relabeling") {
    const Instance inst = test::random_instance({.n = 5, .m = 2, .u_on0 = 2.0, .alpha0 = 0.4, .luce = false, .cardinality = 0}, 77);
    Instance relabeled = inst;
    const std::vector<int> perm{3, 0, 4, 1, 2};
    for (std::size_t i = 0; i < inst.segments.size(); ++i) {
      for (int j = 0; j < inst.n; ++j) {
        relabeled.segments[i].revenue[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] =
            inst.segments[i].revenue[static_cast<std::size_t>(j)];
        relabeled.segments[i].weight[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] =
            inst.segments[i].weight[static_cast<std::size_t>(j)];
      }
    }
    CHECK(brute_force_qap(relabeled).objective == doctest::Approx(brute_force_qap(inst).objective).epsilon(1e-12));
  }
  SUBCASE("refuses large n") {
    CHECK_THROWS(brute_force_qap(test::random_instance({.n = 13, .m = 1, .u_on0 = 2.0, .alpha0 = 0.5, .luce = false, .cardinality = 0}, 1)));
  }
}
