#include <chrono>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qap/formulations.hpp"
#include "qap/rng.hpp"
#include "qap/separation.hpp"
#include "qap/simplex.hpp"

using namespace qap;

namespace {

// weights (u0,u1,u2) = (1,1,2), the running two-product example
Segment remark_segment() { return Segment{1.0, 1.0, {0, 0}, {1.0, 2.0}}; }

double subset_cap(const Segment& seg, int j, const std::vector<int>& s) {
  double cap = seg.u0 + seg.weight[static_cast<std::size_t>(j)];
  for (int t : s) cap += seg.weight[static_cast<std::size_t>(t)];
  return cap;
}

// Exhaustive maxima in the U(S+j)-scaled measure the separation proof uses:
// the prefix minimizes the implied bound on x_j over every subset, so its
// scaled violation is the family-wide maximum.
double max_under_violation(const Segment& seg, int j, double xj, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  double best = -kInf;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (mask & (1u << j)) continue;
    const auto s = qap::test::mask_to_set(mask, n);
    best = std::max(best, subset_cap(seg, j, s) * (under_rhs(seg, j, s, xj, y) - y[static_cast<std::size_t>(j)]));
  }
  return best;
}

double max_over_violation(const Segment& seg, int j, double xj, double y0, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  double best = -kInf;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (mask & (1u << j)) continue;
    const auto s = qap::test::mask_to_set(mask, n);
    best = std::max(best, subset_cap(seg, j, s) * (y[static_cast<std::size_t>(j)] - over_rhs(seg, j, s, xj, y0, y)));
  }
  return best;
}

}  // namespace

TEST_CASE("separation at the reference infeasible point") {
  const Segment seg = remark_segment();
  const double xj = 0.95, y0 = 0.35;
  const std::vector<double> y{0.25, 0.20};

  const auto under = separate_under(seg, 0, xj, y0, y);
  REQUIRE(under.has_value());
  CHECK(under->subset.empty());
  CHECK(under->violation == doctest::Approx(0.025).epsilon(1e-9));
  // the S=empty inequality scales to 2 y1 + 2 y2 - x1 >= 0
  CHECK(2 * y[0] + 2 * y[1] - xj == doctest::Approx(-2 * under->violation));

  const auto over = separate_over(seg, 0, xj, y0, y);
  CHECK(!over.has_value());
  // the best Over candidate is T* = {2} with RHS 0.3125
  CHECK(over_rhs(seg, 0, {1}, xj, y0, y) == doctest::Approx(0.3125));

  SUBCASE("x_j = 0 never yields an Under cut") {
    CHECK(!separate_under(seg, 0, 0.0, y0, y).has_value());
  }
  SUBCASE("vertex points are never cut") {
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
      const auto set = qap::test::mask_to_set(mask, 2);
      const ChoicePoint p = cc_transform(seg, set);
      for (int j = 0; j < 2; ++j) {
        const double xv = (mask & (1u << j)) ? 1.0 : 0.0;
        CHECK(!separate_under(seg, j, xv, p.y0, p.y).has_value());
        CHECK(!separate_over(seg, j, xv, p.y0, p.y).has_value());
      }
    }
  }
  SUBCASE("y_j at y0 with x_j = 0 forces an Over cut") {
    const std::vector<double> bad{0.25, 0.25};
    const auto cut = separate_over(seg, 0, 0.0, 0.25, bad);
    REQUIRE(cut.has_value());
    CHECK(cut->violation > 0.0);
  }
}

TEST_CASE("cut rows match the closed forms") {
  const Segment seg = remark_segment();
  LinearModel m;
  const int xv = m.add_var("x", 0.0, 1.0);
  const int y0v = m.add_var("y0", 0.0, 1.0);
  const std::vector<int> yv{m.add_var("y1", 0.0, 1.0), m.add_var("y2", 0.0, 1.0)};

  SUBCASE("Under at S=empty scales to 2y1+2y2-x1 >= 0") {
    const RowSpec row = under_row(seg, 0, {}, xv, y0v, yv);
    // y1 - (1/2) x + (2/2) y2 >= 0
    double cx = 0, cy1 = 0, cy2 = 0;
    for (const auto& [v, c] : row.coeffs) {
      if (v == xv) cx = c;
      if (v == yv[0]) cy1 = c;
      if (v == yv[1]) cy2 = c;
    }
    CHECK(cy1 == doctest::Approx(1.0));
    CHECK(cx == doctest::Approx(-0.5));
    CHECK(cy2 == doctest::Approx(1.0));
    CHECK(row.lo == 0.0);
  }
  SUBCASE("Under at S=N\\{j} is y_j >= alpha(N) x_j") {
    const RowSpec row = under_row(seg, 0, {1}, xv, y0v, yv);
    REQUIRE(row.coeffs.size() == 2);
    CHECK(row.coeffs[0] == std::pair<int, double>{yv[0], 1.0});
    CHECK(row.coeffs[1].first == xv);
    CHECK(row.coeffs[1].second == doctest::Approx(-0.25));
  }
  SUBCASE("Over at S=empty is y_j <= alpha(j) x_j") {
    const RowSpec row = over_row(seg, 0, {}, xv, y0v, yv);
    double cx = 0, cy0 = 0;
    for (const auto& [v, c] : row.coeffs) {
      if (v == xv) cx = c;
      if (v == y0v) cy0 = c;
    }
    CHECK(cx == doctest::Approx(-0.5));
    CHECK(cy0 == 0.0);
    CHECK(row.up == 0.0);
  }
}

TEST_CASE("algorithm-1 prefixes attain the exhaustive max violation") {
  Rng rng(999);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 5));
    Segment seg;
    seg.u0 = rng.uniform(0.5, 3.0);
    seg.revenue.assign(static_cast<std::size_t>(n), 0.0);
    seg.weight.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) seg.weight[static_cast<std::size_t>(j)] = rng.uniform(0.0, 2.0);
    // random point in Y: convex mixture of a few vertices
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    double y0 = 0.0;
    double wsum = 0.0;
    const int pieces = 1 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<double> lambda(static_cast<std::size_t>(pieces));
    for (int p = 0; p < pieces; ++p) {
      lambda[static_cast<std::size_t>(p)] = rng.uniform(0.1, 1.0);
      wsum += lambda[static_cast<std::size_t>(p)];
    }
    for (int p = 0; p < pieces; ++p) {
      const std::uint32_t mask = static_cast<std::uint32_t>(rng.uniform_int(0, (1 << n) - 1));
      const ChoicePoint v = cc_transform(seg, qap::test::mask_to_set(mask, n));
      const double w = lambda[static_cast<std::size_t>(p)] / wsum;
      y0 += w * v.y0;
      for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] += w * v.y[static_cast<std::size_t>(j)];
    }
    const int j = static_cast<int>(rng.uniform_int(0, n - 1));
    const double xj = rng.next_double();

    const double best_under = max_under_violation(seg, j, xj, y);
    const auto under = separate_under(seg, j, xj, y0, y, 1e-12);
    const double got_under = under ? subset_cap(seg, j, under->subset) * under->violation : 0.0;
    CHECK(got_under == doctest::Approx(std::max(0.0, best_under)).epsilon(1e-9).scale(1.0));

    const double best_over = max_over_violation(seg, j, xj, y0, y);
    const auto over = separate_over(seg, j, xj, y0, y, 1e-12);
    const double got_over = over ? subset_cap(seg, j, over->subset) * over->violation : 0.0;
    CHECK(got_over == doctest::Approx(std::max(0.0, best_over)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("separation is sort-dominated at bulk scale" * doctest::timeout(30)) {
  // sanity benchmark, not a scaling assertion: one call on n = 100000 must be
  // sort-like, far from the quadratic regime
  const int n = 100000;
  Rng rng(31);
  Segment seg;
  seg.u0 = 2.0;
  seg.revenue.assign(static_cast<std::size_t>(n), 0.0);
  seg.weight.resize(static_cast<std::size_t>(n));
  std::vector<double> y(static_cast<std::size_t>(n));
  double norm = seg.u0;
  for (int j = 0; j < n; ++j) {
    seg.weight[static_cast<std::size_t>(j)] = rng.uniform(0.0, 1.0);
    y[static_cast<std::size_t>(j)] = rng.next_double();
    norm += seg.weight[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
  }
  const double y0 = 1.2 / norm;
  for (auto& v : y) v /= norm;
  const auto t0 = std::chrono::steady_clock::now();
  (void)separate_under(seg, 5, 0.7, y0, y, 1e-12);
  (void)separate_over(seg, 5, 0.7, y0, y, 1e-12);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 2.0);
}

TEST_CASE("Under and Over hold at every Charnes-Cooper vertex (soundness)") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5;
    Segment seg;
    seg.u0 = rng.uniform(0.5, 2.0);
    seg.revenue.assign(static_cast<std::size_t>(n), 0.0);
    seg.weight.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) seg.weight[static_cast<std::size_t>(j)] = rng.uniform(0.0, 2.0);
    for (std::uint32_t vm = 0; vm < (1u << n); ++vm) {
      const ChoicePoint p = cc_transform(seg, qap::test::mask_to_set(vm, n));
      for (int j = 0; j < n; ++j) {
        const double xj = (vm & (1u << j)) ? 1.0 : 0.0;
        for (std::uint32_t sm = 0; sm < (1u << n); ++sm) {
          if (sm & (1u << j)) continue;
          const auto s = qap::test::mask_to_set(sm, n);
          CHECK(p.y[static_cast<std::size_t>(j)] >= under_rhs(seg, j, s, xj, p.y) - 1e-12);
          CHECK(p.y[static_cast<std::size_t>(j)] <= over_rhs(seg, j, s, xj, p.y0, p.y) + 1e-12);
        }
      }
    }
  }
}
