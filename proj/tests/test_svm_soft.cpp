#include "doctest.h"

#include <cmath>

#include "test_util.hpp"
#include "tropsvm/lp.hpp"
#include "tropsvm/svm_hard.hpp"
#include "tropsvm/svm_soft.hpp"

using namespace tropsvm;
using namespace tropsvm::testutil;

namespace {

const Points kExampleP{TropPoint({4, 10, 20, 10, 20, 20}), TropPoint({8, 16, 20, 16, 20, 20})};
const Points kExampleQ{TropPoint({2, 20, 20, 20, 20, 10}), TropPoint({6, 20, 20, 20, 20, 18})};
const IndexAssignment kExampleA{5, 6, 4, 2};

AssignmentCase nth_case(int k) {
  switch (k) {
    case 0: return AssignmentCase::Case1;
    case 1: return AssignmentCase::Case2a;
    case 2: return AssignmentCase::Case2b;
    case 3: return AssignmentCase::Case3;
    default: return AssignmentCase::Case4;
  }
}

IndexAssignment pattern_assignment(AssignmentCase kind, std::size_t d, Rng& rng) {
  return plant_instance(kind, d, 1, rng).assignment;
}

}  // namespace

TEST_CASE("general program counts variables as 2dn + d + 1") {
  Rng rng(700);
  const std::size_t d = 6, n = 2;
  const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
  const IndexMaps maps = constant_maps(kExampleA, n, n);
  SoftLpLayout layout;
  const LinearProgram lp = build_soft_lp_general(p, q, maps, 1.0, &layout);
  CHECK(lp.num_vars() == 2 * d * (2 * n) / 2 + d + 1);  // 2dn + d + 1 with |P u Q| = 2n
  CHECK(lp.num_rows() == 2 * n * d);
  CHECK(layout.gamma[0].size() == d - 2);
}

TEST_CASE("the all-slack point keeps every program feasible") {
  Rng rng(701);
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 3 + rng.below(4);
    const std::size_t n = 1 + rng.below(3);
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    IndexMaps maps;
    // random valid per-point maps: i(p) from one half, i(q) from the other
    for (std::size_t k = 0; k < n; ++k) {
      const int ip = 1;
      int jp = 2 + static_cast<int>(rng.below(d - 1));
      maps.p.push_back({ip, jp});
      const int iq = 2 + static_cast<int>(rng.below(d - 1));
      int jq = iq;
      while (jq == iq) jq = 1 + static_cast<int>(rng.below(d));
      maps.q.push_back({iq, jq});
    }
    const LinearProgram lp = build_soft_lp_general(p, q, maps, 1.0);
    REQUIRE(solve_lp(lp).verdict != LpVerdict::Infeasible);
  }
}

TEST_CASE("single empty class can be unbounded (test-only construction)") {
  const Points p{TropPoint({5, 5, 4, 3, 2, 1})};
  IndexMaps maps;
  maps.p = {{1, 2}};
  const LinearProgram lp = build_soft_lp_general(p, {}, maps, 1.0);
  CHECK(solve_lp(lp).verdict == LpVerdict::Unbounded);
}

TEST_CASE("bounded for trade-off one with both classes non-empty") {
  Rng rng(702);
  for (int it = 0; it < 60; ++it) {
    const std::size_t d = 4 + rng.below(3);
    const std::size_t n = 1 + rng.below(3);
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    const IndexAssignment a = pattern_assignment(nth_case(it % 5), d, rng);
    SoftMarginConfig cfg{1.0, a, 1e-7};
    const SoftMarginResult r = solve_soft(p, q, cfg);
    REQUIRE(r.verdict == LpVerdict::Optimal);
    REQUIRE(r.margin >= -1e-9);
    for (double v : r.alpha) REQUIRE(v >= -1e-9);
    for (double v : r.beta) REQUIRE(v >= -1e-9);
  }
}

TEST_CASE("upper bound from a sampled pair with shared j") {
  // With j(q) = j(p) = j, the objective never exceeds
  // p_i(p) - p_j + q_j - q_i(p) for any p, q.
  Rng rng(703);
  for (int it = 0; it < 20; ++it) {
    const std::size_t d = 5;
    const Points p = random_points(2, d, rng), q = random_points(2, d, rng);
    const IndexAssignment a{1, 3, 2, 3};  // shared j = 3
    SoftMarginConfig cfg{1.0, a, 1e-7};
    const SoftMarginResult r = solve_soft(p, q, cfg);
    REQUIRE(r.verdict == LpVerdict::Optimal);
    for (const auto& pp : p) {
      for (const auto& qq : q) {
        const double bound = pp[0] - pp[2] + qq[2] - qq[0];
        REQUIRE(r.objective <= bound + 1e-7);
      }
    }
  }
}

TEST_CASE("case programs carry exactly the printed slack variables") {
  Rng rng(704);
  const std::size_t d = 6, n = 2;

  // Case 1: gamma on (i_Q, j_Q) for p and (i_P, j_P) for q -> 8n + 1 sign-restricted vars
  {
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    SoftLpLayout layout;
    const LinearProgram lp = build_soft_lp_case(p, q, kExampleA, &layout);
    std::size_t gammas = 0;
    for (const auto& g : layout.gamma) gammas += g.size();
    CHECK(gammas == 4 * n);  // two per point
    CHECK(lp.num_vars() == 8 * n + 1 + d);
    CHECK(layout.gamma[0][0].first == 2);  // p keeps l = j_Q = 2 and l = i_Q = 4
    CHECK(layout.gamma[0][1].first == 4);
  }
  // Case 3: no gamma at all -> 4n + 1 sign-restricted vars
  {
    const std::size_t d3 = 3, n3 = 1;
    const Points p = random_points(n3, d3, rng), q = random_points(n3, d3, rng);
    SoftLpLayout layout;
    const LinearProgram lp = build_soft_lp_case(p, q, IndexAssignment{1, 2, 2, 1}, &layout);
    for (const auto& g : layout.gamma) CHECK(g.empty());
    CHECK(lp.num_vars() == 4 * n3 + 1 + d3);
  }
  // Case 2a: one gamma per point -> 6n + 1
  {
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    SoftLpLayout layout;
    const LinearProgram lp = build_soft_lp_case(p, q, IndexAssignment{1, 2, 3, 1}, &layout);
    std::size_t gammas = 0;
    for (const auto& g : layout.gamma) gammas += g.size();
    CHECK(gammas == 2 * n);
    CHECK(lp.num_vars() == 6 * n + 1 + d);
  }
}

TEST_CASE("separable data gives zero hinge loss and the hard margin") {
  SoftMarginConfig cfg{1.0, kExampleA, 1e-7};
  const SoftMarginResult r = solve_soft(kExampleP, kExampleQ, cfg);
  REQUIRE(r.verdict == LpVerdict::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.margin == doctest::Approx(2.0));
  CHECK(r.hinge_loss <= 1e-7);

  Rng rng(705);
  for (int it = 0; it < 15; ++it) {
    const PlantedInstance inst = plant_instance(nth_case(it % 5), 5, 2, rng);
    SoftMarginConfig c2{1.0, inst.assignment, 1e-7};
    const SoftMarginResult soft = solve_soft(inst.p, inst.q, c2);
    const HardMarginResult hard = hard_feasible_and_margin(inst.p, inst.q, inst.assignment);
    REQUIRE(hard.feasible);
    REQUIRE(soft.verdict == LpVerdict::Optimal);
    // separable data: the net objective equals the hard margin (inflating z
    // against slack is at best neutral), and z never falls below it
    CHECK(std::abs(soft.objective - hard.margin) <= 1e-6);
    CHECK(soft.margin >= hard.margin - 1e-6);
  }
}

TEST_CASE("identical single points optimize at zero margin") {
  const Points p{TropPoint({0, 1, 2})}, q{TropPoint({0, 1, 2})};
  SoftMarginConfig cfg{1.0, IndexAssignment{1, 2, 2, 1}, 1e-7};
  const SoftMarginResult r = solve_soft(p, q, cfg);
  REQUIRE(r.verdict == LpVerdict::Optimal);
  CHECK(r.margin <= 1e-9);
}

TEST_CASE("extraneous gamma vanishes at optima of the general program") {
  Rng rng(706);
  for (int it = 0; it < 30; ++it) {
    const std::size_t d = 5 + (it % 2);
    const std::size_t n = 1 + rng.below(3);
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    const IndexAssignment a = pattern_assignment(nth_case(it % 5), d, rng);
    SoftMarginConfig cfg{1.0, a, 1e-7};
    const SoftMarginResult r = solve_soft(p, q, constant_maps(a, n, n), cfg);
    REQUIRE(r.verdict == LpVerdict::Optimal);
    REQUIRE(verify_gamma_vanishing(p, q, cfg, r));
    // consequence of the vanishing: the max of x + omega over coordinates
    // outside the quadruple never exceeds the max over the quadruple
    auto quad_attains = [&](const TropPoint& x, int j_anchor) {
      double all = -1e300, quad = -1e300;
      for (int l = 1; l <= static_cast<int>(d); ++l) {
        const double v = x[static_cast<std::size_t>(l - 1)] +
                         r.omega.omega[static_cast<std::size_t>(l - 1)];
        all = std::max(all, v);
        if (l == a.i_p || l == a.j_p || l == a.i_q || l == a.j_q) quad = std::max(quad, v);
      }
      (void)j_anchor;
      return all <= quad + 1e-7;
    };
    for (const auto& x : p) REQUIRE(quad_attains(x, a.j_p));
    for (const auto& x : q) REQUIRE(quad_attains(x, a.j_q));
  }
}

TEST_CASE("on separable data every point lands in its class's closed sectors") {
  // The sector statement concerns zero-slack optima; the optimal face can
  // hold other vertices, so instances where the solver lands elsewhere are
  // counted but not asserted on.
  Rng rng(710);
  int zero_hinge = 0;
  for (int it = 0; it < 15; ++it) {
    const PlantedInstance inst = plant_instance(nth_case(it % 5), 6, 2, rng);
    SoftMarginConfig cfg{1.0, inst.assignment, 1e-7};
    const SoftMarginResult r =
        solve_soft(inst.p, inst.q, constant_maps(inst.assignment, 2, 2), cfg);
    REQUIRE(r.verdict == LpVerdict::Optimal);
    if (r.hinge_loss > 1e-7) continue;
    ++zero_hinge;
    for (const auto& x : inst.p) {
      const SectorSet s = sector_membership(x, r.omega, 1e-6);
      const bool in_ip = std::find(s.begin(), s.end(), inst.assignment.i_p) != s.end();
      const bool in_jp = std::find(s.begin(), s.end(), inst.assignment.j_p) != s.end();
      REQUIRE((in_ip || in_jp));
    }
    for (const auto& x : inst.q) {
      const SectorSet s = sector_membership(x, r.omega, 1e-6);
      const bool in_iq = std::find(s.begin(), s.end(), inst.assignment.i_q) != s.end();
      const bool in_jq = std::find(s.begin(), s.end(), inst.assignment.j_q) != s.end();
      REQUIRE((in_iq || in_jq));
    }
  }
  CHECK(zero_hinge >= 8);
}

TEST_CASE("planting a positive extraneous gamma is strictly suboptimal") {
  Rng rng(707);
  const std::size_t d = 6, n = 2;
  const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
  SoftMarginConfig cfg{1.0, kExampleA, 1e-7};
  const SoftMarginResult opt = solve_soft(p, q, constant_maps(kExampleA, n, n), cfg);
  REQUIRE(opt.verdict == LpVerdict::Optimal);

  // Hand-build a feasible solution from the optimum by bumping one gamma
  // outside the quadruple: still feasible, objective strictly worse.
  SoftMarginResult tampered = opt;
  const int extraneous = 3;  // not in {5, 6, 4, 2}
  tampered.gamma[0][extraneous] += 1.0;
  tampered.objective -= 1.0;
  CHECK_FALSE(verify_gamma_vanishing(p, q, cfg, tampered));
  CHECK(tampered.objective < opt.objective);
}

TEST_CASE("general and case programs agree at trade-off one") {
  Rng rng(708);
  for (int it = 0; it < 25; ++it) {
    const std::size_t d = 4 + rng.below(3);
    const std::size_t n = 1 + rng.below(3);
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    const IndexAssignment a = pattern_assignment(nth_case(it % 5), d, rng);
    SoftMarginConfig cfg{1.0, a, 1e-7};
    const SoftMarginResult general = solve_soft(p, q, constant_maps(a, n, n), cfg);
    const SoftMarginResult cased = solve_soft(p, q, cfg);
    REQUIRE(general.verdict == LpVerdict::Optimal);
    REQUIRE(cased.verdict == LpVerdict::Optimal);
    REQUIRE(std::abs(general.objective - cased.objective) <= 1e-6);
  }
}

TEST_CASE("hinge loss is non-increasing in the trade-off") {
  Rng rng(709);
  for (int it = 0; it < 10; ++it) {
    const std::size_t d = 5, n = 3;
    const Points p = random_points(n, d, rng), q = random_points(n, d, rng);
    const IndexAssignment a = pattern_assignment(nth_case(it % 5), d, rng);
    double prev = 1e300;
    for (double c : {1.0, 2.0, 4.0, 8.0}) {
      SoftMarginConfig cfg{c, a, 1e-7};
      const SoftMarginResult r = solve_soft(p, q, cfg);
      REQUIRE(r.verdict == LpVerdict::Optimal);
      REQUIRE(r.hinge_loss <= prev + 1e-7);
      prev = r.hinge_loss;
    }
  }
}

TEST_CASE("small trade-offs cross an unboundedness threshold") {
  // With one point per class, pushing z up costs two units of slack per
  // unit of margin, so the objective diverges once the trade-off drops
  // below roughly one half. The solver surfaces Unbounded as a result only
  // in that regime; at trade-off one it must stay Optimal.
  const Points p{TropPoint({0, 3, 1, 0})}, q{TropPoint({0, 1, 3, 0})};
  const IndexAssignment a{2, 3, 3, 2};
  bool seen_unbounded = false, seen_optimal_after = false;
  LpVerdict prev = LpVerdict::Unbounded;
  for (double tradeoff : {0.1, 0.2, 0.3, 0.4, 0.45, 0.6, 0.8, 1.0}) {
    SoftMarginConfig cfg{tradeoff, a, 1e-7};
    const SoftMarginResult r = solve_soft(p, q, cfg);
    if (r.verdict == LpVerdict::Unbounded) {
      // the verdict may not flip back once bounded
      REQUIRE(prev == LpVerdict::Unbounded);
      seen_unbounded = true;
    } else if (seen_unbounded) {
      seen_optimal_after = true;
    }
    prev = r.verdict;
  }
  CHECK(seen_unbounded);
  CHECK(seen_optimal_after);
  SoftMarginConfig one{1.0, a, 1e-7};
  CHECK(solve_soft(p, q, one).verdict == LpVerdict::Optimal);
}

TEST_CASE("public solver rejects empty classes") {
  const Points p{TropPoint({0, 1, 2})};
  SoftMarginConfig cfg{1.0, IndexAssignment{1, 2, 2, 1}, 1e-7};
  CHECK_THROWS_AS(solve_soft(p, {}, cfg), std::invalid_argument);
}
