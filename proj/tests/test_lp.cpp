#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tropsvm/lp.hpp"
#include "tropsvm/rng.hpp"

using namespace tropsvm;

namespace {

LinearProgram single_var(double obj, VarSign sign) {
  LinearProgram lp;
  lp.objective = {obj};
  lp.signs = {sign};
  lp.var_names = {"x"};
  return lp;
}

// Brute-force oracle: enumerate all vertices (intersections of n active
// constraints), keep the feasible ones, return the best objective.
struct VertexOracle {
  bool feasible = false;
  double best = -1e300;
};

VertexOracle enumerate_vertices(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  VertexOracle out;
  std::vector<std::size_t> idx;
  // all subsets of rows of size n
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
  std::sort(mask.begin(), mask.end());
  do {
    idx.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (mask[i]) idx.push_back(i);
    }
    if (idx.size() != n) continue;
    // solve the n x n system by Gaussian elimination
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) a[r][c] = lp.rows[idx[r]][c];
      a[r][n] = lp.rhs[idx[r]];
    }
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      }
      if (std::abs(a[piv][col]) < 1e-9) {
        singular = true;
        break;
      }
      std::swap(a[col], a[piv]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      double ax = 0;
      for (std::size_t c = 0; c < n; ++c) ax += lp.rows[i][c] * x[c];
      ok = ax <= lp.rhs[i] + 1e-7;
    }
    for (std::size_t c = 0; c < n && ok; ++c) {
      if (lp.signs[c] == VarSign::NonNegative) ok = x[c] >= -1e-7;
    }
    if (!ok) continue;
    double val = 0;
    for (std::size_t c = 0; c < n; ++c) val += lp.objective[c] * x[c];
    out.feasible = true;
    out.best = std::max(out.best, val);
  } while (std::next_permutation(mask.begin(), mask.end()));
  return out;
}

}  // namespace

TEST_CASE("one-constraint optimum") {
  LinearProgram lp = single_var(1.0, VarSign::Free);
  lp.add_row({1.0}, 3.0);
  const auto out = solve_lp(lp);
  REQUIRE(out.verdict == LpVerdict::Optimal);
  CHECK(out.value == doctest::Approx(3.0));
  CHECK(out.x[0] == doctest::Approx(3.0));
}

TEST_CASE("contradictory bounds are infeasible") {
  LinearProgram lp = single_var(1.0, VarSign::Free);
  lp.add_row({1.0}, 1.0);
  lp.add_row({-1.0}, -2.0);
  CHECK(solve_lp(lp).verdict == LpVerdict::Infeasible);
}

TEST_CASE("open ray is unbounded") {
  LinearProgram lp = single_var(1.0, VarSign::Free);
  lp.add_row({-1.0}, 0.0);
  const auto out = solve_lp(lp);
  REQUIRE(out.verdict == LpVerdict::Unbounded);
  REQUIRE(out.ray.size() == 1);
  // the ray improves the objective and stays feasible
  CHECK(out.ray[0] > 0);
  CHECK(-out.ray[0] <= 1e-12);
}

TEST_CASE("nonnegative variable with empty row set") {
  LinearProgram lp = single_var(-1.0, VarSign::NonNegative);
  const auto out = solve_lp(lp);
  REQUIRE(out.verdict == LpVerdict::Optimal);
  CHECK(out.value == doctest::Approx(0.0));
}

TEST_CASE("deterministic pivots") {
  Rng rng(100);
  LinearProgram lp;
  const std::size_t n = 4, m = 7;
  lp.objective.assign(n, 0.0);
  lp.signs.assign(n, VarSign::Free);
  for (auto& c : lp.objective) c = rng.uniform(-1, 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (auto& v : row) v = rng.uniform(-1, 1);
    lp.add_row(std::move(row), rng.uniform(0.5, 3.0));
  }
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  REQUIRE(a.verdict == b.verdict);
  CHECK(a.iterations == b.iterations);
  CHECK(a.value == b.value);
  CHECK(a.x == b.x);
}

TEST_CASE("cross-check against vertex enumeration on random boxed programs") {
  Rng rng(101);
  int optimal_seen = 0, infeasible_seen = 0;
  for (int it = 0; it < 150; ++it) {
    const std::size_t n = 2 + rng.below(3);          // <= 4 variables
    const std::size_t extra = 1 + rng.below(4);      // + box rows stays <= 14 rows
    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    lp.signs.assign(n, VarSign::Free);
    for (auto& c : lp.objective) c = rng.uniform(-2, 2);
    for (std::size_t i = 0; i < extra; ++i) {
      std::vector<double> row(n);
      for (auto& v : row) v = rng.uniform(-2, 2);
      lp.add_row(std::move(row), rng.uniform(-1.0, 2.0));
    }
    if (it % 4 == 0) {
      // plant a contradiction: a.x <= b together with a.x >= b + gap
      std::vector<double> row(n), neg(n);
      for (std::size_t c = 0; c < n; ++c) {
        row[c] = rng.uniform(-2, 2);
        neg[c] = -row[c];
      }
      const double b = rng.uniform(-1, 1);
      lp.add_row(std::move(row), b);
      lp.add_row(std::move(neg), -b - rng.uniform(0.1, 1.0));
    }
    // box constraints keep the region bounded so the oracle is exhaustive
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> row(n, 0.0);
      row[c] = 1.0;
      lp.add_row(row, 10.0);
      row[c] = -1.0;
      lp.add_row(std::move(row), 10.0);
    }
    const auto got = solve_lp(lp);
    const auto oracle = enumerate_vertices(lp);
    if (oracle.feasible) {
      REQUIRE(got.verdict == LpVerdict::Optimal);
      REQUIRE(std::abs(got.value - oracle.best) <= 1e-7);
      ++optimal_seen;
    } else {
      REQUIRE(got.verdict == LpVerdict::Infeasible);
      ++infeasible_seen;
    }
  }
  // the generator must exercise both verdicts
  CHECK(optimal_seen > 20);
  CHECK(infeasible_seen > 5);
}

TEST_CASE("iteration cap reports breakdown distinctly") {
  LinearProgram lp;
  lp.objective = {1.0, 1.0, 1.0};
  lp.signs.assign(3, VarSign::NonNegative);
  for (int i = 0; i < 6; ++i) {
    lp.add_row({1.0 + i, 2.0, 3.0 - i}, 10.0 + i);
  }
  LpOptions opts;
  opts.max_iterations = 1;
  CHECK_THROWS_AS(solve_lp(lp, opts), LpBreakdown);
}

TEST_CASE("text dump names variables and rows") {
  LinearProgram lp;
  lp.objective = {1.0, 0.0};
  lp.signs = {VarSign::Free, VarSign::NonNegative};
  lp.var_names = {"z", "w1"};
  lp.add_row({1.0, -2.0}, 5.0);
  const std::string text = lp.to_text();
  CHECK(text.find("maximize 1*z") != std::string::npos);
  CHECK(text.find("1*z + -2*w1 <= 5") != std::string::npos);
  CHECK(text.find("z free") != std::string::npos);
  CHECK(text.find("w1 >= 0") != std::string::npos);
}
