#include "tropsvm/svm_soft.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

namespace tropsvm {

namespace {

std::size_t soft_dim(const Points& p, const Points& q) {
  const Points& ref = p.empty() ? q : p;
  if (ref.empty()) throw std::invalid_argument("soft margin: both classes empty");
  const std::size_t d = ref.front().dim();
  for (const auto& x : p) {
    if (x.dim() != d) throw std::invalid_argument("points of unequal dimension in P");
  }
  for (const auto& x : q) {
    if (x.dim() != d) throw std::invalid_argument("points of unequal dimension in Q");
  }
  return d;
}

// Shared builder: keep(point_index, l) decides whether the dominance row
// for coordinate l gets its own slack variable.
LinearProgram build_soft(const Points& p, const Points& q, const IndexMaps& maps,
                         double tradeoff,
                         const std::function<bool(std::size_t, int)>& keep,
                         SoftLpLayout* layout_out) {
  const std::size_t d = soft_dim(p, q);
  if (maps.p.size() != p.size() || maps.q.size() != q.size()) {
    throw std::invalid_argument("soft margin: index maps do not match point counts");
  }
  validate_index_maps(maps, static_cast<int>(d));
  if (tradeoff <= 0.0) throw std::invalid_argument("soft margin: trade-off must be positive");

  const std::size_t m = p.size() + q.size();
  auto point = [&](std::size_t k) -> const TropPoint& {
    return k < p.size() ? p[k] : q[k - p.size()];
  };
  auto indices = [&](std::size_t k) -> const std::pair<int, int>& {
    return k < p.size() ? maps.p[k] : maps.q[k - p.size()];
  };

  SoftLpLayout layout;
  LinearProgram lp;
  auto add_var = [&](const std::string& name, VarSign sign, double cost) {
    lp.objective.push_back(cost);
    lp.signs.push_back(sign);
    lp.var_names.push_back(name);
    return lp.objective.size() - 1;
  };
  layout.z = add_var("z", VarSign::NonNegative, 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    layout.alpha.push_back(add_var("alpha" + std::to_string(k + 1), VarSign::NonNegative, -tradeoff));
  }
  for (std::size_t k = 0; k < m; ++k) {
    layout.beta.push_back(add_var("beta" + std::to_string(k + 1), VarSign::NonNegative, -tradeoff));
  }
  layout.gamma.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto [i, j] = indices(k);
    for (int l = 1; l <= static_cast<int>(d); ++l) {
      if (l == i || l == j || !keep(k, l)) continue;
      layout.gamma[k].emplace_back(
          l, add_var("gamma" + std::to_string(k + 1) + "_" + std::to_string(l),
                     VarSign::NonNegative, -tradeoff));
    }
  }
  for (std::size_t i = 1; i <= d; ++i) {
    layout.omega.push_back(add_var("w" + std::to_string(i), VarSign::Free, 0.0));
  }
  const std::size_t nvar = lp.objective.size();

  // margin rows: z + w_j - w_i - alpha <= xi_i - xi_j
  for (std::size_t k = 0; k < m; ++k) {
    const auto [i, j] = indices(k);
    const TropPoint& x = point(k);
    std::vector<double> row(nvar, 0.0);
    row[layout.z] = 1.0;
    row[layout.omega[static_cast<std::size_t>(j - 1)]] = 1.0;
    row[layout.omega[static_cast<std::size_t>(i - 1)]] = -1.0;
    row[layout.alpha[k]] = -1.0;
    lp.add_row(std::move(row),
               x[static_cast<std::size_t>(i - 1)] - x[static_cast<std::size_t>(j - 1)]);
  }
  // ordering rows: w_j - w_i - beta <= xi_i - xi_j
  for (std::size_t k = 0; k < m; ++k) {
    const auto [i, j] = indices(k);
    const TropPoint& x = point(k);
    std::vector<double> row(nvar, 0.0);
    row[layout.omega[static_cast<std::size_t>(j - 1)]] = 1.0;
    row[layout.omega[static_cast<std::size_t>(i - 1)]] = -1.0;
    row[layout.beta[k]] = -1.0;
    lp.add_row(std::move(row),
               x[static_cast<std::size_t>(i - 1)] - x[static_cast<std::size_t>(j - 1)]);
  }
  // dominance rows: w_l - w_j [- gamma] <= xi_j - xi_l, l != i, j
  for (std::size_t k = 0; k < m; ++k) {
    const auto [i, j] = indices(k);
    const TropPoint& x = point(k);
    for (int l = 1; l <= static_cast<int>(d); ++l) {
      if (l == i || l == j) continue;
      std::vector<double> row(nvar, 0.0);
      row[layout.omega[static_cast<std::size_t>(l - 1)]] = 1.0;
      row[layout.omega[static_cast<std::size_t>(j - 1)]] = -1.0;
      for (const auto& [gl, col] : layout.gamma[k]) {
        if (gl == l) {
          row[col] = -1.0;
          break;
        }
      }
      lp.add_row(std::move(row),
                 x[static_cast<std::size_t>(j - 1)] - x[static_cast<std::size_t>(l - 1)]);
    }
  }
  if (layout_out) *layout_out = std::move(layout);
  return lp;
}

}  // namespace

LinearProgram build_soft_lp_general(const Points& p, const Points& q, const IndexMaps& maps,
                                    double tradeoff, SoftLpLayout* layout) {
  return build_soft(p, q, maps, tradeoff, [](std::size_t, int) { return true; }, layout);
}

LinearProgram build_soft_lp_case(const Points& p, const Points& q, const IndexAssignment& a,
                                 SoftLpLayout* layout) {
  classify_case(a, static_cast<int>(soft_dim(p, q)));
  const std::set<int> quad{a.i_p, a.j_p, a.i_q, a.j_q};
  return build_soft(p, q, constant_maps(a, p.size(), q.size()), 1.0,
                    [&quad](std::size_t, int l) { return quad.count(l) > 0; }, layout);
}

namespace {

SoftMarginResult run_soft(const Points& p, const Points& q, const LinearProgram& lp,
                          const SoftLpLayout& layout, double tradeoff) {
  const LpOutcome outcome = solve_lp(lp);
  SoftMarginResult r;
  r.n_p = p.size();
  r.n_q = q.size();
  if (outcome.verdict == LpVerdict::Infeasible) {
    // The all-slack point is always feasible, so this cannot happen.
    throw std::logic_error("soft margin: solver reported Infeasible");
  }
  if (outcome.verdict == LpVerdict::Unbounded) {
    if (tradeoff >= 1.0 && !p.empty() && !q.empty()) {
      throw std::logic_error(
          "soft margin: unbounded with trade-off >= 1 and non-empty classes");
    }
    r.verdict = LpVerdict::Unbounded;
    return r;
  }
  r.verdict = LpVerdict::Optimal;
  r.objective = outcome.value;
  r.margin = outcome.x[layout.z];
  std::vector<double> w;
  for (std::size_t col : layout.omega) w.push_back(outcome.x[col]);
  r.omega = TropHyperplane{std::move(w)};
  for (std::size_t col : layout.alpha) r.alpha.push_back(outcome.x[col]);
  for (std::size_t col : layout.beta) r.beta.push_back(outcome.x[col]);
  r.gamma.resize(layout.gamma.size());
  double hinge = 0.0;
  for (double v : r.alpha) hinge += v;
  for (double v : r.beta) hinge += v;
  for (std::size_t k = 0; k < layout.gamma.size(); ++k) {
    for (const auto& [l, col] : layout.gamma[k]) {
      r.gamma[k][l] = outcome.x[col];
      hinge += outcome.x[col];
    }
  }
  r.hinge_loss = hinge;
  return r;
}

}  // namespace

SoftMarginResult solve_soft(const Points& p, const Points& q, const SoftMarginConfig& cfg) {
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("solve_soft: both classes must be non-empty");
  }
  SoftLpLayout layout;
  LinearProgram lp;
  if (cfg.tradeoff == 1.0) {
    lp = build_soft_lp_case(p, q, cfg.assignment, &layout);
  } else {
    lp = build_soft_lp_general(p, q, constant_maps(cfg.assignment, p.size(), q.size()),
                               cfg.tradeoff, &layout);
  }
  return run_soft(p, q, lp, layout, cfg.tradeoff);
}

SoftMarginResult solve_soft(const Points& p, const Points& q, const IndexMaps& maps,
                            const SoftMarginConfig& cfg) {
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("solve_soft: both classes must be non-empty");
  }
  SoftLpLayout layout;
  LinearProgram lp = build_soft_lp_general(p, q, maps, cfg.tradeoff, &layout);
  return run_soft(p, q, lp, layout, cfg.tradeoff);
}

bool verify_gamma_vanishing(const Points& p, const Points& q, const SoftMarginConfig& cfg,
                            const SoftMarginResult& result) {
  (void)p;
  (void)q;
  const std::set<int> quad{cfg.assignment.i_p, cfg.assignment.j_p, cfg.assignment.i_q,
                           cfg.assignment.j_q};
  for (const auto& per_point : result.gamma) {
    for (const auto& [l, value] : per_point) {
      if (quad.count(l) == 0 && value > cfg.tolerance) return false;
    }
  }
  return true;
}

}  // namespace tropsvm
