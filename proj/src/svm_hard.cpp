#include "tropsvm/svm_hard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tropsvm {

namespace {

constexpr double kFeasTol = 1e-9;  // tolerance on the closed-form inequalities

void require_nonempty(const Points& p, const Points& q) {
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("both classes must be non-empty");
  }
}

std::size_t common_dim(const Points& p, const Points& q) {
  require_nonempty(p, q);
  const std::size_t d = p.front().dim();
  for (const auto& x : p) {
    if (x.dim() != d) throw std::invalid_argument("points of unequal dimension in P");
  }
  for (const auto& x : q) {
    if (x.dim() != d) throw std::invalid_argument("points of unequal dimension in Q");
  }
  return d;
}

// min over the class of x[i-1] - x[j-1]
double min_diff(const Points& pts, int i, int j) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    m = std::min(m, x[static_cast<std::size_t>(i - 1)] - x[static_cast<std::size_t>(j - 1)]);
  }
  return m;
}

}  // namespace

const char* case_name(AssignmentCase c) {
  switch (c) {
    case AssignmentCase::Case1: return "1";
    case AssignmentCase::Case2a: return "2a";
    case AssignmentCase::Case2b: return "2b";
    case AssignmentCase::Case3: return "3";
    case AssignmentCase::Case4: return "4";
  }
  return "?";
}

AssignmentCase classify_case(const IndexAssignment& a, int dim) {
  auto in_range = [&](int v) { return v >= 1 && v <= dim; };
  if (!in_range(a.i_p) || !in_range(a.j_p) || !in_range(a.i_q) || !in_range(a.j_q)) {
    throw std::invalid_argument("classify_case: indices must lie in 1.." + std::to_string(dim));
  }
  if (a.i_p == a.j_p || a.i_q == a.j_q) {
    throw std::invalid_argument("classify_case: i and j must differ within each class");
  }
  if (a.i_p == a.i_q) {
    throw std::invalid_argument("classify_case: i_P and i_Q must differ");
  }
  const bool pq = a.i_p == a.j_q;  // i_P = j_Q
  const bool qp = a.i_q == a.j_p;  // i_Q = j_P
  if (pq && qp) return AssignmentCase::Case3;
  if (pq) return AssignmentCase::Case2a;
  if (qp) return AssignmentCase::Case2b;
  if (a.j_p == a.j_q) return AssignmentCase::Case4;
  return AssignmentCase::Case1;
}

IndexMaps constant_maps(const IndexAssignment& a, std::size_t n_p, std::size_t n_q) {
  IndexMaps maps;
  maps.p.assign(n_p, {a.i_p, a.j_p});
  maps.q.assign(n_q, {a.i_q, a.j_q});
  return maps;
}

void validate_index_maps(const IndexMaps& maps, int dim) {
  auto check = [&](const std::pair<int, int>& ij) {
    if (ij.first < 1 || ij.first > dim || ij.second < 1 || ij.second > dim) {
      throw std::invalid_argument("index map entry out of range");
    }
    if (ij.first == ij.second) {
      throw std::invalid_argument("index map entry has i(xi) = j(xi)");
    }
  };
  for (const auto& ij : maps.p) check(ij);
  for (const auto& ij : maps.q) check(ij);
  for (const auto& ip : maps.p) {
    for (const auto& iq : maps.q) {
      if (ip.first == iq.first) {
        throw std::invalid_argument("index maps violate i(p) != i(q)");
      }
    }
  }
}

LinearProgram build_hard_lp(const Points& p, const Points& q, const IndexMaps& maps) {
  const std::size_t d = common_dim(p, q);
  if (maps.p.size() != p.size() || maps.q.size() != q.size()) {
    throw std::invalid_argument("build_hard_lp: index maps do not match point counts");
  }
  validate_index_maps(maps, static_cast<int>(d));

  LinearProgram lp;
  lp.objective.assign(d + 1, 0.0);
  lp.objective[0] = 1.0;  // maximize z
  lp.signs.assign(d + 1, VarSign::Free);
  lp.var_names.push_back("z");
  for (std::size_t i = 1; i <= d; ++i) lp.var_names.push_back("w" + std::to_string(i));

  auto each_point = [&](auto&& fn) {
    for (std::size_t k = 0; k < p.size(); ++k) fn(p[k], maps.p[k]);
    for (std::size_t k = 0; k < q.size(); ++k) fn(q[k], maps.q[k]);
  };
  // margin rows: z + w_j - w_i <= xi_i - xi_j
  each_point([&](const TropPoint& x, const std::pair<int, int>& ij) {
    const auto [i, j] = ij;
    std::vector<double> row(d + 1, 0.0);
    row[0] = 1.0;
    row[static_cast<std::size_t>(j)] = 1.0;
    row[static_cast<std::size_t>(i)] = -1.0;
    lp.add_row(std::move(row),
               x[static_cast<std::size_t>(i - 1)] - x[static_cast<std::size_t>(j - 1)]);
  });
  // ordering rows: w_j - w_i <= xi_i - xi_j
  each_point([&](const TropPoint& x, const std::pair<int, int>& ij) {
    const auto [i, j] = ij;
    std::vector<double> row(d + 1, 0.0);
    row[static_cast<std::size_t>(j)] = 1.0;
    row[static_cast<std::size_t>(i)] = -1.0;
    lp.add_row(std::move(row),
               x[static_cast<std::size_t>(i - 1)] - x[static_cast<std::size_t>(j - 1)]);
  });
  // dominance rows: w_l - w_j <= xi_j - xi_l for l != i, j
  each_point([&](const TropPoint& x, const std::pair<int, int>& ij) {
    const auto [i, j] = ij;
    for (int l = 1; l <= static_cast<int>(d); ++l) {
      if (l == i || l == j) continue;
      std::vector<double> row(d + 1, 0.0);
      row[static_cast<std::size_t>(l)] = 1.0;
      row[static_cast<std::size_t>(j)] = -1.0;
      lp.add_row(std::move(row),
                 x[static_cast<std::size_t>(j - 1)] - x[static_cast<std::size_t>(l - 1)]);
    }
  });
  return lp;
}

LinearProgram build_hard_lp(const Points& p, const Points& q, const IndexAssignment& a) {
  classify_case(a, static_cast<int>(common_dim(p, q)));
  return build_hard_lp(p, q, constant_maps(a, p.size(), q.size()));
}

CaseConstants case_constants(const Points& p, const Points& q, const IndexAssignment& a) {
  const AssignmentCase kind = classify_case(a, static_cast<int>(common_dim(p, q)));
  switch (kind) {
    case AssignmentCase::Case1:
      return Case1Constants{
          min_diff(p, a.i_p, a.j_p),  // A
          min_diff(p, a.j_p, a.i_q),  // B
          min_diff(p, a.j_p, a.j_q),  // C
          min_diff(q, a.i_q, a.j_q),  // D
          min_diff(q, a.j_q, a.i_p),  // E
          min_diff(q, a.j_q, a.j_p),  // F
      };
    case AssignmentCase::Case2a:
      return Case2Constants{
          min_diff(p, a.i_p, a.j_p),
          std::min(min_diff(p, a.i_p, a.j_p), min_diff(q, a.i_p, a.j_p)),
          min_diff(p, a.j_p, a.i_q),
          min_diff(q, a.i_q, a.i_p),
      };
    case AssignmentCase::Case2b:
      return Case2Constants{
          min_diff(q, a.i_q, a.j_q),
          std::min(min_diff(p, a.i_q, a.j_q), min_diff(q, a.i_q, a.j_q)),
          min_diff(q, a.j_q, a.i_p),
          min_diff(p, a.i_p, a.i_q),
      };
    case AssignmentCase::Case3:
      return Case3Constants{min_diff(p, a.i_p, a.j_p), min_diff(q, a.i_q, a.j_q)};
    case AssignmentCase::Case4:
      return Case4Constants{
          min_diff(p, a.i_p, a.j_p), -min_diff(q, a.j_p, a.i_p),
          min_diff(q, a.i_q, a.j_q), -min_diff(p, a.j_q, a.i_q),
      };
  }
  throw std::logic_error("unreachable");
}

HardMarginResult hard_feasible_and_margin(const Points& p, const Points& q,
                                          const IndexAssignment& a) {
  HardMarginResult r;
  r.assignment = a;
  r.case_kind = classify_case(a, static_cast<int>(common_dim(p, q)));
  r.constants = case_constants(p, q, a);

  switch (r.case_kind) {
    case AssignmentCase::Case1: {
      const auto& c = std::get<Case1Constants>(r.constants);
      const double lo = std::max(-c.f, -c.a - c.e);
      const double hi = std::min(c.d + c.b, c.c);
      r.feasible = lo <= hi + kFeasTol;
      if (r.feasible) {
        r.margin = std::min({c.a + c.c + c.e, c.d + c.b + c.f,
                             0.5 * (c.a + c.b + c.d + c.e)});
      }
      break;
    }
    case AssignmentCase::Case2a:
    case AssignmentCase::Case2b: {
      const auto& c = std::get<Case2Constants>(r.constants);
      r.feasible = c.a + c.b + c.c >= -kFeasTol;
      if (r.feasible) {
        r.margin = std::min(c.a + c.b + c.c, 0.5 * (c.a_prime + c.b + c.c));
      }
      break;
    }
    case AssignmentCase::Case3: {
      const auto& c = std::get<Case3Constants>(r.constants);
      // max_p {p_k2 - p_k1} <= min_q {q_k2 - q_k1}
      r.feasible = -c.min_p_k1_k2 <= c.min_q_k2_k1 + kFeasTol;
      if (r.feasible) r.margin = 0.5 * (c.min_p_k1_k2 + c.min_q_k2_k1);
      break;
    }
    case AssignmentCase::Case4: {
      const auto& c = std::get<Case4Constants>(r.constants);
      r.feasible = c.max_q_ip_j <= c.min_p_ip_j + kFeasTol &&
                   c.max_p_iq_j <= c.min_q_iq_j + kFeasTol;
      if (r.feasible) {
        r.margin = std::min(c.min_p_ip_j - c.max_q_ip_j, c.min_q_iq_j - c.max_p_iq_j);
      }
      break;
    }
  }
  return r;
}

TropHyperplane construct_omega(const Points& p, const Points& q, const IndexAssignment& a,
                               const HardMarginResult& result) {
  if (!result.feasible) {
    throw std::invalid_argument("construct_omega: result is infeasible");
  }
  const std::size_t d = common_dim(p, q);
  std::vector<double> w(d, 0.0);
  std::vector<bool> fixed(d, false);
  auto set = [&](int idx, double v) {
    w[static_cast<std::size_t>(idx - 1)] = v;
    fixed[static_cast<std::size_t>(idx - 1)] = true;
  };

  // The j-indices anchor the dominance rows: every unconstrained coordinate
  // l must satisfy w_l <= w_j + min(xi_j - xi_l) for both classes and is set
  // to the tighter bound. Case equalities make these coincide with already
  // fixed coordinates where needed.
  const int anchor_p = a.j_p, anchor_q = a.j_q;

  switch (result.case_kind) {
    case AssignmentCase::Case1: {
      const auto& c = std::get<Case1Constants>(result.constants);
      const double mid = 0.5 * (c.b + c.d - c.a - c.e);
      const double t = std::clamp(mid, -c.f, c.c);  // w_{j_Q} - w_{j_P}
      set(a.j_p, 0.0);
      set(a.j_q, t);
      set(a.i_p, c.e + t);
      set(a.i_q, c.b);
      break;
    }
    case AssignmentCase::Case2a: {
      const auto& c = std::get<Case2Constants>(result.constants);
      const double s = std::max(0.5 * (c.b + c.c - c.a_prime), -c.a);
      set(a.j_p, 0.0);
      set(a.i_p, s);  // also j_Q
      set(a.i_q, c.b);
      break;
    }
    case AssignmentCase::Case2b: {
      const auto& c = std::get<Case2Constants>(result.constants);
      const double s = std::max(0.5 * (c.b + c.c - c.a_prime), -c.a);
      set(a.j_q, 0.0);
      set(a.i_q, s);  // also j_P
      set(a.i_p, c.b);
      break;
    }
    case AssignmentCase::Case3: {
      const auto& c = std::get<Case3Constants>(result.constants);
      set(a.j_p, 0.0);  // k2
      set(a.i_p, 0.5 * (c.min_q_k2_k1 - c.min_p_k1_k2));  // k1
      break;
    }
    case AssignmentCase::Case4: {
      const auto& c = std::get<Case4Constants>(result.constants);
      set(a.j_p, 0.0);  // shared j
      set(a.i_p, -c.max_q_ip_j);
      set(a.i_q, -c.max_p_iq_j);
      break;
    }
  }

  for (int l = 1; l <= static_cast<int>(d); ++l) {
    if (fixed[static_cast<std::size_t>(l - 1)]) continue;
    const double bound_p = w[static_cast<std::size_t>(anchor_p - 1)] + min_diff(p, anchor_p, l);
    const double bound_q = w[static_cast<std::size_t>(anchor_q - 1)] + min_diff(q, anchor_q, l);
    w[static_cast<std::size_t>(l - 1)] = std::min(bound_p, bound_q);
  }
  return TropHyperplane{std::move(w)};
}

HardMarginResult enumerate_assignments(const Points& p, const Points& q) {
  const int d = static_cast<int>(common_dim(p, q));
  HardMarginResult best;
  best.feasible = false;
  bool have = false;
  for (int ip = 1; ip <= d; ++ip) {
    for (int jp = 1; jp <= d; ++jp) {
      if (jp == ip) continue;
      for (int iq = 1; iq <= d; ++iq) {
        if (iq == ip) continue;
        for (int jq = 1; jq <= d; ++jq) {
          if (jq == iq) continue;
          const IndexAssignment a{ip, jp, iq, jq};
          HardMarginResult r = hard_feasible_and_margin(p, q, a);
          if (!r.feasible) continue;
          // Lexicographic iteration order makes "first strictly better"
          // the deterministic tie-break.
          if (!have || r.margin > best.margin) {
            best = std::move(r);
            have = true;
          }
        }
      }
    }
  }
  if (have) {
    best.omega = construct_omega(p, q, best.assignment, best);
  }
  return best;
}

}  // namespace tropsvm
