#include "tropsvm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tropsvm {

void LinearProgram::add_row(std::vector<double> a, double b) {
  if (a.size() != num_vars()) {
    throw std::invalid_argument("LinearProgram::add_row: row width " +
                                std::to_string(a.size()) + " != " +
                                std::to_string(num_vars()) + " variables");
  }
  rows.push_back(std::move(a));
  rhs.push_back(b);
}

std::string LinearProgram::to_text() const {
  std::ostringstream os;
  auto name = [&](std::size_t k) {
    if (k < var_names.size() && !var_names[k].empty()) return var_names[k];
    return "x" + std::to_string(k + 1);
  };
  os << "maximize";
  bool first = true;
  for (std::size_t k = 0; k < num_vars(); ++k) {
    if (objective[k] == 0.0) continue;
    os << (first ? " " : " + ") << objective[k] << "*" << name(k);
    first = false;
  }
  if (first) os << " 0";
  os << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << "  ";
    bool f = true;
    for (std::size_t k = 0; k < num_vars(); ++k) {
      if (rows[i][k] == 0.0) continue;
      os << (f ? "" : " + ") << rows[i][k] << "*" << name(k);
      f = false;
    }
    if (f) os << "0";
    os << " <= " << rhs[i] << "\n";
  }
  for (std::size_t k = 0; k < num_vars(); ++k) {
    os << "  " << name(k) << (signs[k] == VarSign::Free ? " free" : " >= 0") << "\n";
  }
  return os.str();
}

namespace {

constexpr double kPivotTol = 1e-9;

struct Tableau {
  std::size_t m = 0;       // rows
  std::size_t ncols = 0;   // structural + slack + artificial
  std::size_t ns = 0;      // structural columns
  std::size_t nart = 0;    // artificial columns
  std::vector<std::vector<double>> t;  // m x (ncols + 1), last slot = rhs
  std::vector<double> r1, r2;          // cost rows, length ncols + 1
  std::vector<std::size_t> basis;      // basic column per row

  bool is_artificial(std::size_t j) const { return j >= ns + m; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    t[row][col] = 1.0;  // kill roundoff on the pivot element
    auto eliminate = [&](std::vector<double>& target) {
      const double f = target[col];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= ncols; ++j) target[j] -= f * t[row][j];
      target[col] = 0.0;
    };
    for (std::size_t i = 0; i < m; ++i) {
      if (i != row) eliminate(t[i]);
    }
    eliminate(r1);
    eliminate(r2);
    basis[row] = col;
  }
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& opts) {
  const std::size_t nvar = lp.num_vars();
  if (lp.signs.size() != nvar) {
    throw std::invalid_argument("solve_lp: signs/objective size mismatch");
  }
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].size() != nvar) {
      throw std::invalid_argument("solve_lp: row " + std::to_string(i) + " has wrong width");
    }
  }
  auto check_finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string("solve_lp: non-finite ") + what);
  };
  for (double c : lp.objective) check_finite(c, "objective coefficient");
  for (const auto& r : lp.rows)
    for (double a : r) check_finite(a, "row coefficient");
  for (double b : lp.rhs) check_finite(b, "rhs");

  // Structural columns: nonnegative variables map to one column, free
  // variables split into a positive and a negative part.
  std::vector<std::size_t> col_var;
  std::vector<double> col_sign;
  for (std::size_t k = 0; k < nvar; ++k) {
    col_var.push_back(k);
    col_sign.push_back(1.0);
    if (lp.signs[k] == VarSign::Free) {
      col_var.push_back(k);
      col_sign.push_back(-1.0);
    }
  }
  const std::size_t ns = col_var.size();
  const std::size_t m = lp.num_rows();

  // Rows with negative rhs are flipped so every initial basic value is
  // nonnegative; flipped rows get a -1 surplus column plus an artificial.
  std::vector<bool> flipped(m, false);
  std::size_t nart = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      flipped[i] = true;
      ++nart;
    }
  }

  Tableau tb;
  tb.m = m;
  tb.ns = ns;
  tb.nart = nart;
  tb.ncols = ns + m + nart;
  tb.t.assign(m, std::vector<double>(tb.ncols + 1, 0.0));
  tb.basis.assign(m, 0);

  // Pristine copy of the standardized columns (structural + slack) for the
  // optimality certificate, untouched by pivoting.
  std::vector<std::vector<double>> a_std(m, std::vector<double>(ns + m, 0.0));
  std::vector<double> rhs_std(m, 0.0);

  std::size_t art = ns + m;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = flipped[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ns; ++j) {
      const double v = f * lp.rows[i][col_var[j]] * col_sign[j];
      tb.t[i][j] = v;
      a_std[i][j] = v;
    }
    tb.t[i][ns + i] = f;  // slack (+1) or surplus (-1)
    a_std[i][ns + i] = f;
    rhs_std[i] = f * lp.rhs[i];
    tb.t[i][tb.ncols] = rhs_std[i];
    if (flipped[i]) {
      tb.t[i][art] = 1.0;
      tb.basis[i] = art++;
    } else {
      tb.basis[i] = ns + i;
    }
  }

  // Phase-2 cost row: reduced costs start at the raw objective since the
  // initial basis (slacks/artificials) has zero phase-2 cost.
  tb.r2.assign(tb.ncols + 1, 0.0);
  for (std::size_t j = 0; j < ns; ++j) {
    tb.r2[j] = lp.objective[col_var[j]] * col_sign[j];
  }
  // Phase-1 cost row (maximize -sum of artificials), priced out against the
  // initial basis.
  tb.r1.assign(tb.ncols + 1, 0.0);
  for (std::size_t j = ns + m; j < tb.ncols; ++j) tb.r1[j] = -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!flipped[i]) continue;
    for (std::size_t j = 0; j <= tb.ncols; ++j) tb.r1[j] += tb.t[i][j];
  }

  double rhs_scale = 1.0;
  for (double b : lp.rhs) rhs_scale = std::max(rhs_scale, std::abs(b));

  long iterations = 0;
  bool bland = false;
  long degenerate_streak = 0;

  // One simplex phase. allow_artificial controls which columns may enter.
  // Returns the entering column of an unbounded direction, or SIZE_MAX when
  // the phase ended at optimality.
  auto run_phase = [&](std::vector<double>& cost, bool allow_artificial) -> std::size_t {
    for (;;) {
      const std::size_t limit = allow_artificial ? tb.ncols : ns + m;
      std::size_t enter = SIZE_MAX;
      if (bland) {
        for (std::size_t j = 0; j < limit; ++j) {
          if (cost[j] > opts.opt_tol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = opts.opt_tol;
        for (std::size_t j = 0; j < limit; ++j) {
          if (cost[j] > best) {
            best = cost[j];
            enter = j;
          }
        }
      }
      if (enter == SIZE_MAX) return SIZE_MAX;

      std::size_t leave = SIZE_MAX;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < tb.m; ++i) {
        const double a = tb.t[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = tb.t[i][tb.ncols] / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 &&
             (leave == SIZE_MAX || tb.basis[i] < tb.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == SIZE_MAX) return enter;  // unbounded direction

      const double before = cost[tb.ncols];
      tb.pivot(leave, enter);
      ++iterations;
      if (iterations > opts.max_iterations) {
        throw LpBreakdown("solve_lp: iteration limit reached (" +
                          std::to_string(opts.max_iterations) + ")");
      }
      const double after = cost[tb.ncols];
      if (std::abs(after - before) <= 1e-12 * (1.0 + std::abs(before))) {
        if (++degenerate_streak > 2000 && !bland) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
  };

  LpOutcome out;

  if (nart > 0) {
    const std::size_t dir = run_phase(tb.r1, true);
    if (dir != SIZE_MAX) {
      throw LpBreakdown("solve_lp: phase 1 reported unbounded");
    }
    const double phase1 = -tb.r1[tb.ncols];  // equals -(sum of artificials)
    if (phase1 < -opts.feas_tol * rhs_scale) {
      out.verdict = LpVerdict::Infeasible;
      out.iterations = iterations;
      return out;
    }
    // Drive remaining artificials out of the basis where possible; rows
    // whose coefficients all vanished are redundant combinations of other
    // rows and are excised so later pivots cannot pollute them.
    for (std::size_t i = 0; i < tb.m; ++i) {
      if (!tb.is_artificial(tb.basis[i])) continue;
      for (std::size_t j = 0; j < ns + m; ++j) {
        if (std::abs(tb.t[i][j]) > kPivotTol) {
          tb.pivot(i, j);
          ++iterations;
          break;
        }
      }
    }
    for (std::size_t i = tb.m; i-- > 0;) {
      if (tb.is_artificial(tb.basis[i])) {
        tb.t.erase(tb.t.begin() + static_cast<std::ptrdiff_t>(i));
        tb.basis.erase(tb.basis.begin() + static_cast<std::ptrdiff_t>(i));
        --tb.m;
      }
    }
  }

  bland = false;
  degenerate_streak = 0;
  const std::size_t dir = run_phase(tb.r2, false);
  out.iterations = iterations;

  if (dir != SIZE_MAX) {
    out.verdict = LpVerdict::Unbounded;
    out.ray.assign(nvar, 0.0);
    if (dir < ns) out.ray[col_var[dir]] += col_sign[dir];
    for (std::size_t i = 0; i < tb.m; ++i) {
      const std::size_t b = tb.basis[i];
      if (b < ns) out.ray[col_var[b]] -= col_sign[b] * tb.t[i][dir];
    }
    return out;
  }

  out.verdict = LpVerdict::Optimal;
  out.x.assign(nvar, 0.0);
  for (std::size_t i = 0; i < tb.m; ++i) {
    const std::size_t b = tb.basis[i];
    if (b < ns) out.x[col_var[b]] += col_sign[b] * tb.t[i][tb.ncols];
  }
  double value = 0.0;
  for (std::size_t k = 0; k < nvar; ++k) value += lp.objective[k] * out.x[k];
  out.value = value;

  // --- verification against the original data ---
  for (std::size_t i = 0; i < m; ++i) {
    double ax = 0.0, mag = 1.0;
    for (std::size_t k = 0; k < nvar; ++k) {
      ax += lp.rows[i][k] * out.x[k];
      mag = std::max(mag, std::abs(lp.rows[i][k] * out.x[k]));
    }
    if (ax - lp.rhs[i] > opts.feas_tol * std::max(mag, std::abs(lp.rhs[i]))) {
      throw LpBreakdown("solve_lp: optimal point violates row " + std::to_string(i));
    }
  }
  for (std::size_t k = 0; k < nvar; ++k) {
    if (lp.signs[k] == VarSign::NonNegative && out.x[k] < -opts.feas_tol) {
      throw LpBreakdown("solve_lp: optimal point violates sign restriction");
    }
  }
  // Reduced-cost certificate: recover duals from the slack columns of the
  // final cost row, then recompute every reduced cost from pristine data.
  std::vector<double> y(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    y[i] = -tb.r2[ns + i] * a_std[i][ns + i];
  }
  const double cert_tol = 1e-6;
  for (std::size_t j = 0; j < ns + m; ++j) {
    double c = 0.0, mag = 1.0;
    if (j < ns) c = lp.objective[col_var[j]] * col_sign[j];
    double ya = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ya += y[i] * a_std[i][j];
      mag = std::max(mag, std::abs(y[i] * a_std[i][j]));
    }
    if (c - ya > cert_tol * mag) {
      throw LpBreakdown("solve_lp: optimality certificate failed on column " +
                        std::to_string(j));
    }
  }
  double yb = 0.0, yb_mag = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    yb += y[i] * rhs_std[i];
    yb_mag = std::max(yb_mag, std::abs(y[i] * rhs_std[i]));
  }
  if (std::abs(yb - value) > cert_tol * std::max(yb_mag, std::abs(value))) {
    throw LpBreakdown("solve_lp: weak-duality gap check failed");
  }
  return out;
}

}  // namespace tropsvm
