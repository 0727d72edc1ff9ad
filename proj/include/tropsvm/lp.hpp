#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropsvm {

enum class VarSign { Free, NonNegative };

// Dense maximization LP in inequality form:
//   maximize objective . x   subject to   rows[i] . x <= rhs[i]
// with per-variable sign restrictions.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<VarSign> signs;
  std::vector<std::string> var_names;  // optional, for diagnostics

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  void add_row(std::vector<double> a, double b);

  // Plain-text dump: one line per variable (name, sign), then one line per
  // row as "a1 x1 + a2 x2 + ... <= b". Intended for debugging.
  std::string to_text() const;
};

enum class LpVerdict { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpVerdict verdict = LpVerdict::Infeasible;
  double value = 0.0;
  std::vector<double> x;    // primal solution when Optimal
  std::vector<double> ray;  // improving direction when Unbounded
  long iterations = 0;
};

struct LpOptions {
  double feas_tol = 1e-7;   // feasibility tolerance on constraint residuals
  double opt_tol = 1e-9;    // tolerance on reduced costs
  long max_iterations = 500000;
};

// Numerical breakdown (iteration cap hit or certificate check failed).
// Deliberately distinct from an Infeasible verdict.
class LpBreakdown : public std::runtime_error {
 public:
  explicit LpBreakdown(const std::string& msg) : std::runtime_error(msg) {}
};

// Two-phase dense simplex. Deterministic: identical input gives identical
// outcome and iteration count. Optimal outcomes are verified against the
// original data (primal residuals and a reduced-cost certificate) before
// being returned.
LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

}  // namespace tropsvm
