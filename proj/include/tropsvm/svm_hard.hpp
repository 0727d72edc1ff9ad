#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tropsvm/lp.hpp"
#include "tropsvm/tropical.hpp"

namespace tropsvm {

using Points = std::vector<TropPoint>;

// The equality pattern among the four designated indices decides which
// closed form applies.
enum class AssignmentCase { Case1, Case2a, Case2b, Case3, Case4 };

const char* case_name(AssignmentCase c);

// Designated largest (i) and second largest (j) coordinate of omega + xi
// for each class. 1-based, matching coordinate indexing throughout.
struct IndexAssignment {
  int i_p = 0, j_p = 0, i_q = 0, j_q = 0;
  bool operator==(const IndexAssignment&) const = default;
};

// Validates i_p != j_p, i_q != j_q, i_p != i_q and index ranges, then
// returns the unique case implied by the remaining equalities.
AssignmentCase classify_case(const IndexAssignment& a, int dim);

// Per-point index maps (i(xi), j(xi)), used by the LP builders; the closed
// forms and enumeration work on constant-per-class assignments only.
struct IndexMaps {
  std::vector<std::pair<int, int>> p, q;  // one (i, j) per point
};
IndexMaps constant_maps(const IndexAssignment& a, std::size_t n_p, std::size_t n_q);
void validate_index_maps(const IndexMaps& maps, int dim);

// Case-specific constants, each an exact min/max scan over a class.
struct Case1Constants {
  double a, b, c, d, e, f;
};
struct Case2Constants {
  double a_prime, a, b, c;
};
struct Case3Constants {
  double min_p_k1_k2;  // min over P of p_k1 - p_k2
  double min_q_k2_k1;  // min over Q of q_k2 - q_k1
};
struct Case4Constants {
  double min_p_ip_j, max_q_ip_j;  // feasibility pair for i_P
  double min_q_iq_j, max_p_iq_j;  // feasibility pair for i_Q
};
using CaseConstants =
    std::variant<Case1Constants, Case2Constants, Case3Constants, Case4Constants>;

struct HardMarginResult {
  bool feasible = false;
  double margin = 0.0;  // optimal z when feasible
  IndexAssignment assignment;
  AssignmentCase case_kind = AssignmentCase::Case1;
  CaseConstants constants;
  std::optional<TropHyperplane> omega;
  std::optional<LpOutcome> lp_cross_check;
};

// The hard-margin LP: maximize z subject to, for every point xi with
// indices (i, j): the margin row z + xi_j + w_j - xi_i - w_i <= 0, the
// ordering row w_j - w_i <= xi_i - xi_j, and d-2 dominance rows
// w_l - w_j <= xi_j - xi_l. Variables (z, w_1..w_d), all free.
LinearProgram build_hard_lp(const Points& p, const Points& q, const IndexMaps& maps);
LinearProgram build_hard_lp(const Points& p, const Points& q, const IndexAssignment& a);

CaseConstants case_constants(const Points& p, const Points& q, const IndexAssignment& a);

// Closed-form feasibility and optimal margin for the case at hand. Boundary
// instances (equality in the feasibility condition) count as feasible with
// margin possibly 0.
HardMarginResult hard_feasible_and_margin(const Points& p, const Points& q,
                                          const IndexAssignment& a);

// Builds a normal vector achieving the closed-form margin exactly; requires
// result.feasible. Coordinates outside the index quadruple are pushed to
// their largest feasible values so no dominance row is violated.
TropHyperplane construct_omega(const Points& p, const Points& q, const IndexAssignment& a,
                               const HardMarginResult& result);

// Evaluates the closed form on every constant-per-class assignment
// (i_p != j_p, i_q != j_q, i_p != i_q) and returns the feasible result with
// the largest margin, ties broken by lexicographically smallest assignment.
// When feasible, omega is filled in.
HardMarginResult enumerate_assignments(const Points& p, const Points& q);

}  // namespace tropsvm
