#pragma once

#include <map>
#include <vector>

#include "tropsvm/lp.hpp"
#include "tropsvm/svm_hard.hpp"
#include "tropsvm/tropical.hpp"

namespace tropsvm {

struct SoftMarginConfig {
  double tradeoff = 1.0;  // objective trade-off between margin and hinge loss
  IndexAssignment assignment;
  double tolerance = 1e-7;
};

struct SoftMarginResult {
  LpVerdict verdict = LpVerdict::Optimal;  // Optimal, or Unbounded (tradeoff < 1 only)
  double objective = 0.0;
  double margin = 0.0;  // z
  TropHyperplane omega;
  std::vector<double> alpha, beta;           // per point, P block then Q block
  std::vector<std::map<int, double>> gamma;  // per point: coordinate l -> slack
  double hinge_loss = 0.0;
  std::size_t n_p = 0, n_q = 0;
};

// Variable positions inside the built programs, for tests and extraction.
struct SoftLpLayout {
  std::size_t z = 0;
  std::vector<std::size_t> alpha, beta;                      // per point
  std::vector<std::vector<std::pair<int, std::size_t>>> gamma;  // per point: (l, column)
  std::vector<std::size_t> omega;                            // per coordinate
};

// Full slack program: maximize
//   z - tradeoff * sum(alpha + beta + sum gamma)
// over z, alpha, beta, gamma >= 0 and free omega, with one slackened margin
// row, ordering row and dominance row per point and coordinate. A class may
// be empty here (used by tests); the public solver requires both non-empty.
LinearProgram build_soft_lp_general(const Points& p, const Points& q, const IndexMaps& maps,
                                    double tradeoff, SoftLpLayout* layout = nullptr);

// Case-simplified program with the trade-off fixed to 1: gamma variables
// are kept only for coordinates inside the assignment's index quadruple;
// every other dominance row is slack-free.
LinearProgram build_soft_lp_case(const Points& p, const Points& q, const IndexAssignment& a,
                                 SoftLpLayout* layout = nullptr);

// Solves the case program (tradeoff == 1) or the general program with
// constant index maps (tradeoff != 1). Unbounded is a returnable verdict
// only for tradeoff < 1; with tradeoff >= 1 and non-empty classes the
// objective is provably bounded, so an Unbounded verdict raises.
SoftMarginResult solve_soft(const Points& p, const Points& q, const SoftMarginConfig& cfg);

// General program with explicit per-point index maps.
SoftMarginResult solve_soft(const Points& p, const Points& q, const IndexMaps& maps,
                            const SoftMarginConfig& cfg);

// True iff every gamma outside the assignment's index quadruple is at most
// cfg.tolerance. Expects a result of the general program with a
// constant-per-class assignment.
bool verify_gamma_vanishing(const Points& p, const Points& q, const SoftMarginConfig& cfg,
                            const SoftMarginResult& result);

}  // namespace tropsvm
