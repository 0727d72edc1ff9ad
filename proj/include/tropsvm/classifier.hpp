#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropsvm/labels.hpp"
#include "tropsvm/svm_hard.hpp"
#include "tropsvm/svm_soft.hpp"
#include "tropsvm/tropical.hpp"

namespace tropsvm {

enum class Strategy { HardEnumerate, SoftFixedAssignment, SoftEnumerate };

Strategy strategy_from_string(const std::string& s);
std::string strategy_name(Strategy s);

// Everything needed to classify new points, and the unit of persistence
// between training and prediction.
struct TrainedModel {
  int dim = 0;
  TropHyperplane omega;
  IndexAssignment assignment;
  AssignmentCase case_kind = AssignmentCase::Case1;
  double margin = 0.0;    // z
  double tradeoff = 1.0;  // objective trade-off used in training
  double sim_ratio = 1.0;  // coalescent depth ratio C; steers the lookup regime
  double eta = 4.8;       // regime threshold
  double sector_tol = 1e-9;
  std::string strategy;
};

struct PredictionReport {
  std::vector<ClassLabel> predicted;
  long correct_p = 0, wrong_p = 0;  // true-P rows by predicted label
  long correct_q = 0, wrong_q = 0;  // true-Q rows
  double accuracy = 0.0;
};

struct TrainConfig {
  Strategy strategy = Strategy::SoftFixedAssignment;
  std::optional<IndexAssignment> assignment;  // required for SoftFixedAssignment
  double tradeoff = 1.0;
  double sim_ratio = 1.0;
  double eta = 4.8;
  double sector_tol = 1e-9;
};

// Raised when the hard strategy finds no assignment with positive margin.
class InseparableError : public std::runtime_error {
 public:
  explicit InseparableError(const std::string& msg) : std::runtime_error(msg) {}
};

// The sector lookup tables of the four classifiers, stored as data: for
// each regime (low: C <= eta, high: C > eta) a label per subset of the
// algorithm's index set, encoded as a bitmask over the canonical element
// order. Construction verifies totality and disjointness, so a
// transcription error fails at startup rather than misclassifying.
struct ClassifierTable {
  int algorithm = 0;  // 1..4
  int set_size = 0;   // elements in the index set (4, 3, 2, 3)
  std::array<std::vector<ClassLabel>, 2> labels;  // [regime][mask]
};
const ClassifierTable& classifier_table(int algorithm);

// Algorithm driving each case (Case2b mirrors algorithm 2 with the classes
// swapped).
int algorithm_for_case(AssignmentCase c);

ClassLabel assign_point(const TropPoint& t, const TrainedModel& m);

PredictionReport evaluate(const std::vector<std::vector<double>>& rows,
                          const std::vector<ClassLabel>& labels, const TrainedModel& m);

TrainedModel train(const std::vector<std::vector<double>>& rows,
                   const std::vector<ClassLabel>& labels, const TrainConfig& cfg);

// Representative assignment for one of the four algorithms: scans every
// assignment matching the algorithm's case pattern and keeps the one with
// the best closed-form hard margin (feasible ones first, ties broken by
// lexicographic order). Cheap: no LP is solved.
IndexAssignment select_assignment(const Points& p, const Points& q, int algorithm);

// Plain-text key/value persistence, versioned.
void save_model(const TrainedModel& m, const std::string& path);
TrainedModel load_model(const std::string& path);

// Helpers shared with the CLI.
Points rows_to_points(const std::vector<std::vector<double>>& rows);
void split_by_label(const std::vector<std::vector<double>>& rows,
                    const std::vector<ClassLabel>& labels, Points& p, Points& q);

}  // namespace tropsvm
