#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tropsvm/classifier.hpp"
#include "tropsvm/coalescent.hpp"

namespace tropsvm {

// Accuracy sweep over the coalescent depth ratio grid and train/test
// proportions: one dataset per C value, stratified splits per
// (proportion, repeat), one soft model per algorithm on each split.
struct SweepSpec {
  std::vector<double> c_grid = {0.2, 0.4, 0.6, 0.8, 1, 1.2, 2.4, 3.6, 4.8, 6, 8, 10};
  std::vector<double> proportions = {0.15, 0.20, 0.25};
  int repeats = 10;
  std::vector<int> algorithms = {1, 2, 3, 4};
  enum class Aggregate { Best, Mean } aggregate = Aggregate::Best;
  int n_leaves = 5;
  double population = 10000.0;
  int trees_per_class = 100;
  double eta = 4.8;
  std::uint64_t seed = 0;
  bool zero_timings = false;  // write 0 in the wall-time column (reproducible files)
  // When set, each cell's model and test split are persisted here so any
  // reported accuracy can be re-checked with the evaluate command.
  std::string artifacts_dir;
  // Explicit assignment per algorithm; algorithms not listed here get the
  // data-driven default (best closed-form margin on the training split).
  std::map<int, IndexAssignment> fixed_assignments;
};

struct SweepRow {
  double c = 0.0;
  double proportion = 0.0;
  int algorithm = 0;
  int repeat = 0;
  double accuracy = 0.0;
  double wall_time_s = 0.0;
  IndexAssignment assignment;
};

// Per class, floor(proportion * class size) points go to test, sampled
// without replacement from the given stream; the rest train.
void stratified_split(const std::vector<ClassLabel>& labels, double proportion, Rng& rng,
                      std::vector<std::size_t>& train_idx, std::vector<std::size_t>& test_idx);

// Runs the sweep; rows are emitted in (C, proportion, repeat, algorithm)
// order through on_row (when given) and returned.
std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row = {});

// Aggregated accuracy per (C, proportion, algorithm) cell.
struct SweepSummaryRow {
  double c = 0.0;
  double proportion = 0.0;
  int algorithm = 0;
  double accuracy = 0.0;
};
std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepRow>& rows,
                                             SweepSpec::Aggregate aggregate);

}  // namespace tropsvm
