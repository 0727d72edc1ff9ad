#include "tropsvm/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "tropsvm/phylo.hpp"

namespace tropsvm {

void stratified_split(const std::vector<ClassLabel>& labels, double proportion, Rng& rng,
                      std::vector<std::size_t>& train_idx, std::vector<std::size_t>& test_idx) {
  if (proportion <= 0.0 || proportion >= 1.0) {
    throw std::invalid_argument("stratified_split: proportion must be in (0,1)");
  }
  train_idx.clear();
  test_idx.clear();
  for (ClassLabel cls : {ClassLabel::P, ClassLabel::Q}) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] == cls) members.push_back(k);
    }
    const std::size_t n_test =
        static_cast<std::size_t>(std::floor(proportion * static_cast<double>(members.size())));
    // Partial Fisher-Yates: the first n_test slots are the test sample.
    for (std::size_t i = 0; i < n_test; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(members.size() - i));
      std::swap(members[i], members[j]);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < n_test ? test_idx : train_idx).push_back(members[i]);
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const std::function<void(const SweepRow&)>& on_row) {
  if (spec.repeats < 1) throw std::invalid_argument("run_sweep: repeats must be >= 1");
  for (double prop : spec.proportions) {
    if (prop <= 0.0 || prop >= 1.0) {
      throw std::invalid_argument("run_sweep: proportions must be in (0,1)");
    }
  }
  for (int alg : spec.algorithms) {
    if (alg < 1 || alg > 4) throw std::invalid_argument("run_sweep: algorithms must be 1..4");
  }

  if (!spec.artifacts_dir.empty()) {
    std::filesystem::create_directories(spec.artifacts_dir);
  }

  std::vector<SweepRow> rows;
  for (std::size_t ci = 0; ci < spec.c_grid.size(); ++ci) {
    SimConfig sim;
    sim.n_leaves = spec.n_leaves;
    sim.population = spec.population;
    sim.ratio_c = spec.c_grid[ci];
    sim.trees_per_class = spec.trees_per_class;
    sim.seed = Rng::stream(spec.seed, 0x0C00 + ci).next_u64();
    const LabeledDataset ds = generate_dataset(sim);

    for (std::size_t pi = 0; pi < spec.proportions.size(); ++pi) {
      for (int rep = 0; rep < spec.repeats; ++rep) {
        Rng split_rng = Rng::stream(
            spec.seed, 0x51000000ull | (static_cast<std::uint64_t>(ci) << 16) |
                           (static_cast<std::uint64_t>(pi) << 8) | static_cast<std::uint64_t>(rep));
        std::vector<std::size_t> train_idx, test_idx;
        stratified_split(ds.labels, spec.proportions[pi], split_rng, train_idx, test_idx);

        std::vector<std::vector<double>> train_rows, test_rows;
        std::vector<ClassLabel> train_labels, test_labels;
        for (std::size_t k : train_idx) {
          train_rows.push_back(ds.rows[k]);
          train_labels.push_back(ds.labels[k]);
        }
        for (std::size_t k : test_idx) {
          test_rows.push_back(ds.rows[k]);
          test_labels.push_back(ds.labels[k]);
        }

        Points p, q;
        split_by_label(train_rows, train_labels, p, q);

        for (int alg : spec.algorithms) {
          IndexAssignment assignment;
          if (auto it = spec.fixed_assignments.find(alg); it != spec.fixed_assignments.end()) {
            assignment = it->second;
          } else {
            assignment = select_assignment(p, q, alg);
          }
          const auto t0 = std::chrono::steady_clock::now();
          TrainConfig tc;
          tc.strategy = Strategy::SoftFixedAssignment;
          tc.assignment = assignment;
          tc.tradeoff = 1.0;
          tc.sim_ratio = spec.c_grid[ci];
          tc.eta = spec.eta;
          const TrainedModel model = train(train_rows, train_labels, tc);
          const auto t1 = std::chrono::steady_clock::now();
          const PredictionReport report = evaluate(test_rows, test_labels, model);

          if (!spec.artifacts_dir.empty()) {
            const std::string base = spec.artifacts_dir + "/cell_c" + std::to_string(ci) +
                                     "_p" + std::to_string(pi) + "_r" + std::to_string(rep) +
                                     "_alg" + std::to_string(alg);
            save_model(model, base + ".model");
            write_ultrametric_csv(base + "_test.csv", spec.n_leaves, test_rows);
            write_labels(base + "_test.labels", test_labels);
          }

          SweepRow row;
          row.c = spec.c_grid[ci];
          row.proportion = spec.proportions[pi];
          row.algorithm = alg;
          row.repeat = rep;
          row.accuracy = report.accuracy;
          row.wall_time_s =
              spec.zero_timings ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
          row.assignment = assignment;
          if (on_row) on_row(row);
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<SweepSummaryRow> summarize_sweep(const std::vector<SweepRow>& rows,
                                             SweepSpec::Aggregate aggregate) {
  std::vector<SweepSummaryRow> out;
  auto cell_of = [&](const SweepRow& r) -> SweepSummaryRow* {
    for (auto& s : out) {
      if (s.c == r.c && s.proportion == r.proportion && s.algorithm == r.algorithm) return &s;
    }
    return nullptr;
  };
  std::vector<int> counts;
  for (const SweepRow& r : rows) {
    SweepSummaryRow* cell = cell_of(r);
    if (!cell) {
      out.push_back({r.c, r.proportion, r.algorithm,
                     aggregate == SweepSpec::Aggregate::Best ? r.accuracy : 0.0});
      counts.push_back(0);
      cell = &out.back();
    }
    const std::size_t idx = static_cast<std::size_t>(cell - out.data());
    if (aggregate == SweepSpec::Aggregate::Best) {
      cell->accuracy = std::max(cell->accuracy, r.accuracy);
    } else {
      cell->accuracy += r.accuracy;
    }
    counts[idx]++;
  }
  if (aggregate == SweepSpec::Aggregate::Mean) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k].accuracy /= static_cast<double>(counts[k]);
    }
  }
  return out;
}

}  // namespace tropsvm
