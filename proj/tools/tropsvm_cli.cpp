#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tropsvm/classifier.hpp"
#include "tropsvm/coalescent.hpp"
#include "tropsvm/phylo.hpp"
#include "tropsvm/sweep.hpp"

namespace {

using namespace tropsvm;

IndexAssignment parse_assignment(const std::string& s) {
  std::vector<int> vals;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? comma : comma - start);
    vals.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (vals.size() != 4) {
    throw std::runtime_error("assignment must be four comma-separated indices i_P,j_P,i_Q,j_Q");
  }
  return {vals[0], vals[1], vals[2], vals[3]};
}

std::string assignment_string(const IndexAssignment& a) {
  return std::to_string(a.i_p) + "," + std::to_string(a.j_p) + "," + std::to_string(a.i_q) +
         "," + std::to_string(a.j_q);
}

int cmd_simulate(const SimConfig& cfg, const std::string& out) {
  LabeledDataset ds = generate_dataset(cfg);
  write_dataset(ds, out);
  std::cout << "wrote " << ds.rows.size() << " points (" << ds.rows.front().size()
            << " coordinates each) to " << out << "\n";
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& labels_path,
              const std::string& strategy, const std::string& assignment,
              double tradeoff, double ratio_c, double eta, double tol,
              const std::string& model_out) {
  const auto [n_leaves, rows] = read_ultrametric_csv(data_path);
  (void)n_leaves;
  const auto labels = read_labels(labels_path);
  if (labels.size() != rows.size()) {
    throw std::runtime_error("label count " + std::to_string(labels.size()) +
                             " does not match row count " + std::to_string(rows.size()));
  }
  TrainConfig cfg;
  cfg.strategy = strategy_from_string(strategy);
  if (!assignment.empty()) cfg.assignment = parse_assignment(assignment);
  if (tradeoff < 1.0) {
    std::cerr << "warning: trade-off below 1 does not guarantee a bounded objective\n";
  }
  cfg.tradeoff = tradeoff;
  cfg.sim_ratio = ratio_c;
  cfg.eta = eta;
  cfg.sector_tol = tol;
  const TrainedModel model = train(rows, labels, cfg);
  save_model(model, model_out);
  std::cout << "trained " << model.strategy << " model: case " << case_name(model.case_kind)
            << ", assignment " << assignment_string(model.assignment) << ", margin "
            << format_double(model.margin) << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  const TrainedModel model = load_model(model_path);
  const auto [n_leaves, rows] = read_ultrametric_csv(data_path);
  (void)n_leaves;
  if (!rows.empty() && static_cast<int>(rows.front().size()) != model.dim) {
    throw std::runtime_error("data dimension " + std::to_string(rows.front().size()) +
                             " does not match model dimension " + std::to_string(model.dim));
  }
  std::vector<ClassLabel> predicted;
  for (const auto& row : rows) predicted.push_back(assign_point(TropPoint(row), model));
  write_labels(out_path, predicted);
  std::cout << "wrote " << predicted.size() << " predictions to " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& pred_path, const std::string& labels_path) {
  const auto truth = read_labels(labels_path);
  PredictionReport report;
  if (!pred_path.empty()) {
    // Score an externally produced label file with the same code path.
    const auto predicted = read_labels(pred_path);
    if (predicted.size() != truth.size()) {
      throw std::runtime_error("prediction count " + std::to_string(predicted.size()) +
                               " does not match label count " + std::to_string(truth.size()));
    }
    if (truth.empty()) throw std::runtime_error("evaluate: empty test set");
    report.predicted = predicted;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (truth[k] == ClassLabel::P) {
        (predicted[k] == ClassLabel::P ? report.correct_p : report.wrong_p)++;
      } else {
        (predicted[k] == ClassLabel::Q ? report.correct_q : report.wrong_q)++;
      }
    }
    report.accuracy = static_cast<double>(report.correct_p + report.correct_q) /
                      static_cast<double>(truth.size());
  } else {
    const TrainedModel model = load_model(model_path);
    const auto [n_leaves, rows] = read_ultrametric_csv(data_path);
    (void)n_leaves;
    if (!rows.empty() && static_cast<int>(rows.front().size()) != model.dim) {
      throw std::runtime_error("data dimension " + std::to_string(rows.front().size()) +
                               " does not match model dimension " + std::to_string(model.dim));
    }
    report = evaluate(rows, truth, model);
  }
  std::cout << "accuracy=" << format_double(report.accuracy) << "\n";
  std::cout << "confusion: P->P " << report.correct_p << ", P->Q " << report.wrong_p
            << ", Q->Q " << report.correct_q << ", Q->P " << report.wrong_q << "\n";
  return 0;
}

int cmd_sweep(SweepSpec spec, const std::map<int, std::string>& assignment_flags,
              const std::string& out_path, const std::string& aggregate) {
  if (aggregate == "best") {
    spec.aggregate = SweepSpec::Aggregate::Best;
  } else if (aggregate == "mean") {
    spec.aggregate = SweepSpec::Aggregate::Mean;
  } else {
    throw std::runtime_error("aggregate must be 'best' or 'mean'");
  }
  for (const auto& [alg, text] : assignment_flags) {
    if (!text.empty() && text != "auto") {
      spec.fixed_assignments[alg] = parse_assignment(text);
    }
  }

  nlohmann::ordered_json meta;
  meta["format"] = "tropsvm-sweep-meta-v1";
  meta["rng"] = kRngName;
  meta["seed"] = spec.seed;
  meta["c_grid"] = spec.c_grid;
  meta["proportions"] = spec.proportions;
  meta["repeats"] = spec.repeats;
  meta["algorithms"] = spec.algorithms;
  meta["aggregate"] = aggregate;
  meta["n_leaves"] = spec.n_leaves;
  meta["population"] = spec.population;
  meta["trees_per_class"] = spec.trees_per_class;
  meta["eta"] = spec.eta;
  for (int alg : spec.algorithms) {
    const auto it = spec.fixed_assignments.find(alg);
    meta["assignment_rule"]["alg" + std::to_string(alg)] =
        it == spec.fixed_assignments.end() ? std::string("auto:best-closed-form-margin")
                                           : assignment_string(it->second);
  }
  {
    std::ofstream mf(out_path + ".meta.json", std::ios::binary);
    if (!mf) throw std::runtime_error("cannot open for writing: " + out_path + ".meta.json");
    mf << meta.dump(2) << "\n";
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << "C,proportion,strategy,repeat,accuracy,wall_time_s\n";
  std::ofstream asg(out_path + ".assignments.csv", std::ios::binary);
  if (!asg) throw std::runtime_error("cannot open for writing: " + out_path + ".assignments.csv");
  asg << "C,proportion,strategy,repeat,i_P,j_P,i_Q,j_Q\n";

  const auto rows = run_sweep(spec, [&](const SweepRow& r) {
    out << format_double(r.c) << ',' << format_double(r.proportion) << ",alg" << r.algorithm
        << ',' << r.repeat << ',' << format_double(r.accuracy) << ','
        << format_double(r.wall_time_s) << "\n";
    out.flush();  // long sweeps stay resumable row by row
    asg << format_double(r.c) << ',' << format_double(r.proportion) << ",alg" << r.algorithm
        << ',' << r.repeat << ',' << r.assignment.i_p << ',' << r.assignment.j_p << ','
        << r.assignment.i_q << ',' << r.assignment.j_q << "\n";
    asg.flush();
  });

  std::cout << "summary (" << aggregate << " accuracy per C/proportion/strategy):\n";
  std::cout << "C,proportion,strategy,accuracy\n";
  for (const auto& s : summarize_sweep(rows, spec.aggregate)) {
    std::cout << format_double(s.c) << ',' << format_double(s.proportion) << ",alg"
              << s.algorithm << ',' << format_double(s.accuracy) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical support vector machines for phylogenetic trees"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a two-class coalescent dataset");
  SimConfig sim_cfg;
  std::string sim_out;
  sim->add_option("--n-leaves", sim_cfg.n_leaves, "Leaves per tree")->capture_default_str();
  sim->add_option("--population", sim_cfg.population, "Effective population size")
      ->capture_default_str();
  sim->add_option("--ratio-c", sim_cfg.ratio_c, "Species depth / population")
      ->capture_default_str();
  sim->add_option("--trees-per-class", sim_cfg.trees_per_class, "Gene trees per class")
      ->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "Base RNG seed")->capture_default_str();
  sim->add_option("--out", sim_out, "Output CSV path")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a tropical SVM model");
  std::string tr_data, tr_labels, tr_strategy = "soft", tr_assignment, tr_model_out;
  double tr_tradeoff = 1.0, tr_ratio = 1.0, tr_eta = 4.8, tr_tol = 1e-9;
  tr->add_option("--data", tr_data, "Ultrametric CSV")->required();
  tr->add_option("--labels", tr_labels, "Label file (one P/Q per row)")->required();
  tr->add_option("--strategy", tr_strategy, "hard | soft | soft-enumerate")
      ->capture_default_str();
  tr->add_option("--assignment", tr_assignment, "i_P,j_P,i_Q,j_Q (soft strategy)");
  tr->add_option("--tradeoff", tr_tradeoff, "Margin/hinge trade-off")->capture_default_str();
  tr->add_option("--ratio-c", tr_ratio, "Coalescent depth ratio stored in the model")
      ->capture_default_str();
  tr->add_option("--eta", tr_eta, "Classifier regime threshold")->capture_default_str();
  tr->add_option("--tol", tr_tol, "Sector tie tolerance")->capture_default_str();
  tr->add_option("--model-out", tr_model_out, "Model file to write")->required();

  // predict
  auto* pr = app.add_subcommand("predict", "Label points with a trained model");
  std::string pr_model, pr_data, pr_out;
  pr->add_option("--model", pr_model, "Model file")->required();
  pr->add_option("--data", pr_data, "Ultrametric CSV")->required();
  pr->add_option("--out", pr_out, "Predicted label file to write")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a model or a prediction file");
  std::string ev_model, ev_data, ev_pred, ev_labels;
  ev->add_option("--model", ev_model, "Model file (with --data)");
  ev->add_option("--data", ev_data, "Ultrametric CSV (with --model)");
  ev->add_option("--pred", ev_pred, "Externally produced label file to score");
  ev->add_option("--labels", ev_labels, "Ground-truth label file")->required();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Accuracy sweep over the C grid");
  SweepSpec spec;
  std::string sw_out, sw_aggregate = "best";
  std::map<int, std::string> sw_assignments;
  sw->add_option("--c-grid", spec.c_grid, "C values")->delimiter(',')->capture_default_str();
  sw->add_option("--proportions", spec.proportions, "Test proportions")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--repeats", spec.repeats, "Splits per cell")->capture_default_str();
  sw->add_option("--strategies", spec.algorithms, "Algorithms to run (1..4)")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--aggregate", sw_aggregate, "best | mean")->capture_default_str();
  sw->add_option("--n-leaves", spec.n_leaves, "Leaves per tree")->capture_default_str();
  sw->add_option("--population", spec.population, "Effective population size")
      ->capture_default_str();
  sw->add_option("--trees-per-class", spec.trees_per_class, "Gene trees per class")
      ->capture_default_str();
  sw->add_option("--eta", spec.eta, "Classifier regime threshold")->capture_default_str();
  sw->add_option("--seed", spec.seed, "Base RNG seed")->capture_default_str();
  sw->add_flag("--zero-timings", spec.zero_timings,
               "Write 0 in the wall-time column for byte-identical output");
  sw->add_option("--artifacts-dir", spec.artifacts_dir,
                 "Persist each cell's model and test split here");
  sw->add_option("--assignment-alg1", sw_assignments[1], "Fixed assignment for algorithm 1");
  sw->add_option("--assignment-alg2", sw_assignments[2], "Fixed assignment for algorithm 2");
  sw->add_option("--assignment-alg3", sw_assignments[3], "Fixed assignment for algorithm 3");
  sw->add_option("--assignment-alg4", sw_assignments[4], "Fixed assignment for algorithm 4");
  sw->add_option("--out", sw_out, "Sweep CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_cfg, sim_out);
    if (tr->parsed()) {
      return cmd_train(tr_data, tr_labels, tr_strategy, tr_assignment, tr_tradeoff, tr_ratio,
                       tr_eta, tr_tol, tr_model_out);
    }
    if (pr->parsed()) return cmd_predict(pr_model, pr_data, pr_out);
    if (ev->parsed()) {
      if (ev_pred.empty() && (ev_model.empty() || ev_data.empty())) {
        std::cerr << "evaluate needs either --pred or both --model and --data\n";
        return 1;
      }
      return cmd_evaluate(ev_model, ev_data, ev_pred, ev_labels);
    }
    if (sw->parsed()) return cmd_sweep(spec, sw_assignments, sw_out, sw_aggregate);
  } catch (const tropsvm::InseparableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
