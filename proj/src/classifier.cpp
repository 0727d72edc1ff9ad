#include "tropsvm/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tropsvm/phylo.hpp"  // format_double

namespace tropsvm {

Strategy strategy_from_string(const std::string& s) {
  if (s == "hard") return Strategy::HardEnumerate;
  if (s == "soft") return Strategy::SoftFixedAssignment;
  if (s == "soft-enumerate") return Strategy::SoftEnumerate;
  throw std::invalid_argument("unknown strategy '" + s +
                              "' (expected hard, soft or soft-enumerate)");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::HardEnumerate: return "hard";
    case Strategy::SoftFixedAssignment: return "soft";
    case Strategy::SoftEnumerate: return "soft-enumerate";
  }
  return "?";
}

namespace {

// Bitmask helper: element k of the canonical order contributes bit k.
unsigned mask_of(const std::vector<int>& subset_sorted, const std::vector<int>& elements) {
  unsigned mask = 0;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    if (std::find(subset_sorted.begin(), subset_sorted.end(), elements[k]) != subset_sorted.end()) {
      mask |= 1u << k;
    }
  }
  return mask;
}

ClassifierTable make_table(int algorithm, int set_size,
                           const std::vector<std::vector<unsigned>>& p_masks) {
  ClassifierTable t;
  t.algorithm = algorithm;
  t.set_size = set_size;
  const std::size_t n = 1u << set_size;
  for (int regime = 0; regime < 2; ++regime) {
    std::vector<char> assigned(n, 0);
    t.labels[static_cast<std::size_t>(regime)].assign(n, ClassLabel::Q);
    for (unsigned m : p_masks[static_cast<std::size_t>(regime)]) {
      if (m >= n || assigned[m]) {
        throw std::logic_error("classifier table " + std::to_string(algorithm) +
                               ": duplicate or out-of-range P row");
      }
      assigned[m] = 1;
      t.labels[static_cast<std::size_t>(regime)][m] = ClassLabel::P;
    }
    // Q rows are transcribed too; cross-check that they are exactly the
    // complement so the table is total and disjoint.
    for (unsigned m : p_masks[static_cast<std::size_t>(regime) + 2]) {
      if (m >= n || assigned[m]) {
        throw std::logic_error("classifier table " + std::to_string(algorithm) +
                               ": P and Q rows overlap or repeat");
      }
      assigned[m] = 2;
    }
    for (std::size_t m = 0; m < n; ++m) {
      if (!assigned[m]) {
        throw std::logic_error("classifier table " + std::to_string(algorithm) +
                               ": subset " + std::to_string(m) + " not covered");
      }
    }
  }
  return t;
}

// Masks transcribed from the four classifiers. Element order per algorithm:
//   alg 1: (i_P, j_P, i_Q, j_Q) -> bits 0..3
//   alg 2: (i_P, j_P, i_Q)      -> bits 0..2   (j_Q = i_P)
//   alg 3: (k1, k2)             -> bits 0..1
//   alg 4: (i_P, i_Q, j)        -> bits 0..2   (j_P = j_Q = j)
// Lists are {low-regime P rows, high-regime P rows, low Q rows, high Q rows}.
const ClassifierTable& table_alg1() {
  static const ClassifierTable t = make_table(
      1, 4,
      {{0b0001, 0b0010, 0b0011, 0b0101, 0b0110, 0b1010, 0b1110, 0b1111},
       {0b0001, 0b0010, 0b0011, 0b0101, 0b1010, 0b1101, 0b1110, 0b1111},
       {0b0100, 0b1000, 0b1100, 0b1001, 0b0111, 0b1011, 0b1101, 0b0000},
       {0b0100, 0b1000, 0b1100, 0b1001, 0b0110, 0b0111, 0b1011, 0b0000}});
  return t;
}

const ClassifierTable& table_alg2() {
  static const ClassifierTable t = make_table(2, 3,
                                              {{0b001, 0b010, 0b100, 0b110},
                                               {0b001, 0b011, 0b111, 0b000},
                                               {0b011, 0b101, 0b111, 0b000},
                                               {0b010, 0b100, 0b101, 0b110}});
  return t;
}

const ClassifierTable& table_alg3() {
  static const ClassifierTable t = make_table(3, 2,
                                              {{0b01, 0b11},
                                               {0b01, 0b00},
                                               {0b10, 0b00},
                                               {0b10, 0b11}});
  return t;
}

const ClassifierTable& table_alg4() {
  static const ClassifierTable t = make_table(4, 3,
                                              {{0b010, 0b011, 0b101, 0b100},
                                               {0b001, 0b011, 0b111, 0b000},
                                               {0b001, 0b110, 0b111, 0b000},
                                               {0b010, 0b101, 0b110, 0b100}});
  return t;
}

}  // namespace

const ClassifierTable& classifier_table(int algorithm) {
  switch (algorithm) {
    case 1: return table_alg1();
    case 2: return table_alg2();
    case 3: return table_alg3();
    case 4: return table_alg4();
  }
  throw std::invalid_argument("classifier_table: algorithm must be 1..4");
}

int algorithm_for_case(AssignmentCase c) {
  switch (c) {
    case AssignmentCase::Case1: return 1;
    case AssignmentCase::Case2a:
    case AssignmentCase::Case2b: return 2;
    case AssignmentCase::Case3: return 3;
    case AssignmentCase::Case4: return 4;
  }
  throw std::logic_error("unreachable");
}

ClassLabel assign_point(const TropPoint& t, const TrainedModel& m) {
  if (static_cast<int>(t.dim()) != m.dim) {
    throw std::invalid_argument("assign_point: point dimension " + std::to_string(t.dim()) +
                                " does not match model dimension " + std::to_string(m.dim));
  }
  const IndexAssignment& a = m.assignment;
  // Canonical element order per case; Case2b reuses algorithm 2 with the
  // class roles swapped, flipping the answer at the end.
  std::vector<int> elements;
  bool mirrored = false;
  switch (m.case_kind) {
    case AssignmentCase::Case1: elements = {a.i_p, a.j_p, a.i_q, a.j_q}; break;
    case AssignmentCase::Case2a: elements = {a.i_p, a.j_p, a.i_q}; break;
    case AssignmentCase::Case2b:
      elements = {a.i_q, a.j_q, a.i_p};
      mirrored = true;
      break;
    case AssignmentCase::Case3: elements = {a.i_p, a.i_q}; break;
    case AssignmentCase::Case4: elements = {a.i_p, a.i_q, a.j_p}; break;
  }
  const ClassifierTable& table = classifier_table(algorithm_for_case(m.case_kind));
  const SectorSet sectors = sector_membership(t, m.omega, m.sector_tol);
  const unsigned mask = mask_of(sectors, elements);
  const int regime = m.sim_ratio <= m.eta ? 0 : 1;
  ClassLabel label = table.labels[static_cast<std::size_t>(regime)][mask];
  return mirrored ? other_label(label) : label;
}

Points rows_to_points(const std::vector<std::vector<double>>& rows) {
  Points pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(r);
  return pts;
}

void split_by_label(const std::vector<std::vector<double>>& rows,
                    const std::vector<ClassLabel>& labels, Points& p, Points& q) {
  if (rows.size() != labels.size()) {
    throw std::invalid_argument("rows and labels differ in length (" +
                                std::to_string(rows.size()) + " vs " +
                                std::to_string(labels.size()) + ")");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    (labels[k] == ClassLabel::P ? p : q).emplace_back(rows[k]);
  }
}

PredictionReport evaluate(const std::vector<std::vector<double>>& rows,
                          const std::vector<ClassLabel>& labels, const TrainedModel& m) {
  if (rows.empty()) throw std::invalid_argument("evaluate: empty test set");
  if (rows.size() != labels.size()) {
    throw std::invalid_argument("evaluate: rows and labels differ in length");
  }
  PredictionReport rep;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ClassLabel got = assign_point(TropPoint(rows[k]), m);
    rep.predicted.push_back(got);
    if (labels[k] == ClassLabel::P) {
      (got == ClassLabel::P ? rep.correct_p : rep.wrong_p)++;
    } else {
      (got == ClassLabel::Q ? rep.correct_q : rep.wrong_q)++;
    }
  }
  rep.accuracy = static_cast<double>(rep.correct_p + rep.correct_q) /
                 static_cast<double>(rows.size());
  return rep;
}

namespace {

void for_each_assignment(int d, int algorithm, const std::function<void(IndexAssignment)>& fn) {
  switch (algorithm) {
    case 1:
      for (int ip = 1; ip <= d; ++ip)
        for (int jp = 1; jp <= d; ++jp)
          for (int iq = 1; iq <= d; ++iq)
            for (int jq = 1; jq <= d; ++jq) {
              if (jp == ip || iq == ip || iq == jp || jq == ip || jq == jp || jq == iq) continue;
              fn({ip, jp, iq, jq});
            }
      break;
    case 2:
      for (int ip = 1; ip <= d; ++ip)
        for (int jp = 1; jp <= d; ++jp)
          for (int iq = 1; iq <= d; ++iq) {
            if (jp == ip || iq == ip || iq == jp) continue;
            fn({ip, jp, iq, ip});
          }
      break;
    case 3:
      for (int k1 = 1; k1 <= d; ++k1)
        for (int k2 = 1; k2 <= d; ++k2) {
          if (k2 == k1) continue;
          fn({k1, k2, k2, k1});
        }
      break;
    case 4:
      for (int ip = 1; ip <= d; ++ip)
        for (int iq = 1; iq <= d; ++iq)
          for (int j = 1; j <= d; ++j) {
            if (iq == ip || j == ip || j == iq) continue;
            fn({ip, j, iq, j});
          }
      break;
    default:
      throw std::invalid_argument("select_assignment: algorithm must be 1..4");
  }
}

}  // namespace

IndexAssignment select_assignment(const Points& p, const Points& q, int algorithm) {
  const int d = static_cast<int>(p.front().dim());
  bool have = false;
  bool best_feasible = false;
  double best_margin = 0.0;
  IndexAssignment best;
  for_each_assignment(d, algorithm, [&](IndexAssignment a) {
    const HardMarginResult r = hard_feasible_and_margin(p, q, a);
    // The closed-form margin expression ranks infeasible candidates too:
    // it measures how far the assignment is from separating the data.
    double margin = 0.0;
    switch (r.case_kind) {
      case AssignmentCase::Case1: {
        const auto& c = std::get<Case1Constants>(r.constants);
        margin = std::min({c.a + c.c + c.e, c.d + c.b + c.f, 0.5 * (c.a + c.b + c.d + c.e)});
        break;
      }
      case AssignmentCase::Case2a:
      case AssignmentCase::Case2b: {
        const auto& c = std::get<Case2Constants>(r.constants);
        margin = std::min(c.a + c.b + c.c, 0.5 * (c.a_prime + c.b + c.c));
        break;
      }
      case AssignmentCase::Case3: {
        const auto& c = std::get<Case3Constants>(r.constants);
        margin = 0.5 * (c.min_p_k1_k2 + c.min_q_k2_k1);
        break;
      }
      case AssignmentCase::Case4: {
        const auto& c = std::get<Case4Constants>(r.constants);
        margin = std::min(c.min_p_ip_j - c.max_q_ip_j, c.min_q_iq_j - c.max_p_iq_j);
        break;
      }
    }
    const bool better = !have || (r.feasible && !best_feasible) ||
                        (r.feasible == best_feasible && margin > best_margin);
    if (better) {
      have = true;
      best_feasible = r.feasible;
      best_margin = margin;
      best = a;
    }
  });
  return best;
}

TrainedModel train(const std::vector<std::vector<double>>& rows,
                   const std::vector<ClassLabel>& labels, const TrainConfig& cfg) {
  Points p, q;
  split_by_label(rows, labels, p, q);
  if (p.empty() || q.empty()) {
    throw std::invalid_argument("train: both classes must be represented");
  }

  TrainedModel m;
  m.dim = static_cast<int>(p.front().dim());
  m.tradeoff = cfg.tradeoff;
  m.sim_ratio = cfg.sim_ratio;
  m.eta = cfg.eta;
  m.sector_tol = cfg.sector_tol;
  m.strategy = strategy_name(cfg.strategy);

  switch (cfg.strategy) {
    case Strategy::HardEnumerate: {
      HardMarginResult r = enumerate_assignments(p, q);
      if (!r.feasible || r.margin <= 0.0) {
        throw InseparableError(
            "hard margin: no assignment separates the classes with positive margin; "
            "use a soft strategy");
      }
      m.assignment = r.assignment;
      m.case_kind = r.case_kind;
      m.margin = r.margin;
      m.omega = *r.omega;
      break;
    }
    case Strategy::SoftFixedAssignment: {
      if (!cfg.assignment) {
        throw std::invalid_argument("train: the soft strategy needs an assignment");
      }
      m.assignment = *cfg.assignment;
      m.case_kind = classify_case(m.assignment, m.dim);
      SoftMarginConfig scfg{cfg.tradeoff, m.assignment, 1e-7};
      SoftMarginResult r = solve_soft(p, q, scfg);
      if (r.verdict == LpVerdict::Unbounded) {
        throw std::runtime_error("train: soft objective unbounded at trade-off " +
                                 format_double(cfg.tradeoff));
      }
      m.margin = r.margin;
      m.omega = r.omega;
      break;
    }
    case Strategy::SoftEnumerate: {
      bool have = false;
      double best_objective = 0.0;
      for (int ip = 1; ip <= m.dim; ++ip) {
        for (int jp = 1; jp <= m.dim; ++jp) {
          if (jp == ip) continue;
          for (int iq = 1; iq <= m.dim; ++iq) {
            if (iq == ip) continue;
            for (int jq = 1; jq <= m.dim; ++jq) {
              if (jq == iq) continue;
              const IndexAssignment a{ip, jp, iq, jq};
              SoftMarginConfig scfg{cfg.tradeoff, a, 1e-7};
              SoftMarginResult r = solve_soft(p, q, scfg);
              if (r.verdict != LpVerdict::Optimal) continue;
              if (!have || r.objective > best_objective) {
                have = true;
                best_objective = r.objective;
                m.assignment = a;
                m.case_kind = classify_case(a, m.dim);
                m.margin = r.margin;
                m.omega = r.omega;
              }
            }
          }
        }
      }
      if (!have) throw std::runtime_error("train: soft enumeration found no bounded program");
      break;
    }
  }
  return m;
}

void save_model(const TrainedModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "tropsvm-model-v1\n";
  out << "dim=" << m.dim << "\n";
  out << "omega=";
  for (std::size_t k = 0; k < m.omega.omega.size(); ++k) {
    if (k) out << ',';
    out << format_double(m.omega.omega[k]);
  }
  out << "\n";
  out << "assignment=" << m.assignment.i_p << ',' << m.assignment.j_p << ','
      << m.assignment.i_q << ',' << m.assignment.j_q << "\n";
  out << "case=" << case_name(m.case_kind) << "\n";
  out << "margin=" << format_double(m.margin) << "\n";
  out << "tradeoff=" << format_double(m.tradeoff) << "\n";
  out << "ratio_c=" << format_double(m.sim_ratio) << "\n";
  out << "eta=" << format_double(m.eta) << "\n";
  out << "sector_tol=" << format_double(m.sector_tol) << "\n";
  out << "strategy=" << m.strategy << "\n";
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "tropsvm-model-v1") {
    throw std::runtime_error(path + ": not a tropsvm-model-v1 file");
  }
  TrainedModel m;
  auto parse_doubles = [&](const std::string& s) {
    std::vector<double> out;
    const char* cur = s.data();
    const char* end = s.data() + s.size();
    while (cur < end) {
      double v = 0.0;
      auto [p2, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc()) throw std::runtime_error(path + ": bad number in '" + s + "'");
      out.push_back(v);
      cur = p2;
      if (cur < end && *cur == ',') ++cur;
    }
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error(path + ": bad line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "dim") {
      m.dim = std::stoi(value);
    } else if (key == "omega") {
      m.omega.omega = parse_doubles(value);
    } else if (key == "assignment") {
      auto v = parse_doubles(value);
      if (v.size() != 4) throw std::runtime_error(path + ": assignment needs 4 indices");
      m.assignment = {static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                      static_cast<int>(v[3])};
    } else if (key == "case") {
      // re-derived below from the assignment
    } else if (key == "margin") {
      m.margin = std::stod(value);
    } else if (key == "tradeoff") {
      m.tradeoff = std::stod(value);
    } else if (key == "ratio_c") {
      m.sim_ratio = std::stod(value);
    } else if (key == "eta") {
      m.eta = std::stod(value);
    } else if (key == "sector_tol") {
      m.sector_tol = std::stod(value);
    } else if (key == "strategy") {
      m.strategy = value;
    } else {
      throw std::runtime_error(path + ": unknown key '" + key + "'");
    }
  }
  if (m.dim < 2 || m.omega.omega.size() != static_cast<std::size_t>(m.dim)) {
    throw std::runtime_error(path + ": dim and omega are inconsistent");
  }
  m.case_kind = classify_case(m.assignment, m.dim);
  // Touching the table here makes a transcription error fail at load time.
  (void)classifier_table(algorithm_for_case(m.case_kind));
  return m;
}

}  // namespace tropsvm
