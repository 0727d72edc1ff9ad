#include "tropsvm/phylo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace tropsvm {

int pair_to_flat(int i, int j, int n_leaves) {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n_leaves || i == j) {
    throw std::invalid_argument("pair_to_flat: bad pair (" + std::to_string(i) +
                                "," + std::to_string(j) + ") for N=" +
                                std::to_string(n_leaves));
  }
  return (i - 1) * (2 * n_leaves - i) / 2 + (j - i);
}

std::pair<int, int> flat_to_pair(int pos, int n_leaves) {
  if (pos < 1 || pos > n_leaves * (n_leaves - 1) / 2) {
    throw std::invalid_argument("flat_to_pair: position out of range");
  }
  int i = 1;
  int rest = pos;
  while (rest > n_leaves - i) {
    rest -= n_leaves - i;
    ++i;
  }
  return {i, i + rest};
}

double DissimilarityMap::at(int i, int j) const {
  return values[static_cast<std::size_t>(pair_to_flat(i, j, n_leaves)) - 1];
}

double& DissimilarityMap::at(int i, int j) {
  return values[static_cast<std::size_t>(pair_to_flat(i, j, n_leaves)) - 1];
}

TropPoint DissimilarityMap::to_trop_point() const { return TropPoint(values); }

namespace {

struct NewickParser {
  const std::string& text;
  std::size_t pos = 0;
  PhyloTree tree;
  std::vector<std::pair<std::string, std::size_t>> leaf_names;  // name, offset

  explicit NewickParser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) throw NewickError("unexpected end of input", pos);
    return text[pos];
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  double parse_length() {
    skip_ws();
    double value = 0.0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc() || p == text.data() + pos) {
      throw NewickError("expected numeric branch length", pos);
    }
    if (value < 0.0) throw NewickError("negative branch length", pos);
    pos = static_cast<std::size_t>(p - text.data());
    return value;
  }

  std::string parse_label() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && std::string_view("():,;").find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    return text.substr(start, pos - start);
  }

  // Returns the node index. is_root controls whether a branch length is
  // required after the subtree.
  int parse_subtree(bool is_root) {
    if (peek() == '(') {
      const std::size_t open_at = pos;
      ++pos;
      int node = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      std::vector<int> children;
      for (;;) {
        children.push_back(parse_subtree(false));
        if (peek() == ',') {
          ++pos;
          continue;
        }
        if (peek() == ')') {
          ++pos;
          break;
        }
        throw NewickError("expected ',' or ')' (unbalanced parentheses open here)", open_at);
      }
      if (children.size() < 2) {
        throw NewickError("internal node needs at least 2 children", open_at);
      }
      parse_label();  // internal labels are allowed and ignored
      skip_ws();
      if (pos < text.size() && text[pos] == ':') {
        ++pos;
        tree.nodes[node].branch_length = parse_length();
      } else if (!is_root) {
        throw NewickError("missing branch length", pos);
      }
      tree.nodes[node].children = std::move(children);
      return node;
    }
    const std::size_t label_at = pos;
    std::string name = parse_label();
    if (name.empty()) throw NewickError("expected leaf label", pos);
    skip_ws();
    if (pos >= text.size() || text[pos] != ':') {
      if (is_root) throw NewickError("a tree needs at least two leaves", label_at);
      throw NewickError("missing branch length", pos);
    }
    ++pos;
    double len = parse_length();
    int node = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node].branch_length = len;
    leaf_names.emplace_back(std::move(name), label_at);
    tree.nodes[node].leaf_label = static_cast<int>(leaf_names.size());  // provisional
    return node;
  }
};

std::vector<double> node_depths(const PhyloTree& t) {
  std::vector<double> depth(t.nodes.size(), 0.0);
  std::function<void(int)> walk = [&](int v) {
    for (int c : t.nodes[v].children) {
      depth[c] = depth[v] + t.nodes[c].branch_length;
      walk(c);
    }
  };
  walk(t.root);
  return depth;
}

}  // namespace

PhyloTree parse_newick(const std::string& text, std::map<std::string, int>* label_table) {
  NewickParser p(text);
  p.tree.root = p.parse_subtree(true);
  if (p.at_end() || text[p.pos] != ';') {
    throw NewickError("expected ';' terminator", p.pos);
  }
  ++p.pos;
  if (!p.at_end()) throw NewickError("trailing characters after ';'", p.pos);

  const int n = static_cast<int>(p.leaf_names.size());
  // Prefer integer labels when they cover 1..N exactly; otherwise map the
  // lexically sorted names onto 1..N.
  std::map<std::string, int> table;
  bool integers = true;
  std::vector<int> as_int(p.leaf_names.size(), 0);
  std::vector<bool> seen(p.leaf_names.size() + 1, false);
  for (std::size_t k = 0; k < p.leaf_names.size() && integers; ++k) {
    const std::string& s = p.leaf_names[k].first;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1 || v > n) {
      integers = false;
    } else {
      as_int[k] = v;
    }
  }
  if (integers) {
    for (std::size_t k = 0; k < as_int.size(); ++k) {
      if (seen[static_cast<std::size_t>(as_int[k])]) {
        throw NewickError("duplicate leaf label '" + p.leaf_names[k].first + "'",
                          p.leaf_names[k].second);
      }
      seen[static_cast<std::size_t>(as_int[k])] = true;
      table[p.leaf_names[k].first] = as_int[k];
    }
  } else {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < p.leaf_names.size(); ++k) {
      const auto& [name, offset] = p.leaf_names[k];
      if (table.count(name)) throw NewickError("duplicate leaf label '" + name + "'", offset);
      table[name] = 0;
      names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    for (std::size_t k = 0; k < names.size(); ++k) table[names[k]] = static_cast<int>(k) + 1;
  }
  std::size_t next_leaf = 0;
  for (auto& node : p.tree.nodes) {
    if (node.leaf_label != 0) {
      node.leaf_label = table.at(p.leaf_names[next_leaf++].first);
    }
  }
  p.tree.n_leaves = n;
  if (label_table) *label_table = std::move(table);
  return p.tree;
}

std::string serialize_newick(const PhyloTree& t) {
  std::ostringstream os;
  std::function<void(int, bool)> walk = [&](int v, bool is_root) {
    const TreeNode& node = t.nodes[v];
    if (node.children.empty()) {
      os << node.leaf_label;
    } else {
      os << '(';
      for (std::size_t k = 0; k < node.children.size(); ++k) {
        if (k) os << ',';
        walk(node.children[k], false);
      }
      os << ')';
    }
    if (!is_root) os << ':' << format_double(node.branch_length);
  };
  walk(t.root, true);
  os << ';';
  return os.str();
}

double tree_height(const PhyloTree& t) {
  auto depth = node_depths(t);
  double h = 0.0;
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    if (t.nodes[v].children.empty()) h = std::max(h, depth[v]);
  }
  return h;
}

DissimilarityMap cophenetic(const PhyloTree& t) {
  if (t.n_leaves < 2) throw std::invalid_argument("cophenetic: need at least 2 leaves");
  DissimilarityMap w;
  w.n_leaves = t.n_leaves;
  w.values.assign(static_cast<std::size_t>(t.n_leaves) * (t.n_leaves - 1) / 2, 0.0);

  const auto depth = node_depths(t);
  // For each internal node v, leaf pairs whose paths meet at v are exactly
  // the cross pairs of distinct child subtrees.
  std::function<std::vector<int>(int)> walk = [&](int v) -> std::vector<int> {
    const TreeNode& node = t.nodes[v];
    if (node.children.empty()) return {v};
    std::vector<std::vector<int>> groups;
    for (int c : node.children) groups.push_back(walk(c));
    std::vector<int> all;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        for (int li : groups[a]) {
          for (int lj : groups[b]) {
            const double d = depth[li] + depth[lj] - 2.0 * depth[v];
            w.at(t.nodes[li].leaf_label, t.nodes[lj].leaf_label) = d;
          }
        }
      }
      all.insert(all.end(), groups[a].begin(), groups[a].end());
    }
    return all;
  };
  walk(t.root);
  return w;
}

bool is_ultrametric(const DissimilarityMap& w, double tol) {
  const int n = w.n_leaves;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        double a = w.at(i, j), b = w.at(i, k), c = w.at(j, k);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        if (c - b > tol) return false;
      }
    }
  }
  return true;
}

PhyloTree ultrametric_to_tree(const DissimilarityMap& w, double tol) {
  if (!is_ultrametric(w, tol)) {
    throw std::invalid_argument("ultrametric_to_tree: input fails the three point condition");
  }
  const int n = w.n_leaves;
  PhyloTree t;
  t.n_leaves = n;

  struct Cluster {
    int node;
    double height;
  };
  std::vector<Cluster> clusters;
  for (int i = 1; i <= n; ++i) {
    t.nodes.push_back(TreeNode{{}, 0.0, i});
    clusters.push_back({i - 1, 0.0});
  }
  // Single-linkage distances between active clusters.
  std::vector<std::vector<double>> dist(clusters.size(), std::vector<double>(clusters.size(), 0.0));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      dist[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          dist[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = w.at(i, j);
    }
  }

  while (clusters.size() > 1) {
    const std::size_t k = clusters.size();
    double dmin = dist[0][1];
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) dmin = std::min(dmin, dist[a][b]);
    }
    // Group every cluster reachable through links within tol of the round's
    // minimum; a group of 3+ becomes a multifurcation.
    std::vector<std::size_t> comp(k);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
      while (comp[a] != a) a = comp[a] = comp[comp[a]];
      return a;
    };
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (dist[a][b] <= dmin + tol) comp[find(a)] = find(b);
      }
    }
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t a = 0; a < k; ++a) groups[find(a)].push_back(a);

    const double h = dmin / 2.0;
    std::vector<Cluster> next;
    std::vector<std::size_t> next_of(k, SIZE_MAX);
    for (std::size_t g = 0; g < k; ++g) {
      if (groups[g].empty()) continue;
      if (groups[g].size() == 1) {
        next_of[groups[g][0]] = next.size();
        next.push_back(clusters[groups[g][0]]);
        continue;
      }
      int node = static_cast<int>(t.nodes.size());
      t.nodes.emplace_back();
      for (std::size_t idx : groups[g]) {
        t.nodes[clusters[idx].node].branch_length = std::max(0.0, h - clusters[idx].height);
        t.nodes[node].children.push_back(clusters[idx].node);
        next_of[idx] = next.size();
      }
      next.push_back({node, h});
    }
    std::vector<std::vector<double>> ndist(
        next.size(), std::vector<double>(next.size(), std::numeric_limits<double>::infinity()));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const std::size_t na = next_of[a], nb = next_of[b];
        if (na == nb) continue;
        double& slot = ndist[na][nb];
        if (dist[a][b] < slot) slot = dist[a][b];
        ndist[nb][na] = slot;
      }
    }
    clusters = std::move(next);
    dist = std::move(ndist);
  }
  t.root = clusters[0].node;
  return t;
}

std::string topology_signature(const PhyloTree& t) {
  std::function<std::string(int)> walk = [&](int v) -> std::string {
    const TreeNode& node = t.nodes[v];
    if (node.children.empty()) return "L" + std::to_string(node.leaf_label);
    std::vector<std::string> parts;
    for (int c : node.children) parts.push_back(walk(c));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (k) out += ",";
      out += parts[k];
    }
    return out + ")";
  };
  return walk(t.root);
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, static_cast<std::size_t>(p - buf));
}

std::vector<PhyloTree> read_newick_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<PhyloTree> trees;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trees.push_back(parse_newick(line));
    } catch (const NewickError& e) {
      throw NewickError(path + ":" + std::to_string(lineno) + ": " + e.what(), e.offset());
    }
  }
  return trees;
}

void write_newick_file(const std::string& path, const std::vector<PhyloTree>& trees) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const PhyloTree& t : trees) out << serialize_newick(t) << '\n';
}

void write_ultrametric_csv(const std::string& path, int n_leaves,
                           const std::vector<std::vector<double>>& rows) {
  const std::size_t d = static_cast<std::size_t>(n_leaves) * (n_leaves - 1) / 2;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "n_leaves=" << n_leaves << "\n";
  for (const auto& row : rows) {
    if (row.size() != d) {
      throw std::invalid_argument("write_ultrametric_csv: row has " +
                                  std::to_string(row.size()) + " values, expected " +
                                  std::to_string(d));
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  }
}

std::pair<int, std::vector<std::vector<double>>> read_ultrametric_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (line.rfind("n_leaves=", 0) != 0) {
    throw std::runtime_error(path + ": expected 'n_leaves=<N>' header");
  }
  int n = 0;
  auto [hp, hec] = std::from_chars(line.data() + 9, line.data() + line.size(), n);
  if (hec != std::errc() || n < 2) throw std::runtime_error(path + ": bad n_leaves header");
  const std::size_t d = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for (;;) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc()) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number");
      }
      row.push_back(v);
      cur = p;
      if (cur == end) break;
      if (*cur != ',') {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected ','");
      }
      ++cur;
    }
    if (row.size() != d) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(d) + " values, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return {n, std::move(rows)};
}

}  // namespace tropsvm
