#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tropsvm/tropical.hpp"

namespace tropsvm {

struct TreeNode {
  std::vector<int> children;   // indices into PhyloTree::nodes; empty = leaf
  double branch_length = 0.0;  // length of the edge to the parent; 0 at root
  int leaf_label = 0;          // 1..N for leaves, 0 for internal nodes
};

// Rooted tree with labelled leaves and weighted edges. Immutable by
// convention once built.
struct PhyloTree {
  std::vector<TreeNode> nodes;
  int root = -1;
  int n_leaves = 0;
};

// Pairwise leaf distances of an N-leaf tree, flattened in lexicographic
// pair order (1,2),(1,3),...,(1,N),(2,3),...,(N-1,N).
struct DissimilarityMap {
  int n_leaves = 0;
  std::vector<double> values;

  double at(int i, int j) const;  // 1-based leaves, i != j
  double& at(int i, int j);
  TropPoint to_trop_point() const;
};

// Bijection between ordered pairs (i,j), 1 <= i < j <= N, and flat
// positions 1..C(N,2).
int pair_to_flat(int i, int j, int n_leaves);
std::pair<int, int> flat_to_pair(int pos, int n_leaves);

class NewickError : public std::runtime_error {
 public:
  NewickError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Parses a single ';'-terminated Newick expression. Integer leaf labels
// covering 1..N are used directly; any other label set is sorted lexically
// and mapped to 1..N (the mapping is reported through label_table when
// given). Branch lengths are required on every edge below the root.
PhyloTree parse_newick(const std::string& text,
                       std::map<std::string, int>* label_table = nullptr);

std::string serialize_newick(const PhyloTree& t);

// Root-to-leaf distance; trees used here are equidistant so every leaf
// agrees up to rounding. Returns the maximum.
double tree_height(const PhyloTree& t);

// Path-length distance between every pair of leaves.
DissimilarityMap cophenetic(const PhyloTree& t);

// Three point condition: for every triple, the maximum of the three
// pairwise values is attained at least twice (within tol). Equivalent to
// membership in the tropicalized space of equidistant trees.
bool is_ultrametric(const DissimilarityMap& w, double tol = 1e-9);

// Reconstructs the equidistant tree realising an ultrametric via single
// linkage agglomeration at merge height w(i,j)/2. Clusters joining at equal
// height (within tol) merge into one multifurcating node.
PhyloTree ultrametric_to_tree(const DissimilarityMap& w, double tol = 1e-9);

// Canonical topology fingerprint (ignores branch lengths).
std::string topology_signature(const PhyloTree& t);

// Shortest round-trip decimal representation.
std::string format_double(double v);

// Newick text files: one ';'-terminated tree per line, blank lines skipped.
std::vector<PhyloTree> read_newick_file(const std::string& path);
void write_newick_file(const std::string& path, const std::vector<PhyloTree>& trees);

// Ultrametric CSV interchange: header "n_leaves=<N>", then one row per
// point, d = C(N,2) comma-separated decimals in lexicographic pair order.
void write_ultrametric_csv(const std::string& path, int n_leaves,
                           const std::vector<std::vector<double>>& rows);
std::pair<int, std::vector<std::vector<double>>> read_ultrametric_csv(
    const std::string& path);

}  // namespace tropsvm
