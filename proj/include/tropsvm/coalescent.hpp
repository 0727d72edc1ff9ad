#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tropsvm/labels.hpp"
#include "tropsvm/phylo.hpp"
#include "tropsvm/rng.hpp"

namespace tropsvm {

struct SimConfig {
  int n_leaves = 5;
  double population = 10000.0;  // effective population size, in generations
  double ratio_c = 1.0;         // species depth / population
  int trees_per_class = 100;
  std::uint64_t seed = 0;

  double depth() const { return population * ratio_c; }
};

// Two-class collection of gene-tree ultrametrics plus provenance.
struct LabeledDataset {
  int n_leaves = 0;
  std::vector<std::vector<double>> rows;  // raw ultrametrics, C(N,2) wide
  std::vector<ClassLabel> labels;
  SimConfig config;
  std::string species_newick_p, species_newick_q;
};

// Random equidistant species tree: topology grown by uniform lineage
// splitting with exponential waiting times (Yule process), then rescaled to
// height exactly `depth`. Leaf labels are a uniform random permutation.
PhyloTree yule_species_tree(int n_leaves, double depth, Rng& rng);

// Multispecies coalescent: one sampled lineage per species leaf, pairwise
// coalescence rate 1/population within each species branch, surviving
// lineages merging above the root. Returns the cophenetic map of the
// resulting equidistant gene tree.
DissimilarityMap coalescent_gene_tree(const PhyloTree& species, double population, Rng& rng);

// Draws one species tree per class and trees_per_class gene trees under
// each. Deterministic for a fixed seed; every point and species tree gets
// its own RNG stream (streams 1 and 2 for the species trees, then
// (class+3) << 32 | tree_index for gene trees).
LabeledDataset generate_dataset(const SimConfig& cfg);

// Writes <path> (ultrametric CSV), <path>.labels (one P/Q per row) and
// <path>.meta.json (config, seed, RNG id, species-tree Newick strings).
void write_dataset(const LabeledDataset& ds, const std::string& csv_path);

}  // namespace tropsvm
