#include "tropsvm/coalescent.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace tropsvm {

PhyloTree yule_species_tree(int n_leaves, double depth, Rng& rng) {
  if (n_leaves < 3) throw std::invalid_argument("yule_species_tree: need at least 3 leaves");
  if (depth <= 0.0) throw std::invalid_argument("yule_species_tree: depth must be positive");

  PhyloTree t;
  struct Lineage {
    int node;
    double born;  // forward time at which the lineage started
  };
  t.nodes.emplace_back();
  std::vector<Lineage> active{{0, 0.0}};
  std::vector<double> split_time(1, 0.0);  // per node, time it split (leaves: end time)

  double now = 0.0;
  double first_split = 0.0;
  while (static_cast<int>(active.size()) < n_leaves) {
    const double k = static_cast<double>(active.size());
    now += rng.exponential(k);  // unit birth rate per lineage; height is rescaled below
    const std::size_t pick = rng.below(active.size());
    if (active.size() == 1) first_split = now;
    const int parent = active[pick].node;
    split_time.resize(t.nodes.size(), 0.0);
    split_time[static_cast<std::size_t>(parent)] = now;
    for (int c = 0; c < 2; ++c) {
      const int node = static_cast<int>(t.nodes.size());
      t.nodes.emplace_back();
      split_time.push_back(0.0);
      t.nodes[static_cast<std::size_t>(parent)].children.push_back(node);
      if (c == 0) {
        active[pick] = {node, now};
      } else {
        active.push_back({node, now});
      }
    }
  }
  // Cut the tree at the moment the next split would have happened, so every
  // pendant branch gets a positive length and all leaves end together.
  const double end = now + rng.exponential(static_cast<double>(n_leaves));
  split_time.resize(t.nodes.size(), 0.0);
  for (const Lineage& l : active) split_time[static_cast<std::size_t>(l.node)] = end;

  // Assign a uniform random permutation of 1..n to the leaves.
  std::vector<int> labels(static_cast<std::size_t>(n_leaves));
  for (int i = 0; i < n_leaves; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = labels.size(); i-- > 1;) {
    std::swap(labels[i], labels[rng.below(i + 1)]);
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    t.nodes[static_cast<std::size_t>(active[i].node)].leaf_label = labels[i];
  }

  // The first split is the root; rescale so the root-to-leaf span is
  // exactly `depth`.
  const double scale = depth / (end - first_split);
  std::function<void(int, double)> set_lengths = [&](int v, double parent_time) {
    t.nodes[static_cast<std::size_t>(v)].branch_length =
        (split_time[static_cast<std::size_t>(v)] - parent_time) * scale;
    for (int c : t.nodes[static_cast<std::size_t>(v)].children) {
      set_lengths(c, split_time[static_cast<std::size_t>(v)]);
    }
  };
  t.root = 0;
  set_lengths(t.root, first_split);
  t.nodes[0].branch_length = 0.0;
  t.n_leaves = n_leaves;
  return t;
}

DissimilarityMap coalescent_gene_tree(const PhyloTree& species, double population, Rng& rng) {
  if (population <= 0.0) throw std::invalid_argument("coalescent_gene_tree: population must be positive");
  const int n = species.n_leaves;

  // Species node heights measured from the leaves (all leaves at height 0).
  const double height = tree_height(species);
  std::vector<double> node_height(species.nodes.size(), 0.0);
  std::function<void(int, double)> walk = [&](int v, double depth_from_root) {
    node_height[static_cast<std::size_t>(v)] = height - depth_from_root;
    for (int c : species.nodes[static_cast<std::size_t>(v)].children) {
      walk(c, depth_from_root + species.nodes[static_cast<std::size_t>(c)].branch_length);
    }
  };
  walk(species.root, 0.0);

  // One gene lineage per species leaf; a lineage is the set of leaf labels
  // that have coalesced into it, tracked per species branch ("population").
  struct Lineage {
    std::vector<int> leaves;
  };
  std::vector<std::vector<Lineage>> pool(species.nodes.size());
  for (std::size_t v = 0; v < species.nodes.size(); ++v) {
    if (species.nodes[v].children.empty()) {
      pool[v].push_back(Lineage{{species.nodes[v].leaf_label}});
    }
  }

  DissimilarityMap w;
  w.n_leaves = n;
  w.values.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);

  auto coalesce_pair = [&](std::vector<Lineage>& lineages, std::size_t a, std::size_t b, double h) {
    for (int li : lineages[a].leaves) {
      for (int lj : lineages[b].leaves) w.at(li, lj) = 2.0 * h;
    }
    lineages[a].leaves.insert(lineages[a].leaves.end(), lineages[b].leaves.begin(),
                              lineages[b].leaves.end());
    lineages.erase(lineages.begin() + static_cast<std::ptrdiff_t>(b));
  };

  // Runs the coalescent inside one population from height `from` until
  // `until` (or until one lineage remains when until is +inf).
  auto run_population = [&](std::vector<Lineage>& lineages, double from, double until) {
    double h = from;
    while (lineages.size() > 1) {
      const double k = static_cast<double>(lineages.size());
      const double rate = k * (k - 1.0) / 2.0 / population;
      h += rng.exponential(rate);
      if (h >= until) return;
      const std::uint64_t pick = rng.below(static_cast<std::uint64_t>(k * (k - 1.0) / 2.0));
      // Decode the pick into an unordered pair (a < b).
      std::size_t a = 0, b = 0;
      std::uint64_t r = pick;
      for (std::size_t i = 0; i + 1 < lineages.size(); ++i) {
        const std::uint64_t row = lineages.size() - 1 - i;
        if (r < row) {
          a = i;
          b = i + 1 + static_cast<std::size_t>(r);
          break;
        }
        r -= row;
      }
      coalesce_pair(lineages, a, b, h);
    }
  };

  // Process species nodes in order of increasing height (leaves first);
  // ties broken by node index for determinism.
  std::vector<int> order(species.nodes.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ha = node_height[static_cast<std::size_t>(a)];
    const double hb = node_height[static_cast<std::size_t>(b)];
    return ha != hb ? ha < hb : a < b;
  });
  for (int v : order) {
    const auto& node = species.nodes[static_cast<std::size_t>(v)];
    if (node.children.empty() && v != species.root) continue;
    // Gather surviving lineages from the children populations, each of
    // which ran from its own start height up to this node's height.
    std::vector<Lineage>& here = pool[static_cast<std::size_t>(v)];
    for (int c : node.children) {
      auto& child_pool = pool[static_cast<std::size_t>(c)];
      run_population(child_pool, node_height[static_cast<std::size_t>(c)],
                     node_height[static_cast<std::size_t>(v)]);
      for (auto& l : child_pool) here.push_back(std::move(l));
      child_pool.clear();
    }
    if (v == species.root) {
      run_population(here, node_height[static_cast<std::size_t>(v)],
                     std::numeric_limits<double>::infinity());
    }
  }
  return w;
}

LabeledDataset generate_dataset(const SimConfig& cfg) {
  if (cfg.trees_per_class < 1) throw std::invalid_argument("generate_dataset: trees_per_class >= 1");
  LabeledDataset ds;
  ds.config = cfg;
  ds.n_leaves = cfg.n_leaves;

  Rng rng_p = Rng::stream(cfg.seed, 1);
  Rng rng_q = Rng::stream(cfg.seed, 2);
  const PhyloTree species_p = yule_species_tree(cfg.n_leaves, cfg.depth(), rng_p);
  const PhyloTree species_q = yule_species_tree(cfg.n_leaves, cfg.depth(), rng_q);
  ds.species_newick_p = serialize_newick(species_p);
  ds.species_newick_q = serialize_newick(species_q);

  for (int cls = 0; cls < 2; ++cls) {
    const PhyloTree& sp = cls == 0 ? species_p : species_q;
    for (int k = 0; k < cfg.trees_per_class; ++k) {
      Rng rng = Rng::stream(cfg.seed, (static_cast<std::uint64_t>(cls) + 3) << 32 |
                                          static_cast<std::uint64_t>(k));
      DissimilarityMap w = coalescent_gene_tree(sp, cfg.population, rng);
      ds.rows.push_back(std::move(w.values));
      ds.labels.push_back(cls == 0 ? ClassLabel::P : ClassLabel::Q);
    }
  }
  return ds;
}

void write_dataset(const LabeledDataset& ds, const std::string& csv_path) {
  write_ultrametric_csv(csv_path, ds.n_leaves, ds.rows);
  write_labels(csv_path + ".labels", ds.labels);

  nlohmann::ordered_json meta;
  meta["format"] = "tropsvm-dataset-meta-v1";
  meta["rng"] = kRngName;
  meta["n_leaves"] = ds.config.n_leaves;
  meta["population"] = ds.config.population;
  meta["ratio_c"] = ds.config.ratio_c;
  meta["depth"] = ds.config.depth();
  meta["trees_per_class"] = ds.config.trees_per_class;
  meta["seed"] = ds.config.seed;
  meta["species_newick_p"] = ds.species_newick_p;
  meta["species_newick_q"] = ds.species_newick_q;
  std::ofstream out(csv_path + ".meta.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + csv_path + ".meta.json");
  out << meta.dump(2) << "\n";
}

}  // namespace tropsvm
