#ifndef STRONGTREES_EXPERIMENT_HPP
#define STRONGTREES_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strongtrees/data.hpp"
#include "strongtrees/idm_bounds.hpp"
#include "strongtrees/strong_graph.hpp"

namespace strongtrees {

struct BayesNode {
  std::string name;
  std::optional<int> parent;        // index into the node list
  double p_yes_given_parent_yes;    // root: the unconditional P(yes)
  double p_yes_given_parent_no;     // root: unused
};

// Tree-shaped Bayesian network over binary (yes/no) variables.
class BayesNet {
 public:
  // JSON spec: {"variables": [{"name", "parent": name|null,
  // "p_yes_given_parent_yes", "p_yes_given_parent_no"}]}. The root has
  // parent null, carries its marginal in p_yes_given_parent_yes and null
  // in the other field. Rejects multiple roots, cycles and probabilities
  // outside [0, 1].
  static BayesNet from_json_text(const std::string& text);
  static BayesNet load(const std::string& path);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<BayesNode>& nodes() const { return nodes_; }
  const std::vector<int>& sampling_order() const { return order_; }
  int root() const { return order_.front(); }

  // The undirected skeleton of the parent links.
  std::vector<Edge> skeleton() const;
  std::vector<std::string> names() const;

 private:
  std::vector<BayesNode> nodes_;
  std::vector<int> order_;  // parents before children
};

// Ancestral sampling with a seeded mt19937_64: nodes are drawn in
// topological order, one uniform variate per node per row, taken as
// (next() >> 11) * 2^-53. Identical (net, n, seed) give byte-identical
// datasets.
Dataset sample(const BayesNet& bn, std::int64_t n, std::uint64_t seed);

struct ExperimentCell {
  std::uint64_t seed = 0;
  std::int64_t size = 0;
  std::vector<Edge> strong_edges;
  std::vector<Edge> chowliu_edges;
  double strong_precision = 0.0;
  double strong_recall = 0.0;
  double chowliu_precision = 0.0;
  double chowliu_recall = 0.0;
};

struct SizeSummary {
  std::int64_t size = 0;
  double mean_strong_precision = 0.0;
  double mean_strong_recall = 0.0;
  double mean_chowliu_precision = 0.0;
  double mean_chowliu_recall = 0.0;
};

struct ExperimentReport {
  std::vector<std::string> node_names;
  std::vector<Edge> true_edges;
  std::vector<std::int64_t> sizes;
  std::vector<std::uint64_t> seeds;
  double s = 1.0;
  TStarRule tstar_rule = TStarRule::uniform;
  std::vector<ExperimentCell> cells;      // ordered by (seed, size)
  std::vector<SizeSummary> summary;       // ordered by size

  std::string to_json_text() const;
  std::string to_text() const;
};

// precision = |output intersect truth| / |output| (1 when output is
// empty); recall = |output intersect truth| / |truth|.
double edge_precision(const std::vector<Edge>& output,
                      const std::vector<Edge>& truth);
double edge_recall(const std::vector<Edge>& output,
                   const std::vector<Edge>& truth);

// For each (seed, size): sample, detect strong edges exactly, build the
// Chow-Liu tree and score both against the true skeleton.
ExperimentReport run_experiment(const BayesNet& bn,
                                const std::vector<std::int64_t>& sizes,
                                const std::vector<std::uint64_t>& seeds,
                                const IdmConfig& cfg);

}  // namespace strongtrees

#endif  // STRONGTREES_EXPERIMENT_HPP
