#ifndef STRONGTREES_STRONG_GRAPH_HPP
#define STRONGTREES_STRONG_GRAPH_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "strongtrees/data.hpp"
#include "strongtrees/dominance.hpp"
#include "strongtrees/idm_bounds.hpp"

namespace strongtrees {

// Undirected edge with endpoints normalized so a < b.
struct Edge {
  int a = 0;
  int b = 0;

  static Edge make(int u, int v);
  bool operator==(const Edge& o) const { return a == o.a && b == o.b; }
  bool operator<(const Edge& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};

// Cycle-free undirected edge set over m nodes.
struct Forest {
  int m = 0;
  std::vector<Edge> edges;

  static Forest make(int m, std::vector<Edge> edges);
};

// Spanning tree: m - 1 edges, connected and acyclic.
struct Tree {
  int m = 0;
  std::vector<Edge> edges;

  static Tree make(int m, std::vector<Edge> edges);
  Forest as_forest() const { return Forest::make(m, edges); }
};

// Complete graph over m named nodes whose edge weights are only partially
// ordered. Dominance queries are answered either from explicit per-edge
// intervals (e dominates e' iff e.lo > e'.hi) or from IDM dominance tests
// over a dataset, with verdicts memoized per ordered edge pair.
class SetWeightedGraph {
 public:
  static SetWeightedGraph from_intervals(std::vector<std::string> node_names,
                                         std::vector<Interval> edge_weights);
  static SetWeightedGraph from_dataset(
      const Dataset& ds, const IdmConfig& cfg,
      std::optional<CredibleParams> credible = std::nullopt);

  int node_count() const { return m_; }
  const std::vector<std::string>& node_names() const { return names_; }

  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge_at(int id) const { return edges_[id]; }
  int edge_id(Edge e) const;

  // Whether a dominates b. Throws std::logic_error if the underlying
  // tests ever certify both directions for one pair.
  bool dominates(Edge a, Edge b) const;
  double dominance_margin(Edge a, Edge b) const;

  // Outer/inner MI bounds per edge (interval mode: the given interval for
  // both). Cached after the first call.
  BoundsPair edge_bounds(Edge e) const;
  // Credible MI interval; only available in dataset mode with credible
  // parameters supplied.
  std::optional<Interval> credible_edge_bounds(Edge e) const;

  // Conservative per-edge upper MI value used by threshold filtering:
  // the credible upper limit when credible parameters were supplied,
  // otherwise the conservative outer upper bound.
  double upper_weight(Edge e) const;

 private:
  SetWeightedGraph() = default;
  double compute_margin(Edge a, Edge b) const;

  int m_ = 0;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;  // lexicographic over (a, b)

  // Interval mode.
  bool interval_mode_ = false;
  std::vector<Interval> weights_;

  // Dataset mode.
  std::shared_ptr<const Dataset> ds_;
  IdmConfig cfg_;
  std::optional<CredibleParams> credible_;

  struct Memo {
    std::mutex mutex;
    std::vector<std::optional<double>> margins;  // [a * E + b]
    std::vector<std::optional<BoundsPair>> bounds;
    std::vector<std::optional<Interval>> credible;
  };
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

// All edges present in every maximum spanning tree consistent with the
// dominance order: edge e is kept iff removing e and everything e
// dominates disconnects e's endpoints. O(m^4) with O(m^2) breadth-first
// connectivity checks.
Forest detect_strong_exact(const SetWeightedGraph& g);

// Cheaper O(m^3) detector: per-node dominant-incident-edge pass, then
// growth of the resulting subtrees by dominant frontier edges. Returns a
// subset of detect_strong_exact's output.
Forest detect_strong_approx(const SetWeightedGraph& g);

// Classic maximum spanning tree over empirical mutual information
// (relative frequencies, 0 log 0 = 0), Kruskal with descending weights
// and lexicographic tie-break.
Tree chow_liu_tree(const Dataset& ds);

double empirical_mi(const ContingencyTable& pair);

// Drops every edge whose upper MI value is <= epsilon.
Forest threshold_forest(const Forest& f,
                        const std::map<Edge, double>& upper_mi,
                        double epsilon);
Forest threshold_forest(const Tree& t, const std::map<Edge, double>& upper_mi,
                        double epsilon);

// Dataset-backed graph whose oracle dispatches to the shared-vertex test
// when the edges overlap and to the disjoint test otherwise (credible
// variants when credible parameters are supplied).
SetWeightedGraph build_graph(
    const Dataset& ds, const IdmConfig& cfg,
    std::optional<CredibleParams> credible = std::nullopt);

// Serialization: node names, edges, per-edge outer/inner bounds and the
// smallest certified dominance margin (null if the edge dominates nothing).
std::string forest_to_json(const Forest& f, const SetWeightedGraph& g);
// Graphviz output; retained edges are solid, optionally labeled with the
// outer MI interval to two significant figures.
std::string forest_to_dot(const Forest& f, const SetWeightedGraph& g,
                          bool annotate_bounds = true);

}  // namespace strongtrees

#endif  // STRONGTREES_STRONG_GRAPH_HPP
