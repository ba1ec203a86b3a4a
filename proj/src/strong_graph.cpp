#include "strongtrees/strong_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace strongtrees {

namespace {

class Dsu {
 public:
  explicit Dsu(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  // Returns false when u and v were already connected.
  bool unite(int u, int v) {
    int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    if (size_[ru] < size_[rv]) std::swap(ru, rv);
    parent_[rv] = ru;
    size_[ru] += size_[rv];
    return true;
  }
  int component_size(int v) { return size_[find(v)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

void check_edges_in_range(int m, const std::vector<Edge>& edges,
                          const char* what) {
  for (const Edge& e : edges) {
    if (e.a < 0 || e.b >= m || e.a >= e.b) {
      throw std::invalid_argument(std::string(what) +
                                  ": edge endpoints out of range");
    }
  }
}

std::string format_interval_label(const Interval& iv) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "[%.2g, %.2g]", iv.lo, iv.hi);
  return buf;
}

}  // namespace

Edge Edge::make(int u, int v) {
  if (u == v) throw std::invalid_argument("Edge: endpoints must differ");
  if (u < 0 || v < 0) throw std::invalid_argument("Edge: negative endpoint");
  return u < v ? Edge{u, v} : Edge{v, u};
}

Forest Forest::make(int m, std::vector<Edge> edges) {
  if (m < 0) throw std::invalid_argument("Forest: negative node count");
  check_edges_in_range(m, edges, "Forest");
  Dsu dsu(m);
  for (const Edge& e : edges) {
    if (!dsu.unite(e.a, e.b)) {
      throw std::invalid_argument("Forest: edge set contains a cycle");
    }
  }
  std::sort(edges.begin(), edges.end());
  return Forest{m, std::move(edges)};
}

Tree Tree::make(int m, std::vector<Edge> edges) {
  if (m < 2) throw std::invalid_argument("Tree: need at least 2 nodes");
  if (static_cast<int>(edges.size()) != m - 1) {
    throw std::invalid_argument("Tree: a spanning tree has m - 1 edges");
  }
  Forest f = Forest::make(m, std::move(edges));  // acyclic + m-1 edges => spanning
  return Tree{m, std::move(f.edges)};
}

SetWeightedGraph SetWeightedGraph::from_intervals(
    std::vector<std::string> node_names, std::vector<Interval> edge_weights) {
  const int m = static_cast<int>(node_names.size());
  if (m < 2) {
    throw std::invalid_argument("SetWeightedGraph: need at least 2 nodes");
  }
  SetWeightedGraph g;
  g.m_ = m;
  g.names_ = std::move(node_names);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) g.edges_.push_back(Edge{a, b});
  }
  if (edge_weights.size() != g.edges_.size()) {
    throw std::invalid_argument(
        "SetWeightedGraph: need one interval per edge of the complete graph");
  }
  g.interval_mode_ = true;
  g.weights_ = std::move(edge_weights);
  return g;
}

SetWeightedGraph SetWeightedGraph::from_dataset(
    const Dataset& ds, const IdmConfig& cfg,
    std::optional<CredibleParams> credible) {
  cfg.validate();
  const int m = ds.variable_count();
  if (m < 2) {
    throw std::invalid_argument("SetWeightedGraph: need at least 2 variables");
  }
  SetWeightedGraph g;
  g.m_ = m;
  for (int v = 0; v < m; ++v) g.names_.push_back(ds.variable(v).name);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) g.edges_.push_back(Edge{a, b});
  }
  g.ds_ = std::make_shared<Dataset>(ds);
  g.cfg_ = cfg;
  g.credible_ = credible;
  const std::size_t e = g.edges_.size();
  g.memo_->margins.resize(e * e);
  g.memo_->bounds.resize(e);
  g.memo_->credible.resize(e);
  return g;
}

int SetWeightedGraph::edge_id(Edge e) const {
  if (e.a < 0 || e.b >= m_ || e.a >= e.b) {
    throw std::invalid_argument("edge_id: edge not in graph");
  }
  // Lexicographic position of (a, b) among all a < b pairs.
  return e.a * m_ - e.a * (e.a + 1) / 2 + (e.b - e.a - 1);
}

double SetWeightedGraph::compute_margin(Edge a, Edge b) const {
  int shared = -1, other_a = -1, other_b = -1;
  if (a.a == b.a) {
    shared = a.a; other_a = a.b; other_b = b.b;
  } else if (a.a == b.b) {
    shared = a.a; other_a = a.b; other_b = b.a;
  } else if (a.b == b.a) {
    shared = a.b; other_a = a.a; other_b = b.b;
  } else if (a.b == b.b) {
    shared = a.b; other_a = a.a; other_b = b.a;
  }
  if (shared >= 0) {
    const ContingencyTable triple =
        triple_counts(*ds_, other_a, shared, other_b);
    return credible_ ? dominates_credible(triple, cfg_, *credible_).margin
                     : dominates_shared(triple, cfg_).margin;
  }
  const ContingencyTable pa = pair_counts(*ds_, a.a, a.b);
  const ContingencyTable pb = pair_counts(*ds_, b.a, b.b);
  return credible_ ? dominates_credible(pa, pb, cfg_, *credible_).margin
                   : dominates_disjoint(pa, pb, cfg_).margin;
}

double SetWeightedGraph::dominance_margin(Edge a, Edge b) const {
  const int ia = edge_id(a), ib = edge_id(b);
  if (ia == ib) return 0.0;  // irreflexive
  if (interval_mode_) return weights_[ia].lo - weights_[ib].hi;

  const std::size_t key =
      static_cast<std::size_t>(ia) * edges_.size() + ib;
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (memo_->margins[key]) return *memo_->margins[key];
  }
  const double margin = compute_margin(a, b);
  const std::size_t rkey =
      static_cast<std::size_t>(ib) * edges_.size() + ia;
  std::lock_guard<std::mutex> lock(memo_->mutex);
  if (!memo_->margins[key]) memo_->margins[key] = margin;
  if (margin > 0.0 && memo_->margins[rkey] && *memo_->margins[rkey] > 0.0) {
    throw std::logic_error(
        "dominance oracle violated asymmetry: both directions certified");
  }
  return *memo_->margins[key];
}

bool SetWeightedGraph::dominates(Edge a, Edge b) const {
  return dominance_margin(a, b) > 0.0;
}

BoundsPair SetWeightedGraph::edge_bounds(Edge e) const {
  const int id = edge_id(e);
  if (interval_mode_) {
    const Interval& w = weights_[id];
    return BoundsPair{Interval::make(w.lo, w.hi, BoundKind::outer),
                      Interval::make(w.lo, w.hi, BoundKind::inner)};
  }
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (memo_->bounds[id]) return *memo_->bounds[id];
  }
  const BoundsPair bp = mi_interval(pair_counts(*ds_, e.a, e.b), cfg_);
  std::lock_guard<std::mutex> lock(memo_->mutex);
  if (!memo_->bounds[id]) memo_->bounds[id] = bp;
  return *memo_->bounds[id];
}

std::optional<Interval> SetWeightedGraph::credible_edge_bounds(Edge e) const {
  if (interval_mode_ || !credible_) return std::nullopt;
  const int id = edge_id(e);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (memo_->credible[id]) return *memo_->credible[id];
  }
  const ContingencyTable pair = pair_counts(*ds_, e.a, e.b);
  const BoundsPair bp = edge_bounds(e);
  const ExpansionPoint ep = ExpansionPoint::make(pair, cfg_);
  const double var = std::max(0.0, mi_variance(pair, ep.tstar, cfg_.s));
  const double widen = credible_->r * std::sqrt(var);
  const Interval iv = Interval::make(bp.outer.lo - widen, bp.outer.hi + widen,
                                     BoundKind::outer);
  std::lock_guard<std::mutex> lock(memo_->mutex);
  if (!memo_->credible[id]) memo_->credible[id] = iv;
  return *memo_->credible[id];
}

double SetWeightedGraph::upper_weight(Edge e) const {
  if (const auto ci = credible_edge_bounds(e)) return ci->hi;
  return edge_bounds(e).outer.hi;
}

Forest detect_strong_exact(const SetWeightedGraph& g) {
  const int m = g.node_count();
  if (m < 2) {
    throw std::invalid_argument("detect_strong_exact: need at least 2 nodes");
  }
  const int e_count = g.edge_count();
  std::vector<Edge> strong;
  std::vector<char> adj(static_cast<std::size_t>(m) * m);
  std::vector<char> seen(m);
  std::vector<int> queue;
  queue.reserve(m);

  for (int eid = 0; eid < e_count; ++eid) {
    const Edge e = g.edge_at(eid);
    std::fill(adj.begin(), adj.end(), 1);
    auto drop = [&](Edge x) {
      adj[static_cast<std::size_t>(x.a) * m + x.b] = 0;
      adj[static_cast<std::size_t>(x.b) * m + x.a] = 0;
    };
    drop(e);
    for (int oid = 0; oid < e_count; ++oid) {
      if (oid != eid && g.dominates(e, g.edge_at(oid))) drop(g.edge_at(oid));
    }
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    queue.push_back(e.a);
    seen[e.a] = 1;
    bool connected = false;
    for (std::size_t qi = 0; qi < queue.size() && !connected; ++qi) {
      const int v = queue[qi];
      for (int w = 0; w < m; ++w) {
        if (w == v || !adj[static_cast<std::size_t>(v) * m + w] || seen[w]) {
          continue;
        }
        if (w == e.b) {
          connected = true;
          break;
        }
        seen[w] = 1;
        queue.push_back(w);
      }
    }
    if (!connected) strong.push_back(e);
  }
  return Forest::make(m, std::move(strong));
}

Forest detect_strong_approx(const SetWeightedGraph& g) {
  const int m = g.node_count();
  if (m < 2) {
    throw std::invalid_argument("detect_strong_approx: need at least 2 nodes");
  }
  Dsu dsu(m);
  std::vector<char> in_se(g.edge_count(), 0);
  std::vector<Edge> se;

  auto insert_edge = [&](Edge e) {
    if (!dsu.unite(e.a, e.b)) {
      throw std::logic_error("detect_strong_approx: strong edges formed a cycle");
    }
    in_se[g.edge_id(e)] = 1;
    se.push_back(e);
  };

  // Two-pass scan: discard non-dominant candidates, then verify the
  // survivor against every other edge.
  auto dominant = [&](const std::vector<Edge>& es) -> std::optional<Edge> {
    if (es.empty()) return std::nullopt;
    Edge cand = es[0];
    for (std::size_t i = 1; i < es.size(); ++i) {
      if (!g.dominates(cand, es[i])) cand = es[i];
    }
    for (const Edge& e : es) {
      if (!(e == cand) && !g.dominates(cand, e)) return std::nullopt;
    }
    return cand;
  };

  // Pass over nodes: an incident edge dominating all other incident edges
  // is strong.
  for (int v = 0; v < m; ++v) {
    std::vector<Edge> incident;
    incident.reserve(m - 1);
    for (int w = 0; w < m; ++w) {
      if (w != v) incident.push_back(Edge::make(v, w));
    }
    const auto cand = dominant(incident);
    if (cand && !in_se[g.edge_id(*cand)]) insert_edge(*cand);
  }

  // Grow each subtree by dominant frontier edges until no subtree grows.
  std::vector<char> considered(m, 0);
  while (true) {
    int root = -1;
    for (int v = 0; v < m; ++v) {
      if (dsu.find(v) == v && dsu.component_size(v) >= 2 && !considered[v]) {
        root = v;
        break;
      }
    }
    if (root < 0) break;
    while (true) {
      std::vector<Edge> frontier;
      const int comp = dsu.find(root);
      for (int u = 0; u < m; ++u) {
        if (dsu.find(u) != comp) continue;
        for (int w = 0; w < m; ++w) {
          if (w != u && dsu.find(w) != comp) frontier.push_back(Edge::make(u, w));
        }
      }
      if (frontier.empty()) break;
      const auto cand = dominant(frontier);
      if (!cand) break;
      insert_edge(*cand);
    }
    considered[dsu.find(root)] = 1;
  }
  return Forest::make(m, std::move(se));
}

double empirical_mi(const ContingencyTable& pair) {
  if (pair.dims() != 2) {
    throw std::invalid_argument("empirical_mi: table must be 2-d");
  }
  if (pair.n < 1) throw std::invalid_argument("empirical_mi: empty table");
  const ContingencyTable rowc = pair.marginal(0);
  const ContingencyTable colc = pair.marginal(1);
  const double n = static_cast<double>(pair.n);
  double mi = 0.0;
  for (int i = 0; i < pair.shape[0]; ++i) {
    for (int j = 0; j < pair.shape[1]; ++j) {
      const std::int64_t c = pair.at(i, j);
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      const double pr = static_cast<double>(rowc.at(i)) / n;
      const double pc = static_cast<double>(colc.at(j)) / n;
      mi += p * std::log(p / (pr * pc));
    }
  }
  return mi;
}

Tree chow_liu_tree(const Dataset& ds) {
  const int m = ds.variable_count();
  if (m < 2) throw std::invalid_argument("chow_liu_tree: need at least 2 variables");
  if (ds.row_count() < 1) throw std::invalid_argument("chow_liu_tree: empty dataset");

  struct Weighted {
    Edge e;
    double w;
  };
  std::vector<Weighted> weighted;
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      weighted.push_back({Edge{a, b}, empirical_mi(pair_counts(ds, a, b))});
    }
  }
  // Stable sort keeps the lexicographic edge order within weight ties.
  std::stable_sort(weighted.begin(), weighted.end(),
                   [](const Weighted& x, const Weighted& y) { return x.w > y.w; });
  Dsu dsu(m);
  std::vector<Edge> edges;
  for (const Weighted& we : weighted) {
    if (dsu.unite(we.e.a, we.e.b)) {
      edges.push_back(we.e);
      if (static_cast<int>(edges.size()) == m - 1) break;
    }
  }
  return Tree::make(m, std::move(edges));
}

Forest threshold_forest(const Forest& f, const std::map<Edge, double>& upper_mi,
                        double epsilon) {
  std::vector<Edge> kept;
  for (const Edge& e : f.edges) {
    const auto it = upper_mi.find(e);
    if (it == upper_mi.end()) {
      throw std::invalid_argument(
          "threshold_forest: missing upper MI value for an edge");
    }
    if (it->second > epsilon) kept.push_back(e);
  }
  return Forest::make(f.m, std::move(kept));
}

Forest threshold_forest(const Tree& t, const std::map<Edge, double>& upper_mi,
                        double epsilon) {
  return threshold_forest(t.as_forest(), upper_mi, epsilon);
}

SetWeightedGraph build_graph(const Dataset& ds, const IdmConfig& cfg,
                             std::optional<CredibleParams> credible) {
  return SetWeightedGraph::from_dataset(ds, cfg, credible);
}

std::string forest_to_json(const Forest& f, const SetWeightedGraph& g) {
  nlohmann::json out;
  out["nodes"] = g.node_names();
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : f.edges) {
    nlohmann::json je;
    je["source"] = g.node_names()[e.a];
    je["target"] = g.node_names()[e.b];
    const BoundsPair bp = g.edge_bounds(e);
    je["outer"] = {bp.outer.lo, bp.outer.hi};
    je["inner"] = {bp.inner.lo, bp.inner.hi};
    if (const auto ci = g.credible_edge_bounds(e)) {
      je["credible"] = {ci->lo, ci->hi};
    }
    // Smallest certified margin among the edges this edge dominates.
    double min_margin = 0.0;
    bool any = false;
    for (int oid = 0; oid < g.edge_count(); ++oid) {
      const Edge other = g.edge_at(oid);
      if (other == e) continue;
      const double margin = g.dominance_margin(e, other);
      if (margin > 0.0 && (!any || margin < min_margin)) {
        min_margin = margin;
        any = true;
      }
    }
    if (any) {
      je["min_dominance_margin"] = min_margin;
    } else {
      je["min_dominance_margin"] = nullptr;
    }
    edges.push_back(je);
  }
  out["edges"] = edges;
  return out.dump(2) + "\n";
}

std::string forest_to_dot(const Forest& f, const SetWeightedGraph& g,
                          bool annotate_bounds) {
  std::ostringstream out;
  out << "graph strong_edges {\n";
  out << "  node [shape=ellipse];\n";
  for (const std::string& name : g.node_names()) {
    out << "  \"" << name << "\";\n";
  }
  for (const Edge& e : f.edges) {
    out << "  \"" << g.node_names()[e.a] << "\" -- \"" << g.node_names()[e.b]
        << "\" [style=solid";
    if (annotate_bounds) {
      out << ", label=\"" << format_interval_label(g.edge_bounds(e).outer)
          << "\"";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace strongtrees
