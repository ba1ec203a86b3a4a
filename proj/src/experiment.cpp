#include "strongtrees/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace strongtrees {

namespace {

double require_probability(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    throw std::runtime_error("network spec: missing numeric field '" + field + "'");
  }
  const double p = j[field].get<double>();
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::runtime_error("network spec: '" + field + "' outside [0, 1]");
  }
  return p;
}

}  // namespace

BayesNet BayesNet::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("network spec: invalid JSON: ") +
                             e.what());
  }
  if (!j.contains("variables") || !j["variables"].is_array() ||
      j["variables"].empty()) {
    throw std::runtime_error("network spec: needs a nonempty 'variables' array");
  }

  BayesNet bn;
  std::vector<std::string> parent_names;
  for (const auto& jv : j["variables"]) {
    BayesNode node;
    if (!jv.contains("name") || !jv["name"].is_string()) {
      throw std::runtime_error("network spec: variable without a name");
    }
    node.name = jv["name"].get<std::string>();
    const bool is_root = !jv.contains("parent") || jv["parent"].is_null();
    node.p_yes_given_parent_yes =
        require_probability(jv, "p_yes_given_parent_yes");
    if (is_root) {
      if (jv.contains("p_yes_given_parent_no") &&
          !jv["p_yes_given_parent_no"].is_null()) {
        throw std::runtime_error(
            "network spec: the root carries its marginal in "
            "p_yes_given_parent_yes and null in p_yes_given_parent_no");
      }
      node.p_yes_given_parent_no = 0.0;
      parent_names.emplace_back();
    } else {
      if (!jv["parent"].is_string()) {
        throw std::runtime_error("network spec: parent must be a name or null");
      }
      node.p_yes_given_parent_no =
          require_probability(jv, "p_yes_given_parent_no");
      parent_names.push_back(jv["parent"].get<std::string>());
    }
    bn.nodes_.push_back(std::move(node));
  }

  const int m = bn.node_count();
  int roots = 0;
  for (int v = 0; v < m; ++v) {
    if (parent_names[v].empty()) {
      ++roots;
      continue;
    }
    int parent = -1;
    for (int w = 0; w < m; ++w) {
      if (w != v && bn.nodes_[w].name == parent_names[v]) {
        parent = w;
        break;
      }
    }
    if (parent < 0) {
      throw std::runtime_error("network spec: unknown parent '" +
                               parent_names[v] + "'");
    }
    bn.nodes_[v].parent = parent;
  }
  if (roots != 1) {
    throw std::runtime_error(
        "network spec: the parent links must form a tree with exactly one root");
  }
  for (int v = 0; v < m; ++v) {
    for (int w = v + 1; w < m; ++w) {
      if (bn.nodes_[v].name == bn.nodes_[w].name) {
        throw std::runtime_error("network spec: duplicate variable name '" +
                                 bn.nodes_[v].name + "'");
      }
    }
  }

  // Topological order in listing order among ready nodes; a leftover node
  // means the parent links contain a cycle.
  std::vector<char> placed(m, 0);
  while (static_cast<int>(bn.order_.size()) < m) {
    bool progressed = false;
    for (int v = 0; v < m; ++v) {
      if (placed[v]) continue;
      if (!bn.nodes_[v].parent || placed[*bn.nodes_[v].parent]) {
        bn.order_.push_back(v);
        placed[v] = 1;
        progressed = true;
      }
    }
    if (!progressed) {
      throw std::runtime_error("network spec: parent links contain a cycle");
    }
  }
  return bn;
}

BayesNet BayesNet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<Edge> BayesNet::skeleton() const {
  std::vector<Edge> edges;
  for (int v = 0; v < node_count(); ++v) {
    if (nodes_[v].parent) edges.push_back(Edge::make(v, *nodes_[v].parent));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::string> BayesNet::names() const {
  std::vector<std::string> out;
  for (const auto& node : nodes_) out.push_back(node.name);
  return out;
}

Dataset sample(const BayesNet& bn, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be at least 1");
  std::mt19937_64 rng(seed);
  const auto unit = [&rng]() {
    // 53-bit mantissa draw; avoids distribution objects, whose output
    // sequences are not pinned down by the standard.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  const int m = bn.node_count();
  std::vector<std::vector<std::string>> rows(n,
                                             std::vector<std::string>(m));
  std::vector<int> value(m);  // 1 = yes, 0 = no
  for (std::int64_t r = 0; r < n; ++r) {
    for (int v : bn.sampling_order()) {
      const BayesNode& node = bn.nodes()[v];
      double p = node.p_yes_given_parent_yes;
      if (node.parent && value[*node.parent] == 0) {
        p = node.p_yes_given_parent_no;
      }
      value[v] = unit() < p ? 1 : 0;
      rows[r][v] = value[v] ? "yes" : "no";
    }
  }
  return Dataset::from_string_rows(bn.names(), rows);
}

double edge_precision(const std::vector<Edge>& output,
                      const std::vector<Edge>& truth) {
  if (output.empty()) return 1.0;
  const std::set<Edge> truth_set(truth.begin(), truth.end());
  std::int64_t hit = 0;
  for (const Edge& e : output) hit += truth_set.count(e);
  return static_cast<double>(hit) / static_cast<double>(output.size());
}

double edge_recall(const std::vector<Edge>& output,
                   const std::vector<Edge>& truth) {
  if (truth.empty()) return 1.0;
  const std::set<Edge> truth_set(truth.begin(), truth.end());
  std::int64_t hit = 0;
  for (const Edge& e : output) hit += truth_set.count(e);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

ExperimentReport run_experiment(const BayesNet& bn,
                                const std::vector<std::int64_t>& sizes,
                                const std::vector<std::uint64_t>& seeds,
                                const IdmConfig& cfg) {
  cfg.validate();
  if (sizes.empty() || seeds.empty()) {
    throw std::invalid_argument("run_experiment: need sizes and seeds");
  }
  ExperimentReport report;
  report.node_names = bn.names();
  report.true_edges = bn.skeleton();
  report.sizes = sizes;
  report.seeds = seeds;
  report.s = cfg.s;
  report.tstar_rule = cfg.tstar_rule;

  for (std::uint64_t seed : seeds) {
    for (std::int64_t size : sizes) {
      const Dataset ds = sample(bn, size, seed);
      const SetWeightedGraph g = build_graph(ds, cfg);
      ExperimentCell cell;
      cell.seed = seed;
      cell.size = size;
      cell.strong_edges = detect_strong_exact(g).edges;
      cell.chowliu_edges = chow_liu_tree(ds).edges;
      cell.strong_precision = edge_precision(cell.strong_edges, report.true_edges);
      cell.strong_recall = edge_recall(cell.strong_edges, report.true_edges);
      cell.chowliu_precision =
          edge_precision(cell.chowliu_edges, report.true_edges);
      cell.chowliu_recall = edge_recall(cell.chowliu_edges, report.true_edges);
      report.cells.push_back(std::move(cell));
    }
  }

  for (std::int64_t size : sizes) {
    SizeSummary sum;
    sum.size = size;
    std::int64_t count = 0;
    for (const ExperimentCell& cell : report.cells) {
      if (cell.size != size) continue;
      sum.mean_strong_precision += cell.strong_precision;
      sum.mean_strong_recall += cell.strong_recall;
      sum.mean_chowliu_precision += cell.chowliu_precision;
      sum.mean_chowliu_recall += cell.chowliu_recall;
      ++count;
    }
    sum.mean_strong_precision /= count;
    sum.mean_strong_recall /= count;
    sum.mean_chowliu_precision /= count;
    sum.mean_chowliu_recall /= count;
    report.summary.push_back(sum);
  }
  return report;
}

std::string ExperimentReport::to_json_text() const {
  nlohmann::json out;
  out["nodes"] = node_names;
  nlohmann::json truth = nlohmann::json::array();
  for (const Edge& e : true_edges) {
    truth.push_back({node_names[e.a], node_names[e.b]});
  }
  out["true_edges"] = truth;
  out["sizes"] = sizes;
  out["seeds"] = seeds;
  out["s"] = s;
  out["tstar"] = tstar_rule == TStarRule::uniform ? "uniform" : "empirical";

  nlohmann::json jcells = nlohmann::json::array();
  for (const ExperimentCell& cell : cells) {
    nlohmann::json jc;
    jc["seed"] = cell.seed;
    jc["size"] = cell.size;
    auto edge_array = [&](const std::vector<Edge>& edges) {
      nlohmann::json arr = nlohmann::json::array();
      for (const Edge& e : edges) {
        arr.push_back({node_names[e.a], node_names[e.b]});
      }
      return arr;
    };
    jc["strong_edges"] = edge_array(cell.strong_edges);
    jc["chowliu_edges"] = edge_array(cell.chowliu_edges);
    jc["strong_precision"] = cell.strong_precision;
    jc["strong_recall"] = cell.strong_recall;
    jc["chowliu_precision"] = cell.chowliu_precision;
    jc["chowliu_recall"] = cell.chowliu_recall;
    jcells.push_back(jc);
  }
  out["cells"] = jcells;

  nlohmann::json jsummary = nlohmann::json::array();
  for (const SizeSummary& sum : summary) {
    nlohmann::json js;
    js["size"] = sum.size;
    js["strong_precision"] = sum.mean_strong_precision;
    js["strong_recall"] = sum.mean_strong_recall;
    js["chowliu_precision"] = sum.mean_chowliu_precision;
    js["chowliu_recall"] = sum.mean_chowliu_recall;
    jsummary.push_back(js);
  }
  out["summary"] = jsummary;
  return out.dump(2) + "\n";
}

std::string ExperimentReport::to_text() const {
  std::ostringstream out;
  out << "size  strong_precision  strong_recall  chowliu_precision  chowliu_recall\n";
  char buf[128];
  for (const SizeSummary& sum : summary) {
    std::snprintf(buf, sizeof(buf), "%4lld  %16.4f  %13.4f  %17.4f  %14.4f\n",
                  static_cast<long long>(sum.size), sum.mean_strong_precision,
                  sum.mean_strong_recall, sum.mean_chowliu_precision,
                  sum.mean_chowliu_recall);
    out << buf;
  }
  return out.str();
}

}  // namespace strongtrees
