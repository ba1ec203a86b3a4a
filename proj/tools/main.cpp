#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strongtrees/data.hpp"
#include "strongtrees/dominance.hpp"
#include "strongtrees/experiment.hpp"
#include "strongtrees/idm_bounds.hpp"
#include "strongtrees/strong_graph.hpp"

namespace {

using namespace strongtrees;

struct RunConfig {
  std::string command;
  std::string input;
  std::string json_out;
  std::string dot_out;
  std::string output;
  std::string text_out;
  std::string algorithm = "exact";
  double s = 1.0;
  std::string tstar = "uniform";
  std::optional<double> alpha;   // set => credible mode
  std::optional<double> epsilon; // set => threshold post-pass
  std::uint64_t seed = 1;
  std::vector<std::int64_t> sizes = {20, 30, 40, 50, 70};
};

IdmConfig idm_config(const RunConfig& rc) {
  IdmConfig cfg;
  cfg.s = rc.s;
  cfg.tstar_rule =
      rc.tstar == "empirical" ? TStarRule::empirical : TStarRule::uniform;
  if (rc.alpha) cfg.alpha = *rc.alpha;
  cfg.validate();
  return cfg;
}

std::optional<CredibleParams> credible_params(const RunConfig& rc) {
  if (!rc.alpha) return std::nullopt;
  return CredibleParams::from_alpha(*rc.alpha);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

int run_learn(const RunConfig& rc) {
  if (rc.json_out.empty() && rc.dot_out.empty()) {
    throw std::runtime_error("learn: request at least one of --json / --dot");
  }
  const Dataset ds = Dataset::from_csv_file(rc.input);
  const IdmConfig cfg = idm_config(rc);
  const SetWeightedGraph g = build_graph(ds, cfg, credible_params(rc));

  Forest forest;
  if (rc.algorithm == "chowliu") {
    forest = chow_liu_tree(ds).as_forest();
  } else if (rc.algorithm == "approx") {
    forest = detect_strong_approx(g);
  } else {
    forest = detect_strong_exact(g);
  }
  if (rc.epsilon) {
    std::map<Edge, double> upper;
    for (const Edge& e : forest.edges) upper[e] = g.upper_weight(e);
    forest = threshold_forest(forest, upper, *rc.epsilon);
  }

  if (!rc.json_out.empty()) write_file(rc.json_out, forest_to_json(forest, g));
  if (!rc.dot_out.empty()) write_file(rc.dot_out, forest_to_dot(forest, g));
  return 0;
}

int run_bounds(const RunConfig& rc) {
  if (rc.output.empty()) throw std::runtime_error("bounds: --output is required");
  const Dataset ds = Dataset::from_csv_file(rc.input);
  if (ds.variable_count() < 2) {
    throw std::runtime_error("bounds: need at least 2 variables");
  }
  const IdmConfig cfg = idm_config(rc);

  std::string out = "variable_a,variable_b,outer_lo,outer_hi,inner_lo,inner_hi";
  if (rc.alpha) out += ",credible_lo,credible_hi";
  out += '\n';
  char buf[64];
  auto append_value = [&](double x) {
    std::snprintf(buf, sizeof(buf), ",%.12g", x);
    out += buf;
  };
  for (int a = 0; a < ds.variable_count(); ++a) {
    for (int b = a + 1; b < ds.variable_count(); ++b) {
      const ContingencyTable pair = pair_counts(ds, a, b);
      const BoundsPair bp = mi_interval(pair, cfg);
      out += csv_quote(ds.variable(a).name);
      out += ',';
      out += csv_quote(ds.variable(b).name);
      append_value(bp.outer.lo);
      append_value(bp.outer.hi);
      append_value(bp.inner.lo);
      append_value(bp.inner.hi);
      if (rc.alpha) {
        const Interval ci = credible_interval(pair, cfg);
        append_value(ci.lo);
        append_value(ci.hi);
      }
      out += '\n';
    }
  }
  write_file(rc.output, out);
  return 0;
}

int run_simulate(const RunConfig& rc) {
  if (rc.output.empty()) {
    throw std::runtime_error("simulate: --output is required");
  }
  const BayesNet bn = BayesNet::load(rc.input);
  const IdmConfig cfg = idm_config(rc);
  const ExperimentReport report =
      run_experiment(bn, rc.sizes, {rc.seed}, cfg);
  write_file(rc.output, report.to_json_text());
  if (!rc.text_out.empty()) write_file(rc.text_out, report.to_text());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust tree structure learning from categorical data"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_idm_flags = [&rc](CLI::App* cmd) {
    cmd->add_option("--s", rc.s, "IDM hyperparameter s")->check(CLI::PositiveNumber);
    cmd->add_option("--tstar", rc.tstar, "Expansion point rule")
        ->check(CLI::IsMember({"uniform", "empirical"}));
  };

  CLI::App* learn = app.add_subcommand(
      "learn", "Learn a strong-edge forest or Chow-Liu tree from CSV data");
  learn->add_option("--input", rc.input, "Input CSV file")->required();
  learn->add_option("--json", rc.json_out, "Forest JSON output path");
  learn->add_option("--dot", rc.dot_out, "Graphviz DOT output path");
  learn->add_option("--algorithm", rc.algorithm, "Detector")
      ->check(CLI::IsMember({"exact", "approx", "chowliu"}));
  add_idm_flags(learn);
  learn->add_option("--alpha", rc.alpha, "Credibility level (enables credible dominance)")
      ->check(CLI::Range(0.0, 1.0));
  learn->add_option("--epsilon", rc.epsilon,
                    "Drop edges whose upper MI value is <= epsilon");

  CLI::App* bounds = app.add_subcommand(
      "bounds", "Emit per-pair mutual information intervals as CSV");
  bounds->add_option("--input", rc.input, "Input CSV file")->required();
  bounds->add_option("--output", rc.output, "Output CSV path")->required();
  add_idm_flags(bounds);
  bounds->add_option("--alpha", rc.alpha, "Also emit credible limits")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Sample a tree network and compare the two learners");
  simulate->add_option("--network", rc.input, "Network spec JSON")->required();
  simulate->add_option("--output", rc.output, "Report JSON path")->required();
  simulate->add_option("--text", rc.text_out, "Plain-text summary path");
  simulate->add_option("--sizes", rc.sizes, "Sample sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", rc.seed, "Sampling seed");
  add_idm_flags(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (learn->parsed()) return run_learn(rc);
    if (bounds->parsed()) return run_bounds(rc);
    if (simulate->parsed()) return run_simulate(rc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
