// Command-line front end: solve, sweep, oracle, generate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lpi/baselines.hpp"
#include "lpi/error.hpp"
#include "lpi/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAbort = 1;
constexpr int kExitPartial = 2;

struct InstanceOptions {
  std::string graph;
  bool undirected = false;
  std::string pairs;
  std::size_t num_pairs = 10;
  std::uint64_t seed = 1;
  std::string function = "concave:1:1";
  std::string T;
  std::string epsilon = "0.1";
  std::size_t subgraph = 0;
  std::uint64_t subgraph_seed = 1;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& o) {
  cmd->add_option("--graph", o.graph, "SNAP-style edge list")->required();
  cmd->add_flag("--undirected", o.undirected, "Treat each edge as two arcs");
  auto* pairs = cmd->add_option("--pairs", o.pairs, "File of 'u v' target pairs (raw ids)");
  cmd->add_option("--num-pairs", o.num_pairs, "Number of sampled target pairs")
      ->excludes(pairs);
  cmd->add_option("--seed", o.seed, "Pair sampling seed");
  cmd->add_option("--function", o.function, "family:c[:f0] or table:FILE[:mode]");
  cmd->add_option("--T", o.T, "Threshold(s), comma separated")->required();
  cmd->add_option("--subgraph", o.subgraph, "Keep a BFS ball of this many nodes");
  cmd->add_option("--subgraph-seed", o.subgraph_seed, "Seed for the subgraph centre");
}

lpi::ExperimentSpec to_spec(const InstanceOptions& o) {
  lpi::ExperimentSpec spec;
  spec.graph_path = o.graph;
  spec.undirected = o.undirected;
  if (!o.pairs.empty()) spec.pairs_path = o.pairs;
  spec.num_pairs = o.num_pairs;
  spec.seed = o.seed;
  lpi::parse_function_spec(o.function);
  spec.function_spec = o.function;
  spec.T_grid = lpi::parse_real_list(o.T);
  spec.eps_grid = lpi::parse_real_list(o.epsilon);
  spec.subgraph_size = o.subgraph;
  spec.subgraph_seed = o.subgraph_seed;
  return spec;
}

void print_summary(const std::vector<lpi::RunRecord>& records) {
  for (const auto& r : records) {
    std::cout << r.algorithm << " T=" << lpi::format_real(r.T)
              << " eps=" << lpi::format_real(r.epsilon) << ": ";
    if (r.ok()) {
      std::cout << "||x||=" << lpi::format_real(r.norm_x) << " queries=" << r.queries
                << " rounds=" << r.rounds << " max_paths=" << r.max_stored_paths;
    } else {
      std::cout << r.status;
    }
    std::cout << '\n';
  }
}

int finish(const std::vector<lpi::RunRecord>& records, const std::string& out) {
  if (!out.empty()) {
    lpi::write_csv_files(out, records);
  } else {
    lpi::emit_csv(std::cout, records);
  }
  for (const auto& r : records) {
    if (r.status.rfind("error:", 0) == 0) return kExitPartial;
  }
  return kExitOk;
}

void write_impact(const std::string& file, const lpi::Graph& g, const lpi::ImpactVector& x) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file);
  for (lpi::NodeId v = 0; v < x.size(); ++v) {
    if (x[v] > 0.0) out << g.raw_id(v) << ' ' << lpi::format_real(x[v]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length-bounded path interdiction with continuous node impacts"};
  app.require_subcommand(1);

  InstanceOptions solve_opts;
  std::size_t k = 20;
  std::string cpl = "ii";
  std::string tb = "te";
  double eps_sched = 0.1;
  std::size_t max_rounds = 500;
  std::string solve_out;
  std::string impact_out;
  auto* solve = app.add_subcommand("solve", "Solve one instance over a T x epsilon grid");
  add_instance_options(solve, solve_opts);
  solve->add_option("--epsilon", solve_opts.epsilon, "Slack(s), comma separated");
  solve->add_option("--k", k, "Paths collected per pair and round");
  solve->add_option("--cpl", cpl, "Path listing: ii, fi, cut or discrete")
      ->check(CLI::IsMember({"ii", "fi", "cut", "discrete"}));
  solve->add_option("--tb", tb, "Blocking oracle: te or jsg")
      ->check(CLI::IsMember({"te", "jsg"}));
  solve->add_option("--eps-sched", eps_sched, "Threshold Expansion decay");
  solve->add_option("--max-rounds", max_rounds, "Round limit");
  solve->add_option("--out", solve_out, "CSV output (stdout if omitted)");
  solve->add_option("--impact-out", impact_out,
                    "Write nonzero 'raw_id amount' lines of the last cell");

  std::string sweep_spec;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a key=value experiment spec");
  sweep->add_option("--spec", sweep_spec, "Spec file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "CSV output (overrides 'out' in the spec)");

  InstanceOptions oracle_opts;
  double grid_step = 1.0;
  double x_max = 0.0;
  auto* oracle = app.add_subcommand("oracle", "Exact grid optimum for tiny instances");
  add_instance_options(oracle, oracle_opts);
  oracle->add_option("--grid-step", grid_step, "Grid resolution");
  oracle->add_option("--x-max", x_max, "Largest amount per node (default: largest x_cap)");

  std::size_t gen_nodes = 6474;
  std::size_t gen_edges = 13895;
  std::uint64_t gen_seed = 20000102;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic AS-like edge list");
  generate->add_option("--nodes", gen_nodes, "Node count");
  generate->add_option("--edges", gen_edges, "Undirected edge count");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      lpi::ExperimentSpec spec = to_spec(solve_opts);
      spec.k = k;
      spec.eps_sched = eps_sched;
      spec.max_rounds = max_rounds;
      std::string name;
      if (cpl == "cut" || cpl == "discrete") {
        name = cpl;
      } else {
        name = cpl + "-" + tb;
      }
      spec.algorithms = {*lpi::parse_method(name)};
      lpi::Instance inst = lpi::prepare_instance(spec);
      auto records = lpi::run_experiment(inst, spec);
      if (!impact_out.empty() && !records.empty() && records.back().ok()) {
        write_impact(impact_out, inst.graph, records.back().x);
      }
      if (!solve_out.empty()) print_summary(records);
      return finish(records, solve_out);
    }
    if (*sweep) {
      lpi::ExperimentSpec spec = lpi::load_experiment_spec(sweep_spec);
      if (!sweep_out.empty()) spec.output_path = sweep_out;
      auto records = lpi::run_experiment(spec);
      print_summary(records);
      return finish(records, spec.output_path.string());
    }
    if (*oracle) {
      lpi::ExperimentSpec spec = to_spec(oracle_opts);
      spec.grid_step = grid_step;
      lpi::Instance inst = lpi::prepare_instance(spec);
      for (double T : spec.T_grid) {
        double bound = x_max;
        if (bound <= 0.0) {
          for (const auto& f : inst.functions) {
            bound = std::max(bound, lpi::x_cap(f, T, lpi::BlockingConfig{}.x_max));
          }
        }
        lpi::ImpactVector x =
            lpi::exact_tiny(inst.graph, inst.functions, inst.pairs, T, grid_step, bound);
        std::cout << "T=" << lpi::format_real(T) << " ||x*||=" << lpi::format_real(x.norm())
                  << '\n';
        for (lpi::NodeId v = 0; v < x.size(); ++v) {
          if (x[v] > 0.0) {
            std::cout << "  " << inst.graph.raw_id(v) << ' ' << lpi::format_real(x[v]) << '\n';
          }
        }
      }
      return kExitOk;
    }
    if (*generate) {
      lpi::Graph g = lpi::generate_as_like(gen_nodes, gen_edges, gen_seed);
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot write " + gen_out);
      out << "# Synthetic AS-like graph: " << gen_nodes << " nodes, " << gen_edges
          << " edges, seed " << gen_seed << '\n';
      lpi::write_edge_list(out, g);
      if (!out) throw std::runtime_error("write failed for " + gen_out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAbort;
  }
  return kExitOk;
}
