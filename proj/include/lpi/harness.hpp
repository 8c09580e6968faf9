#ifndef LPI_HARNESS_HPP
#define LPI_HARNESS_HPP

// Instance generation, experiment sweeps and CSV output.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpi/blocking.hpp"
#include "lpi/graph.hpp"
#include "lpi/path_listing.hpp"
#include "lpi/weights.hpp"

namespace lpi {

// Distinct ordered pairs drawn uniformly without replacement from nodes of
// degree >= 1. Deterministic per seed. Throws std::invalid_argument when
// fewer than `num` pairs exist.
TargetPairs sample_pairs(const Graph& g, std::size_t num, std::uint64_t seed);

// Reads "u v" raw-id pairs, one per line, '#' comments allowed. Throws
// ParseError on malformed lines or unknown ids.
TargetPairs load_pairs(std::istream& in, const Graph& g);
TargetPairs load_pairs(const std::filesystem::path& file, const Graph& g);

// BFS ball (arcs taken in both directions, neighbours in id order) around
// a seeded random centre, truncated to `size` nodes, with induced arcs.
// When the ball runs out the search restarts from the smallest unvisited
// node. Raw ids of the original graph are kept.
Graph extract_subgraph(const Graph& g, std::uint64_t center_seed, std::size_t size);

// Undirected preferential-attachment graph with exactly `nodes` nodes and
// `edges` edges: each new node attaches to one or two degree-weighted
// earlier nodes, then the remaining edges join degree-weighted endpoints.
Graph generate_as_like(std::size_t nodes, std::size_t edges, std::uint64_t seed);

enum class Method { kIiTe, kIiJsg, kFiTe, kFiJsg, kCut, kDiscrete, kExact };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct ExperimentSpec {
  std::filesystem::path graph_path;
  bool undirected = false;
  std::optional<std::filesystem::path> pairs_path;
  std::size_t num_pairs = 10;
  std::uint64_t seed = 1;
  std::string function_spec = "concave:1:1";
  std::vector<double> T_grid;
  std::vector<double> eps_grid{0.1};
  std::size_t k = 20;
  std::vector<Method> algorithms;
  std::filesystem::path output_path;
  // 0 keeps the whole graph.
  std::size_t subgraph_size = 0;
  std::uint64_t subgraph_seed = 1;
  double eps_sched = 0.1;
  double grid_step = 1.0;
  std::size_t max_rounds = 500;
};

// "key = value" lines, '#' comments. Keys: graph, undirected, pairs,
// num_pairs, seed, function, T, epsilon, k, algorithms, out,
// subgraph_size, subgraph_seed, eps_sched, grid_step, max_rounds. List
// values are comma separated. Relative paths resolve against `base_dir`.
// Throws ParseError.
ExperimentSpec parse_experiment_spec(std::istream& in,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& file);

// Comma-separated reals; throws ParseError.
std::vector<double> parse_real_list(std::string_view text);

struct RunRecord {
  std::string algorithm;
  std::string function;
  double T = 0.0;
  double epsilon = 0.0;
  // "ok", or "skipped:<why>" / "error:<why>".
  std::string status = "ok";
  double norm_x = 0.0;
  std::uint64_t queries = 0;
  std::size_t max_stored_paths = 0;
  std::size_t rounds = 0;
  std::vector<std::size_t> per_round_paths;
  std::uint64_t wall_ms = 0;
  ImpactVector x;

  bool ok() const { return status == "ok"; }
};

struct Instance {
  Graph graph;
  WeightFunction function;
  NodeFunctions functions;
  TargetPairs pairs;
};

// Loads the graph, applies the subgraph cut, samples or loads the pairs.
// Throws on an unloadable graph or bad pairs.
Instance prepare_instance(const ExperimentSpec& spec);

// One cell solved from zero impact. Never throws for solver failures; the
// record carries the error tag instead.
RunRecord run_cell(const Instance& inst, Method method, double T, double eps,
                   const ExperimentSpec& spec);

// Cartesian sweep, algorithms outermost, then T, then epsilon.
std::vector<RunRecord> run_experiment(const Instance& inst, const ExperimentSpec& spec);
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "algorithm,function,T,epsilon,norm_x,queries,max_stored_paths,rounds,wall_ms";
inline constexpr std::string_view kRoundsCsvHeader =
    "algorithm,function,T,epsilon,round,stored_paths";

void emit_csv(std::ostream& out, const std::vector<RunRecord>& records);
void emit_rounds_csv(std::ostream& out, const std::vector<RunRecord>& records);

// "<dir>/<stem>.rounds.csv" next to `csv_path`.
std::filesystem::path rounds_path_for(const std::filesystem::path& csv_path);

// Writes both files; throws std::runtime_error on I/O failure.
void write_csv_files(const std::filesystem::path& csv_path,
                     const std::vector<RunRecord>& records);

// Shortest round-trip decimal form used in CSV output.
std::string format_real(double v);

}  // namespace lpi

#endif  // LPI_HARNESS_HPP
