#include "lpi/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lpi/baselines.hpp"
#include "lpi/error.hpp"

namespace lpi {

namespace {

// Plain modulo keeps draws identical across standard libraries, unlike
// std::uniform_int_distribution.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    std::string item = trim(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, std::size_t line, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad " + std::string(what) + " '" + text + "'", line);
  }
  return value;
}

bool parse_bool(const std::string& text, std::size_t line) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError("bad boolean '" + text + "'", line);
}

std::string sanitize(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

}  // namespace

TargetPairs sample_pairs(const Graph& g, std::size_t num, std::uint64_t seed) {
  if (num == 0) throw std::invalid_argument("num_pairs must be at least 1");
  std::vector<NodeId> hosts;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 0) hosts.push_back(v);
  }
  const std::uint64_t h = hosts.size();
  const std::uint64_t available = h < 2 ? 0 : h * (h - 1);
  if (num > available) {
    throw std::invalid_argument("requested " + std::to_string(num) + " pairs but only " +
                                std::to_string(available) + " exist");
  }
  std::mt19937_64 rng(seed);
  std::vector<NodePair> pairs;
  if (2 * num >= available) {
    std::vector<NodePair> all;
    for (NodeId a : hosts) {
      for (NodeId b : hosts) {
        if (a != b) all.push_back({a, b});
      }
    }
    for (std::size_t i = 0; i < num; ++i) {
      std::swap(all[i], all[i + draw(rng, all.size() - i)]);
      pairs.push_back(all[i]);
    }
  } else {
    std::set<NodePair> seen;
    while (pairs.size() < num) {
      NodePair p{hosts[draw(rng, h)], hosts[draw(rng, h)]};
      if (p.source != p.sink && seen.insert(p).second) pairs.push_back(p);
    }
  }
  return TargetPairs(std::move(pairs), g.node_count());
}

TargetPairs load_pairs(std::istream& in, const Graph& g) {
  std::vector<NodePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::uint64_t a = 0, b = 0;
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra)) throw ParseError("expected 'u v'", line_no);
    auto u = g.find_raw(a);
    auto v = g.find_raw(b);
    if (!u || !v) throw ParseError("pair refers to a node not in the graph", line_no);
    if (*u == *v) throw ParseError("pair with identical endpoints", line_no);
    pairs.push_back({*u, *v});
  }
  if (pairs.empty()) throw ParseError("no pairs", 0);
  return TargetPairs(std::move(pairs), g.node_count());
}

TargetPairs load_pairs(const std::filesystem::path& file, const Graph& g) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open pairs file " + file.string());
  return load_pairs(in, g);
}

Graph extract_subgraph(const Graph& g, std::uint64_t center_seed, std::size_t size) {
  const std::size_t n = g.node_count();
  if (size == 0 || size > n) {
    throw std::invalid_argument("subgraph size must lie in [1, " + std::to_string(n) + "]");
  }
  std::mt19937_64 rng(center_seed);
  const auto center = static_cast<NodeId>(draw(rng, n));

  std::vector<char> seen(n, 0);
  std::vector<NodeId> picked;
  std::vector<NodeId> queue;
  std::size_t head = 0;
  NodeId next_fresh = 0;
  auto visit = [&](NodeId v) {
    if (seen[v] || picked.size() == size) return;
    seen[v] = 1;
    picked.push_back(v);
    queue.push_back(v);
  };
  visit(center);
  std::vector<NodeId> nbrs;
  while (picked.size() < size) {
    if (head == queue.size()) {
      while (seen[next_fresh]) ++next_fresh;
      visit(next_fresh);
      continue;
    }
    const NodeId v = queue[head++];
    nbrs.assign(g.successors(v).begin(), g.successors(v).end());
    nbrs.insert(nbrs.end(), g.predecessors(v).begin(), g.predecessors(v).end());
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (NodeId u : nbrs) visit(u);
  }

  std::sort(picked.begin(), picked.end());
  std::vector<NodeId> remap(n, static_cast<NodeId>(-1));
  std::vector<std::uint64_t> raw;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    remap[picked[i]] = static_cast<NodeId>(i);
    raw.push_back(g.raw_id(picked[i]));
  }
  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) {
    if (seen[a.from] && seen[a.to]) arcs.push_back({remap[a.from], remap[a.to]});
  }
  return Graph(picked.size(), std::move(arcs), g.undirected_source(), std::move(raw));
}

Graph generate_as_like(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
  if (nodes < 3) throw std::invalid_argument("need at least 3 nodes");
  const std::uint64_t most = static_cast<std::uint64_t>(nodes) * (nodes - 1) / 2;
  if (edges < nodes - 1 || edges > most) {
    throw std::invalid_argument("edge count must lie in [n - 1, n(n - 1)/2]");
  }
  std::mt19937_64 rng(seed);
  std::set<std::pair<NodeId, NodeId>> edge_set;
  // Every endpoint of every edge; a uniform pick is degree-weighted.
  std::vector<NodeId> ends;
  auto add = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    if (!edge_set.emplace(std::min(a, b), std::max(a, b)).second) return false;
    ends.push_back(a);
    ends.push_back(b);
    return true;
  };
  add(0, 1);
  for (NodeId v = 2; v < nodes; ++v) {
    std::size_t m = draw(rng, 10) < 4 ? 1 : 2;
    // Keep at least one edge for every later node.
    if (edge_set.size() + m + (nodes - 1 - v) > edges) m = 1;
    const std::size_t before = ends.size();
    std::size_t made = 0;
    while (made < m) {
      if (add(v, ends[draw(rng, before)])) ++made;
    }
  }
  while (edge_set.size() < edges) {
    add(ends[draw(rng, ends.size())], ends[draw(rng, ends.size())]);
  }
  std::vector<Arc> arcs;
  for (auto [a, b] : edge_set) {
    arcs.push_back({a, b});
    arcs.push_back({b, a});
  }
  return Graph(nodes, std::move(arcs), true);
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kIiTe: return "II-TE";
    case Method::kIiJsg: return "II-JSG";
    case Method::kFiTe: return "FI-TE";
    case Method::kFiJsg: return "FI-JSG";
    case Method::kCut: return "CUT";
    case Method::kDiscrete: return "DISCRETE";
    case Method::kExact: return "EXACT";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Method m : {Method::kIiTe, Method::kIiJsg, Method::kFiTe, Method::kFiJsg,
                   Method::kCut, Method::kDiscrete, Method::kExact}) {
    if (upper == method_name(m)) return m;
  }
  return std::nullopt;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    out.push_back(parse_number<double>(item, 0, "number"));
  }
  if (out.empty()) throw ParseError("empty list", 0);
  return out;
}

ExperimentSpec parse_experiment_spec(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  bool have_graph = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    // Allow TOML-style quoting.
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      value = value.substr(1, value.size() - 2);
    }
    try {
      if (key == "graph") {
        spec.graph_path = resolve(value);
        have_graph = true;
      } else if (key == "undirected") {
        spec.undirected = parse_bool(value, line_no);
      } else if (key == "pairs") {
        spec.pairs_path = resolve(value);
      } else if (key == "num_pairs") {
        spec.num_pairs = parse_number<std::size_t>(value, line_no, "count");
      } else if (key == "seed") {
        spec.seed = parse_number<std::uint64_t>(value, line_no, "seed");
      } else if (key == "function") {
        parse_function_spec(value);
        spec.function_spec = value;
      } else if (key == "T") {
        spec.T_grid = parse_real_list(value);
      } else if (key == "epsilon") {
        spec.eps_grid = parse_real_list(value);
      } else if (key == "k") {
        spec.k = parse_number<std::size_t>(value, line_no, "k");
      } else if (key == "algorithms") {
        spec.algorithms.clear();
        for (const std::string& name : split_list(value)) {
          std::string bare = name;
          if (bare.size() >= 2 && bare.front() == '"' && bare.back() == '"') {
            bare = bare.substr(1, bare.size() - 2);
          }
          auto m = parse_method(bare);
          if (!m) throw ParseError("unknown algorithm '" + name + "'", line_no);
          spec.algorithms.push_back(*m);
        }
      } else if (key == "out") {
        spec.output_path = resolve(value);
      } else if (key == "subgraph_size") {
        spec.subgraph_size = parse_number<std::size_t>(value, line_no, "size");
      } else if (key == "subgraph_seed") {
        spec.subgraph_seed = parse_number<std::uint64_t>(value, line_no, "seed");
      } else if (key == "eps_sched") {
        spec.eps_sched = parse_number<double>(value, line_no, "number");
      } else if (key == "grid_step") {
        spec.grid_step = parse_number<double>(value, line_no, "number");
      } else if (key == "max_rounds") {
        spec.max_rounds = parse_number<std::size_t>(value, line_no, "count");
      } else {
        throw ParseError("unknown key '" + key + "'", line_no);
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_graph) throw ParseError("missing 'graph'", 0);
  if (spec.T_grid.empty()) throw ParseError("missing 'T'", 0);
  if (spec.eps_grid.empty()) throw ParseError("empty 'epsilon'", 0);
  if (spec.algorithms.empty()) throw ParseError("missing 'algorithms'", 0);
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open spec file " + file.string());
  return parse_experiment_spec(in, file.parent_path());
}

Instance prepare_instance(const ExperimentSpec& spec) {
  Graph g = load_edge_list(spec.graph_path, spec.undirected);
  if (spec.subgraph_size > 0) g = extract_subgraph(g, spec.subgraph_seed, spec.subgraph_size);
  TargetPairs pairs = spec.pairs_path ? load_pairs(*spec.pairs_path, g)
                                      : sample_pairs(g, spec.num_pairs, spec.seed);
  WeightFunction f = parse_function_spec(spec.function_spec);
  NodeFunctions fs = uniform_functions(g.node_count(), f);
  return Instance{std::move(g), f, std::move(fs), std::move(pairs)};
}

RunRecord run_cell(const Instance& inst, Method method, double T, double eps,
                   const ExperimentSpec& spec) {
  RunRecord rec;
  rec.algorithm = std::string(method_name(method));
  rec.function = spec.function_spec;
  rec.T = T;
  rec.epsilon = eps;
  const auto start = std::chrono::steady_clock::now();
  try {
    ListingConfig config;
    config.k = spec.k;
    config.threshold = T;
    config.epsilon = eps;
    config.max_rounds = spec.max_rounds;
    config.blocking_config.eps_sched = spec.eps_sched;
    SolveResult result;
    switch (method) {
      case Method::kIiTe:
      case Method::kIiJsg:
      case Method::kFiTe:
      case Method::kFiJsg: {
        const bool ii = method == Method::kIiTe || method == Method::kIiJsg;
        const bool te = method == Method::kIiTe || method == Method::kFiTe;
        config.blocking = te ? BlockingAlgorithm::kThresholdExpansion
                             : BlockingAlgorithm::kJumpStartGreedy;
        result = interdict(ii ? ListingAlgorithm::kIncremental : ListingAlgorithm::kFullSet,
                           inst.graph, inst.functions, inst.pairs, config);
        break;
      }
      case Method::kCut:
        result = cut_baseline(inst.graph, inst.functions, inst.pairs, config);
        break;
      case Method::kDiscrete:
        result = discrete_baseline(inst.graph, inst.functions, inst.pairs, config);
        break;
      case Method::kExact: {
        if (inst.graph.node_count() > ExactLimits{}.max_nodes) {
          rec.status = "skipped:oracle-precondition";
          return rec;
        }
        double x_max = 0.0;
        for (const WeightFunction& f : inst.functions) {
          x_max = std::max(x_max, x_cap(f, T, config.blocking_config.x_max));
        }
        x_max = std::ceil(x_max / spec.grid_step - 1e-9) * spec.grid_step;
        try {
          result.x = exact_tiny(inst.graph, inst.functions, inst.pairs, T, spec.grid_step,
                                x_max);
        } catch (const ContractError&) {
          rec.status = "skipped:oracle-precondition";
          return rec;
        }
        break;
      }
    }
    rec.x = result.x;
    rec.norm_x = result.x.norm();
    rec.queries = result.queries;
    rec.max_stored_paths = result.max_stored_paths;
    rec.rounds = result.rounds;
    rec.per_round_paths = result.per_round_paths;
    if (!is_eps_feasible(inst.graph, inst.functions, result.x, inst.pairs, T, eps)) {
      rec.status = "error:infeasible-result";
    }
  } catch (const std::exception& e) {
    rec.status = "error:" + sanitize(e.what());
  }
  rec.wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start)
          .count());
  return rec;
}

std::vector<RunRecord> run_experiment(const Instance& inst, const ExperimentSpec& spec) {
  std::vector<RunRecord> records;
  for (Method m : spec.algorithms) {
    for (double T : spec.T_grid) {
      for (double eps : spec.eps_grid) records.push_back(run_cell(inst, m, T, eps, spec));
    }
  }
  return records;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  return run_experiment(prepare_instance(spec), spec);
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void emit_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  for (const RunRecord& r : records) {
    out << r.algorithm << ',' << r.function << ',' << format_real(r.T) << ','
        << format_real(r.epsilon) << ',';
    if (r.ok()) {
      out << format_real(r.norm_x) << ',' << r.queries << ',' << r.max_stored_paths << ','
          << r.rounds;
    } else {
      out << r.status << ",,,";
    }
    out << ',' << r.wall_ms << '\n';
  }
}

void emit_rounds_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRoundsCsvHeader << '\n';
  for (const RunRecord& r : records) {
    if (!r.ok()) continue;
    for (std::size_t i = 0; i < r.per_round_paths.size(); ++i) {
      out << r.algorithm << ',' << r.function << ',' << format_real(r.T) << ','
          << format_real(r.epsilon) << ',' << (i + 1) << ',' << r.per_round_paths[i] << '\n';
    }
  }
}

std::filesystem::path rounds_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_filename(csv_path.stem().string() + ".rounds.csv");
  return p;
}

void write_csv_files(const std::filesystem::path& csv_path,
                     const std::vector<RunRecord>& records) {
  auto write = [](const std::filesystem::path& path, auto&& emit) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    emit(out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
  };
  write(csv_path, [&](std::ostream& o) { emit_csv(o, records); });
  write(rounds_path_for(csv_path), [&](std::ostream& o) { emit_rounds_csv(o, records); });
}

}  // namespace lpi
