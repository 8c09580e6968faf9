#include "lpi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "lpi/error.hpp"

namespace lpi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(const Graph& g, std::span<const double> weights) {
  if (weights.size() != g.node_count()) {
    throw std::invalid_argument("weight vector size does not match node count");
  }
}

void check_node(const Graph& g, NodeId v) {
  if (!g.contains(v)) {
    throw std::invalid_argument("node id " + std::to_string(v) + " out of range");
  }
}

}  // namespace

Graph::Graph(std::size_t node_count, std::vector<Arc> arcs,
             bool undirected_source, std::vector<std::uint64_t> raw_ids)
    : raw_ids_(std::move(raw_ids)), undirected_source_(undirected_source) {
  if (raw_ids_.empty()) {
    raw_ids_.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) raw_ids_[i] = i;
  } else if (raw_ids_.size() != node_count) {
    throw std::invalid_argument("raw id table size does not match node count");
  }
  std::erase_if(arcs, [](const Arc& a) { return a.from == a.to; });
  for (const Arc& a : arcs) {
    if (a.from >= node_count || a.to >= node_count) {
      throw std::invalid_argument("arc endpoint out of range");
    }
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  arcs_ = std::move(arcs);

  out_offsets_.assign(node_count + 1, 0);
  in_offsets_.assign(node_count + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_offsets_[a.from + 1];
    ++in_offsets_[a.to + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    out_offsets_[i + 1] += out_offsets_[i];
    in_offsets_[i + 1] += in_offsets_[i];
  }
  out_targets_.resize(arcs_.size());
  in_sources_.resize(arcs_.size());
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    // arcs_ is sorted by (from, to), so successor lists come out sorted.
    out_targets_[i] = arcs_[i].to;
    in_sources_[in_fill[arcs_[i].to]++] = arcs_[i].from;
  }
}

std::span<const NodeId> Graph::successors(NodeId v) const {
  return {out_targets_.data() + out_offsets_[v],
          out_offsets_[v + 1] - out_offsets_[v]};
}

std::span<const NodeId> Graph::predecessors(NodeId v) const {
  return {in_sources_.data() + in_offsets_[v],
          in_offsets_[v + 1] - in_offsets_[v]};
}

bool Graph::has_arc(NodeId from, NodeId to) const {
  if (!contains(from) || !contains(to)) return false;
  auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::size_t Graph::degree(NodeId v) const {
  return successors(v).size() + predecessors(v).size();
}

std::optional<NodeId> Graph::find_raw(std::uint64_t raw) const {
  // raw_ids_ is ascending for graphs produced by load_edge_list.
  if (std::is_sorted(raw_ids_.begin(), raw_ids_.end())) {
    auto it = std::lower_bound(raw_ids_.begin(), raw_ids_.end(), raw);
    if (it != raw_ids_.end() && *it == raw) {
      return static_cast<NodeId>(it - raw_ids_.begin());
    }
    return std::nullopt;
  }
  auto it = std::find(raw_ids_.begin(), raw_ids_.end(), raw);
  if (it == raw_ids_.end()) return std::nullopt;
  return static_cast<NodeId>(it - raw_ids_.begin());
}

bool Path::contains(NodeId v) const {
  return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool is_simple_path(const Graph& g, const Path& p) {
  if (p.empty()) return false;
  std::vector<NodeId> sorted = p.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  if (!g.contains(sorted.back())) return false;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!g.has_arc(p.nodes[i - 1], p.nodes[i])) return false;
  }
  return true;
}

TargetPairs::TargetPairs(std::vector<NodePair> pairs, std::size_t node_count)
    : pairs_(std::move(pairs)) {
  for (const NodePair& pr : pairs_) {
    if (pr.source >= node_count || pr.sink >= node_count) {
      throw std::invalid_argument("target pair references a node out of range");
    }
    if (pr.source == pr.sink) {
      throw std::invalid_argument("target pair has identical source and sink");
    }
  }
}

Graph load_edge_list(std::istream& in, bool treat_as_undirected) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError("expected two integer node ids", line_no);
    }
    auto parse_id = [&](const std::string& tok) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("invalid node id '" + tok + "'", line_no);
      }
      try {
        return static_cast<std::uint64_t>(std::stoull(tok));
      } catch (const std::out_of_range&) {
        throw ParseError("node id '" + tok + "' out of range", line_no);
      }
    };
    edges.emplace_back(parse_id(a), parse_id(b));
  }
  if (edges.empty()) throw ParseError("edge list contains no edges", 0);

  std::vector<std::uint64_t> raw;
  raw.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    raw.push_back(u);
    raw.push_back(v);
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  auto index_of = [&](std::uint64_t r) {
    return static_cast<NodeId>(std::lower_bound(raw.begin(), raw.end(), r) -
                               raw.begin());
  };

  std::vector<Arc> arcs;
  arcs.reserve(edges.size() * (treat_as_undirected ? 2 : 1));
  for (auto [u, v] : edges) {
    NodeId a = index_of(u), b = index_of(v);
    arcs.push_back({a, b});
    if (treat_as_undirected) arcs.push_back({b, a});
  }
  std::size_t n = raw.size();
  return Graph(n, std::move(arcs), treat_as_undirected, std::move(raw));
}

Graph load_edge_list(const std::filesystem::path& file, bool treat_as_undirected) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open edge list " + file.string());
  return load_edge_list(in, treat_as_undirected);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Arc& a : g.arcs()) {
    std::uint64_t u = g.raw_id(a.from), v = g.raw_id(a.to);
    if (g.undirected_source() && u > v && g.has_arc(a.to, a.from)) continue;
    out << u << ' ' << v << '\n';
  }
}

double path_weight(const Path& p, std::span<const double> weights) {
  double sum = 0.0;
  for (NodeId v : p.nodes) sum += weights[v];
  return sum;
}

double node_weighted_distance(const Graph& g, std::span<const double> weights,
                              NodeId s, NodeId t, double cap) {
  check_weights(g, weights);
  check_node(g, s);
  check_node(g, t);
  std::vector<double> dist(g.node_count(), kInf);
  using Label = std::pair<double, NodeId>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  dist[s] = weights[s];
  heap.push({dist[s], s});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (d >= cap) return cap;
    if (u == t) return d;
    for (NodeId v : g.successors(u)) {
      double nd = d + weights[v];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return cap;
}

namespace {

// Searches for the best spur path (length, then lexicographic order) inside
// the graph minus `blocked` nodes and `blocked_arcs`.
class SpurSearch {
 public:
  SpurSearch(const Graph& g, std::span<const double> weights, NodeId t)
      : g_(g), w_(weights), t_(t), to_target_(g.node_count()),
        blocked_(g.node_count(), 0), visited_(g.node_count(), 0) {}

  void block(NodeId v) { blocked_[v] = 1; }
  void unblock(NodeId v) { blocked_[v] = 0; }
  void block_arc(Arc a) { blocked_arcs_.insert(a); }
  void clear_arcs() { blocked_arcs_.clear(); }

  // Best from->t path, or nullopt. Labels above `bound` are not expanded.
  std::optional<std::vector<NodeId>> best_from(NodeId from, double bound) {
    if (blocked_[from] || blocked_[t_]) return std::nullopt;
    distances_to_target(bound);
    if (to_target_[from] == kInf) return std::nullopt;
    auto path = greedy_walk(from, /*check_reachability=*/false);
    if (!path) path = greedy_walk(from, /*check_reachability=*/true);
    return path;
  }

 private:
  bool arc_open(NodeId u, NodeId v) const {
    return !blocked_[v] && !blocked_arcs_.contains(Arc{u, v});
  }

  // Reverse label setting: to_target_[u] = w[u] + min over open successors.
  void distances_to_target(double bound) {
    std::fill(to_target_.begin(), to_target_.end(), kInf);
    using Label = std::pair<double, NodeId>;
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    to_target_[t_] = w_[t_];
    heap.push({to_target_[t_], t_});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > to_target_[v]) continue;
      for (NodeId u : g_.predecessors(v)) {
        if (blocked_[u] || !arc_open(u, v)) continue;
        double nd = w_[u] + d;
        if (nd > bound) continue;
        if (nd < to_target_[u]) {
          to_target_[u] = nd;
          heap.push({nd, u});
        }
      }
    }
  }

  bool tight(NodeId u, NodeId v) const {
    double du = to_target_[u];
    double via = w_[u] + to_target_[v];
    return std::abs(du - via) <= 1e-12 * std::max(1.0, std::abs(du));
  }

  // True if t is reachable from `from` over tight open arcs avoiding
  // visited nodes.
  bool reaches_target(NodeId from) {
    std::vector<NodeId> stack{from};
    std::vector<char> seen(g_.node_count(), 0);
    seen[from] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      if (u == t_) return true;
      for (NodeId v : g_.successors(u)) {
        if (seen[v] || visited_[v] || !arc_open(u, v) ||
            to_target_[v] == kInf || !tight(u, v)) {
          continue;
        }
        seen[v] = 1;
        stack.push_back(v);
      }
    }
    return false;
  }

  // Follows tight arcs taking the smallest admissible successor, which
  // yields the lexicographically smallest shortest path. Zero weights can
  // make tight arcs cyclic; the checked variant then only steps to nodes
  // from which t stays reachable.
  std::optional<std::vector<NodeId>> greedy_walk(NodeId from,
                                                 bool check_reachability) {
    std::vector<NodeId> path{from};
    std::fill(visited_.begin(), visited_.end(), 0);
    visited_[from] = 1;
    NodeId cur = from;
    std::optional<std::vector<NodeId>> result;
    while (cur != t_) {
      std::optional<NodeId> next;
      for (NodeId v : g_.successors(cur)) {
        if (visited_[v] || !arc_open(cur, v) || to_target_[v] == kInf ||
            !tight(cur, v)) {
          continue;
        }
        if (check_reachability && !reaches_target(v)) continue;
        next = v;
        break;
      }
      if (!next) break;
      cur = *next;
      visited_[cur] = 1;
      path.push_back(cur);
    }
    if (cur == t_) result = std::move(path);
    return result;
  }

  const Graph& g_;
  std::span<const double> w_;
  NodeId t_;
  std::vector<double> to_target_;
  std::vector<char> blocked_;
  std::vector<char> visited_;
  std::set<Arc> blocked_arcs_;
};

}  // namespace

std::vector<Path> k_shortest_paths(const Graph& g,
                                   std::span<const double> weights, NodeId s,
                                   NodeId t, std::size_t k, double cap,
                                   const KShortestOptions& options) {
  check_weights(g, weights);
  check_node(g, s);
  check_node(g, t);
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  (void)cap;  // ordering by uncapped length is also nondecreasing when capped

  std::vector<Path> accepted;
  if (s == t) return accepted;
  const double stop_at = options.stop_at;
  // Labels beyond this can never complete a path shorter than stop_at.
  const double bound = stop_at == kInf ? kInf : stop_at * (1.0 + 1e-9) + 1e-12;

  SpurSearch search(g, weights, t);
  auto first = search.best_from(s, bound);
  if (!first) return accepted;
  {
    Path p{std::move(*first)};
    if (path_weight(p, weights) >= stop_at) return accepted;
    accepted.push_back(std::move(p));
  }

  std::set<std::pair<double, Path>> candidates;
  std::set<Path> seen{accepted.front()};
  while (accepted.size() < k) {
    const Path& last = accepted.back();
    double root_weight = 0.0;
    for (std::size_t j = 0; j + 1 < last.size(); ++j) {
      NodeId spur = last.nodes[j];
      search.clear_arcs();
      for (const Path& a : accepted) {
        if (a.size() > j + 1 &&
            std::equal(a.nodes.begin(), a.nodes.begin() + j + 1,
                       last.nodes.begin())) {
          search.block_arc({a.nodes[j], a.nodes[j + 1]});
        }
      }
      for (std::size_t r = 0; r < j; ++r) search.block(last.nodes[r]);
      auto spur_path = search.best_from(spur, bound - root_weight);
      for (std::size_t r = 0; r < j; ++r) search.unblock(last.nodes[r]);
      root_weight += weights[spur];
      if (!spur_path) continue;

      Path total;
      total.nodes.assign(last.nodes.begin(), last.nodes.begin() + j);
      total.nodes.insert(total.nodes.end(), spur_path->begin(), spur_path->end());
      if (seen.contains(total)) continue;
      double len = path_weight(total, weights);
      if (len >= stop_at) continue;
      seen.insert(total);
      candidates.emplace(len, std::move(total));
    }
    if (candidates.empty()) break;
    auto best = candidates.begin();
    accepted.push_back(best->second);
    candidates.erase(best);
  }
  return accepted;
}

}  // namespace lpi
