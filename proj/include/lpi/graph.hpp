#ifndef LPI_GRAPH_HPP
#define LPI_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace lpi {

using NodeId = std::uint32_t;

struct Arc {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Immutable directed graph in compressed adjacency form. Node ids are
// contiguous 0..n-1; the raw ids seen at ingestion are kept for output.
class Graph {
 public:
  Graph() = default;

  // Self-loops and duplicate arcs are dropped. `raw_ids`, when given, must
  // have one entry per node; otherwise node i reports raw id i.
  Graph(std::size_t node_count, std::vector<Arc> arcs,
        bool undirected_source = false,
        std::vector<std::uint64_t> raw_ids = {});

  std::size_t node_count() const { return raw_ids_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  bool undirected_source() const { return undirected_source_; }

  // Sorted by (from, to).
  const std::vector<Arc>& arcs() const { return arcs_; }

  // Ascending node id order.
  std::span<const NodeId> successors(NodeId v) const;
  std::span<const NodeId> predecessors(NodeId v) const;

  bool has_arc(NodeId from, NodeId to) const;

  // In-degree plus out-degree.
  std::size_t degree(NodeId v) const;

  std::uint64_t raw_id(NodeId v) const { return raw_ids_.at(v); }
  std::optional<NodeId> find_raw(std::uint64_t raw) const;

  bool contains(NodeId v) const { return v < node_count(); }

 private:
  std::vector<std::uint64_t> raw_ids_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  bool undirected_source_ = false;
};

// A node sequence. Ordered lexicographically, which is also the tie-break
// order between paths of equal length.
struct Path {
  std::vector<NodeId> nodes;

  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
  bool contains(NodeId v) const;

  friend auto operator<=>(const Path&, const Path&) = default;
};

// Consecutive nodes joined by arcs and no repeated node.
bool is_simple_path(const Graph& g, const Path& p);

struct NodePair {
  NodeId source = 0;
  NodeId sink = 0;

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

// Source/sink pairs whose distance must be pushed to the threshold.
class TargetPairs {
 public:
  TargetPairs() = default;
  // Throws std::invalid_argument on a pair with source == sink or an id
  // outside [0, node_count).
  TargetPairs(std::vector<NodePair> pairs, std::size_t node_count);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const NodePair& operator[](std::size_t i) const { return pairs_[i]; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

 private:
  std::vector<NodePair> pairs_;
};

// Reads a whitespace-separated "u v" edge list; '#' lines are comments.
// Raw ids are remapped to 0..n-1 in ascending raw order. With
// `treat_as_undirected` each edge yields two opposite arcs.
// Throws ParseError (with line number) on malformed lines and on input
// without any edge.
Graph load_edge_list(std::istream& in, bool treat_as_undirected);
Graph load_edge_list(const std::filesystem::path& file, bool treat_as_undirected);

// Writes arcs as "raw_u raw_v" lines. Undirected-source graphs emit each
// edge once (u < v by raw id).
void write_edge_list(std::ostream& out, const Graph& g);

// min over s->t paths of min(sum of node weights on the path, cap). Both
// endpoints count. Returns `cap` when t is unreachable.
double node_weighted_distance(const Graph& g, std::span<const double> weights,
                              NodeId s, NodeId t, double cap);

// Uncapped sum of weights along p, accumulated from the first node.
double path_weight(const Path& p, std::span<const double> weights);

struct KShortestOptions {
  // Enumeration stops once the next path would have uncapped length
  // >= stop_at. Such paths are never returned.
  double stop_at = std::numeric_limits<double>::infinity();
};

// Up to k loopless s->t paths (Yen) in nondecreasing length order, ties
// broken by lexicographic node sequence. Paths whose length reaches `cap`
// may be included.
std::vector<Path> k_shortest_paths(const Graph& g,
                                   std::span<const double> weights, NodeId s,
                                   NodeId t, std::size_t k, double cap,
                                   const KShortestOptions& options = {});

}  // namespace lpi

#endif  // LPI_GRAPH_HPP
