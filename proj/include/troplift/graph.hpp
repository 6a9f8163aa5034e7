#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace troplift {

struct EdgeSpec {
  std::string id;
  std::string tail;
  std::string head;
};

/// Loopless multigraph with opaque string ids. Vertices and edges are stored
/// in lexicographic id order, so indices are deterministic.
class Multigraph {
 public:
  struct Edge {
    std::string id;
    std::size_t tail;
    std::size_t head;
  };

  Multigraph() = default;
  /// Throws Error(Malformed) on duplicate ids or unknown endpoints. Loops and
  /// disconnectedness are accepted here and reported by validate().
  Multigraph(std::vector<std::string> vertices, std::vector<EdgeSpec> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_id(std::size_t v) const { return vertices_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertex_ids() const { return vertices_; }

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  std::size_t vertex_index(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;

  /// Edges incident on v, in edge-index order.
  const std::vector<std::size_t>& incident(std::size_t v) const { return incident_.at(v); }

  /// +1 if v is the tail of e, -1 if it is the head.
  int sigma(std::size_t e, std::size_t v) const;
  std::size_t other_end(std::size_t e, std::size_t v) const;

  std::vector<EdgeSpec> edge_specs() const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// Positive integer edge lengths, indexed by edge index.
class ChainStructure {
 public:
  ChainStructure() = default;
  explicit ChainStructure(std::vector<long> lengths);

  static ChainStructure unit(const Multigraph& g) {
    return ChainStructure(std::vector<long>(g.edge_count(), 1));
  }

  long operator[](std::size_t e) const { return lengths_.at(e); }
  std::size_t size() const { return lengths_.size(); }
  const std::vector<long>& lengths() const { return lengths_; }

  ChainStructure scaled(long m) const;

  friend bool operator==(const ChainStructure&, const ChainStructure&) = default;

 private:
  std::vector<long> lengths_;
};

/// A multigraph together with its chain structure; this is the data that
/// determines the metric graph.
struct MetricGraph {
  Multigraph graph;
  ChainStructure chain;

  MetricGraph() = default;
  MetricGraph(Multigraph g, ChainStructure n);
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Looplessness, connectivity, and the shared-tail convention (all edges
/// over one edge of the contracted graph have the same tail).
ValidationReport validate(const Multigraph& g);

/// Flips edges so every edge's tail is its lexicographically smaller endpoint.
/// Returns the flipped edge indices alongside the new graph.
std::pair<Multigraph, std::vector<std::size_t>> reorient(const Multigraph& g);

/// The graph obtained by merging all parallel edges.
class ContractedTree {
 public:
  struct TreeEdge {
    std::size_t a;  // a < b
    std::size_t b;
    std::vector<std::size_t> fiber;  // edges of G lying over this edge
  };

  const std::vector<TreeEdge>& edges() const { return edges_; }
  const TreeEdge& edge(std::size_t t) const { return edges_.at(t); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return adjacency_.size(); }

  /// Image of an edge of G.
  std::size_t image(std::size_t e) const { return image_.at(e); }
  std::optional<std::size_t> between(std::size_t u, std::size_t v) const;
  /// Tree edges incident on v.
  const std::vector<std::size_t>& incident(std::size_t v) const { return adjacency_.at(v); }
  std::size_t other_end(std::size_t t, std::size_t v) const;

  bool is_multitree() const { return multitree_; }
  bool is_chain() const { return chain_; }

  /// Vertices on v's side after deleting tree edge t (requires a multitree).
  std::vector<bool> side(std::size_t t, std::size_t v) const;

  /// "u~v" with the vertex ids in index order.
  std::string name(const Multigraph& g, std::size_t t) const;

  /// The contracted graph as a multigraph in its own right.
  Multigraph as_multigraph(const Multigraph& g) const;

 private:
  friend ContractedTree contract(const Multigraph& g);

  std::vector<TreeEdge> edges_;
  std::vector<std::size_t> image_;
  std::vector<std::vector<std::size_t>> adjacency_;
  bool multitree_ = false;
  bool chain_ = false;
};

ContractedTree contract(const Multigraph& g);

/// The subdivision G~: every edge e of G is replaced by a path of n(e) unit
/// edges. Vertex indices 0..|V(G)|-1 are the original vertices.
class SubdividedGraph {
 public:
  explicit SubdividedGraph(const MetricGraph& mg);

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t original_vertex_count() const { return original_; }

  const std::string& vertex_name(std::size_t v) const { return names_.at(v); }
  std::optional<std::size_t> find_vertex(std::string_view name) const;

  /// Interior vertices of e, ordered from tail to head.
  const std::vector<std::size_t>& interior(std::size_t e) const { return interior_.at(e); }
  /// The vertex of G~ at integer distance k from the tail of e (0 <= k <= n(e)).
  std::size_t point_on_edge(std::size_t e, long k) const;
  /// Neighbour of original vertex v along edge e of G.
  std::size_t step_from(std::size_t e, std::size_t v) const;

  /// Neighbours with multiplicity (one entry per unit edge).
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return adjacency_.at(v); }
  std::size_t valence(std::size_t v) const { return adjacency_.at(v).size(); }

  /// For an interior vertex: (edge of G, distance from tail). Empty for originals.
  std::optional<std::pair<std::size_t, long>> location(std::size_t v) const;

  const MetricGraph& metric() const { return metric_; }

 private:
  MetricGraph metric_;
  std::size_t original_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> interior_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::optional<std::pair<std::size_t, long>>> location_;
};

inline SubdividedGraph subdivide(const MetricGraph& mg) { return SubdividedGraph(mg); }

/// First Betti number |E| - |V| + 1 of a connected graph.
long genus(const Multigraph& g);
long genus(const SubdividedGraph& g);

}  // namespace troplift
