#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdst/common.hpp"

namespace mdst {

struct Edge {
  int id = 0;
  int a = 0;
  int b = 0;

  int other(int n) const { return n == a ? b : a; }
  bool incident(int n) const { return n == a || n == b; }
};

/// Undirected multigraph with a root node, nodal injections and per-edge
/// dissipation constants. Parallel edges are allowed and distinguished by
/// edge id; self-loops are rejected. Immutable after construction by
/// convention: every operation below is a pure function.
struct FlowNetwork {
  int num_nodes = 0;
  int root = 0;
  std::vector<Edge> edges;          // edge id == position
  std::vector<double> injection;    // per node, sums to zero
  std::vector<double> alpha;        // per edge, >= 0
  std::vector<double> resistance;   // per edge; used by grid instances
  std::vector<std::uint8_t> switchable;  // per edge; all true for plain MDST

  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Throws ValidationError on the first violated invariant.
  void validate() const;
  bool is_connected() const;
  bool injections_integral() const;

  std::vector<int> edges_at(int node) const;
  int degree(int node) const;
};

/// Convenience builder; per-edge resistance defaults to 0 and switchable to
/// true. Injections may be omitted (all zero).
FlowNetwork make_network(int num_nodes, int root,
                         const std::vector<std::pair<int, int>>& edge_list,
                         std::vector<double> injection = {},
                         std::vector<double> alpha = {});

/// Direction assignment: one (tail, head) choice per edge.
struct Orientation {
  // false: tail = edges[e].a, head = edges[e].b; true: reversed.
  std::vector<std::uint8_t> reversed;

  int head(const FlowNetwork& net, int e) const {
    return reversed[e] ? net.edges[e].a : net.edges[e].b;
  }
  int tail(const FlowNetwork& net, int e) const {
    return reversed[e] ? net.edges[e].b : net.edges[e].a;
  }
};

/// Orientation with every edge pointing from its lower to its higher node id.
Orientation orient_low_to_high(const FlowNetwork& net);

/// Dense |V| x |E| matrix over {-1, 0, +1}: +1 at the head of each edge,
/// -1 at the tail.
struct IncidenceMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int8_t> m;  // row-major

  int at(int node, int e) const { return m[static_cast<std::size_t>(node) * cols + e]; }
  std::int8_t& at(int node, int e) { return m[static_cast<std::size_t>(node) * cols + e]; }
};

IncidenceMatrix incidence_matrix(const FlowNetwork& net, const Orientation& orient);

/// Rooted spanning tree in its natural orientation (edges point away from
/// the root). Downward sets are stored as node bitmasks, which caps the
/// desk-scale node count at 64.
struct SpanningTree {
  int root = 0;
  std::vector<int> edge_ids;       // sorted ascending
  std::vector<int> parent_node;    // per node; -1 at the root
  std::vector<int> parent_edge;    // per node; -1 at the root
  std::vector<std::uint64_t> downward;  // per edge id; 0 for inactive edges
  std::vector<int> depth;          // per node; root at 0

  bool contains_edge(int e) const { return downward[e] != 0; }
  /// Head (child endpoint) of an active edge, -1 if inactive.
  int parent_edge_head(int e) const;
  bool node_downward_of(int node, int e) const {
    return (downward[e] >> node) & 1u;
  }
};

/// Builds the rooted tree for an edge-id set; throws std::invalid_argument
/// if the set is not a spanning tree of net.
SpanningTree make_spanning_tree(const FlowNetwork& net, std::vector<int> edge_ids);

/// The unique cycle formed by a non-tree edge together with the tree path
/// between its endpoints. The returned list starts with e.
std::vector<int> fundamental_cycle(const FlowNetwork& net, const SpanningTree& tree, int e);

/// Exhaustive enumeration of all spanning trees rooted at net.root, in
/// lexicographic order of their sorted edge-id sets. Desk scale only.
std::vector<SpanningTree> enumerate_spanning_trees(const FlowNetwork& net);

/// Number of spanning trees via the determinant of the grounded node
/// Laplacian, evaluated in exact integer arithmetic (fraction-free
/// elimination). Returns 0 for disconnected graphs.
std::uint64_t spanning_tree_count(const FlowNetwork& net);

}  // namespace mdst
