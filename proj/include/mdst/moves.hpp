#pragma once

#include <cstdint>
#include <vector>

#include "mdst/encoding.hpp"
#include "mdst/graph.hpp"

namespace mdst {

/// Local move replacing tree edge (u, head) by non-tree edge (u', head).
struct EdgeRotation {
  int edge_out = -1;  // in the tree, head at `head`
  int edge_in = -1;   // not in the tree, incident to `head`
  int head = -1;      // shared head, never the root

  bool operator==(const EdgeRotation&) const = default;
};

/// Reciprocal rotation pair realized by one controlled operation. The label
/// (the unordered edge-id pair) identifies the swap; for parallel edges two
/// distinct swap objects (one per head choice) share a label.
struct EdgeSwap {
  int edge_a = -1;  // canonical: edge_a < edge_b
  int edge_b = -1;
  int head = -1;

  bool operator==(const EdgeSwap&) const = default;
  auto operator<=>(const EdgeSwap&) const = default;
};

EdgeSwap make_swap(int e1, int e2, int head);

/// All swap objects of the network: unordered incident edge pairs with a
/// non-root shared head.
std::vector<EdgeSwap> enumerate_swaps(const FlowNetwork& net);

/// The rotation keeps a spanning tree iff the incoming tail is not downward
/// of the removed edge. Throws std::invalid_argument when the pair is not a
/// rotation candidate on this tree.
bool rotation_is_valid(const FlowNetwork& net, const SpanningTree& tree, const EdgeRotation& r);

std::vector<EdgeRotation> valid_rotations(const FlowNetwork& net, const SpanningTree& tree);

SpanningTree apply_rotation(const FlowNetwork& net, const SpanningTree& tree,
                            const EdgeRotation& r);

/// Oriented mismatch count |E_T \ E_T'|; an edge present in both trees with
/// opposite orientation counts as a mismatch.
int mismatch_count(const SpanningTree& t1, const SpanningTree& t2);

/// Constructive shortest reconfiguration: fixes one mismatched head per
/// step, always choosing the head closest to the root in the target tree,
/// so every intermediate rotation is valid. Length equals mismatch_count.
std::vector<EdgeRotation> reconfiguration_sequence(const FlowNetwork& net, const SpanningTree& from,
                                                   const SpanningTree& to);

struct TreeAdjacencyGraph {
  struct Transition {
    int a = 0;
    int b = 0;
    EdgeSwap swap;
  };
  std::vector<SpanningTree> trees;
  std::vector<TreeBitstring> bitstrings;
  std::vector<Transition> transitions;
  std::vector<std::vector<std::pair<int, int>>> adjacency;  // node -> (neighbor, transition)

  int num_trees() const { return static_cast<int>(trees.size()); }
  std::vector<int> bfs_distances(int start) const;
  bool is_connected() const;
  /// One line per transition: bitstring, bitstring, swap label.
  std::string to_edge_list() const;
};

TreeAdjacencyGraph build_tree_adjacency_graph(const FlowNetwork& net);

enum class MixerStrategy { Random, HamiltonianWalk, SpanningTree };

struct MixerOrder {
  std::vector<EdgeSwap> swaps;     // applied first-to-last
  bool hamiltonian_found = true;   // false when the walk fell back to a covering walk
};

/// Orders the swap applications of a full mixer. Random permutes all
/// distinct swap objects with a seeded shuffle; the walk strategy follows a
/// closed walk through every tree (exhaustive search, shortest covering
/// closed walk as fallback); the tree strategy follows a BFS tree ordered by
/// root distance. Walk and tree orders merge consecutive duplicate swaps.
MixerOrder build_mixer_order(const TreeAdjacencyGraph& g, MixerStrategy strategy,
                             std::uint64_t seed = 0, int start = 0);

}  // namespace mdst
