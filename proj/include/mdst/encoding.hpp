#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mdst/graph.hpp"

namespace mdst {

/// Binary configuration vector over the y variables, one bit per
/// (edge, non-root node) pair. Rendered with bit j = 0 leftmost, so the
/// ASCII form reads as a binary number.
struct TreeBitstring {
  std::vector<std::uint8_t> bits;

  int size() const { return static_cast<int>(bits.size()); }
  std::uint8_t operator[](int j) const { return bits[j]; }

  std::string to_string() const;
  static TreeBitstring from_string(const std::string& s);

  /// Index into a statevector / diagonal-energy table; requires size <= 63.
  std::uint64_t to_index() const;
  static TreeBitstring from_index(std::uint64_t idx, int length);

  bool operator==(const TreeBitstring&) const = default;
};

/// Rank of a non-root node in 1..|V|-1, assigned by ascending node id with
/// the root removed. Inverse of rank_to_node.
int node_rank(const FlowNetwork& net, int node);
int rank_to_node(const FlowNetwork& net, int rank);

/// j = e * (|V|-1) + (n - 1) for non-root node rank n.
int flatten_index(int e, int rank, int num_nodes);
int num_variables(const FlowNetwork& net);

TreeBitstring encode(const FlowNetwork& net, const SpanningTree& tree);

enum class InfeasibleReason { WrongEdgeCount, Cycle, Disconnected, InconsistentDownward };

const char* to_string(InfeasibleReason r);

struct DecodeResult {
  std::optional<SpanningTree> tree;
  std::optional<InfeasibleReason> reason;
  bool feasible() const { return tree.has_value(); }
};

/// Inverse of encode; reports a structured infeasibility reason instead of a
/// bare boolean. Throws std::invalid_argument on a length mismatch.
DecodeResult decode(const TreeBitstring& y, const FlowNetwork& net);

/// Signed flow on an active tree edge: the sum of injections downward of it.
/// Positive values flow away from the root.
double edge_flow(const FlowNetwork& net, const SpanningTree& tree, int e);

/// Tree-dependent incidence matrix computed from the bitstring alone:
/// zero columns for inactive edges, natural orientation for active ones.
/// Throws std::invalid_argument on infeasible input.
IncidenceMatrix tree_incidence(const FlowNetwork& net, const TreeBitstring& y,
                               const IncidenceMatrix& base);

/// Feasibility of every length-m configuration, indexed like to_index().
/// Requires m <= 22 (memory guard).
std::vector<std::uint8_t> feasible_mask(const FlowNetwork& net);

}  // namespace mdst
