#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdst/graph.hpp"

namespace mdst {

struct PartitionInstance {
  std::vector<long long> values;  // positive integers, at least two

  void validate() const;
  long long total() const;
};

struct PartitionReduction {
  FlowNetwork net;
  long long threshold = 0;  // floor(Q^2 / 2)
  int node_x = 0, node_a = 1, node_b = 2;
  std::vector<int> value_nodes;  // one per multiset element, in input order
};

/// Star-of-two-hubs gadget: an equal-sum partition exists iff the optimum
/// dissipation is at most the threshold.
PartitionReduction partition_to_mdst(const PartitionInstance& p);

/// Independent oracle: does a proper nonempty subset with half the total exist?
bool equal_sum_partition_exists(const PartitionInstance& p);

struct SetCoverInstance {
  int universe_size = 0;                     // elements 0..universe_size-1
  std::vector<std::vector<int>> subsets;

  void validate() const;
};

struct SetCoverReduction {
  FlowNetwork net;
  int node_y = 0, node_z = 1;
  // subset_node[l][i] / element_node[l][j]: copy l, subset i, element j.
  std::vector<std::vector<int>> subset_node;
  std::vector<std::vector<int>> element_node;
};

/// Two-source layered gadget with mu structural copies; pass-through subset
/// nodes of a low-cost tree mark a small cover.
SetCoverReduction setcover_to_mdst(const SetCoverInstance& sc);

/// Backward mapping: reads the cover off the copy with the fewest
/// pass-through (degree >= 2) subset nodes. Returns subset indices.
std::vector<int> cover_from_tree(const SetCoverReduction& red, const SpanningTree& tree);

/// Smallest cover size by exhaustive search over subcollections.
int optimal_cover_size(const SetCoverInstance& sc);

/// Newman-Watts-Strogatz benchmark instance: ring lattice of degree k plus
/// seeded random shortcuts (never rewired), integer injections in [-10, 10]
/// balanced at the root, integer dissipation constants in [1, 5].
FlowNetwork random_instance(int n, int k, double p, std::uint64_t seed);

std::string instance_to_json(const FlowNetwork& net, std::optional<long long> threshold = {});
FlowNetwork instance_from_json(const std::string& text,
                               std::optional<long long>* threshold = nullptr);
void save_instance(const FlowNetwork& net, const std::string& path,
                   std::optional<long long> threshold = {});
FlowNetwork load_instance(const std::string& path,
                          std::optional<long long>* threshold = nullptr);

}  // namespace mdst
