#include "mdst/encoding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mdst {

std::string TreeBitstring::to_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j]) s[j] = '1';
  return s;
}

TreeBitstring TreeBitstring::from_string(const std::string& s) {
  TreeBitstring y;
  y.bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ValidationError("bitstring: characters must be '0' or '1'");
    y.bits.push_back(c == '1');
  }
  return y;
}

std::uint64_t TreeBitstring::to_index() const {
  if (bits.size() > 63) throw std::invalid_argument("bitstring: too long for an index");
  std::uint64_t idx = 0;
  for (std::uint8_t b : bits) idx = (idx << 1) | b;
  return idx;
}

TreeBitstring TreeBitstring::from_index(std::uint64_t idx, int length) {
  TreeBitstring y;
  y.bits.resize(length);
  for (int j = 0; j < length; ++j) y.bits[j] = (idx >> (length - 1 - j)) & 1u;
  return y;
}

int node_rank(const FlowNetwork& net, int node) {
  if (node == net.root) throw std::invalid_argument("node_rank: the root has no variable");
  return node < net.root ? node + 1 : node;
}

int rank_to_node(const FlowNetwork& net, int rank) {
  int node = rank <= net.root ? rank - 1 : rank;
  return node;
}

int flatten_index(int e, int rank, int num_nodes) {
  if (rank < 1 || rank > num_nodes - 1)
    throw std::invalid_argument("flatten_index: node rank out of range");
  return e * (num_nodes - 1) + (rank - 1);
}

int num_variables(const FlowNetwork& net) { return net.num_edges() * (net.num_nodes - 1); }

TreeBitstring encode(const FlowNetwork& net, const SpanningTree& tree) {
  TreeBitstring y;
  y.bits.assign(num_variables(net), 0);
  for (int e : tree.edge_ids) {
    std::uint64_t down = tree.downward[e];
    for (int n = 0; n < net.num_nodes; ++n)
      if ((down >> n) & 1u)
        y.bits[flatten_index(e, node_rank(net, n), net.num_nodes)] = 1;
  }
  return y;
}

const char* to_string(InfeasibleReason r) {
  switch (r) {
    case InfeasibleReason::WrongEdgeCount: return "wrong edge count";
    case InfeasibleReason::Cycle: return "cycle";
    case InfeasibleReason::Disconnected: return "disconnected";
    case InfeasibleReason::InconsistentDownward: return "inconsistent downward sets";
  }
  return "?";
}

DecodeResult decode(const TreeBitstring& y, const FlowNetwork& net) {
  if (y.size() != num_variables(net))
    throw std::invalid_argument("decode: bitstring length mismatch");

  std::vector<int> active;
  for (int e = 0; e < net.num_edges(); ++e) {
    bool any = false;
    for (int r = 1; r < net.num_nodes; ++r)
      any = any || y[flatten_index(e, r, net.num_nodes)];
    if (any) active.push_back(e);
  }
  if (static_cast<int>(active.size()) != net.num_nodes - 1)
    return {std::nullopt, InfeasibleReason::WrongEdgeCount};

  // |V|-1 edges form a spanning tree iff they are acyclic iff they connect.
  {
    std::vector<int> parent(net.num_nodes);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int e : active) {
      int ra = find(net.edges[e].a), rb = find(net.edges[e].b);
      if (ra == rb) return {std::nullopt, InfeasibleReason::Cycle};
      parent[ra] = rb;
    }
    int r0 = find(net.root);
    for (int n = 0; n < net.num_nodes; ++n)
      if (find(n) != r0) return {std::nullopt, InfeasibleReason::Disconnected};
  }

  SpanningTree tree = make_spanning_tree(net, active);
  if (encode(net, tree) != y) return {std::nullopt, InfeasibleReason::InconsistentDownward};
  return {std::move(tree), std::nullopt};
}

double edge_flow(const FlowNetwork& net, const SpanningTree& tree, int e) {
  if (!tree.contains_edge(e))
    throw std::invalid_argument("edge_flow: flow is only defined on active edges");
  double f = 0.0;
  std::uint64_t down = tree.downward[e];
  for (int n = 0; n < net.num_nodes; ++n)
    if ((down >> n) & 1u) f += net.injection[n];
  return f;
}

IncidenceMatrix tree_incidence(const FlowNetwork& net, const TreeBitstring& y,
                               const IncidenceMatrix& base) {
  DecodeResult d = decode(y, net);
  if (!d.feasible())
    throw std::invalid_argument(std::string("tree_incidence: infeasible bitstring (") +
                                to_string(*d.reason) + ")");
  auto yvar = [&](int e, int n) -> int {
    if (n == net.root) return 0;
    return y[flatten_index(e, node_rank(net, n), net.num_nodes)];
  };
  IncidenceMatrix out;
  out.rows = base.rows;
  out.cols = base.cols;
  out.m.assign(base.m.size(), 0);
  for (int e = 0; e < net.num_edges(); ++e) {
    for (int n : {net.edges[e].a, net.edges[e].b}) {
      int other = net.edges[e].other(n);
      int inner = base.at(n, e) * yvar(e, n);
      if (other != net.root) inner += base.at(other, e) * yvar(e, other);
      out.at(n, e) = static_cast<std::int8_t>(base.at(n, e) * inner);
    }
  }
  return out;
}

std::vector<std::uint8_t> feasible_mask(const FlowNetwork& net) {
  int m = num_variables(net);
  if (m > 22) throw ValidationError("feasible_mask: variable count exceeds the qubit cap");
  std::vector<std::uint8_t> mask(std::uint64_t{1} << m, 0);
  for (const SpanningTree& t : enumerate_spanning_trees(net))
    mask[encode(net, t).to_index()] = 1;
  return mask;
}

}  // namespace mdst
