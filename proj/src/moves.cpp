#include "mdst/moves.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdst {

EdgeSwap make_swap(int e1, int e2, int head) {
  if (e1 == e2) throw std::invalid_argument("edge swap: edges must differ");
  return {std::min(e1, e2), std::max(e1, e2), head};
}

std::vector<EdgeSwap> enumerate_swaps(const FlowNetwork& net) {
  std::set<EdgeSwap> out;
  for (int v = 0; v < net.num_nodes; ++v) {
    if (v == net.root) continue;
    std::vector<int> inc = net.edges_at(v);
    for (std::size_t i = 0; i < inc.size(); ++i)
      for (std::size_t j = i + 1; j < inc.size(); ++j)
        out.insert(make_swap(inc[i], inc[j], v));
  }
  return {out.begin(), out.end()};
}

bool rotation_is_valid(const FlowNetwork& net, const SpanningTree& tree, const EdgeRotation& r) {
  if (r.head == tree.root) throw std::invalid_argument("rotation: head cannot be the root");
  if (!net.edges[r.edge_out].incident(r.head) || !net.edges[r.edge_in].incident(r.head))
    throw std::invalid_argument("rotation: edges must share the head");
  if (tree.parent_edge[r.head] != r.edge_out)
    throw std::invalid_argument("rotation: removed edge is not the head's tree edge");
  if (tree.contains_edge(r.edge_in))
    throw std::invalid_argument("rotation: incoming edge is already in the tree");
  int tail_in = net.edges[r.edge_in].other(r.head);
  return !tree.node_downward_of(tail_in, r.edge_out);
}

std::vector<EdgeRotation> valid_rotations(const FlowNetwork& net, const SpanningTree& tree) {
  std::vector<EdgeRotation> out;
  for (int e = 0; e < net.num_edges(); ++e) {
    if (tree.contains_edge(e)) continue;
    for (int head : {net.edges[e].a, net.edges[e].b}) {
      if (head == tree.root) continue;
      EdgeRotation r{tree.parent_edge[head], e, head};
      if (rotation_is_valid(net, tree, r)) out.push_back(r);
    }
  }
  return out;
}

SpanningTree apply_rotation(const FlowNetwork& net, const SpanningTree& tree,
                            const EdgeRotation& r) {
  if (!rotation_is_valid(net, tree, r)) throw std::invalid_argument("rotation: not valid");
  std::vector<int> edges = tree.edge_ids;
  edges.erase(std::find(edges.begin(), edges.end(), r.edge_out));
  edges.push_back(r.edge_in);
  return make_spanning_tree(net, std::move(edges));
}

int mismatch_count(const SpanningTree& t1, const SpanningTree& t2) {
  int count = 0;
  for (std::size_t n = 0; n < t1.parent_edge.size(); ++n)
    if (t1.parent_edge[n] != t2.parent_edge[n]) ++count;
  return count;
}

std::vector<EdgeRotation> reconfiguration_sequence(const FlowNetwork& net,
                                                   const SpanningTree& from,
                                                   const SpanningTree& to) {
  SpanningTree cur = from;
  std::vector<EdgeRotation> seq;
  while (true) {
    int pick = -1;
    for (int n = 0; n < net.num_nodes; ++n) {
      if (n == net.root || cur.parent_edge[n] == to.parent_edge[n]) continue;
      if (pick < 0 || to.depth[n] < to.depth[pick]) pick = n;
    }
    if (pick < 0) break;
    EdgeRotation r{cur.parent_edge[pick], to.parent_edge[pick], pick};
    seq.push_back(r);
    cur = apply_rotation(net, cur, r);
  }
  return seq;
}

std::vector<int> TreeAdjacencyGraph::bfs_distances(int start) const {
  std::vector<int> dist(trees.size(), -1);
  std::queue<int> q;
  q.push(start);
  dist[start] = 0;
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    for (auto [o, t] : adjacency[n])
      if (dist[o] < 0) {
        dist[o] = dist[n] + 1;
        q.push(o);
      }
  }
  return dist;
}

bool TreeAdjacencyGraph::is_connected() const {
  if (trees.empty()) return false;
  auto d = bfs_distances(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::string TreeAdjacencyGraph::to_edge_list() const {
  std::ostringstream os;
  for (const Transition& t : transitions)
    os << bitstrings[t.a].to_string() << ' ' << bitstrings[t.b].to_string() << " swap(" << t.swap.edge_a
       << ',' << t.swap.edge_b << ")@" << t.swap.head << '\n';
  return os.str();
}

TreeAdjacencyGraph build_tree_adjacency_graph(const FlowNetwork& net) {
  TreeAdjacencyGraph g;
  g.trees = enumerate_spanning_trees(net);
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < g.num_trees(); ++i) {
    g.bitstrings.push_back(encode(net, g.trees[i]));
    index[g.trees[i].edge_ids] = i;
  }
  g.adjacency.assign(g.trees.size(), {});
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < g.num_trees(); ++i) {
    for (const EdgeRotation& r : valid_rotations(net, g.trees[i])) {
      SpanningTree next = apply_rotation(net, g.trees[i], r);
      int j = index.at(next.edge_ids);
      auto key = std::minmax(i, j);
      if (seen.count({key.first, key.second})) continue;
      seen.insert({key.first, key.second});
      int t = static_cast<int>(g.transitions.size());
      g.transitions.push_back({key.first, key.second, make_swap(r.edge_out, r.edge_in, r.head)});
      g.adjacency[i].push_back({j, t});
      g.adjacency[j].push_back({i, t});
    }
  }
  return g;
}

namespace {

std::vector<EdgeSwap> merge_consecutive(const std::vector<EdgeSwap>& raw) {
  std::vector<EdgeSwap> out;
  for (const EdgeSwap& s : raw)
    if (out.empty() || !(out.back() == s)) out.push_back(s);
  return out;
}

bool hamiltonian_cycle_rec(const TreeAdjacencyGraph& g, int start, int cur,
                           std::vector<char>& visited, int count, std::vector<int>& path) {
  if (count == g.num_trees()) {
    for (auto [o, t] : g.adjacency[cur])
      if (o == start) {
        path.push_back(t);
        return true;
      }
    return false;
  }
  for (auto [o, t] : g.adjacency[cur]) {
    if (visited[o]) continue;
    visited[o] = 1;
    path.push_back(t);
    if (hamiltonian_cycle_rec(g, start, o, visited, count + 1, path)) return true;
    path.pop_back();
    visited[o] = 0;
  }
  return false;
}

// Shortest closed walk from start touching every node: BFS over
// (node, visited-set) states.
std::vector<int> covering_closed_walk(const TreeAdjacencyGraph& g, int start) {
  int n = g.num_trees();
  if (n > 20) throw ValidationError("mixer order: walk strategy exceeds desk scale");
  std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  struct State {
    int node;
    std::uint32_t mask;
  };
  std::map<std::pair<int, std::uint32_t>, std::pair<std::pair<int, std::uint32_t>, int>> parent;
  std::queue<State> q;
  State init{start, 1u << start};
  q.push(init);
  parent[{init.node, init.mask}] = {{-1, 0}, -1};
  while (!q.empty()) {
    State s = q.front();
    q.pop();
    if (s.node == start && s.mask == full) {
      std::vector<int> walk;
      auto key = std::make_pair(s.node, s.mask);
      while (parent.at(key).second >= 0) {
        walk.push_back(parent.at(key).second);
        key = parent.at(key).first;
      }
      std::reverse(walk.begin(), walk.end());
      return walk;
    }
    for (auto [o, t] : g.adjacency[s.node]) {
      State next{o, s.mask | (1u << o)};
      auto key = std::make_pair(next.node, next.mask);
      if (parent.count(key)) continue;
      parent[key] = {{s.node, s.mask}, t};
      q.push(next);
    }
  }
  throw ValidationError("mixer order: adjacency graph is not connected");
}

}  // namespace

MixerOrder build_mixer_order(const TreeAdjacencyGraph& g, MixerStrategy strategy,
                             std::uint64_t seed, int start) {
  if (g.num_trees() == 0) throw std::invalid_argument("mixer order: empty adjacency graph");
  if (start < 0 || start >= g.num_trees())
    throw std::invalid_argument("mixer order: start tree out of range");
  MixerOrder order;

  switch (strategy) {
    case MixerStrategy::Random: {
      std::set<EdgeSwap> distinct;
      for (const auto& t : g.transitions) distinct.insert(t.swap);
      order.swaps.assign(distinct.begin(), distinct.end());
      // Fisher-Yates with explicit draws, reproducible across platforms.
      std::mt19937_64 rng(seed);
      for (int i = static_cast<int>(order.swaps.size()) - 1; i > 0; --i) {
        int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order.swaps[i], order.swaps[j]);
      }
      break;
    }
    case MixerStrategy::HamiltonianWalk: {
      std::vector<int> path;
      std::vector<char> visited(g.num_trees(), 0);
      visited[start] = 1;
      std::vector<EdgeSwap> raw;
      if (g.num_trees() == 1) {
        order.swaps = {};
      } else if (hamiltonian_cycle_rec(g, start, start, visited, 1, path)) {
        for (int t : path) raw.push_back(g.transitions[t].swap);
        order.swaps = merge_consecutive(raw);
      } else {
        order.hamiltonian_found = false;
        for (int t : covering_closed_walk(g, start)) raw.push_back(g.transitions[t].swap);
        order.swaps = merge_consecutive(raw);
      }
      break;
    }
    case MixerStrategy::SpanningTree: {
      std::vector<int> dist = g.bfs_distances(start);
      std::vector<std::pair<int, int>> tree_edges;  // (depth of far node, transition)
      std::vector<char> reached(g.num_trees(), 0);
      reached[start] = 1;
      std::queue<int> q;
      q.push(start);
      while (!q.empty()) {
        int n = q.front();
        q.pop();
        for (auto [o, t] : g.adjacency[n])
          if (!reached[o]) {
            reached[o] = 1;
            tree_edges.push_back({dist[o], t});
            q.push(o);
          }
      }
      // Sorting within a level by swap makes same-level repeats adjacent, so
      // one partial mixer serves every transition of that level.
      std::stable_sort(tree_edges.begin(), tree_edges.end(), [&](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return g.transitions[x.second].swap < g.transitions[y.second].swap;
      });
      std::vector<EdgeSwap> raw;
      for (auto [d, t] : tree_edges) raw.push_back(g.transitions[t].swap);
      order.swaps = merge_consecutive(raw);
      break;
    }
  }
  return order;
}

}  // namespace mdst
