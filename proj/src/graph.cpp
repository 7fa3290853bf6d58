#include "mdst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace mdst {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

void FlowNetwork::validate() const {
  if (num_nodes <= 0) throw ValidationError("network: num_nodes must be positive");
  if (root < 0 || root >= num_nodes) throw ValidationError("network: root out of range");
  if (num_nodes > 64) throw ValidationError("network: more than 64 nodes exceeds desk scale");
  if (injection.size() != static_cast<std::size_t>(num_nodes))
    throw ValidationError("network: injection size mismatch");
  if (alpha.size() != edges.size()) throw ValidationError("network: alpha size mismatch");
  if (resistance.size() != edges.size()) throw ValidationError("network: resistance size mismatch");
  if (switchable.size() != edges.size()) throw ValidationError("network: switchable size mismatch");
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges[e];
    if (ed.id != e) throw ValidationError("network: edge ids must be dense 0-based");
    if (ed.a < 0 || ed.a >= num_nodes || ed.b < 0 || ed.b >= num_nodes)
      throw ValidationError("network: edge endpoint out of range");
    if (ed.a == ed.b) throw ValidationError("network: self-loop edges are rejected");
    if (alpha[e] < 0.0) throw ValidationError("network: dissipation constant must be >= 0");
    if (resistance[e] < 0.0) throw ValidationError("network: resistance must be >= 0");
  }
  double total = std::accumulate(injection.begin(), injection.end(), 0.0);
  if (std::abs(total) > 1e-9) throw ValidationError("network: injections must sum to zero");
  if (!is_connected()) throw ValidationError("network: graph must be connected");
}

bool FlowNetwork::is_connected() const {
  if (num_nodes == 0) return false;
  std::vector<char> seen(num_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (const Edge& ed : edges) {
      if (!ed.incident(n)) continue;
      int o = ed.other(n);
      if (!seen[o]) {
        seen[o] = 1;
        ++count;
        stack.push_back(o);
      }
    }
  }
  return count == num_nodes;
}

bool FlowNetwork::injections_integral() const {
  for (double f : injection)
    if (f != std::floor(f)) return false;
  return true;
}

std::vector<int> FlowNetwork::edges_at(int node) const {
  std::vector<int> out;
  for (const Edge& ed : edges)
    if (ed.incident(node)) out.push_back(ed.id);
  return out;
}

int FlowNetwork::degree(int node) const { return static_cast<int>(edges_at(node).size()); }

FlowNetwork make_network(int num_nodes, int root,
                         const std::vector<std::pair<int, int>>& edge_list,
                         std::vector<double> injection, std::vector<double> alpha) {
  FlowNetwork net;
  net.num_nodes = num_nodes;
  net.root = root;
  for (int e = 0; e < static_cast<int>(edge_list.size()); ++e)
    net.edges.push_back({e, edge_list[e].first, edge_list[e].second});
  net.injection = injection.empty() ? std::vector<double>(num_nodes, 0.0) : std::move(injection);
  net.alpha = alpha.empty() ? std::vector<double>(edge_list.size(), 0.0) : std::move(alpha);
  net.resistance.assign(edge_list.size(), 0.0);
  net.switchable.assign(edge_list.size(), 1);
  return net;
}

Orientation orient_low_to_high(const FlowNetwork& net) {
  Orientation o;
  o.reversed.resize(net.num_edges());
  for (int e = 0; e < net.num_edges(); ++e)
    o.reversed[e] = net.edges[e].a > net.edges[e].b;
  return o;
}

IncidenceMatrix incidence_matrix(const FlowNetwork& net, const Orientation& orient) {
  if (orient.reversed.size() != static_cast<std::size_t>(net.num_edges()))
    throw std::invalid_argument("incidence_matrix: orientation does not cover every edge");
  IncidenceMatrix inc;
  inc.rows = net.num_nodes;
  inc.cols = net.num_edges();
  inc.m.assign(static_cast<std::size_t>(inc.rows) * inc.cols, 0);
  for (int e = 0; e < net.num_edges(); ++e) {
    if (net.edges[e].a == net.edges[e].b)
      throw std::invalid_argument("incidence_matrix: self-loop yields a degenerate column");
    inc.at(orient.head(net, e), e) = 1;
    inc.at(orient.tail(net, e), e) = -1;
  }
  return inc;
}

int SpanningTree::parent_edge_head(int e) const {
  if (downward[e] == 0) return -1;
  // The head is the unique node whose parent edge is e.
  for (int n = 0; n < static_cast<int>(parent_edge.size()); ++n)
    if (parent_edge[n] == e) return n;
  return -1;
}

SpanningTree make_spanning_tree(const FlowNetwork& net, std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  if (static_cast<int>(edge_ids.size()) != net.num_nodes - 1)
    throw std::invalid_argument("spanning tree: edge count must be |V|-1");

  SpanningTree t;
  t.root = net.root;
  t.edge_ids = edge_ids;
  t.parent_node.assign(net.num_nodes, -1);
  t.parent_edge.assign(net.num_nodes, -1);
  t.depth.assign(net.num_nodes, 0);
  t.downward.assign(net.num_edges(), 0);

  std::vector<std::vector<int>> adj(net.num_nodes);
  for (int e : edge_ids) adj[net.edges[e].a].push_back(e), adj[net.edges[e].b].push_back(e);

  std::vector<char> seen(net.num_nodes, 0);
  std::queue<int> q;
  q.push(net.root);
  seen[net.root] = 1;
  int reached = 1;
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    for (int e : adj[n]) {
      int o = net.edges[e].other(n);
      if (seen[o]) continue;
      seen[o] = 1;
      ++reached;
      t.parent_node[o] = n;
      t.parent_edge[o] = e;
      t.depth[o] = t.depth[n] + 1;
      q.push(o);
    }
  }
  if (reached != net.num_nodes)
    throw std::invalid_argument("spanning tree: edge set does not span the graph");

  // downward(parent_edge(n)) accumulates n and everything below it.
  std::vector<int> order(net.num_nodes);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return t.depth[x] > t.depth[y]; });
  std::vector<std::uint64_t> sub(net.num_nodes, 0);
  for (int n : order) {
    sub[n] |= std::uint64_t{1} << n;
    if (n != net.root) {
      t.downward[t.parent_edge[n]] = sub[n];
      sub[t.parent_node[n]] |= sub[n];
    }
  }
  return t;
}

std::vector<int> fundamental_cycle(const FlowNetwork& net, const SpanningTree& tree, int e) {
  if (std::binary_search(tree.edge_ids.begin(), tree.edge_ids.end(), e))
    throw std::invalid_argument("fundamental_cycle: edge is part of the tree");
  int a = net.edges[e].a, b = net.edges[e].b;
  // Walk both endpoints up to their lowest common ancestor.
  std::vector<int> from_a, from_b;
  int x = a, y = b;
  while (tree.depth[x] > tree.depth[y]) from_a.push_back(tree.parent_edge[x]), x = tree.parent_node[x];
  while (tree.depth[y] > tree.depth[x]) from_b.push_back(tree.parent_edge[y]), y = tree.parent_node[y];
  while (x != y) {
    from_a.push_back(tree.parent_edge[x]);
    from_b.push_back(tree.parent_edge[y]);
    x = tree.parent_node[x];
    y = tree.parent_node[y];
  }
  std::vector<int> cycle{e};
  cycle.insert(cycle.end(), from_b.begin(), from_b.end());
  cycle.insert(cycle.end(), from_a.rbegin(), from_a.rend());
  return cycle;
}

namespace {

void enumerate_rec(const FlowNetwork& net, int idx, UnionFind uf, std::vector<int>& chosen,
                   std::vector<std::vector<int>>& out) {
  int needed = net.num_nodes - 1;
  if (static_cast<int>(chosen.size()) == needed) {
    out.push_back(chosen);
    return;
  }
  if (idx == net.num_edges()) return;
  if (static_cast<int>(chosen.size()) + (net.num_edges() - idx) < needed) return;

  // Prune: remaining edges must still be able to connect all components.
  {
    UnionFind probe = uf;
    int comps = net.num_nodes - static_cast<int>(chosen.size());
    for (int e = idx; e < net.num_edges() && comps > 1; ++e)
      if (probe.unite(net.edges[e].a, net.edges[e].b)) --comps;
    if (comps > 1) return;
  }

  const Edge& ed = net.edges[idx];
  if (uf.find(ed.a) != uf.find(ed.b)) {
    UnionFind with = uf;
    with.unite(ed.a, ed.b);
    chosen.push_back(idx);
    enumerate_rec(net, idx + 1, with, chosen, out);
    chosen.pop_back();
  }
  enumerate_rec(net, idx + 1, uf, chosen, out);
}

}  // namespace

std::vector<SpanningTree> enumerate_spanning_trees(const FlowNetwork& net) {
  std::vector<std::vector<int>> sets;
  std::vector<int> chosen;
  enumerate_rec(net, 0, UnionFind(net.num_nodes), chosen, sets);
  std::sort(sets.begin(), sets.end());
  std::vector<SpanningTree> trees;
  trees.reserve(sets.size());
  for (auto& s : sets) trees.push_back(make_spanning_tree(net, std::move(s)));
  return trees;
}

std::uint64_t spanning_tree_count(const FlowNetwork& net) {
  if (!net.is_connected()) return 0;
  int n = net.num_nodes - 1;
  if (n == 0) return 1;

  // Grounded Laplacian with the root row/column removed.
  auto ridx = [&](int node) { return node < net.root ? node : node - 1; };
  std::vector<__int128> L(static_cast<std::size_t>(n) * n, 0);
  for (const Edge& ed : net.edges) {
    if (ed.a != net.root) L[static_cast<std::size_t>(ridx(ed.a)) * n + ridx(ed.a)] += 1;
    if (ed.b != net.root) L[static_cast<std::size_t>(ridx(ed.b)) * n + ridx(ed.b)] += 1;
    if (ed.a != net.root && ed.b != net.root) {
      L[static_cast<std::size_t>(ridx(ed.a)) * n + ridx(ed.b)] -= 1;
      L[static_cast<std::size_t>(ridx(ed.b)) * n + ridx(ed.a)] -= 1;
    }
  }

  // Bareiss fraction-free elimination over exact integers.
  auto at = [&](int i, int j) -> __int128& { return L[static_cast<std::size_t>(i) * n + j]; };
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) {
          pivot = i;
          break;
        }
      if (pivot < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  __int128 det = sign * at(n - 1, n - 1);
  if (det < 0) det = -det;  // tree counts are nonnegative
  return static_cast<std::uint64_t>(det);
}

}  // namespace mdst
