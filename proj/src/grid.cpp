#include "mdst/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "mdst/encoding.hpp"

namespace mdst {

void GridInstance::validate() const {
  net.validate();
  // Cycle in the non-switchable subgraph: no radial configuration exists.
  std::vector<int> parent(net.num_nodes);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : net.edges) {
    if (net.switchable[e.id]) continue;
    int ra = find(e.a), rb = find(e.b);
    if (ra == rb) throw ValidationError("grid: non-switchable edges form a cycle");
    parent[ra] = rb;
  }
}

ReducedGraph contract_grid(const GridInstance& g) {
  g.validate();
  const FlowNetwork& net = g.net;

  ReducedGraph red;
  red.super_of_node.assign(net.num_nodes, -1);
  int num_super = 0;
  for (int n = 0; n < net.num_nodes; ++n) {
    if (red.super_of_node[n] >= 0) continue;
    std::vector<int> stack{n};
    red.super_of_node[n] = num_super;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const Edge& e : net.edges) {
        if (net.switchable[e.id] || !e.incident(x)) continue;
        int o = e.other(x);
        if (red.super_of_node[o] < 0) {
          red.super_of_node[o] = num_super;
          stack.push_back(o);
        }
      }
    }
    ++num_super;
  }

  red.net.num_nodes = num_super;
  red.net.root = red.super_of_node[net.root];
  red.net.injection.assign(num_super, 0.0);
  for (int n = 0; n < net.num_nodes; ++n)
    red.net.injection[red.super_of_node[n]] += net.injection[n];

  for (const Edge& e : net.edges) {
    if (!net.switchable[e.id]) continue;
    int sa = red.super_of_node[e.a], sb = red.super_of_node[e.b];
    if (sa == sb) {
      // Closing this switch always creates a cycle; it stays open in every
      // valid configuration and carries no current.
      red.always_open.push_back(e.id);
      continue;
    }
    int id = red.net.num_edges();
    red.net.edges.push_back({id, sa, sb});
    red.net.alpha.push_back(net.resistance[e.id]);
    red.net.resistance.push_back(net.resistance[e.id]);
    red.net.switchable.push_back(1);
    red.switch_of_edge.push_back(e.id);
  }
  red.net.validate();
  return red;
}

std::string ReducedGraph::contraction_json() const {
  nlohmann::json j;
  j["num_super_nodes"] = net.num_nodes;
  j["root_super_node"] = net.root;
  j["super_of_node"] = super_of_node;
  j["switch_of_edge"] = switch_of_edge;
  j["always_open_switches"] = always_open;
  return j.dump(2);
}

GridInstance split_resistive_switches(const GridInstance& g) {
  GridInstance out;
  FlowNetwork& net = out.net;
  net.num_nodes = g.net.num_nodes;
  net.root = g.net.root;
  net.injection = g.net.injection;
  for (const Edge& e : g.net.edges) {
    if (g.net.switchable[e.id] && g.net.resistance[e.id] > 0.0) {
      int mid = net.num_nodes++;
      net.injection.push_back(0.0);
      int line = net.num_edges();
      net.edges.push_back({line, e.a, mid});
      net.alpha.push_back(0.0);
      net.resistance.push_back(g.net.resistance[e.id]);
      net.switchable.push_back(0);
      int sw = net.num_edges();
      net.edges.push_back({sw, mid, e.b});
      net.alpha.push_back(0.0);
      net.resistance.push_back(0.0);
      net.switchable.push_back(1);
    } else {
      int id = net.num_edges();
      net.edges.push_back({id, e.a, e.b});
      net.alpha.push_back(g.net.alpha[e.id]);
      net.resistance.push_back(g.net.resistance[e.id]);
      net.switchable.push_back(g.net.switchable[e.id]);
    }
  }
  return out;
}

Degree2Reduction degree2_reduce(const FlowNetwork& net) {
  std::vector<char> node_alive(net.num_nodes, 1);
  std::vector<char> edge_alive(net.num_edges(), 1);
  std::vector<double> inj = net.injection;
  int root = net.root;
  double offset = 0.0;

  auto alive_degree = [&](int n) {
    int d = 0;
    for (const Edge& e : net.edges)
      if (edge_alive[e.id] && e.incident(n)) ++d;
    return d;
  };
  auto only_edge = [&](int n) {
    for (const Edge& e : net.edges)
      if (edge_alive[e.id] && e.incident(n)) return e.id;
    return -1;
  };

  int alive_nodes = net.num_nodes;
  bool changed = true;
  while (changed && alive_nodes > 1) {
    changed = false;
    for (int n = 0; n < net.num_nodes && alive_nodes > 1; ++n) {
      if (!node_alive[n] || alive_degree(n) != 1) continue;
      int e = only_edge(n);
      int m = net.edges[e].other(n);
      if (n == root) {
        // The root's pendant edge carries everything; the neighbor becomes
        // the new root and absorbs the balance.
        offset += net.alpha[e] * inj[root] * inj[root];
        inj[m] += inj[root];
        root = m;
      } else {
        offset += net.alpha[e] * inj[n] * inj[n];
        inj[m] += inj[n];
      }
      node_alive[n] = 0;
      edge_alive[e] = 0;
      --alive_nodes;
      changed = true;
    }
  }

  Degree2Reduction out;
  out.offset = offset;
  out.node_of_original.assign(net.num_nodes, -1);
  out.edge_of_original.assign(net.num_edges(), -1);
  int next = 0;
  for (int n = 0; n < net.num_nodes; ++n)
    if (node_alive[n]) out.node_of_original[n] = next++;
  out.net.num_nodes = next;
  out.net.root = out.node_of_original[root];
  out.net.injection.assign(next, 0.0);
  for (int n = 0; n < net.num_nodes; ++n)
    if (node_alive[n]) out.net.injection[out.node_of_original[n]] = inj[n];
  for (const Edge& e : net.edges) {
    if (!edge_alive[e.id]) continue;
    int id = out.net.num_edges();
    out.edge_of_original[e.id] = id;
    out.net.edges.push_back({id, out.node_of_original[e.a], out.node_of_original[e.b]});
    out.net.alpha.push_back(net.alpha[e.id]);
    out.net.resistance.push_back(net.resistance[e.id]);
    out.net.switchable.push_back(net.switchable[e.id]);
  }
  return out;
}

namespace {

// E(T)_{n,s} for a bus n incident to switch s, as a linear polynomial in the
// reduced variables: y_{s,v(n)} - y_{s,v(other)} with root-super terms
// dropped. Independent of the baseline switch orientation.
PseudoBooleanPolynomial switch_orientation_entry(const FlowNetwork& red, int reduced_edge,
                                                 int super_n, int super_other) {
  PseudoBooleanPolynomial p(num_variables(red));
  if (super_n != red.root)
    p.add_term({flatten_index(reduced_edge, node_rank(red, super_n), red.num_nodes)}, 1.0);
  if (super_other != red.root)
    p.add_term({flatten_index(reduced_edge, node_rank(red, super_other), red.num_nodes)}, -1.0);
  return p;
}

}  // namespace

std::map<int, PseudoBooleanPolynomial> line_current_polynomials(const GridInstance& g,
                                                                const ReducedGraph& r) {
  const FlowNetwork& grid = g.net;
  const FlowNetwork& red = r.net;
  const int mvars = num_variables(red);

  // Switch-flow polynomials f_s = sum_v y_{s,v} * injection(v).
  std::vector<PseudoBooleanPolynomial> switch_flow(red.num_edges(),
                                                   PseudoBooleanPolynomial(mvars));
  for (int s = 0; s < red.num_edges(); ++s)
    for (int rank = 1; rank < red.num_nodes; ++rank)
      switch_flow[s].add_term({flatten_index(s, rank, red.num_nodes)},
                              red.injection[rank_to_node(red, rank)]);

  std::map<int, PseudoBooleanPolynomial> out;
  for (int s = 0; s < red.num_edges(); ++s) out[r.switch_of_edge[s]] = switch_flow[s];
  for (int e : r.always_open) out[e] = PseudoBooleanPolynomial(mvars);

  // Per-bus accumulator: injection minus oriented switch contributions.
  std::vector<PseudoBooleanPolynomial> acc(grid.num_nodes, PseudoBooleanPolynomial(mvars));
  for (int n = 0; n < grid.num_nodes; ++n) acc[n].add_term({}, grid.injection[n]);
  for (int s = 0; s < red.num_edges(); ++s) {
    const Edge& sw = grid.edges[r.switch_of_edge[s]];
    for (int n : {sw.a, sw.b}) {
      int vn = r.super_of_node[n];
      int vo = r.super_of_node[sw.other(n)];
      PseudoBooleanPolynomial ent = switch_orientation_entry(red, s, vn, vo);
      acc[n].add(ent * switch_flow[s], -1.0);
    }
  }

  // Strip leaves of each super-node tree; internal lines are oriented low to
  // high bus id (the sign is irrelevant once squared).
  std::vector<char> line_done(grid.num_edges(), 0);
  std::vector<char> node_done(grid.num_nodes, 0);
  for (int super = 0; super < red.num_nodes; ++super) {
    std::vector<int> buses;
    for (int n = 0; n < grid.num_nodes; ++n)
      if (r.super_of_node[n] == super) buses.push_back(n);
    std::vector<int> lines;
    for (const Edge& e : grid.edges)
      if (!grid.switchable[e.id] && r.super_of_node[e.a] == super) lines.push_back(e.id);

    auto switch_count = [&](int n) {
      int c = 0;
      for (int s = 0; s < red.num_edges(); ++s)
        if (grid.edges[r.switch_of_edge[s]].incident(n)) ++c;
      return c;
    };

    int remaining = static_cast<int>(buses.size());
    while (remaining > 1) {
      // Among current leaves, strip the one with the fewest switch
      // attachments first; a switch-free leaf line then gets the constant
      // polynomial of its accumulated injections.
      int leaf = -1, leaf_line = -1;
      for (int n : buses) {
        if (node_done[n]) continue;
        int deg = 0, last = -1;
        for (int e : lines)
          if (!line_done[e] && grid.edges[e].incident(n)) ++deg, last = e;
        if (deg != 1) continue;
        if (leaf < 0 || switch_count(n) < switch_count(leaf)) {
          leaf = n;
          leaf_line = last;
        }
      }
      if (leaf < 0) throw std::logic_error("grid: super-node interior is not a tree");
      int head = std::max(grid.edges[leaf_line].a, grid.edges[leaf_line].b);
      int e_n_leaf = leaf == head ? 1 : -1;
      PseudoBooleanPolynomial current(mvars);
      current.add(acc[leaf], e_n_leaf);  // i_e = E_{n,e} * (accumulated KCL residue)
      out[leaf_line] = current;
      int other = grid.edges[leaf_line].other(leaf);
      int e_other = other == head ? 1 : -1;
      acc[other].add(current, -e_other);
      line_done[leaf_line] = 1;
      node_done[leaf] = 1;
      --remaining;
    }
  }
  return out;
}

PseudoBooleanPolynomial reconfig_cost_polynomial(const GridInstance& g, const ReducedGraph& r) {
  std::map<int, PseudoBooleanPolynomial> lines = line_current_polynomials(g, r);
  PseudoBooleanPolynomial cost(num_variables(r.net));
  for (const auto& [e, poly] : lines) {
    if (g.net.resistance[e] == 0.0) continue;
    cost.add(poly.squared(), g.net.resistance[e]);
  }
  return cost;
}

PseudoBooleanPolynomial reconfig_cost_polynomial(const GridInstance& g) {
  return reconfig_cost_polynomial(g, contract_grid(g));
}

}  // namespace mdst
