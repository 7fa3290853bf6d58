#include "mdst/cost.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace mdst {

double cost_value(const TreeBitstring& y, const FlowNetwork& net) {
  if (y.size() != num_variables(net))
    throw std::invalid_argument("cost_value: bitstring length mismatch");
  double total = 0.0;
  for (int e = 0; e < net.num_edges(); ++e) {
    double flagged = 0.0;
    for (int r = 1; r < net.num_nodes; ++r)
      if (y[flatten_index(e, r, net.num_nodes)]) flagged += net.injection[rank_to_node(net, r)];
    total += net.alpha[e] * flagged * flagged;
  }
  return total;
}

double tree_cost(const FlowNetwork& net, const SpanningTree& tree) {
  double total = 0.0;
  for (int e : tree.edge_ids) {
    double f = edge_flow(net, tree, e);
    total += net.alpha[e] * f * f;
  }
  return total;
}

PseudoBooleanPolynomial cost_polynomial(const FlowNetwork& net) {
  PseudoBooleanPolynomial p(num_variables(net));
  for (int e = 0; e < net.num_edges(); ++e) {
    if (net.alpha[e] == 0.0) continue;
    for (int rn = 1; rn < net.num_nodes; ++rn)
      for (int rm = 1; rm < net.num_nodes; ++rm) {
        double fn = net.injection[rank_to_node(net, rn)];
        double fm = net.injection[rank_to_node(net, rm)];
        p.add_term({flatten_index(e, rn, net.num_nodes), flatten_index(e, rm, net.num_nodes)},
                   net.alpha[e] * fn * fm);
      }
  }
  return p;
}

namespace {

// E(T)_{n,e} as a linear polynomial for an endpoint n of e: y_{e,n} minus
// the other endpoint's variable (dropped when the other endpoint is the
// root, which carries no variable).
PseudoBooleanPolynomial oriented_entry(const FlowNetwork& net, int e, int n) {
  PseudoBooleanPolynomial p(num_variables(net));
  p.add_term({flatten_index(e, node_rank(net, n), net.num_nodes)}, 1.0);
  int other = net.edges[e].other(n);
  if (other != net.root)
    p.add_term({flatten_index(e, node_rank(net, other), net.num_nodes)}, -1.0);
  return p;
}

}  // namespace

PseudoBooleanPolynomial penalty_polynomial(const FlowNetwork& net) {
  const int m = num_variables(net);
  PseudoBooleanPolynomial pen(m);

  // Edge-count constraint: incident-variable sum equals |V| - 1.
  {
    PseudoBooleanPolynomial res(m);
    for (int e = 0; e < net.num_edges(); ++e)
      for (int n : {net.edges[e].a, net.edges[e].b})
        if (n != net.root)
          res.add_term({flatten_index(e, node_rank(net, n), net.num_nodes)}, 1.0);
    res.add_term({}, -(net.num_nodes - 1));
    pen.add(res.squared());
  }

  // Dummy-flow KCL per non-root node: unit injections must reach every node
  // through the oriented active edges.
  for (int n = 0; n < net.num_nodes; ++n) {
    if (n == net.root) continue;
    PseudoBooleanPolynomial res(m);
    for (int e = 0; e < net.num_edges(); ++e) {
      if (!net.edges[e].incident(n)) continue;
      PseudoBooleanPolynomial iota(m);  // dummy flow on e: number of downward flags
      for (int r = 1; r < net.num_nodes; ++r)
        iota.add_term({flatten_index(e, r, net.num_nodes)}, 1.0);
      res.add(oriented_entry(net, e, n) * iota);
    }
    res.add_term({}, -1.0);
    pen.add(res.squared());
  }

  // Local consistency for every (node, non-incident edge) pair.
  for (int n = 0; n < net.num_nodes; ++n) {
    if (n == net.root) continue;
    for (int e = 0; e < net.num_edges(); ++e) {
      if (net.edges[e].incident(n)) continue;
      PseudoBooleanPolynomial res(m);
      res.add_term({flatten_index(e, node_rank(net, n), net.num_nodes)}, 1.0);
      for (int mnode : {net.edges[e].a, net.edges[e].b}) {
        if (mnode == net.root) continue;
        for (int e2 = 0; e2 < net.num_edges(); ++e2) {
          if (e2 == e || !net.edges[e2].incident(mnode)) continue;
          res.add_term({flatten_index(e, node_rank(net, mnode), net.num_nodes),
                        flatten_index(e2, node_rank(net, n), net.num_nodes)},
                       -1.0);
        }
      }
      pen.add(res.squared());
    }
  }
  return pen;
}

double auto_lambda(const FlowNetwork& net) {
  return 1.0 + cost_polynomial(net).abs_coefficient_sum();
}

PseudoBooleanPolynomial build_pubo(const FlowNetwork& net, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("build_pubo: lambda must be positive");
  PseudoBooleanPolynomial p = cost_polynomial(net);
  p.add(penalty_polynomial(net), lambda);
  return p;
}

PseudoBooleanPolynomial build_pubo(const FlowNetwork& net, AutoLambda) {
  return build_pubo(net, auto_lambda(net));
}

double DiagonalEnergies::min() const {
  return *std::min_element(energies.begin(), energies.end());
}

double DiagonalEnergies::mean() const {
  return std::accumulate(energies.begin(), energies.end(), 0.0) / energies.size();
}

std::vector<std::uint8_t> DiagonalEnergies::to_binary() const {
  std::vector<std::uint8_t> blob(8 + energies.size() * 8);
  std::uint64_t len = energies.size();
  for (int i = 0; i < 8; ++i) blob[i] = (len >> (8 * i)) & 0xff;
  std::memcpy(blob.data() + 8, energies.data(), energies.size() * 8);
  return blob;
}

DiagonalEnergies DiagonalEnergies::from_binary(const std::vector<std::uint8_t>& blob) {
  if (blob.size() < 8) throw ValidationError("diagonal blob: truncated header");
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(blob[i]) << (8 * i);
  if (blob.size() != 8 + len * 8) throw ValidationError("diagonal blob: length mismatch");
  DiagonalEnergies d;
  d.energies.resize(len);
  std::memcpy(d.energies.data(), blob.data() + 8, len * 8);
  d.num_vars = 0;
  while ((std::uint64_t{1} << d.num_vars) < len) ++d.num_vars;
  return d;
}

BruteForceResult brute_force_mdst(const FlowNetwork& net) {
  std::vector<SpanningTree> trees = enumerate_spanning_trees(net);
  if (trees.empty()) throw ValidationError("brute force: no spanning tree exists");
  BruteForceResult res;
  res.cost = tree_cost(net, trees[0]);
  std::size_t best = 0;
  std::vector<double> costs(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    costs[i] = tree_cost(net, trees[i]);
    if (costs[i] < res.cost) {
      res.cost = costs[i];
      best = i;
    }
  }
  res.tree = trees[best];
  res.bits = encode(net, res.tree);
  for (std::size_t i = 0; i < trees.size(); ++i)
    if (costs[i] == res.cost) res.all_optima.push_back(encode(net, trees[i]));
  return res;
}

DiagonalEnergies to_diagonal(const PseudoBooleanPolynomial& p, int qubit_cap) {
  int m = p.num_vars();
  if (m > qubit_cap) throw ValidationError("to_diagonal: variable count above the qubit cap");
  DiagonalEnergies d;
  d.num_vars = m;
  d.energies.assign(std::uint64_t{1} << m, 0.0);
  const std::uint64_t full = (m == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  for (const auto& [vars, c] : p.terms()) {
    std::uint64_t mono = 0;
    for (int v : vars) mono |= std::uint64_t{1} << (m - 1 - v);
    // Accumulate onto every superset of the monomial mask.
    std::uint64_t free = full & ~mono;
    std::uint64_t sub = free;
    while (true) {
      d.energies[mono | sub] += c;
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
  return d;
}

}  // namespace mdst
