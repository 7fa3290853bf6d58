#include "mdst/grid.hpp"

#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mdst/cost.hpp"
#include "mdst/instances.hpp"

using namespace mdst;

namespace {

// Nine-bus feeder in the style of the reduced-graph illustration: buses
// 1..5 form one rigid region (lines l1..l4), buses 6..8 another (l5, l6),
// bus 0 is the feeder. Four switches s1..s4 connect the regions.
GridInstance nine_bus_grid() {
  GridInstance g;
  FlowNetwork& net = g.net;
  net.num_nodes = 9;
  net.root = 0;
  net.injection = {-20, 2, 3, 1, 4, 2, 3, 2, 3};
  auto add_edge = [&](int a, int b, double resistance, bool sw) {
    int id = net.num_edges();
    net.edges.push_back({id, a, b});
    net.alpha.push_back(0.0);
    net.resistance.push_back(resistance);
    net.switchable.push_back(sw);
  };
  add_edge(1, 3, 2.0, false);  // l1
  add_edge(2, 3, 1.0, false);  // l2
  add_edge(3, 4, 3.0, false);  // l3
  add_edge(4, 5, 1.0, false);  // l4
  add_edge(6, 7, 2.0, false);  // l5
  add_edge(7, 8, 1.0, false);  // l6
  add_edge(0, 6, 0.0, true);   // s1
  add_edge(0, 2, 0.0, true);   // s2
  add_edge(6, 1, 0.0, true);   // s3
  add_edge(8, 5, 0.0, true);   // s4
  return g;
}

// Physical loss of one switch configuration, solved per configured radial
// network by downward flow sums (independent of the polynomial route).
double direct_loss(const GridInstance& g, const std::vector<int>& closed_switches) {
  std::vector<int> edges;
  for (const Edge& e : g.net.edges)
    if (!g.net.switchable[e.id]) edges.push_back(e.id);
  edges.insert(edges.end(), closed_switches.begin(), closed_switches.end());
  SpanningTree t = make_spanning_tree(g.net, edges);
  double loss = 0.0;
  for (int e : t.edge_ids) {
    double f = edge_flow(g.net, t, e);
    loss += g.net.resistance[e] * f * f;
  }
  return loss;
}

}  // namespace

TEST_CASE("contraction merges rigid regions") {
  GridInstance g = nine_bus_grid();
  ReducedGraph red = contract_grid(g);
  CHECK(red.net.num_nodes == 3);
  CHECK(red.net.num_edges() == 4);
  // Buses 7 and 8 collapse onto bus 6's super-node.
  CHECK(red.super_of_node[7] == red.super_of_node[6]);
  CHECK(red.super_of_node[8] == red.super_of_node[6]);
  CHECK(red.net.root == red.super_of_node[0]);
  // Aggregated injections per super-node.
  CHECK(red.net.injection[red.super_of_node[0]] == -20.0);
  CHECK(red.net.injection[red.super_of_node[1]] == 2 + 3 + 1 + 4 + 2);
  CHECK(red.net.injection[red.super_of_node[6]] == 3 + 2 + 3);
  CHECK(red.contraction_json().find("super_of_node") != std::string::npos);
}

TEST_CASE("contraction of an all-switchable grid is the identity") {
  GridInstance g{fixtures::triangle()};
  for (int e = 0; e < 3; ++e) g.net.resistance[e] = g.net.alpha[e];
  ReducedGraph red = contract_grid(g);
  CHECK(red.net.num_nodes == 3);
  CHECK(red.net.num_edges() == 3);
  for (int n = 0; n < 3; ++n) CHECK(red.super_of_node[n] == n);
}

TEST_CASE("fully fixed tree grid contracts to one super-node") {
  GridInstance g;
  g.net = make_network(4, 0, {{0, 1}, {1, 2}, {1, 3}}, {-6, 1, 2, 3});
  g.net.switchable = {0, 0, 0};
  ReducedGraph red = contract_grid(g);
  CHECK(red.net.num_nodes == 1);
  CHECK(red.net.num_edges() == 0);
}

TEST_CASE("non-switchable cycles are rejected") {
  GridInstance g{fixtures::triangle()};
  g.net.switchable = {0, 0, 0};
  CHECK_THROWS_AS(contract_grid(g), ValidationError);
}

TEST_CASE("degree-2 reduction strips pendants and accumulates the offset") {
  // Pendant node 3 hangs off node 1 with alpha 2 and injection 4.
  FlowNetwork net = make_network(4, 0, {{0, 1}, {1, 2}, {0, 2}, {1, 3}}, {-7, 1, 2, 4},
                                 {1, 1, 10, 2});
  Degree2Reduction red = degree2_reduce(net);
  CHECK(red.offset == 2 * 4 * 4);
  CHECK(red.net.num_nodes == 3);
  CHECK(red.net.injection[red.node_of_original[1]] == 1 + 4);
  CHECK(red.node_of_original[3] == -1);
  CHECK(red.edge_of_original[3] == -1);

  // The triangle is already minimum degree 2.
  Degree2Reduction tri = degree2_reduce(fixtures::triangle());
  CHECK(tri.offset == 0.0);
  CHECK(tri.net.num_nodes == 3);
  CHECK(tri.net.num_edges() == 3);
}

TEST_CASE("a path reduces to a single node with the full tree cost") {
  FlowNetwork path = make_network(4, 0, {{0, 1}, {1, 2}, {2, 3}}, {-6, 1, 2, 3}, {2, 1, 3});
  double tree = tree_cost(path, make_spanning_tree(path, {0, 1, 2}));
  Degree2Reduction red = degree2_reduce(path);
  CHECK(red.net.num_nodes == 1);
  CHECK(red.offset == doctest::Approx(tree));
}

TEST_CASE("degree-2 reduction with a pendant root re-roots") {
  FlowNetwork net = make_network(4, 3, {{0, 1}, {1, 2}, {0, 2}, {3, 0}}, {1, 1, 2, -4},
                                 {1, 1, 10, 5});
  Degree2Reduction red = degree2_reduce(net);
  CHECK(red.net.num_nodes == 3);
  CHECK(red.net.root == red.node_of_original[0]);
  CHECK(red.offset == 5 * 16);  // the root edge always carries the feeder flow
  CHECK(red.net.injection[red.node_of_original[0]] == 1 - 4);

  // Argmin preservation: optimum of the original = optimum of reduced + offset.
  BruteForceResult orig = brute_force_mdst(net);
  BruteForceResult reduced = brute_force_mdst(red.net);
  CHECK(orig.cost == doctest::Approx(reduced.cost + red.offset));
}

TEST_CASE("degree-2 reduction preserves the argmin on random instances") {
  for (std::uint64_t seed : {1, 2, 3}) {
    FlowNetwork base = random_instance(6, 2, 0.4, seed);
    // Graft two pendant nodes onto it.
    FlowNetwork net = base;
    for (int extra = 0; extra < 2; ++extra) {
      int n = net.num_nodes++;
      net.injection.push_back(extra + 1.0);
      net.injection[net.root] -= extra + 1.0;
      net.edges.push_back({net.num_edges(), extra, n});
      net.alpha.push_back(2.0);
      net.resistance.push_back(0.0);
      net.switchable.push_back(1);
    }
    Degree2Reduction red = degree2_reduce(net);
    BruteForceResult orig = brute_force_mdst(net);
    BruteForceResult reduced = brute_force_mdst(red.net);
    CHECK(orig.cost == doctest::Approx(reduced.cost + red.offset).epsilon(1e-12));
    // The reduced optimum's edges are the surviving edges of the original's.
    std::vector<int> mapped;
    for (int e : orig.tree.edge_ids)
      if (red.edge_of_original[e] >= 0) mapped.push_back(red.edge_of_original[e]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == reduced.tree.edge_ids);
  }
}

TEST_CASE("line current polynomials match the physical currents") {
  GridInstance g = nine_bus_grid();
  ReducedGraph red = contract_grid(g);
  std::map<int, PseudoBooleanPolynomial> lines = line_current_polynomials(g, red);

  CHECK(lines.size() == static_cast<std::size_t>(g.net.num_edges()));
  for (const auto& [e, poly] : lines) CHECK(poly.degree() <= 2);

  std::vector<SpanningTree> trees = enumerate_spanning_trees(red.net);
  CHECK(trees.size() == 5);
  for (const SpanningTree& rt : trees) {
    TreeBitstring y = encode(red.net, rt);
    // Open switches carry nothing.
    for (int s = 0; s < red.net.num_edges(); ++s)
      if (!rt.contains_edge(s))
        CHECK(lines.at(red.switch_of_edge[s]).evaluate_index(y.to_index()) == 0.0);

    // Physical flows on the configured grid tree.
    std::vector<int> closed;
    for (int s : rt.edge_ids) closed.push_back(red.switch_of_edge[s]);
    std::vector<int> grid_edges;
    for (const Edge& e : g.net.edges)
      if (!g.net.switchable[e.id]) grid_edges.push_back(e.id);
    grid_edges.insert(grid_edges.end(), closed.begin(), closed.end());
    SpanningTree gt = make_spanning_tree(g.net, grid_edges);
    for (int e : gt.edge_ids) {
      double physical = edge_flow(g.net, gt, e);
      double symbolic = lines.at(e).evaluate_index(y.to_index());
      CHECK(std::abs(std::abs(symbolic) - std::abs(physical)) < 1e-9);
    }
  }
}

TEST_CASE("leaf bus inside a super-node has a constant current") {
  // Bus 2 hangs off bus 1 by a fixed line; reconfiguration cannot touch it.
  GridInstance g;
  g.net = make_network(4, 0, {{1, 2}, {0, 1}, {0, 3}, {3, 1}}, {-6, 1, 2, 3});
  g.net.switchable = {0, 1, 1, 1};
  g.net.resistance = {1.0, 0.0, 0.0, 0.0};
  ReducedGraph red = contract_grid(g);
  std::map<int, PseudoBooleanPolynomial> lines = line_current_polynomials(g, red);
  CHECK(lines.at(0).degree() == 0);
  CHECK(std::abs(lines.at(0).constant()) == 2.0);  // bus 2's injection
}

TEST_CASE("reconfiguration cost equals the physical loss everywhere") {
  GridInstance g = nine_bus_grid();
  ReducedGraph red = contract_grid(g);
  PseudoBooleanPolynomial cost = reconfig_cost_polynomial(g, red);
  CHECK(cost.degree() <= 4);
  CHECK(cost.degree() == 4);

  for (const SpanningTree& rt : enumerate_spanning_trees(red.net)) {
    TreeBitstring y = encode(red.net, rt);
    std::vector<int> closed;
    for (int s : rt.edge_ids) closed.push_back(red.switch_of_edge[s]);
    double physical = direct_loss(g, closed);
    double symbolic = cost.evaluate_index(y.to_index());
    CHECK(symbolic == doctest::Approx(physical).epsilon(1e-9));
  }
}

TEST_CASE("all-switchable grid with switch resistances is plain dissipation") {
  GridInstance g{fixtures::triangle()};
  g.net.resistance = {1.0, 1.0, 10.0};
  ReducedGraph red = contract_grid(g);
  PseudoBooleanPolynomial reconfig = reconfig_cost_polynomial(g, red);
  // The reduced network carries the resistances as dissipation constants.
  CHECK(reconfig == cost_polynomial(red.net));
  CHECK(reconfig.evaluate_index(TreeBitstring::from_string("110100").to_index()) == 13.0);
}

TEST_CASE("zero injections give a zero cost polynomial") {
  GridInstance g = nine_bus_grid();
  g.net.injection.assign(9, 0.0);
  PseudoBooleanPolynomial cost = reconfig_cost_polynomial(g);
  CHECK(cost.num_terms() == 0);
}

TEST_CASE("resistive switches can be pre-split, preserving losses") {
  GridInstance g = nine_bus_grid();
  g.net.resistance[6] = 2.0;  // make switch s1 resistive
  GridInstance split = split_resistive_switches(g);
  CHECK(split.net.num_nodes == 10);
  CHECK(split.net.num_edges() == 11);

  ReducedGraph red_g = contract_grid(g);
  ReducedGraph red_s = contract_grid(split);
  PseudoBooleanPolynomial cost_g = reconfig_cost_polynomial(g, red_g);
  PseudoBooleanPolynomial cost_s = reconfig_cost_polynomial(split, red_s);
  // Same number of configurations, identical losses configuration by
  // configuration (the midpoint bus rides along with one side).
  std::vector<SpanningTree> trees_g = enumerate_spanning_trees(red_g.net);
  std::vector<SpanningTree> trees_s = enumerate_spanning_trees(red_s.net);
  REQUIRE(trees_g.size() == trees_s.size());
  std::multiset<double> losses_g, losses_s;
  for (const auto& t : trees_g)
    losses_g.insert(cost_g.evaluate_index(encode(red_g.net, t).to_index()));
  for (const auto& t : trees_s)
    losses_s.insert(cost_s.evaluate_index(encode(red_s.net, t).to_index()));
  auto ig = losses_g.begin();
  for (double ls : losses_s) CHECK(ls == doctest::Approx(*ig++).epsilon(1e-9));
}
