#include "mdst/encoding.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "mdst/instances.hpp"

using namespace mdst;

TEST_CASE("flatten index layout") {
  CHECK(flatten_index(0, 1, 3) == 0);
  CHECK(flatten_index(1, 2, 3) == 3);
  CHECK(flatten_index(2, 2, 3) == 5);
  CHECK_THROWS_AS(flatten_index(0, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(flatten_index(0, 3, 3), std::invalid_argument);
}

TEST_CASE("node ranks shift around a non-zero root") {
  FlowNetwork net = make_network(4, 2, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(node_rank(net, 0) == 1);
  CHECK(node_rank(net, 1) == 2);
  CHECK(node_rank(net, 3) == 3);
  CHECK_THROWS_AS(node_rank(net, 2), std::invalid_argument);
  for (int r = 1; r <= 3; ++r) CHECK(node_rank(net, rank_to_node(net, r)) == r);
}

TEST_CASE("encode the triangle trees") {
  FlowNetwork net = fixtures::triangle();
  CHECK(encode(net, make_spanning_tree(net, {0, 1})).to_string() == "110100");
  CHECK(encode(net, make_spanning_tree(net, {1, 2})).to_string() == "001011");
  CHECK(encode(net, make_spanning_tree(net, {0, 2})).to_string() == "100001");

  FlowNetwork single = make_network(2, 0, {{0, 1}}, {-1, 1}, {1});
  CHECK(encode(single, make_spanning_tree(single, {0})).to_string() == "1");
}

TEST_CASE("decode inverts encode and reports reasons") {
  FlowNetwork net = fixtures::triangle();
  DecodeResult d = decode(TreeBitstring::from_string("110100"), net);
  REQUIRE(d.feasible());
  CHECK(d.tree->edge_ids == std::vector<int>{0, 1});

  DecodeResult zero = decode(TreeBitstring::from_string("000000"), net);
  CHECK(!zero.feasible());
  CHECK(*zero.reason == InfeasibleReason::WrongEdgeCount);

  CHECK_THROWS_AS(decode(TreeBitstring::from_string("1101"), net), std::invalid_argument);

  int feasible = 0;
  for (std::uint64_t idx = 0; idx < 64; ++idx)
    if (decode(TreeBitstring::from_index(idx, 6), net).feasible()) ++feasible;
  CHECK(feasible == 3);
}

TEST_CASE("round trip across graphs") {
  for (const FlowNetwork& net :
       {fixtures::triangle(), fixtures::square_with_root_tail(), random_instance(7, 2, 0.3, 11),
        make_network(4, 1, {{0, 1}, {0, 1}, {1, 2}, {1, 3}, {2, 3}})}) {
    for (const SpanningTree& t : enumerate_spanning_trees(net)) {
      DecodeResult d = decode(encode(net, t), net);
      REQUIRE(d.feasible());
      CHECK(d.tree->edge_ids == t.edge_ids);
      CHECK(d.tree->parent_edge == t.parent_edge);
    }
  }
}

TEST_CASE("feasible count identity by full scan") {
  for (const FlowNetwork& net :
       {fixtures::triangle(), make_network(4, 0, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})}) {
    int m = num_variables(net);
    REQUIRE(m <= 20);
    std::uint64_t feasible = 0;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << m); ++idx)
      if (decode(TreeBitstring::from_index(idx, m), net).feasible()) ++feasible;
    CHECK(feasible == spanning_tree_count(net));
    CHECK(feasible == enumerate_spanning_trees(net).size());
  }
}

TEST_CASE("edge flows sum downward injections") {
  FlowNetwork net = fixtures::triangle();
  SpanningTree t = make_spanning_tree(net, {0, 1});
  CHECK(edge_flow(net, t, 0) == 3.0);
  CHECK(edge_flow(net, t, 1) == 2.0);
  CHECK_THROWS_AS(edge_flow(net, t, 2), std::invalid_argument);

  FlowNetwork calm = make_network(3, 0, {{0, 1}, {1, 2}, {0, 2}}, {0, 0, 0}, {1, 1, 1});
  SpanningTree ct = make_spanning_tree(calm, {0, 1});
  CHECK(edge_flow(calm, ct, 0) == 0.0);
  CHECK(edge_flow(calm, ct, 1) == 0.0);

  // A leaf edge carries exactly its single downward injection.
  CHECK(edge_flow(net, make_spanning_tree(net, {0, 2}), 0) == net.injection[1]);
}

TEST_CASE("tree incidence from the bitstring") {
  FlowNetwork net = fixtures::triangle();
  IncidenceMatrix base = incidence_matrix(net, orient_low_to_high(net));
  TreeBitstring y = TreeBitstring::from_string("110100");
  IncidenceMatrix inc = tree_incidence(net, y, base);

  for (int n = 0; n < 3; ++n) CHECK(inc.at(n, 2) == 0);  // inactive column
  CHECK(inc.at(1, 1) == -1);  // e1 oriented (1, 2)
  CHECK(inc.at(2, 1) == 1);
  CHECK(inc.at(0, 0) == -1);
  CHECK(inc.at(1, 0) == 1);

  CHECK_THROWS_AS(tree_incidence(net, TreeBitstring::from_string("000000"), base),
                  std::invalid_argument);
}

TEST_CASE("tree incidence is independent of the base orientation") {
  FlowNetwork net = fixtures::triangle();
  Orientation o = orient_low_to_high(net);
  IncidenceMatrix base = incidence_matrix(net, o);
  for (const SpanningTree& t : enumerate_spanning_trees(net)) {
    TreeBitstring y = encode(net, t);
    IncidenceMatrix ref = tree_incidence(net, y, base);
    for (int flip = 0; flip < 3; ++flip) {
      Orientation alt = o;
      alt.reversed[flip] = !alt.reversed[flip];
      IncidenceMatrix got = tree_incidence(net, y, incidence_matrix(net, alt));
      CHECK(got.m == ref.m);
    }
  }
}

TEST_CASE("Kirchhoff consistency of the tree incidence") {
  for (const FlowNetwork& net :
       {fixtures::triangle(), fixtures::square_with_root_tail(), random_instance(6, 2, 0.4, 3)}) {
    IncidenceMatrix base = incidence_matrix(net, orient_low_to_high(net));
    for (const SpanningTree& t : enumerate_spanning_trees(net)) {
      IncidenceMatrix inc = tree_incidence(net, encode(net, t), base);
      for (int n = 0; n < net.num_nodes; ++n) {
        if (n == net.root) continue;
        double balance = 0.0;
        for (int e : t.edge_ids) balance += inc.at(n, e) * edge_flow(net, t, e);
        CHECK(balance == doctest::Approx(net.injection[n]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bitstring rendering conventions") {
  TreeBitstring y = TreeBitstring::from_string("110100");
  CHECK(y.to_index() == 0b110100);
  CHECK(TreeBitstring::from_index(0b110100, 6) == y);
  CHECK_THROWS_AS(TreeBitstring::from_string("12"), ValidationError);
}
