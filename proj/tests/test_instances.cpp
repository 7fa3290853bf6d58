#include "mdst/instances.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "mdst/cost.hpp"

using namespace mdst;

TEST_CASE("partition reduction structure") {
  PartitionReduction red = partition_to_mdst({{1, 3, 5, 6, 9}});
  CHECK(red.net.num_nodes == 8);
  CHECK(red.net.injection[red.node_x] == -24.0);
  CHECK(red.threshold == 288);
  CHECK(red.net.num_edges() == 2 + 2 * 5);
  CHECK(red.net.alpha[0] == 1.0);
  CHECK(red.net.alpha[1] == 1.0);
  for (int e = 2; e < red.net.num_edges(); ++e) CHECK(red.net.alpha[e] == 0.0);

  CHECK_THROWS_AS(partition_to_mdst({{5}}), ValidationError);
  CHECK_THROWS_AS(partition_to_mdst({{3, -1}}), ValidationError);
}

TEST_CASE("partition reduction optimum values") {
  {
    PartitionReduction red = partition_to_mdst({{1, 1}});
    CHECK(red.threshold == 2);
    CHECK(brute_force_mdst(red.net).cost == 2.0);  // the balanced split exists
  }
  {
    PartitionReduction red = partition_to_mdst({{1, 2}});
    CHECK(red.threshold == 4);
    CHECK(brute_force_mdst(red.net).cost == 5.0);  // best split is 1 vs 2
  }
  {
    PartitionReduction red = partition_to_mdst({{1, 3, 5, 6, 9}});
    CHECK(brute_force_mdst(red.net).cost == 288.0);  // {1,5,6} vs {3,9}
  }
}

TEST_CASE("partition equivalence against the subset-sum oracle") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 40) {
    int size = 2 + static_cast<int>(rng() % 4);
    PartitionInstance p;
    long long total = 0;
    for (int i = 0; i < size; ++i) {
      long long v = 1 + static_cast<long long>(rng() % 7);
      p.values.push_back(v);
      total += v;
    }
    if (total > 30) continue;
    ++checked;
    PartitionReduction red = partition_to_mdst(p);
    bool low_cost = brute_force_mdst(red.net).cost <= static_cast<double>(red.threshold);
    CHECK(low_cost == equal_sum_partition_exists(p));
  }
}

TEST_CASE("set cover reduction structure and balance") {
  SetCoverInstance sc{2, {{0, 1}, {1}}};
  SetCoverReduction red = setcover_to_mdst(sc);
  CHECK(red.net.num_nodes == 4 + 4 + 2);
  CHECK(red.net.injection[red.node_y] == -4.0);
  CHECK(red.net.injection[red.node_z] == -16.0);
  double sum = 0;
  for (double f : red.net.injection) sum += f;
  CHECK(sum == 0.0);
  // Alpha is 1 exactly on edges incident to y.
  for (const Edge& e : red.net.edges)
    CHECK(red.net.alpha[e.id] == (e.incident(red.node_y) ? 1.0 : 0.0));

  CHECK_THROWS_AS(setcover_to_mdst({2, {{0}}}), ValidationError);  // element 1 uncovered
  CHECK_THROWS_AS(setcover_to_mdst({0, {}}), ValidationError);
}

TEST_CASE("backward mapping returns valid covers, singleton case included") {
  SetCoverInstance sc{2, {{0, 1}, {1}}};
  SetCoverReduction red = setcover_to_mdst(sc);
  BruteForceResult best = brute_force_mdst(red.net);
  std::vector<int> cover = cover_from_tree(red, best.tree);
  CHECK(cover == std::vector<int>{0});  // the full subset alone

  for (const SpanningTree& t : enumerate_spanning_trees(red.net)) {
    std::vector<int> c = cover_from_tree(red, t);
    std::set<int> covered;
    for (int i : c)
      for (int u : sc.subsets[i]) covered.insert(u);
    CHECK(covered.size() == static_cast<std::size_t>(sc.universe_size));
  }
}

TEST_CASE("set cover bounds on a desk instance") {
  SetCoverInstance sc{2, {{0}, {1}}};
  SetCoverReduction red = setcover_to_mdst(sc);
  int mu = 2;
  int opt = optimal_cover_size(sc);
  CHECK(opt == 2);
  double opt_mdst = brute_force_mdst(red.net).cost;
  CHECK(opt_mdst <= 2.0 * mu * mu * opt * opt);  // upper bound

  for (const SpanningTree& t : enumerate_spanning_trees(red.net)) {
    // Lower bound: cost >= (pass-through count)^2.
    int passthrough = 0;
    std::vector<int> degree(red.net.num_nodes, 0);
    for (int e : t.edge_ids) {
      ++degree[red.net.edges[e].a];
      ++degree[red.net.edges[e].b];
    }
    for (const auto& copy : red.subset_node)
      for (int node : copy) passthrough += degree[node] >= 2;
    double cost = tree_cost(red.net, t);
    CHECK(cost >= static_cast<double>(passthrough) * passthrough);
    // Solution-quality transfer.
    double rho = cost / opt_mdst;
    CHECK(static_cast<double>(cover_from_tree(red, t).size()) <=
          std::sqrt(2.0 * rho) * opt + 1e-9);
  }
}

TEST_CASE("random instances are seeded, balanced, and connected") {
  FlowNetwork a = random_instance(14, 2, 0.2, 99);
  FlowNetwork b = random_instance(14, 2, 0.2, 99);
  CHECK(a.num_nodes == b.num_nodes);
  CHECK(a.num_edges() == b.num_edges());
  for (int e = 0; e < a.num_edges(); ++e) {
    CHECK(a.edges[e].a == b.edges[e].a);
    CHECK(a.edges[e].b == b.edges[e].b);
    CHECK(a.alpha[e] == b.alpha[e]);
  }
  CHECK(a.injection == b.injection);
  CHECK(a.is_connected());
  CHECK(a.num_edges() >= 14);  // ring plus any shortcuts
  double sum = 0;
  for (double f : a.injection) sum += f;
  CHECK(sum == 0.0);
  for (int e = 0; e < a.num_edges(); ++e) {
    CHECK(a.alpha[e] >= 1.0);
    CHECK(a.alpha[e] <= 5.0);
  }
  a.validate();

  CHECK_THROWS_AS(random_instance(2, 2, 0.2, 1), ValidationError);
  CHECK_THROWS_AS(random_instance(5, 3, 0.2, 1), ValidationError);
}

TEST_CASE("instance json round trip") {
  FlowNetwork net = fixtures::triangle();
  net.switchable[2] = 0;
  net.resistance[1] = 2.5;
  std::string text = instance_to_json(net, 1234);
  std::optional<long long> threshold;
  FlowNetwork back = instance_from_json(text, &threshold);
  CHECK(back.num_nodes == net.num_nodes);
  CHECK(back.root == net.root);
  CHECK(back.injection == net.injection);
  CHECK(back.alpha == net.alpha);
  CHECK(back.resistance == net.resistance);
  CHECK(back.switchable == net.switchable);
  REQUIRE(threshold.has_value());
  CHECK(*threshold == 1234);

  // Missing fields are named in the error.
  std::string broken = R"({"version":1,"root":0,"nodes":[{"id":0}],"edges":[]})";
  try {
    instance_from_json(broken);
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("injection") != std::string::npos);
  }
}

TEST_CASE("save and load through the filesystem") {
  PartitionReduction red = partition_to_mdst({{1, 3, 5, 6, 9}});
  std::string path = "/tmp/mdst_test_instance.json";
  save_instance(red.net, path, red.threshold);
  std::optional<long long> threshold;
  FlowNetwork back = load_instance(path, &threshold);
  CHECK(back.num_nodes == red.net.num_nodes);
  REQUIRE(threshold.has_value());
  CHECK(*threshold == red.threshold);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_instance("/tmp/definitely_missing_file.json"), ValidationError);
}
