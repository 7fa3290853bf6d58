#include "mdst/instances.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mdst {

void PartitionInstance::validate() const {
  if (values.size() < 2) throw ValidationError("partition: need at least two elements");
  for (long long v : values)
    if (v <= 0) throw ValidationError("partition: elements must be positive");
}

long long PartitionInstance::total() const {
  return std::accumulate(values.begin(), values.end(), 0ll);
}

PartitionReduction partition_to_mdst(const PartitionInstance& p) {
  p.validate();
  long long q = p.total();

  PartitionReduction red;
  int n = 3 + static_cast<int>(p.values.size());
  std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}};
  std::vector<double> alpha{1.0, 1.0};
  std::vector<double> inj(n, 0.0);
  inj[0] = -static_cast<double>(q);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    int vnode = 3 + static_cast<int>(i);
    red.value_nodes.push_back(vnode);
    inj[vnode] = static_cast<double>(p.values[i]);
    edges.push_back({1, vnode});
    alpha.push_back(0.0);
    edges.push_back({2, vnode});
    alpha.push_back(0.0);
  }
  red.net = make_network(n, 0, edges, inj, alpha);
  red.threshold = q * q / 2;  // floor, q^2 >= 0
  red.net.validate();
  return red;
}

bool equal_sum_partition_exists(const PartitionInstance& p) {
  long long q = p.total();
  if (q % 2 != 0) return false;
  // Subset-sum over proper nonempty subsets; |S| >= 2 makes any subset with
  // sum q/2 > 0 automatically proper and nonempty.
  std::set<long long> sums{0};
  for (long long v : p.values) {
    std::set<long long> next = sums;
    for (long long s : sums)
      if (s + v <= q / 2) next.insert(s + v);
    sums = std::move(next);
  }
  return sums.count(q / 2) > 0;
}

void SetCoverInstance::validate() const {
  if (universe_size < 1) throw ValidationError("set cover: empty universe");
  if (subsets.empty()) throw ValidationError("set cover: no subsets");
  std::vector<char> covered(universe_size, 0);
  for (const auto& s : subsets)
    for (int u : s) {
      if (u < 0 || u >= universe_size) throw ValidationError("set cover: element out of range");
      covered[u] = 1;
    }
  for (char c : covered)
    if (!c) throw ValidationError("set cover: an element is uncovered by every subset");
}

SetCoverReduction setcover_to_mdst(const SetCoverInstance& sc) {
  sc.validate();
  int nu = sc.universe_size;
  int mu = static_cast<int>(sc.subsets.size());

  SetCoverReduction red;
  int next = 2;
  red.subset_node.assign(mu, std::vector<int>(mu));
  red.element_node.assign(mu, std::vector<int>(nu));
  for (int l = 0; l < mu; ++l)
    for (int i = 0; i < mu; ++i) red.subset_node[l][i] = next++;
  for (int l = 0; l < mu; ++l)
    for (int j = 0; j < nu; ++j) red.element_node[l][j] = next++;

  std::vector<double> inj(next, 0.0);
  double mu2 = static_cast<double>(mu) * mu;
  inj[0] = -mu2;
  inj[1] = -static_cast<double>(nu) * mu * mu * mu;
  for (int l = 0; l < mu; ++l) {
    for (int i = 0; i < mu; ++i) inj[red.subset_node[l][i]] = 1.0;
    for (int j = 0; j < nu; ++j) inj[red.element_node[l][j]] = mu2;
  }

  std::vector<std::pair<int, int>> edges{{0, 1}};
  std::vector<double> alpha{1.0};  // {y,z} is incident to y
  for (int l = 0; l < mu; ++l)
    for (int i = 0; i < mu; ++i) {
      edges.push_back({0, red.subset_node[l][i]});
      alpha.push_back(1.0);
      edges.push_back({1, red.subset_node[l][i]});
      alpha.push_back(0.0);
    }
  for (int l = 0; l < mu; ++l)
    for (int i = 0; i < mu; ++i)
      for (int j : sc.subsets[i]) {
        edges.push_back({red.subset_node[l][i], red.element_node[l][j]});
        alpha.push_back(0.0);
      }

  red.net = make_network(next, 0, edges, inj, alpha);
  red.net.validate();
  return red;
}

std::vector<int> cover_from_tree(const SetCoverReduction& red, const SpanningTree& tree) {
  if (static_cast<int>(tree.edge_ids.size()) != red.net.num_nodes - 1)
    throw std::invalid_argument("cover_from_tree: not a spanning tree");
  int mu = static_cast<int>(red.subset_node.size());

  std::vector<int> degree(red.net.num_nodes, 0);
  for (int e : tree.edge_ids) {
    ++degree[red.net.edges[e].a];
    ++degree[red.net.edges[e].b];
  }

  int best_l = 0, best_count = mu + 1;
  for (int l = 0; l < mu; ++l) {
    int count = 0;
    for (int i = 0; i < mu; ++i)
      if (degree[red.subset_node[l][i]] >= 2) ++count;
    if (count < best_count) {
      best_count = count;
      best_l = l;
    }
  }
  std::vector<int> cover;
  for (int i = 0; i < mu; ++i)
    if (degree[red.subset_node[best_l][i]] >= 2) cover.push_back(i);
  return cover;
}

int optimal_cover_size(const SetCoverInstance& sc) {
  int mu = static_cast<int>(sc.subsets.size());
  int best = mu + 1;
  for (std::uint32_t mask = 1; mask < (1u << mu); ++mask) {
    std::vector<char> covered(sc.universe_size, 0);
    for (int i = 0; i < mu; ++i)
      if ((mask >> i) & 1u)
        for (int u : sc.subsets[i]) covered[u] = 1;
    if (std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; }))
      best = std::min(best, __builtin_popcount(mask));
  }
  return best;
}

FlowNetwork random_instance(int n, int k, double p, std::uint64_t seed) {
  if (n < 3) throw ValidationError("random instance: need at least three nodes");
  if (k < 2 || k % 2 != 0) throw ValidationError("random instance: ring degree must be even, >= 2");
  if (p < 0.0 || p > 1.0) throw ValidationError("random instance: shortcut probability in [0,1]");

  std::mt19937_64 rng(seed);
  auto uniform_int = [&](long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  auto uniform01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::set<std::pair<int, int>> present;
    std::vector<std::pair<int, int>> edges;
    auto add = [&](int a, int b) {
      auto key = std::minmax(a, b);
      if (a == b || present.count({key.first, key.second})) return false;
      present.insert({key.first, key.second});
      edges.push_back({key.first, key.second});
      return true;
    };
    std::vector<std::pair<int, int>> ring;
    for (int d = 1; d <= k / 2; ++d)
      for (int i = 0; i < n; ++i)
        if (add(i, (i + d) % n)) ring.push_back({i, (i + d) % n});
    // Newman-Watts shortcuts: per ring edge, add (never rewire) a random
    // chord with probability p.
    for (auto [a, b] : ring) {
      if (uniform01() >= p) continue;
      for (int tries = 0; tries < 4 * n; ++tries) {
        int w = static_cast<int>(uniform_int(0, n - 1));
        if (add(a, w)) break;
      }
    }

    std::vector<double> inj(n, 0.0);
    double balance = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == 0) continue;
      inj[i] = static_cast<double>(uniform_int(-10, 10));
      balance += inj[i];
    }
    inj[0] = -balance;
    std::vector<double> alpha;
    for (std::size_t e = 0; e < edges.size(); ++e)
      alpha.push_back(static_cast<double>(uniform_int(1, 5)));

    FlowNetwork net = make_network(n, 0, edges, inj, alpha);
    if (net.is_connected()) return net;  // guard; the ring alone connects
  }
  throw ValidationError("random instance: failed to draw a connected graph");
}

std::string instance_to_json(const FlowNetwork& net, std::optional<long long> threshold) {
  nlohmann::json j;
  j["version"] = 1;
  j["root"] = net.root;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (int n = 0; n < net.num_nodes; ++n)
    nodes.push_back({{"id", n}, {"injection", net.injection[n]}});
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const Edge& e : net.edges) {
    nlohmann::json je{{"id", e.id}, {"a", e.a}, {"b", e.b}, {"alpha", net.alpha[e.id]}};
    if (net.resistance[e.id] != 0.0) je["resistance"] = net.resistance[e.id];
    if (!net.switchable[e.id]) je["switchable"] = false;
    edges.push_back(je);
  }
  if (threshold) j["threshold"] = *threshold;
  return j.dump(2);
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* field, const std::string& at) {
  if (!j.contains(field))
    throw ValidationError("instance json: missing field '" + std::string(field) + "' at " + at);
  return j.at(field);
}

}  // namespace

FlowNetwork instance_from_json(const std::string& text, std::optional<long long>* threshold) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance json: ") + e.what());
  }

  FlowNetwork net;
  const auto& nodes = require(j, "nodes", "instance");
  net.num_nodes = static_cast<int>(nodes.size());
  net.injection.assign(net.num_nodes, 0.0);
  std::vector<char> seen(net.num_nodes, 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = "nodes[" + std::to_string(i) + "]";
    int id = require(nodes[i], "id", at).get<int>();
    if (id < 0 || id >= net.num_nodes || seen[id])
      throw ValidationError("instance json: node ids must be dense and unique");
    seen[id] = 1;
    net.injection[id] = require(nodes[i], "injection", at).get<double>();
  }
  net.root = require(j, "root", "instance").get<int>();

  const auto& edges = require(j, "edges", "instance");
  int m = static_cast<int>(edges.size());
  net.edges.resize(m);
  net.alpha.assign(m, 0.0);
  net.resistance.assign(m, 0.0);
  net.switchable.assign(m, 1);
  std::vector<char> eseen(m, 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = "edges[" + std::to_string(i) + "]";
    int id = require(edges[i], "id", at).get<int>();
    if (id < 0 || id >= m || eseen[id])
      throw ValidationError("instance json: edge ids must be dense and unique");
    eseen[id] = 1;
    net.edges[id] = {id, require(edges[i], "a", at).get<int>(),
                     require(edges[i], "b", at).get<int>()};
    net.alpha[id] = require(edges[i], "alpha", at).get<double>();
    if (edges[i].contains("resistance")) net.resistance[id] = edges[i]["resistance"].get<double>();
    if (edges[i].contains("switchable")) net.switchable[id] = edges[i]["switchable"].get<bool>();
  }

  if (threshold) {
    *threshold = std::nullopt;
    if (j.contains("threshold")) *threshold = j["threshold"].get<long long>();
  }
  net.validate();
  return net;
}

void save_instance(const FlowNetwork& net, const std::string& path,
                   std::optional<long long> threshold) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << instance_to_json(net, threshold) << '\n';
}

FlowNetwork load_instance(const std::string& path, std::optional<long long>* threshold) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str(), threshold);
}

}  // namespace mdst
