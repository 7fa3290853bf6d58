#include "mdst/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdst/circuit.hpp"
#include "mdst/cost.hpp"
#include "mdst/grid.hpp"
#include "mdst/instances.hpp"
#include "mdst/moves.hpp"
#include "mdst/qsim.hpp"

namespace mdst::cli {

namespace {

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  return v ? std::atoi(v) : fallback;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << content;
}

double number_text(double x, std::string& buf) {
  char tmp[64];
  std::snprintf(tmp, sizeof(tmp), "%.17g", x);
  buf = tmp;
  return x;
}

std::string format_number(double x) {
  std::string s;
  number_text(x, s);
  return s;
}

MixerStrategy parse_strategy(const std::string& s) {
  if (s == "random") return MixerStrategy::Random;
  if (s == "walk") return MixerStrategy::HamiltonianWalk;
  if (s == "tree") return MixerStrategy::SpanningTree;
  throw ValidationError("unknown mixer order strategy: " + s);
}

QaoaProblem prepare_qaoa(const FlowNetwork& net, const std::string& variant,
                         const std::string& lambda_text, const std::string& init_instance_path,
                         const std::string& initial_bits, const std::string& order_strategy,
                         std::uint64_t mixer_seed, int qubit_cap) {
  if (variant == "lr") {
    PseudoBooleanPolynomial pubo = lambda_text == "auto"
                                       ? build_pubo(net, AutoLambda{})
                                       : build_pubo(net, std::stod(lambda_text));
    return make_penalty_qaoa(net, pubo, qubit_cap);
  }
  if (variant != "revlr") throw ValidationError("variant must be lr or revlr");

  if (init_instance_path.empty())
    throw ValidationError("revlr needs --init-instance (a solvable instance on the same graph)");
  FlowNetwork init_net = load_instance(init_instance_path);
  if (init_net.num_nodes != net.num_nodes || init_net.num_edges() != net.num_edges())
    throw ValidationError("init instance must share the problem topology");

  TreeBitstring initial = initial_bits.empty() ? brute_force_mdst(init_net).bits
                                               : TreeBitstring::from_string(initial_bits);
  if (!decode(initial, net).feasible()) throw ValidationError("initial state must be feasible");

  TreeAdjacencyGraph g = build_tree_adjacency_graph(net);
  int start = 0;
  for (int i = 0; i < g.num_trees(); ++i)
    if (g.bitstrings[i] == initial) start = i;
  MixerOrder order = build_mixer_order(g, parse_strategy(order_strategy), mixer_seed, start);
  return make_feasible_qaoa(net, init_net, initial, order.swaps, qubit_cap);
}

int cmd_solve(const std::string& path, const std::string& out_path, std::ostream& out) {
  FlowNetwork net = load_instance(path);
  BruteForceResult res = brute_force_mdst(net);
  out << "optimal " << res.bits.to_string() << " cost " << format_number(res.cost) << "\n";
  if (!out_path.empty()) {
    nlohmann::json j;
    j["optimal"] = res.bits.to_string();
    j["cost"] = res.cost;
    j["tree_edges"] = res.tree.edge_ids;
    auto& all = j["all_optima"] = nlohmann::json::array();
    for (const TreeBitstring& b : res.all_optima) all.push_back(b.to_string());
    write_file(out_path, j.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spanning-tree dissipation optimizer: brute force, QAOA simulation, "
               "feasibility-preserving mixers, reductions, grids"};
  app.require_subcommand(1);
  int qubit_cap = env_int("MDST_QUBIT_CAP", kDefaultQubitCap);
  int jobs = env_int("MDST_JOBS", 1);

  // solve
  std::string in_path, out_path;
  auto* solve = app.add_subcommand("solve", "Brute-force optimum of an instance");
  solve->add_option("instance", in_path)->required();
  solve->add_option("-o,--out", out_path);

  // qaoa
  std::string q_in, q_variant = "lr", q_lambda = "auto", q_init, q_initial, q_order = "tree";
  std::string q_out, q_hist;
  double q_ta = 1.0;
  int q_layers = 100;
  std::uint64_t q_shots = 0, q_seed = 1, q_mixer_seed = 0;
  auto* qaoa = app.add_subcommand("qaoa", "Scheduled QAOA on a statevector simulator");
  qaoa->add_option("instance", q_in)->required();
  qaoa->add_option("--variant", q_variant, "lr | revlr");
  qaoa->add_option("--T_A", q_ta, "annealing time")->check(CLI::PositiveNumber);
  qaoa->add_option("--K", q_layers, "layers")->check(CLI::PositiveNumber);
  qaoa->add_option("--lambda", q_lambda, "penalty weight or 'auto' (lr)");
  qaoa->add_option("--init-instance", q_init, "instance whose optimum seeds revlr");
  qaoa->add_option("--initial", q_initial, "initial feasible bitstring (revlr)");
  qaoa->add_option("--mixer-order", q_order, "random | walk | tree");
  qaoa->add_option("--mixer-seed", q_mixer_seed);
  qaoa->add_option("--shots", q_shots, "also sample a histogram");
  qaoa->add_option("--seed", q_seed, "sampling seed");
  qaoa->add_option("--out", q_out, "metrics JSON path");
  qaoa->add_option("--hist", q_hist, "histogram CSV path");

  // gridsearch
  std::string g_in, g_variant = "lr", g_lambda = "auto", g_init, g_initial, g_order = "tree";
  std::string g_metric = "ratio", g_out;
  std::vector<int> g_layers{10, 50, 100, 200};
  double g_lo = 0.01, g_hi = 1.5;
  int g_count = 1000;
  std::uint64_t g_mixer_seed = 0;
  auto* grid = app.add_subcommand("gridsearch", "Hyperparameter grid over (K, T_A)");
  grid->add_option("instance", g_in)->required();
  grid->add_option("--variant", g_variant);
  grid->add_option("--K", g_layers, "layer counts (repeat or comma-separate)")->delimiter(',');
  grid->add_option("--ta-lo", g_lo)->check(CLI::PositiveNumber);
  grid->add_option("--ta-hi", g_hi)->check(CLI::PositiveNumber);
  grid->add_option("--ta-count", g_count)->check(CLI::PositiveNumber);
  grid->add_option("--metric", g_metric, "fidelity | ratio");
  grid->add_option("--lambda", g_lambda);
  grid->add_option("--init-instance", g_init);
  grid->add_option("--initial", g_initial);
  grid->add_option("--mixer-order", g_order);
  grid->add_option("--mixer-seed", g_mixer_seed);
  grid->add_option("--jobs", jobs);
  grid->add_option("--out", g_out);

  // mixer-check
  std::string m_in, m_order = "tree";
  int m_betas = 10;
  std::uint64_t m_seed = 7;
  auto* mixer = app.add_subcommand("mixer-check", "Feasible-subspace preservation report");
  mixer->add_option("instance", m_in)->required();
  mixer->add_option("--betas", m_betas, "number of random angles");
  mixer->add_option("--seed", m_seed);
  mixer->add_option("--mixer-order", m_order);

  // resources
  std::string r_in;
  int r_edges = 0, r_nodes = 0;
  auto* resources = app.add_subcommand("resources", "Mixer gate counts vs the closed form");
  resources->add_option("--edges", r_edges);
  resources->add_option("--nodes", r_nodes);
  resources->add_option("--instance", r_in, "count an actual general-construction mixer");

  // reduce
  std::string d_in, d_out, d_map;
  bool d_grid = false, d_degree2 = false;
  auto* reduce = app.add_subcommand("reduce", "Grid contraction and degree-2 reduction");
  reduce->add_option("instance", d_in)->required();
  reduce->add_flag("--grid", d_grid, "contract non-switchable components");
  reduce->add_flag("--degree2", d_degree2, "strip pendant nodes");
  reduce->add_option("-o,--out", d_out)->required();
  reduce->add_option("--map", d_map, "write the contraction map JSON");

  // gen
  std::string n_kind, n_set, n_subsets, n_out;
  int n_n = 8, n_k = 2, n_universe = 0;
  double n_p = 0.2;
  std::uint64_t n_seed = 1;
  auto* gen = app.add_subcommand("gen", "Instance generators");
  gen->add_option("--kind", n_kind, "nws | partition | setcover")->required();
  gen->add_option("--n", n_n);
  gen->add_option("--k", n_k);
  gen->add_option("--p", n_p);
  gen->add_option("--seed", n_seed);
  gen->add_option("--set", n_set, "comma-separated positive integers");
  gen->add_option("--universe", n_universe);
  gen->add_option("--subsets", n_subsets, "semicolon-separated, comma lists");
  gen->add_option("-o,--out", n_out);

  // export-pubo
  std::string p_in, p_lambda = "auto", p_out;
  auto* pubo = app.add_subcommand("export-pubo", "Cost + penalty polynomial as JSON");
  pubo->add_option("instance", p_in)->required();
  pubo->add_option("--lambda", p_lambda);
  pubo->add_option("-o,--out", p_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(in_path, out_path, out);

    if (qaoa->parsed()) {
      FlowNetwork net = load_instance(q_in);
      QaoaProblem problem = prepare_qaoa(net, q_variant, q_lambda, q_init, q_initial, q_order,
                                         q_mixer_seed, qubit_cap);
      ScheduleVariant variant = q_variant == "lr" ? ScheduleVariant::LR : ScheduleVariant::RevLR;
      RunMetrics metrics = problem.run(make_schedule(variant, q_ta, q_layers));
      out << "final_fidelity " << format_number(metrics.final_layer().fidelity)
          << " final_ratio " << format_number(metrics.final_layer().approx_ratio)
          << " infeasible_mass " << format_number(metrics.infeasible_mass) << "\n";
      if (!q_out.empty()) write_file(q_out, metrics.to_json() + "\n");
      if (!q_hist.empty()) {
        if (q_shots == 0) throw ValidationError("--hist needs --shots");
        // Re-derive the final state for sampling; cheap at desk scale and
        // keeps run_qaoa's interface small.
        QuantumState s = problem.initial;
        Schedule sch = make_schedule(variant, q_ta, q_layers);
        for (int k = 0; k < sch.layers; ++k) {
          auto [beta, gamma] = sch.beta_gamma[k];
          const DiagonalEnergies& phase =
              (variant == ScheduleVariant::RevLR && k < sch.swap_layer()) ? *problem.phase_init
                                                                          : problem.phase;
          apply_cost_phase(s, phase, gamma);
          problem.mixer(s, beta);
        }
        write_file(q_hist, RunMetrics::histogram_csv(sample(s, q_shots, q_seed)));
      }
      return 0;
    }

    if (grid->parsed()) {
      FlowNetwork net = load_instance(g_in);
      QaoaProblem problem = prepare_qaoa(net, g_variant, g_lambda, g_init, g_initial, g_order,
                                         g_mixer_seed, qubit_cap);
      ScheduleVariant variant = g_variant == "lr" ? ScheduleVariant::LR : ScheduleVariant::RevLR;
      auto factory = [&](int layers, double ta) {
        return problem.run(make_schedule(variant, ta, layers));
      };
      GridMetric metric = g_metric == "fidelity" ? GridMetric::Fidelity : GridMetric::ApproxRatio;
      std::vector<GridPoint> points =
          grid_search(factory, g_layers, g_lo, g_hi, g_count, metric, jobs);
      nlohmann::json j = nlohmann::json::array();
      for (const GridPoint& pt : points)
        j.push_back({{"K", pt.layers},
                     {"T_A", pt.annealing_time},
                     {"final_fidelity", pt.final_fidelity},
                     {"final_ratio", pt.final_ratio}});
      if (!g_out.empty()) write_file(g_out, j.dump(2) + "\n");
      const GridPoint& best = points.front();
      out << "best K " << best.layers << " T_A " << format_number(best.annealing_time)
          << " fidelity " << format_number(best.final_fidelity) << " ratio "
          << format_number(best.final_ratio) << "\n";
      return 0;
    }

    if (mixer->parsed()) {
      FlowNetwork net = load_instance(m_in);
      std::vector<std::uint8_t> feasible = feasible_mask(net);
      TreeAdjacencyGraph g = build_tree_adjacency_graph(net);
      MixerOrder order = build_mixer_order(g, parse_strategy(m_order), m_seed, 0);
      std::mt19937_64 rng(m_seed);
      double worst_infeasible = 0.0, worst_reset = 1.0;
      int m = num_variables(net);
      for (int trial = 0; trial < m_betas; ++trial) {
        double beta = 2.0 * M_PI * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        Circuit mixer_circuit = build_full_mixer(net, order.swaps, beta);
        for (int t = 0; t < g.num_trees(); ++t) {
          QuantumState s =
              QuantumState::basis(m, 6, g.bitstrings[t].to_index(), qubit_cap);
          apply_circuit(s, mixer_circuit);
          worst_infeasible = std::max(worst_infeasible, s.infeasible_mass(feasible));
          worst_reset = std::min(worst_reset, s.ancilla_zero_probability());
        }
      }
      bool ok = worst_infeasible < 1e-10 && worst_reset > 1.0 - 1e-10;
      out << (ok ? "PASS" : "FAIL") << " worst_infeasible_mass "
          << format_number(worst_infeasible) << " worst_ancilla_reset "
          << format_number(worst_reset) << "\n";
      return ok ? 0 : 1;
    }

    if (resources->parsed()) {
      if (!r_in.empty()) {
        FlowNetwork net = load_instance(r_in);
        std::vector<EdgeSwap> swaps = enumerate_swaps(net);
        if (swaps.empty()) throw ValidationError("resources: instance has no edge swap");
        Circuit general = build_partial_mixer(net, swaps.front(), 0.3, Construction::General);
        GateCount actual = count_resources(decompose(general));
        GateCount formula = resource_formula(net.num_edges(), net.num_nodes);
        out << "actual singles " << actual.single_qubit << " cnots " << actual.cnot << " qubits "
            << actual.qubits << "\n";
        out << "formula singles " << formula.single_qubit << " cnots " << formula.cnot
            << " qubits " << formula.qubits << "\n";
        out << (actual == formula ? "MATCH" : "MISMATCH") << "\n";
        return actual == formula ? 0 : 1;
      }
      if (r_edges <= 0 || r_nodes <= 0)
        throw ValidationError("resources: give --edges/--nodes or --instance");
      GateCount formula = resource_formula(r_edges, r_nodes);
      out << "formula singles " << formula.single_qubit << " cnots " << formula.cnot << " qubits "
          << formula.qubits << "\n";
      return 0;
    }

    if (reduce->parsed()) {
      if (!d_grid && !d_degree2) throw ValidationError("reduce: pick --grid and/or --degree2");
      FlowNetwork net = load_instance(d_in);
      if (d_grid) {
        GridInstance g{net};
        ReducedGraph red = contract_grid(g);
        if (!d_map.empty()) write_file(d_map, red.contraction_json() + "\n");
        net = red.net;
      }
      if (d_degree2) {
        Degree2Reduction red = degree2_reduce(net);
        out << "offset " << format_number(red.offset) << "\n";
        net = red.net;
      }
      save_instance(net, d_out);
      return 0;
    }

    if (gen->parsed()) {
      FlowNetwork net;
      std::optional<long long> threshold;
      if (n_kind == "nws") {
        net = random_instance(n_n, n_k, n_p, n_seed);
      } else if (n_kind == "partition") {
        PartitionInstance p;
        std::stringstream ss(n_set);
        for (std::string tok; std::getline(ss, tok, ',');) p.values.push_back(std::stoll(tok));
        PartitionReduction red = partition_to_mdst(p);
        net = red.net;
        threshold = red.threshold;
      } else if (n_kind == "setcover") {
        SetCoverInstance sc;
        sc.universe_size = n_universe;
        std::stringstream ss(n_subsets);
        for (std::string group; std::getline(ss, group, ';');) {
          std::vector<int> subset;
          std::stringstream gs(group);
          for (std::string tok; std::getline(gs, tok, ',');)
            if (!tok.empty()) subset.push_back(std::stoi(tok));
          sc.subsets.push_back(subset);
        }
        net = setcover_to_mdst(sc).net;
      } else {
        throw ValidationError("gen: kind must be nws, partition, or setcover");
      }
      std::string text = instance_to_json(net, threshold) + "\n";
      if (n_out.empty())
        out << text;
      else
        write_file(n_out, text);
      if (threshold) out << "threshold " << *threshold << "\n";
      return 0;
    }

    if (pubo->parsed()) {
      FlowNetwork net = load_instance(p_in);
      PseudoBooleanPolynomial poly = p_lambda == "auto" ? build_pubo(net, AutoLambda{})
                                                        : build_pubo(net, std::stod(p_lambda));
      std::string text = poly.to_json() + "\n";
      if (p_out.empty())
        out << text;
      else
        write_file(p_out, text);
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mdst::cli
