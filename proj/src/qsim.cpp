#include "mdst/qsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mdst/common.hpp"

namespace mdst {

QuantumState::QuantumState(int num_register, int num_ancilla, int qubit_cap)
    : num_register_(num_register), num_ancilla_(num_ancilla) {
  if (num_register < 0 || num_ancilla < 0) throw std::invalid_argument("state: negative width");
  if (num_register + num_ancilla > qubit_cap)
    throw ValidationError("state: qubit count above the cap");
  amp_.assign(std::uint64_t{1} << (num_register + num_ancilla), {0.0, 0.0});
}

QuantumState QuantumState::basis(int num_register, int num_ancilla, std::uint64_t register_index,
                                 int qubit_cap) {
  QuantumState s(num_register, num_ancilla, qubit_cap);
  s.amp_[register_index << num_ancilla] = 1.0;
  return s;
}

QuantumState QuantumState::uniform_register(int num_register, int num_ancilla, int qubit_cap) {
  QuantumState s(num_register, num_ancilla, qubit_cap);
  double a = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << num_register));
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << num_register); ++r)
    s.amp_[r << num_ancilla] = a;
  return s;
}

double QuantumState::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amp_) n += std::norm(a);
  return n;
}

std::vector<double> QuantumState::register_probabilities() const {
  std::vector<double> p(std::uint64_t{1} << num_register_, 0.0);
  std::uint64_t block = std::uint64_t{1} << num_ancilla_;
  for (std::uint64_t r = 0; r < p.size(); ++r)
    for (std::uint64_t a = 0; a < block; ++a) p[r] += std::norm(amp_[(r << num_ancilla_) | a]);
  return p;
}

double QuantumState::register_probability(std::uint64_t register_index) const {
  std::uint64_t block = std::uint64_t{1} << num_ancilla_;
  double p = 0.0;
  for (std::uint64_t a = 0; a < block; ++a)
    p += std::norm(amp_[(register_index << num_ancilla_) | a]);
  return p;
}

double QuantumState::ancilla_zero_probability() const {
  double p = 0.0;
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << num_register_); ++r)
    p += std::norm(amp_[r << num_ancilla_]);
  return p;
}

double QuantumState::infeasible_mass(const std::vector<std::uint8_t>& feasible) const {
  std::vector<double> p = register_probabilities();
  double mass = 0.0;
  for (std::uint64_t r = 0; r < p.size(); ++r)
    if (!feasible[r]) mass += p[r];
  return mass;
}

double QuantumState::expected_register_energy(const DiagonalEnergies& d) const {
  std::vector<double> p = register_probabilities();
  double e = 0.0;
  for (std::uint64_t r = 0; r < p.size(); ++r) e += p[r] * d.energies[r];
  return e;
}

namespace {

inline void apply_single_qubit(QuantumState& s, int q, std::complex<double> m00,
                               std::complex<double> m01, std::complex<double> m10,
                               std::complex<double> m11) {
  std::uint64_t bit = qubit_bit(s.num_qubits(), q);
  std::uint64_t dim = s.dim();
  for (std::uint64_t z = 0; z < dim; ++z) {
    if (z & bit) continue;
    std::complex<double> a0 = s.amp(z), a1 = s.amp(z | bit);
    s.amp(z) = m00 * a0 + m01 * a1;
    s.amp(z | bit) = m10 * a0 + m11 * a1;
  }
}

}  // namespace

void apply_gate(QuantumState& s, const Gate& g) {
  const int n = s.num_qubits();
  const std::uint64_t dim = s.dim();
  constexpr std::complex<double> kI{0.0, 1.0};
  switch (g.kind) {
    case GateKind::X:
      apply_single_qubit(s, g.targets[0], 0, 1, 1, 0);
      break;
    case GateKind::H: {
      double r = 1.0 / std::sqrt(2.0);
      apply_single_qubit(s, g.targets[0], r, r, r, -r);
      break;
    }
    case GateKind::Phase:
    case GateKind::T:
    case GateKind::Tdg: {
      double theta = g.kind == GateKind::Phase ? g.theta
                     : g.kind == GateKind::T   ? M_PI / 4
                                               : -M_PI / 4;
      std::uint64_t bit = qubit_bit(n, g.targets[0]);
      std::complex<double> ph = std::exp(kI * theta);
      for (std::uint64_t z = 0; z < dim; ++z)
        if (z & bit) s.amp(z) *= ph;
      break;
    }
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::MultiControlledX: {
      std::uint64_t bit = qubit_bit(n, g.targets[0]);
      for (std::uint64_t z = 0; z < dim; ++z) {
        if (z & bit) continue;
        if (!g.control_satisfied(z, n)) continue;
        std::swap(s.amp(z), s.amp(z | bit));
      }
      break;
    }
    case GateKind::ControlledSwap: {
      std::uint64_t ba = qubit_bit(n, g.targets[0]);
      std::uint64_t bb = qubit_bit(n, g.targets[1]);
      for (std::uint64_t z = 0; z < dim; ++z) {
        if (!(z & ba) || (z & bb)) continue;  // visit each pair once: a=1, b=0
        if (!g.control_satisfied(z, n)) continue;
        std::swap(s.amp(z), s.amp(z ^ ba ^ bb));
      }
      break;
    }
    case GateKind::ControlledPhase: {
      std::uint64_t bit = qubit_bit(n, g.targets[0]);
      std::complex<double> ph = std::exp(kI * g.theta);
      for (std::uint64_t z = 0; z < dim; ++z)
        if ((z & bit) && g.control_satisfied(z, n)) s.amp(z) *= ph;
      break;
    }
  }
}

void apply_circuit(QuantumState& s, const Circuit& c) {
  if (c.num_qubits() != s.num_qubits())
    throw std::invalid_argument("apply_circuit: qubit count mismatch");
  for (const Gate& g : c.gates) apply_gate(s, g);
}

void apply_cost_phase(QuantumState& s, const DiagonalEnergies& d, double gamma) {
  if (d.num_vars != s.num_register())
    throw std::invalid_argument("apply_cost_phase: dimension mismatch");
  constexpr std::complex<double> kI{0.0, 1.0};
  std::uint64_t block = std::uint64_t{1} << s.num_ancilla();
  for (std::uint64_t r = 0; r < d.energies.size(); ++r) {
    std::complex<double> ph = std::exp(-kI * gamma * d.energies[r]);
    for (std::uint64_t a = 0; a < block; ++a) s.amp((r << s.num_ancilla()) | a) *= ph;
  }
}

void apply_transverse_mixer(QuantumState& s, double beta) {
  std::complex<double> c = std::cos(beta);
  std::complex<double> ms{0.0, -std::sin(beta)};
  for (int q = 0; q < s.num_register(); ++q) apply_single_qubit(s, q, c, ms, ms, c);
}

Schedule make_schedule(ScheduleVariant variant, double annealing_time, int layers) {
  if (layers < 1) throw std::invalid_argument("schedule: need at least one layer");
  if (annealing_time <= 0.0) throw std::invalid_argument("schedule: annealing time must be positive");
  if (variant == ScheduleVariant::RevLR && layers % 2 != 0)
    throw std::invalid_argument("schedule: RevLR needs an even layer count");
  Schedule sch{variant, annealing_time, layers, {}};
  double ta = annealing_time;
  for (int k = 0; k < layers; ++k) {
    double beta, gamma;
    if (variant == ScheduleVariant::LR) {
      beta = ta * (1.0 - static_cast<double>(k) / layers);
      gamma = ta * static_cast<double>(k) / layers;
    } else if (k < layers / 2) {
      beta = ta * (2.0 * k / layers);
      gamma = ta * (1.0 - 2.0 * k / layers);
    } else {
      int kk = k - layers / 2;
      beta = ta * (1.0 - 2.0 * kk / layers);
      gamma = ta * (2.0 * kk / layers);
    }
    sch.beta_gamma.push_back({beta, gamma});
  }
  return sch;
}

namespace {

LayerMetrics measure_layer(const QuantumState& s, int k, const DiagonalEnergies& cost,
                           double optimum, std::uint64_t target_index, bool ratio_is_gap) {
  LayerMetrics m;
  m.k = k;
  m.fidelity = s.register_probability(target_index);
  double energy = s.expected_register_energy(cost);
  m.approx_ratio = ratio_is_gap ? energy - optimum : energy / optimum;
  return m;
}

}  // namespace

RunMetrics run_qaoa(QaoaOptions opts) {
  if (opts.optimum == 0.0)
    throw std::invalid_argument("run_qaoa: optimum of zero leaves the ratio undefined");
  if (opts.schedule.variant == ScheduleVariant::RevLR && !opts.cost_init)
    throw std::invalid_argument("run_qaoa: RevLR needs the initial-instance cost");

  RunMetrics metrics;
  metrics.schedule = opts.schedule;
  metrics.ratio_is_gap = opts.optimum < 0.0;

  QuantumState s = std::move(opts.initial);
  std::uint64_t target = opts.target.to_index();
  metrics.per_layer.push_back(
      measure_layer(s, 0, opts.cost, opts.optimum, target, metrics.ratio_is_gap));

  for (int k = 0; k < opts.schedule.layers; ++k) {
    auto [beta, gamma] = opts.schedule.beta_gamma[k];
    const DiagonalEnergies& phase =
        (opts.schedule.variant == ScheduleVariant::RevLR && k < opts.schedule.swap_layer())
            ? *opts.cost_init
            : opts.cost;
    apply_cost_phase(s, phase, gamma);
    opts.mixer(s, beta);
    metrics.per_layer.push_back(
        measure_layer(s, k + 1, opts.cost, opts.optimum, target, metrics.ratio_is_gap));
  }

  metrics.histogram = s.register_probabilities();
  metrics.infeasible_mass =
      opts.feasible ? s.infeasible_mass(*opts.feasible) : std::nan("");
  return metrics;
}

std::string RunMetrics::to_json() const {
  nlohmann::json j;
  j["schedule"]["variant"] = schedule.variant == ScheduleVariant::LR ? "lr" : "revlr";
  j["schedule"]["T_A"] = schedule.annealing_time;
  j["schedule"]["K"] = schedule.layers;
  auto& bg = j["schedule"]["beta_gamma"] = nlohmann::json::array();
  for (auto [b, g] : schedule.beta_gamma) bg.push_back({b, g});
  auto& pl = j["per_layer"] = nlohmann::json::array();
  for (const LayerMetrics& m : per_layer)
    pl.push_back({{"k", m.k}, {"fidelity", m.fidelity}, {"approx_ratio", m.approx_ratio}});
  int bits = 0;
  while ((std::uint64_t{1} << bits) < histogram.size()) ++bits;
  auto& h = j["histogram"] = nlohmann::json::object();
  for (std::uint64_t r = 0; r < histogram.size(); ++r)
    if (histogram[r] > 0.0) h[TreeBitstring::from_index(r, bits).to_string()] = histogram[r];
  if (std::isnan(infeasible_mass))
    j["infeasible_mass"] = nullptr;
  else
    j["infeasible_mass"] = infeasible_mass;
  j["ratio_is_gap"] = ratio_is_gap;
  return j.dump(2);
}

std::string RunMetrics::histogram_csv(const std::map<std::string, std::uint64_t>& counts) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out = "bitstring,count\n";
  for (const auto& [s, c] : rows) out += s + "," + std::to_string(c) + "\n";
  return out;
}

std::map<std::string, std::uint64_t> sample(const QuantumState& s, std::uint64_t shots,
                                            std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: need at least one shot");
  std::vector<double> p = s.register_probabilities();
  std::vector<double> cum(p.size());
  std::partial_sum(p.begin(), p.end(), cum.begin());
  double total = cum.back();

  std::mt19937_64 rng(seed);
  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    // 53-bit uniform draw, identical across platforms for a given seed.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    std::uint64_t idx = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (idx >= p.size()) idx = p.size() - 1;
    ++counts[TreeBitstring::from_index(idx, s.num_register()).to_string()];
  }
  return counts;
}

RunMetrics QaoaProblem::run(const Schedule& schedule) const {
  QaoaOptions opts{initial, schedule, mixer, phase, phase_init, optimum, target, &feasible};
  return run_qaoa(std::move(opts));
}

namespace {

DiagonalEnergies scaled_diagonal(const PseudoBooleanPolynomial& p, double scale, int qubit_cap) {
  DiagonalEnergies d = to_diagonal(p, qubit_cap);
  for (double& e : d.energies) e *= scale;
  return d;
}

}  // namespace

QaoaProblem make_penalty_qaoa(const FlowNetwork& net, const PseudoBooleanPolynomial& pubo,
                              int qubit_cap) {
  BruteForceResult opt = brute_force_mdst(net);
  double scale = 1.0 / pubo.max_ising_coefficient();
  QaoaProblem prob{
      QuantumState::uniform_register(num_variables(net), 0, qubit_cap),
      // Drive exp(-i beta H_M) with H_M = -sum X; the literal exponential of
      // +sum X runs the ramp away from its own ground state.
      [](QuantumState& s, double beta) { apply_transverse_mixer(s, -beta); },
      scaled_diagonal(pubo, scale, qubit_cap),
      std::nullopt,
      0.0,
      opt.bits,
      feasible_mask(net)};
  prob.optimum = prob.phase.energies[opt.bits.to_index()];
  return prob;
}

QaoaProblem make_feasible_qaoa(const FlowNetwork& net, const FlowNetwork& init_net,
                               const TreeBitstring& initial_state,
                               const std::vector<EdgeSwap>& order, int qubit_cap) {
  if (!decode(initial_state, net).feasible())
    throw std::invalid_argument("feasible qaoa: initial state must encode a spanning tree");
  BruteForceResult opt = brute_force_mdst(net);
  FlowNetwork net_copy = net;
  std::vector<EdgeSwap> order_copy = order;
  QaoaProblem prob{
      QuantumState::basis(num_variables(net), kMixerAncillaCount, initial_state.to_index(),
                          qubit_cap),
      [net_copy, order_copy](QuantumState& s, double beta) {
        apply_circuit(s, build_full_mixer(net_copy, order_copy, beta));
      },
      scaled_diagonal(cost_polynomial(net), kFeasiblePhaseScale, qubit_cap),
      scaled_diagonal(cost_polynomial(init_net), kFeasiblePhaseScale, qubit_cap),
      opt.cost * kFeasiblePhaseScale,
      opt.bits,
      feasible_mask(net)};
  return prob;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || lo <= 0.0 || hi < lo) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out;
  if (count == 1) return {lo};
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
  return out;
}

std::vector<GridPoint> grid_search(
    const std::function<RunMetrics(int layers, double annealing_time)>& factory,
    const std::vector<int>& layer_set, double ta_lo, double ta_hi, int ta_count,
    GridMetric metric, int jobs) {
  if (layer_set.empty()) throw std::invalid_argument("grid_search: empty layer set");
  std::vector<double> tas = log_spaced(ta_lo, ta_hi, ta_count);
  std::vector<GridPoint> points;
  for (int k : layer_set)
    for (double ta : tas) points.push_back({k, ta, 0.0, 0.0});

  auto work = [&](GridPoint& pt) {
    RunMetrics m = factory(pt.layers, pt.annealing_time);
    pt.final_fidelity = m.final_layer().fidelity;
    pt.final_ratio = m.final_layer().approx_ratio;
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (GridPoint& pt : points) work(pt);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
          work(points[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::stable_sort(points.begin(), points.end(), [&](const GridPoint& a, const GridPoint& b) {
    return metric == GridMetric::Fidelity ? a.final_fidelity > b.final_fidelity
                                          : a.final_ratio < b.final_ratio;
  });
  return points;
}

}  // namespace mdst
