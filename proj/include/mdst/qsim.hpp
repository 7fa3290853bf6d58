#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdst/circuit.hpp"
#include "mdst/cost.hpp"

namespace mdst {

/// Dense complex statevector over register + ancilla qubits. Register qubits
/// occupy the most significant index bits, so the amplitude block of a fixed
/// register string is contiguous.
class QuantumState {
 public:
  QuantumState(int num_register, int num_ancilla, int qubit_cap = kDefaultQubitCap);

  static QuantumState basis(int num_register, int num_ancilla, std::uint64_t register_index,
                            int qubit_cap = kDefaultQubitCap);
  /// |+>^register (x) |0>^ancilla, the transverse-mixer ground state.
  static QuantumState uniform_register(int num_register, int num_ancilla,
                                       int qubit_cap = kDefaultQubitCap);

  int num_register() const { return num_register_; }
  int num_ancilla() const { return num_ancilla_; }
  int num_qubits() const { return num_register_ + num_ancilla_; }
  std::uint64_t dim() const { return amp_.size(); }

  std::complex<double>& amp(std::uint64_t z) { return amp_[z]; }
  const std::complex<double>& amp(std::uint64_t z) const { return amp_[z]; }

  double norm_squared() const;
  std::vector<double> register_probabilities() const;
  /// Probability of measuring the given register string (ancillas traced out).
  double register_probability(std::uint64_t register_index) const;
  double ancilla_zero_probability() const;
  double infeasible_mass(const std::vector<std::uint8_t>& feasible) const;
  double expected_register_energy(const DiagonalEnergies& d) const;

 private:
  int num_register_;
  int num_ancilla_;
  std::vector<std::complex<double>> amp_;
};

void apply_gate(QuantumState& s, const Gate& g);
void apply_circuit(QuantumState& s, const Circuit& c);

/// amplitude[z] *= exp(-i gamma E[register part of z]).
void apply_cost_phase(QuantumState& s, const DiagonalEnergies& d, double gamma);

/// exp(-i beta sum_j X_j) over the register qubits.
void apply_transverse_mixer(QuantumState& s, double beta);

enum class ScheduleVariant { LR, RevLR };

/// (beta_k, gamma_k) pairs for k = 0..K-1. LR ramps the mixer down and the
/// cost up linearly; RevLR runs the mirrored ramp for the first K/2 layers
/// (cost function swapped at K/2), then the forward ramp.
struct Schedule {
  ScheduleVariant variant = ScheduleVariant::LR;
  double annealing_time = 0.0;
  int layers = 0;
  std::vector<std::pair<double, double>> beta_gamma;

  int swap_layer() const { return layers / 2; }  // RevLR only
};

Schedule make_schedule(ScheduleVariant variant, double annealing_time, int layers);

using MixerFn = std::function<void(QuantumState&, double beta)>;

struct LayerMetrics {
  int k = 0;
  double fidelity = 0.0;
  double approx_ratio = 0.0;
};

struct RunMetrics {
  Schedule schedule;
  std::vector<LayerMetrics> per_layer;  // k = 0 is the untouched initial state
  std::vector<double> histogram;        // register probabilities
  double infeasible_mass = 0.0;         // NaN when no feasibility mask given
  bool ratio_is_gap = false;            // absolute gap reported for optimum < 0

  const LayerMetrics& final_layer() const { return per_layer.back(); }
  std::string to_json() const;
  /// Lines of "bitstring,count", descending count then lexicographic.
  static std::string histogram_csv(const std::map<std::string, std::uint64_t>& counts);
};

struct QaoaOptions {
  QuantumState initial;
  Schedule schedule;
  MixerFn mixer;
  DiagonalEnergies cost;                        // phase + ratio energies
  std::optional<DiagonalEnergies> cost_init;    // RevLR first-half phase
  double optimum = 0.0;                         // nonzero; <0 switches to gap reporting
  TreeBitstring target;                         // ground-state register string
  const std::vector<std::uint8_t>* feasible = nullptr;
};

RunMetrics run_qaoa(QaoaOptions opts);

/// Seeded multinomial draw from the register marginal.
std::map<std::string, std::uint64_t> sample(const QuantumState& s, std::uint64_t shots,
                                            std::uint64_t seed);

/// Assembled inputs for one scheduled-QAOA arm. Phase Hamiltonians are
/// rescaled before exponentiation so that annealing times of order one sit
/// in the valid discretization regime; approximation ratios are invariant
/// under the rescale (optimum is scaled along).
struct QaoaProblem {
  QuantumState initial;
  MixerFn mixer;
  DiagonalEnergies phase;
  std::optional<DiagonalEnergies> phase_init;
  double optimum = 0.0;
  TreeBitstring target;
  std::vector<std::uint8_t> feasible;

  RunMetrics run(const Schedule& schedule) const;
};

/// Penalty arm: PUBO phase divided by its largest Ising coefficient, the
/// uniform register start, and the transverse drive exp(-i beta H_M) with
/// H_M = -sum X (whose ground state is the uniform superposition).
QaoaProblem make_penalty_qaoa(const FlowNetwork& net, const PseudoBooleanPolynomial& pubo,
                              int qubit_cap = kDefaultQubitCap);

/// Phase rescale of the feasible arm, calibrated so that schedule times
/// around one half drive near-adiabatic dynamics while times beyond one
/// exceed the valid discretization regime.
inline constexpr double kFeasiblePhaseScale = 0.25;

/// Feasible-subspace arm: edge-rotation full mixer in the given swap order,
/// basis-state start, and quarter-scaled cost phases for both the warm-start
/// and the target instance.
QaoaProblem make_feasible_qaoa(const FlowNetwork& net, const FlowNetwork& init_net,
                               const TreeBitstring& initial_state,
                               const std::vector<EdgeSwap>& order,
                               int qubit_cap = kDefaultQubitCap);

struct GridPoint {
  int layers = 0;
  double annealing_time = 0.0;
  double final_fidelity = 0.0;
  double final_ratio = 0.0;
};

enum class GridMetric { Fidelity, ApproxRatio };

/// Log-spaced annealing times in [lo, hi]; count == 1 degenerates to lo.
std::vector<double> log_spaced(double lo, double hi, int count);

/// Runs the factory once per (K, T_A) point and ranks results best-first
/// under the chosen metric. Points are independent; jobs > 1 fans them out
/// over worker threads with a deterministic result order.
std::vector<GridPoint> grid_search(
    const std::function<RunMetrics(int layers, double annealing_time)>& factory,
    const std::vector<int>& layer_set, double ta_lo, double ta_hi, int ta_count,
    GridMetric metric, int jobs = 1);

}  // namespace mdst
