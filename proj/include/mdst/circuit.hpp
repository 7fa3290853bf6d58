#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdst/graph.hpp"
#include "mdst/moves.hpp"

namespace mdst {

enum class GateKind {
  X,
  H,
  Phase,
  T,
  Tdg,
  CNOT,
  Toffoli,
  MultiControlledX,
  ControlledSwap,
  ControlledPhase,
};

/// One gate over explicit qubit operands. Controls carry explicit polarity:
/// polarity bit i set means control i triggers on |1>, cleared on |0>.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> controls;
  std::vector<int> targets;
  std::uint32_t polarity = ~std::uint32_t{0};
  double theta = 0.0;

  bool control_satisfied(std::uint64_t state_index, int total_qubits) const;
};

Gate gate_x(int q);
Gate gate_h(int q);
Gate gate_phase(int q, double theta);
Gate gate_t(int q);
Gate gate_tdg(int q);
Gate gate_cnot(int control, int target);
Gate gate_toffoli(int c1, int c2, int target);
Gate gate_mcx(std::vector<int> controls, std::uint32_t polarity, int target);
Gate gate_cswap(std::vector<int> controls, int a, int b);
Gate gate_cphase(std::vector<int> controls, int target, double theta);

/// Mixer ancilla bank size: [f_r, g, h, mix, extra1, extra2].
inline constexpr int kMixerAncillaCount = 6;

/// Gate list over register + named ancilla qubits. Mixer circuits use the
/// fixed ancilla bank [f_r, g, h, mix, extra1, extra2] appended after the
/// register; decomposition appends two more (dec1, dec2).
struct Circuit {
  int num_register = 0;
  int num_ancilla = 0;
  std::vector<Gate> gates;
  std::map<std::string, int> ancilla_roles;

  int num_qubits() const { return num_register + num_ancilla; }
  int role(const std::string& name) const;

  /// Line-based text dump, one gate per line (see README for the grammar).
  std::string to_text() const;
};

enum class Construction {
  Simplified,  // root-adjacent tails and multiedge pairs use the cheap forms
  General,     // full pattern, as assumed by the resource polynomial
};

/// Controlled edge-swap mixer: validity ancilla, controlled path and swap
/// updates, phase-kickback rotation on the mix ancilla, mirrored
/// uncomputation. Throws std::invalid_argument if the swap head is the root.
Circuit build_partial_mixer(const FlowNetwork& net, const EdgeSwap& swap, double beta,
                            Construction construction = Construction::Simplified);

/// Concatenation of partial mixers (applied first-to-last) over one shared
/// ancilla bank.
Circuit build_full_mixer(const FlowNetwork& net, const std::vector<EdgeSwap>& order, double beta,
                         Construction construction = Construction::Simplified);

/// Uncontrolled update sub-circuits (test surface: both square to identity).
Circuit build_u_path(const FlowNetwork& net, const EdgeSwap& swap,
                     Construction construction = Construction::Simplified);
Circuit build_u_swap(const FlowNetwork& net, const EdgeSwap& swap);

/// Rewrites a circuit over {single-qubit, CNOT} only. Zero-polarity controls
/// become X sandwiches; multi-controlled gates expand through Toffoli chains
/// on the two decomposition ancillas.
Circuit decompose(const Circuit& c);

struct GateCount {
  long long single_qubit = 0;
  long long cnot = 0;
  int qubits = 0;

  bool operator==(const GateCount&) const = default;
};

/// Counts a decomposed circuit; throws std::invalid_argument if gates other
/// than single-qubit and CNOT remain.
GateCount count_resources(const Circuit& c);

/// Closed-form count of the general partial mixer construction.
GateCount resource_formula(int num_edges, int num_nodes);

}  // namespace mdst
