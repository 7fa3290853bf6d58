#include "mdst/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mdst/common.hpp"
#include "mdst/encoding.hpp"

namespace mdst {

bool Gate::control_satisfied(std::uint64_t state_index, int total_qubits) const {
  for (std::size_t i = 0; i < controls.size(); ++i) {
    bool bit = state_index & qubit_bit(total_qubits, controls[i]);
    bool want = (polarity >> i) & 1u;
    if (bit != want) return false;
  }
  return true;
}

Gate gate_x(int q) { return {GateKind::X, {}, {q}}; }
Gate gate_h(int q) { return {GateKind::H, {}, {q}}; }
Gate gate_phase(int q, double theta) { return {GateKind::Phase, {}, {q}, ~0u, theta}; }
Gate gate_t(int q) { return {GateKind::T, {}, {q}}; }
Gate gate_tdg(int q) { return {GateKind::Tdg, {}, {q}}; }
Gate gate_cnot(int control, int target) { return {GateKind::CNOT, {control}, {target}}; }
Gate gate_toffoli(int c1, int c2, int target) { return {GateKind::Toffoli, {c1, c2}, {target}}; }
Gate gate_mcx(std::vector<int> controls, std::uint32_t polarity, int target) {
  return {GateKind::MultiControlledX, std::move(controls), {target}, polarity};
}
Gate gate_cswap(std::vector<int> controls, int a, int b) {
  return {GateKind::ControlledSwap, std::move(controls), {a, b}};
}
Gate gate_cphase(std::vector<int> controls, int target, double theta) {
  return {GateKind::ControlledPhase, std::move(controls), {target}, ~0u, theta};
}

int Circuit::role(const std::string& name) const {
  auto it = ancilla_roles.find(name);
  if (it == ancilla_roles.end())
    throw std::invalid_argument("circuit: unknown ancilla role " + name);
  return it->second;
}

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << "# register " << num_register << " ancilla " << num_ancilla << '\n';
  for (const auto& [name, q] : ancilla_roles) os << "# anc " << name << ' ' << q << '\n';
  for (const Gate& g : gates) {
    switch (g.kind) {
      case GateKind::X: os << "X " << g.targets[0]; break;
      case GateKind::H: os << "H " << g.targets[0]; break;
      case GateKind::T: os << "T " << g.targets[0]; break;
      case GateKind::Tdg: os << "TDG " << g.targets[0]; break;
      case GateKind::Phase: os << "PHASE " << g.targets[0] << ' ' << g.theta; break;
      case GateKind::CNOT: os << "CNOT " << g.controls[0] << ' ' << g.targets[0]; break;
      case GateKind::Toffoli:
        os << "TOFFOLI " << g.controls[0] << ' ' << g.controls[1] << ' ' << g.targets[0];
        break;
      case GateKind::MultiControlledX: {
        os << "MCX " << g.controls.size();
        for (int c : g.controls) os << ' ' << c;
        os << ' ' << g.targets[0] << ' ' << (g.polarity & ((1u << g.controls.size()) - 1));
        break;
      }
      case GateKind::ControlledSwap: {
        os << "CSWAP " << g.controls.size();
        for (int c : g.controls) os << ' ' << c;
        os << ' ' << g.targets[0] << ' ' << g.targets[1];
        break;
      }
      case GateKind::ControlledPhase: {
        os << "CPHASE " << g.controls.size();
        for (int c : g.controls) os << ' ' << c;
        os << ' ' << g.targets[0] << ' ' << g.theta;
        break;
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

constexpr int kBankSize = kMixerAncillaCount;

struct MixerLayout {
  const FlowNetwork* net;
  int f_r, g, h, mix, extra1, extra2;

  int var(int e, int node) const {
    return flatten_index(e, node_rank(*net, node), net->num_nodes);
  }
};

MixerLayout bank_layout(const FlowNetwork& net) {
  int m = num_variables(net);
  return {&net, m, m + 1, m + 2, m + 3, m + 4, m + 5};
}

Circuit bank_circuit(const FlowNetwork& net) {
  Circuit c;
  c.num_register = num_variables(net);
  c.num_ancilla = kBankSize;
  MixerLayout l = bank_layout(net);
  c.ancilla_roles = {{"f_r", l.f_r}, {"g", l.g},           {"h", l.h},
                     {"mix", l.mix}, {"extra1", l.extra1}, {"extra2", l.extra2}};
  return c;
}

struct SwapGeometry {
  int e1, e2;   // canonical edge pair, e1 < e2
  int head;
  int tail1, tail2;       // tails after any general-construction stand-ins
  bool tail1_is_root, tail2_is_root;
  bool multiedge;          // tails coincide (before stand-ins)
};

SwapGeometry analyze_swap(const FlowNetwork& net, const EdgeSwap& swap,
                          Construction construction) {
  if (swap.head == net.root)
    throw std::invalid_argument("partial mixer: no rotation exists at the root head");
  if (!net.edges[swap.edge_a].incident(swap.head) || !net.edges[swap.edge_b].incident(swap.head))
    throw std::invalid_argument("partial mixer: swap edges must share the head");

  SwapGeometry geo;
  geo.e1 = swap.edge_a;
  geo.e2 = swap.edge_b;
  geo.head = swap.head;
  geo.tail1 = net.edges[geo.e1].other(geo.head);
  geo.tail2 = net.edges[geo.e2].other(geo.head);
  geo.tail1_is_root = geo.tail1 == net.root;
  geo.tail2_is_root = geo.tail2 == net.root;
  geo.multiedge = geo.tail1 == geo.tail2;

  if (construction == Construction::General) {
    // The resource polynomial assumes distinct non-root tails; stand in an
    // arbitrary non-root node where the real geometry degenerates. The
    // resulting circuit is the generic gate pattern, used for counting.
    auto stand_in = [&](int avoid) {
      for (int n = 0; n < net.num_nodes; ++n)
        if (n != net.root && n != avoid) return n;
      throw std::invalid_argument("general construction needs two non-root nodes");
    };
    if (geo.tail1_is_root) geo.tail1 = stand_in(geo.tail2);
    if (geo.tail2_is_root) geo.tail2 = stand_in(geo.tail1);
    if (geo.tail1 == geo.tail2) geo.tail2 = stand_in(geo.tail1);
    geo.tail1_is_root = geo.tail2_is_root = false;
    geo.multiedge = false;
  }
  return geo;
}

void emit_u_f(Circuit& c, const MixerLayout& l, const SwapGeometry& geo) {
  std::vector<int> controls;
  if (!geo.tail1_is_root) controls.push_back(l.var(geo.e2, geo.tail1));  // y_{e', u}
  if (!geo.tail2_is_root) controls.push_back(l.var(geo.e1, geo.tail2));  // y_{e, u'}
  if (controls.empty())
    c.gates.push_back(gate_x(l.f_r));  // parallel edges from the root: always valid
  else
    c.gates.push_back(gate_mcx(std::move(controls), 0u, l.f_r));  // all zero-controlled
}

void emit_u_g(Circuit& c, const MixerLayout& l, const SwapGeometry& geo, int other_edge,
              bool uncompute) {
  std::vector<Gate> gates;
  if (geo.tail1_is_root) {
    gates.push_back(gate_cnot(l.var(other_edge, geo.tail2), l.g));
  } else if (geo.tail2_is_root) {
    gates.push_back(gate_cnot(l.var(other_edge, geo.tail1), l.g));
  } else {
    int yu = l.var(other_edge, geo.tail1);
    int yup = l.var(other_edge, geo.tail2);
    gates.push_back(gate_mcx({yu, yup}, 0b01u, l.extra1));  // y_u and not y_u'
    gates.push_back(gate_mcx({yu, yup}, 0b10u, l.extra2));  // not y_u and y_u'
    gates.push_back(gate_cnot(l.extra1, l.g));
    gates.push_back(gate_cnot(l.extra2, l.g));
  }
  if (uncompute) std::reverse(gates.begin(), gates.end());  // every gate is self-inverse
  for (Gate& g : gates) c.gates.push_back(std::move(g));
}

void emit_u_h(Circuit& c, const MixerLayout& l, const SwapGeometry& geo, int w) {
  c.gates.push_back(gate_cnot(l.var(geo.e1, w), l.h));
  c.gates.push_back(gate_cnot(l.var(geo.e2, w), l.h));
}

std::vector<int> affected_nodes(const FlowNetwork& net, const SwapGeometry& geo) {
  std::vector<int> out;
  for (int w = 0; w < net.num_nodes; ++w)
    if (w != net.root && w != geo.tail1 && w != geo.tail2) out.push_back(w);
  return out;
}

void emit_u_path(Circuit& c, const FlowNetwork& net, const MixerLayout& l,
                 const SwapGeometry& geo, const std::vector<int>& extra_controls) {
  if (geo.multiedge) return;  // no path between coincident tails
  for (int e2 = 0; e2 < net.num_edges(); ++e2) {
    if (e2 == geo.e1 || e2 == geo.e2) continue;
    emit_u_g(c, l, geo, e2, false);
    for (int w : affected_nodes(net, geo)) {
      emit_u_h(c, l, geo, w);
      std::vector<int> controls{l.g, l.h};
      controls.insert(controls.end(), extra_controls.begin(), extra_controls.end());
      c.gates.push_back(gate_mcx(std::move(controls), ~0u, l.var(e2, w)));
      emit_u_h(c, l, geo, w);
    }
    emit_u_g(c, l, geo, e2, true);
  }
}

void emit_u_swap(Circuit& c, const FlowNetwork& net, const MixerLayout& l,
                 const SwapGeometry& geo, const std::vector<int>& extra_controls) {
  for (int w : affected_nodes(net, geo))
    c.gates.push_back(gate_cswap(extra_controls, l.var(geo.e1, w), l.var(geo.e2, w)));
}

void emit_partial_mixer(Circuit& c, const FlowNetwork& net, const EdgeSwap& swap, double beta,
                        Construction construction) {
  MixerLayout l = bank_layout(net);
  SwapGeometry geo = analyze_swap(net, swap, construction);
  const std::vector<int> fm{l.f_r, l.mix};

  emit_u_f(c, l, geo);
  c.gates.push_back(gate_h(l.mix));
  emit_u_path(c, net, l, geo, fm);
  emit_u_swap(c, net, l, geo, fm);
  c.gates.push_back(gate_h(l.mix));
  c.gates.push_back(gate_cphase({l.f_r}, l.mix, beta));
  c.gates.push_back(gate_h(l.mix));
  emit_u_swap(c, net, l, geo, fm);
  emit_u_path(c, net, l, geo, fm);
  c.gates.push_back(gate_h(l.mix));
  emit_u_f(c, l, geo);
}

}  // namespace

Circuit build_partial_mixer(const FlowNetwork& net, const EdgeSwap& swap, double beta,
                            Construction construction) {
  Circuit c = bank_circuit(net);
  emit_partial_mixer(c, net, swap, beta, construction);
  return c;
}

Circuit build_full_mixer(const FlowNetwork& net, const std::vector<EdgeSwap>& order, double beta,
                         Construction construction) {
  if (order.empty()) throw std::invalid_argument("full mixer: order must be nonempty");
  Circuit c = bank_circuit(net);
  for (const EdgeSwap& s : order) emit_partial_mixer(c, net, s, beta, construction);
  return c;
}

Circuit build_u_path(const FlowNetwork& net, const EdgeSwap& swap, Construction construction) {
  Circuit c = bank_circuit(net);
  emit_u_path(c, net, bank_layout(net), analyze_swap(net, swap, construction), {});
  return c;
}

Circuit build_u_swap(const FlowNetwork& net, const EdgeSwap& swap) {
  Circuit c = bank_circuit(net);
  emit_u_swap(c, net, bank_layout(net), analyze_swap(net, swap, Construction::Simplified), {});
  return c;
}

namespace {

void emit_toffoli(Circuit& out, int c1, int c2, int t) {
  out.gates.push_back(gate_h(t));
  out.gates.push_back(gate_cnot(c2, t));
  out.gates.push_back(gate_tdg(t));
  out.gates.push_back(gate_cnot(c1, t));
  out.gates.push_back(gate_t(t));
  out.gates.push_back(gate_cnot(c2, t));
  out.gates.push_back(gate_tdg(t));
  out.gates.push_back(gate_cnot(c1, t));
  out.gates.push_back(gate_t(c2));
  out.gates.push_back(gate_t(t));
  out.gates.push_back(gate_h(t));
  out.gates.push_back(gate_cnot(c1, c2));
  out.gates.push_back(gate_tdg(c2));
  out.gates.push_back(gate_cnot(c1, c2));
  out.gates.push_back(gate_t(c1));
}

// Multi-controlled X over at most 4 positive controls, using up to two
// ancillas that may be dirty (they are restored exactly).
void emit_mcx_positive(Circuit& out, const std::vector<int>& c, int t, int dec1, int dec2) {
  switch (c.size()) {
    case 0: out.gates.push_back(gate_x(t)); return;
    case 1: out.gates.push_back(gate_cnot(c[0], t)); return;
    case 2: emit_toffoli(out, c[0], c[1], t); return;
    case 3:
      emit_toffoli(out, dec1, c[0], t);
      emit_toffoli(out, c[1], c[2], dec1);
      emit_toffoli(out, dec1, c[0], t);
      emit_toffoli(out, c[1], c[2], dec1);
      return;
    case 4:
      emit_toffoli(out, dec1, c[0], t);
      emit_toffoli(out, dec2, c[1], dec1);
      emit_toffoli(out, c[2], c[3], dec2);
      emit_toffoli(out, dec2, c[1], dec1);
      emit_toffoli(out, dec1, c[0], t);
      emit_toffoli(out, dec2, c[1], dec1);
      emit_toffoli(out, c[2], c[3], dec2);
      emit_toffoli(out, dec2, c[1], dec1);
      return;
    default:
      throw std::invalid_argument("decompose: more than 4 controls is not supported");
  }
}

}  // namespace

Circuit decompose(const Circuit& c) {
  bool needs_extra = std::any_of(c.gates.begin(), c.gates.end(), [](const Gate& g) {
    return (g.kind == GateKind::MultiControlledX && g.controls.size() >= 3) ||
           (g.kind == GateKind::ControlledSwap && g.controls.size() >= 2);
  });
  // Mixer circuits keep the fixed two-ancilla decomposition budget even when
  // a small instance leaves the chain ancillas unused.
  needs_extra = needs_extra || c.ancilla_roles.count("extra1") > 0;

  Circuit out;
  out.num_register = c.num_register;
  out.num_ancilla = c.num_ancilla + (needs_extra ? 2 : 0);
  out.ancilla_roles = c.ancilla_roles;
  int dec1 = -1, dec2 = -1;
  if (needs_extra) {
    dec1 = c.num_qubits();
    dec2 = c.num_qubits() + 1;
    out.ancilla_roles["dec1"] = dec1;
    out.ancilla_roles["dec2"] = dec2;
  }

  auto with_zero_controls = [&](const Gate& g, auto&& emit_body) {
    std::vector<int> zeros;
    for (std::size_t i = 0; i < g.controls.size(); ++i)
      if (!((g.polarity >> i) & 1u)) zeros.push_back(g.controls[i]);
    for (int q : zeros) out.gates.push_back(gate_x(q));
    emit_body();
    for (int q : zeros) out.gates.push_back(gate_x(q));
  };

  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::X:
      case GateKind::H:
      case GateKind::Phase:
      case GateKind::T:
      case GateKind::Tdg:
      case GateKind::CNOT:
        out.gates.push_back(g);
        break;
      case GateKind::Toffoli:
        emit_toffoli(out, g.controls[0], g.controls[1], g.targets[0]);
        break;
      case GateKind::MultiControlledX:
        with_zero_controls(g, [&] { emit_mcx_positive(out, g.controls, g.targets[0], dec1, dec2); });
        break;
      case GateKind::ControlledSwap:
        with_zero_controls(g, [&] {
          int a = g.targets[0], b = g.targets[1];
          switch (g.controls.size()) {
            case 0:
              out.gates.push_back(gate_cnot(a, b));
              out.gates.push_back(gate_cnot(b, a));
              out.gates.push_back(gate_cnot(a, b));
              break;
            case 1:
              out.gates.push_back(gate_cnot(b, a));
              emit_toffoli(out, g.controls[0], a, b);
              out.gates.push_back(gate_cnot(b, a));
              break;
            case 2:
              emit_toffoli(out, g.controls[0], g.controls[1], dec1);
              out.gates.push_back(gate_cnot(b, a));
              emit_toffoli(out, dec1, a, b);
              out.gates.push_back(gate_cnot(b, a));
              emit_toffoli(out, g.controls[0], g.controls[1], dec1);
              break;
            default:
              throw std::invalid_argument("decompose: controlled swap supports <= 2 controls");
          }
        });
        break;
      case GateKind::ControlledPhase:
        with_zero_controls(g, [&] {
          int t = g.targets[0];
          switch (g.controls.size()) {
            case 0:
              out.gates.push_back(gate_phase(t, g.theta));
              break;
            case 1: {
              int ctl = g.controls[0];
              out.gates.push_back(gate_phase(t, g.theta / 2));
              out.gates.push_back(gate_cnot(ctl, t));
              out.gates.push_back(gate_phase(t, -g.theta / 2));
              out.gates.push_back(gate_cnot(ctl, t));
              out.gates.push_back(gate_phase(ctl, g.theta / 2));
              break;
            }
            default:
              throw std::invalid_argument("decompose: controlled phase supports <= 1 control");
          }
        });
        break;
    }
  }
  return out;
}

GateCount count_resources(const Circuit& c) {
  GateCount count;
  count.qubits = c.num_qubits();
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::X:
      case GateKind::H:
      case GateKind::Phase:
      case GateKind::T:
      case GateKind::Tdg:
        ++count.single_qubit;
        break;
      case GateKind::CNOT:
        ++count.cnot;
        break;
      default:
        throw std::invalid_argument("count_resources: circuit is not decomposed");
    }
  }
  return count;
}

GateCount resource_formula(int num_edges, int num_nodes) {
  GateCount c;
  long long E = num_edges, V = num_nodes;
  c.single_qubit = 559 - 344 * E - 234 * V + 144 * E * V;
  c.cnot = 406 - 256 * E - 168 * V + 104 * E * V;
  c.qubits = num_edges * (num_nodes - 1) + 8;
  return c;
}

}  // namespace mdst
