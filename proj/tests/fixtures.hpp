#pragma once

#include <complex>
#include <vector>

#include "mdst/circuit.hpp"
#include "mdst/graph.hpp"
#include "mdst/qsim.hpp"

namespace fixtures {

// Three nodes, one cycle; root 0. The running example throughout the tests:
// alpha = (1, 1, 10), injections (-3, 1, 2), optimum 110100 with cost 13.
inline mdst::FlowNetwork triangle() {
  return mdst::make_network(3, 0, {{0, 1}, {1, 2}, {0, 2}}, {-3, 1, 2}, {1, 1, 10});
}

// Same topology, the RevLR warm-start instance: alpha = 0, f = (-2, 1, 1).
inline mdst::FlowNetwork triangle_init() {
  return mdst::make_network(3, 0, {{0, 1}, {1, 2}, {0, 2}}, {-2, 1, 1}, {0, 0, 0});
}

// Four nodes, four edges, one swap with two distinct non-root tails
// (edges {0,2} and {1,2} at head 2), so the general mixer is exact.
inline mdst::FlowNetwork square_with_root_tail() {
  return mdst::make_network(4, 3, {{3, 0}, {3, 1}, {0, 2}, {1, 2}}, {-4, 1, 1, 2},
                            {1, 1, 1, 1});
}

// Apply a circuit to column |basis> and return the resulting statevector.
inline std::vector<std::complex<double>> circuit_column(const mdst::Circuit& c,
                                                        std::uint64_t basis) {
  mdst::QuantumState s(c.num_register, c.num_ancilla, 26);
  s.amp(basis) = 1.0;
  mdst::apply_circuit(s, c);
  std::vector<std::complex<double>> col(s.dim());
  for (std::uint64_t z = 0; z < s.dim(); ++z) col[z] = s.amp(z);
  return col;
}

// Max |difference| of the two circuits' action over a set of basis columns
// (indexed in the smaller circuit's space). Extra trailing ancillas of the
// larger circuit sit in the low index bits and stay |0>, so amplitudes of
// the shared space live at stride D_large / D_small.
inline double max_column_difference(const mdst::Circuit& a, const mdst::Circuit& b,
                                    const std::vector<std::uint64_t>& columns) {
  std::uint64_t da = std::uint64_t{1} << a.num_qubits();
  std::uint64_t db = std::uint64_t{1} << b.num_qubits();
  std::uint64_t dim = std::min(da, db);
  std::uint64_t sa = da / dim, sb = db / dim;
  double worst = 0.0;
  for (std::uint64_t col : columns) {
    auto ca = circuit_column(a, col * sa);
    auto cb = circuit_column(b, col * sb);
    for (std::uint64_t z = 0; z < dim; ++z)
      worst = std::max(worst, std::abs(ca[z * sa] - cb[z * sb]));
  }
  return worst;
}

}  // namespace fixtures
