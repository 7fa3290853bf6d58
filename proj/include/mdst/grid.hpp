#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdst/cost.hpp"
#include "mdst/graph.hpp"
#include "mdst/polynomial.hpp"

namespace mdst {

/// Distribution grid: a FlowNetwork whose injections are bus currents,
/// whose edges carry resistance, and whose switchable flags mark the
/// reconfigurable lines. The non-switchable subgraph must be cycle-free.
struct GridInstance {
  FlowNetwork net;

  void validate() const;
};

/// Contraction of the grid onto switch endpoints: one super-node per
/// component of the non-switchable subgraph.
struct ReducedGraph {
  FlowNetwork net;                    // super-node network; edges are switches
  std::vector<int> super_of_node;     // grid bus -> super-node id
  std::vector<int> switch_of_edge;    // reduced edge id -> grid edge id
  std::vector<int> always_open;       // switches internal to one super-node

  std::string contraction_json() const;  // node -> super-node map, for audit
};

ReducedGraph contract_grid(const GridInstance& g);

/// Replaces each resistive switch by a lossless switch in series with a
/// resistor line through a fresh midpoint bus. Value-preserving; optional,
/// since the cost builder handles resistive switches directly.
GridInstance split_resistive_switches(const GridInstance& g);

struct Degree2Reduction {
  FlowNetwork net;
  double offset = 0.0;
  std::vector<int> node_of_original;  // -1 when removed
  std::vector<int> edge_of_original;  // -1 when removed
};

/// Iteratively strips degree-1 nodes (re-rooting when the root is stripped),
/// folding their injections into the neighbor and their fixed edge cost into
/// the offset. The optimum of the original equals the optimum of the
/// reduction plus the offset.
Degree2Reduction degree2_reduce(const FlowNetwork& net);

/// Per grid line, a polynomial of degree <= 2 in the reduced y variables
/// whose value at every feasible reduced bitstring is the physical line
/// current. Switch lines carry the linear switch-flow polynomial; internal
/// lines come from a symbolic per-super-node KCL solve by leaf stripping.
std::map<int, PseudoBooleanPolynomial> line_current_polynomials(const GridInstance& g,
                                                                const ReducedGraph& r);

/// Quartic loss polynomial: sum over grid lines of R_e * (line current)^2.
PseudoBooleanPolynomial reconfig_cost_polynomial(const GridInstance& g);
PseudoBooleanPolynomial reconfig_cost_polynomial(const GridInstance& g, const ReducedGraph& r);

}  // namespace mdst
