#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mdst/encoding.hpp"
#include "mdst/polynomial.hpp"

namespace mdst {

/// Dissipation cost of a configuration, defined on every bitstring:
/// sum over edges of alpha_e * (sum of injections flagged downward)^2.
/// On feasible strings this equals the tree cost.
double cost_value(const TreeBitstring& y, const FlowNetwork& net);

/// Tree cost from flows directly (independent route used as an oracle).
double tree_cost(const FlowNetwork& net, const SpanningTree& tree);

/// Quadratic cost polynomial over the y variables.
PseudoBooleanPolynomial cost_polynomial(const FlowNetwork& net);

/// Sum of squared constraint residuals: edge count, per-node dummy-flow
/// KCL (unit injections), and local consistency. Zero exactly on feasible
/// bitstrings; degree <= 4.
PseudoBooleanPolynomial penalty_polynomial(const FlowNetwork& net);

struct AutoLambda {};

/// cost + lambda * penalty. Auto picks lambda = 1 + sum |cost coefficients|,
/// which puts every infeasible string above every feasible one because the
/// cost is pointwise nonnegative.
PseudoBooleanPolynomial build_pubo(const FlowNetwork& net, double lambda);
PseudoBooleanPolynomial build_pubo(const FlowNetwork& net, AutoLambda);
double auto_lambda(const FlowNetwork& net);

/// Dense table of polynomial values over all 2^m bitstrings, indexed with
/// bit j = 0 as the most significant index bit.
struct DiagonalEnergies {
  int num_vars = 0;
  std::vector<double> energies;

  double min() const;
  double mean() const;

  /// Little-endian binary blob: u64 length header, then f64 energies.
  std::vector<std::uint8_t> to_binary() const;
  static DiagonalEnergies from_binary(const std::vector<std::uint8_t>& blob);
};

/// Default memory guard; override per call or via MDST_QUBIT_CAP in the CLI.
inline constexpr int kDefaultQubitCap = 22;

DiagonalEnergies to_diagonal(const PseudoBooleanPolynomial& p, int qubit_cap = kDefaultQubitCap);

/// Exhaustive optimum over all spanning trees, evaluated through flows
/// (Kirchhoff route, independent of the polynomial route). Ties resolve to
/// the lexicographically first edge set; all optima are reported.
struct BruteForceResult {
  double cost = 0.0;
  SpanningTree tree;
  TreeBitstring bits;
  std::vector<TreeBitstring> all_optima;
};

BruteForceResult brute_force_mdst(const FlowNetwork& net);

}  // namespace mdst
