#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdst/common.hpp"

namespace mdst {

/// Multilinear polynomial over binary variables y_j in {0,1}. Monomials are
/// sorted index sets; repeated indices collapse via y^2 = y and zero
/// coefficients are pruned. The artifact only ever needs degree <= 4.
class PseudoBooleanPolynomial {
 public:
  PseudoBooleanPolynomial() = default;
  explicit PseudoBooleanPolynomial(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  int degree() const;
  std::size_t num_terms() const { return terms_.size(); }
  const std::map<std::vector<int>, double>& terms() const { return terms_; }
  double constant() const;
  double coefficient(std::vector<int> vars) const;
  double abs_coefficient_sum() const;  // over non-constant monomials

  /// Adds coeff * prod(y_v for v in vars), multilinear-reduced.
  void add_term(std::vector<int> vars, double coeff);
  void add(const PseudoBooleanPolynomial& other, double scale = 1.0);

  PseudoBooleanPolynomial operator+(const PseudoBooleanPolynomial& rhs) const;
  PseudoBooleanPolynomial operator*(const PseudoBooleanPolynomial& rhs) const;
  PseudoBooleanPolynomial squared() const { return *this * *this; }

  double evaluate(const std::vector<std::uint8_t>& bits) const;
  double evaluate_index(std::uint64_t idx) const;  // bit j = index bit (m-1-j)

  /// Spin-variable form under s = 1 - 2y, for reporting only; the returned
  /// polynomial is over spin monomials with the same index layout.
  PseudoBooleanPolynomial to_ising() const;
  double evaluate_spins(const std::vector<int>& spins) const;

  /// Largest |coefficient| of the spin form, constant excluded; 1 for a
  /// constant polynomial. Scheduled-QAOA phase angles are normalized by it.
  double max_ising_coefficient() const;

  std::string to_json() const;
  static PseudoBooleanPolynomial from_json(const std::string& text);

  bool operator==(const PseudoBooleanPolynomial&) const = default;

 private:
  int num_vars_ = 0;
  std::map<std::vector<int>, double> terms_;
};

}  // namespace mdst
