#include "mdst/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace mdst {

int PseudoBooleanPolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
  return static_cast<int>(d);
}

double PseudoBooleanPolynomial::constant() const {
  auto it = terms_.find({});
  return it == terms_.end() ? 0.0 : it->second;
}

double PseudoBooleanPolynomial::coefficient(std::vector<int> vars) const {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  auto it = terms_.find(vars);
  return it == terms_.end() ? 0.0 : it->second;
}

double PseudoBooleanPolynomial::abs_coefficient_sum() const {
  double s = 0.0;
  for (const auto& [vars, c] : terms_)
    if (!vars.empty()) s += std::abs(c);
  return s;
}

void PseudoBooleanPolynomial::add_term(std::vector<int> vars, double coeff) {
  if (coeff == 0.0) return;
  for (int v : vars)
    if (v < 0 || v >= num_vars_) throw std::invalid_argument("polynomial: variable out of range");
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  double& slot = terms_[vars];
  slot += coeff;
  if (slot == 0.0) terms_.erase(vars);
}

void PseudoBooleanPolynomial::add(const PseudoBooleanPolynomial& other, double scale) {
  for (const auto& [vars, c] : other.terms_) add_term(vars, scale * c);
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::operator+(
    const PseudoBooleanPolynomial& rhs) const {
  PseudoBooleanPolynomial out(std::max(num_vars_, rhs.num_vars_));
  out.add(*this);
  out.add(rhs);
  return out;
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::operator*(
    const PseudoBooleanPolynomial& rhs) const {
  PseudoBooleanPolynomial out(std::max(num_vars_, rhs.num_vars_));
  for (const auto& [va, ca] : terms_)
    for (const auto& [vb, cb] : rhs.terms_) {
      std::vector<int> merged;
      merged.reserve(va.size() + vb.size());
      std::merge(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(merged));
      out.add_term(std::move(merged), ca * cb);
    }
  return out;
}

double PseudoBooleanPolynomial::evaluate(const std::vector<std::uint8_t>& bits) const {
  if (static_cast<int>(bits.size()) != num_vars_)
    throw std::invalid_argument("polynomial: bit vector length mismatch");
  double total = 0.0;
  for (const auto& [vars, c] : terms_) {
    bool on = true;
    for (int v : vars) on = on && bits[v];
    if (on) total += c;
  }
  return total;
}

double PseudoBooleanPolynomial::evaluate_index(std::uint64_t idx) const {
  double total = 0.0;
  for (const auto& [vars, c] : terms_) {
    bool on = true;
    for (int v : vars) on = on && ((idx >> (num_vars_ - 1 - v)) & 1u);
    if (on) total += c;
  }
  return total;
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::to_ising() const {
  PseudoBooleanPolynomial out(num_vars_);
  for (const auto& [vars, c] : terms_) {
    // prod y_v = prod (1 - s_v)/2; expand over subsets with sign.
    int k = static_cast<int>(vars.size());
    double base = c / static_cast<double>(std::uint64_t{1} << k);
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
      std::vector<int> mono;
      int bits = 0;
      for (int i = 0; i < k; ++i)
        if ((sub >> i) & 1u) mono.push_back(vars[i]), ++bits;
      out.add_term(std::move(mono), base * ((bits % 2) ? -1.0 : 1.0));
    }
  }
  return out;
}

double PseudoBooleanPolynomial::max_ising_coefficient() const {
  PseudoBooleanPolynomial ising = to_ising();
  double mx = 0.0;
  for (const auto& [vars, c] : ising.terms())
    if (!vars.empty()) mx = std::max(mx, std::abs(c));
  return mx == 0.0 ? 1.0 : mx;
}

double PseudoBooleanPolynomial::evaluate_spins(const std::vector<int>& spins) const {
  double total = 0.0;
  for (const auto& [vars, c] : terms_) {
    double prod = c;
    for (int v : vars) prod *= spins[v];
    total += prod;
  }
  return total;
}

std::string PseudoBooleanPolynomial::to_json() const {
  nlohmann::json j;
  j["num_vars"] = num_vars_;
  j["terms"] = nlohmann::json::array();
  for (const auto& [vars, c] : terms_) j["terms"].push_back({{"vars", vars}, {"coeff", c}});
  return j.dump(2);
}

PseudoBooleanPolynomial PseudoBooleanPolynomial::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("polynomial json: ") + e.what());
  }
  if (!j.contains("num_vars")) throw ValidationError("polynomial json: missing field 'num_vars'");
  if (!j.contains("terms")) throw ValidationError("polynomial json: missing field 'terms'");
  PseudoBooleanPolynomial p(j["num_vars"].get<int>());
  for (const auto& t : j["terms"]) {
    if (!t.contains("vars")) throw ValidationError("polynomial json: term missing 'vars'");
    if (!t.contains("coeff")) throw ValidationError("polynomial json: term missing 'coeff'");
    p.add_term(t["vars"].get<std::vector<int>>(), t["coeff"].get<double>());
  }
  return p;
}

}  // namespace mdst
