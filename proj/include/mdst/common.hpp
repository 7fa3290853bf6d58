#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdst {

/// Raised for malformed inputs: broken instance invariants, schema
/// violations, out-of-range options. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Qubit q occupies bit (total-1-q) of a state index, so the ASCII
/// rendering of an index (qubit 0 leftmost) reads as plain binary.
inline std::uint64_t qubit_bit(int total_qubits, int qubit) {
  return std::uint64_t{1} << (total_qubits - 1 - qubit);
}

}  // namespace mdst
