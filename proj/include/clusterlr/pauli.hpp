#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clusterlr/core.hpp"

// Pauli strings with exact phase tracking and graph-state stabilizers.
// Qubits are numbered 1..n throughout; qubit 1 is the most significant
// bit of computational-basis indices.

namespace clr {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// A phase i^t (t in 0..3) times a tensor product of single-qubit Paulis.
// Multiplication tracks the phase exactly, so YZ = iX and ZY = -iX.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int phase_power, std::vector<Pauli> ops);

  static PauliString identity(std::size_t n);
  // ops spelled as e.g. "XZII"; sign must be +1 or -1.
  static PauliString from_ops(std::string_view ops, int sign = +1);
  // Accepts an optional prefix "+", "-", "i", "+i", "-i" before the ops.
  static PauliString parse(std::string_view text);

  std::size_t size() const { return ops_.size(); }
  Pauli op(int qubit) const;  // 1-based
  const std::vector<Pauli>& ops() const { return ops_; }

  int phase_power() const { return phase_power_; }
  Complex phase() const;
  bool has_real_phase() const { return phase_power_ % 2 == 0; }
  int sign() const;  // +1 or -1; throws for imaginary phase

  PauliString operator*(const PauliString& rhs) const;
  bool commutes_with(const PauliString& other) const;

  // 1-based qubits carrying a non-identity operator, ascending.
  std::vector<int> support() const;
  // Keep only the listed qubits; every dropped position must be identity.
  PauliString restricted_to(const std::vector<int>& qubits) const;
  // Inverse of restricted_to: place this string's ops at the listed
  // positions of an n-qubit register, identity elsewhere.
  PauliString embedded(std::size_t n, const std::vector<int>& qubits) const;

  std::string str() const;  // "+XZII", "-YXYZ", "+iXY", "-iZ"

  bool operator==(const PauliString&) const = default;

 private:
  int phase_power_ = 0;  // exponent of i, always reduced mod 4
  std::vector<Pauli> ops_;
};

// Simple undirected graph on vertices 1..n. Factories canonicalize the
// edge list (u < v, sorted, duplicates collapsed) and reject self-loops
// and out-of-range vertices.
struct GraphSpec {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  static GraphSpec create(int n, std::vector<std::pair<int, int>> edges);
  // Path 1-2-...-n.
  static GraphSpec linear(int n);
  // Branch vertex 2 with leaves 1, 3 and the chain 4-5-...-n hanging
  // off it; needs n >= 4.
  static GraphSpec t_shaped(int n);

  // Text form: first line "n=<int>", then one "u v" line per edge.
  static GraphSpec parse(std::string_view text);
  std::string format() const;

  std::vector<int> neighbors(int v) const;
};

// Generator k is X on vertex k and Z on each neighbor, phase +1.
std::vector<PauliString> stabilizer_generators(const GraphSpec& g);

}  // namespace clr
