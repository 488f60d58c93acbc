#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clusterlr/pauli.hpp"

// GHZ-type all-versus-nothing certificates extracted from graph-state
// stabilizers. A certificate is a set of at least three signed Pauli
// strings on a qubit subset such that every (qubit, observable) pair
// appears an even number of times while the signs multiply to -1: any
// local-realistic +/-1 assignment then forces the equation product to
// +1, contradicting the quantum signs.

namespace clr {

struct ParadoxCertificate {
  std::vector<int> support;            // 1-based qubits, ascending
  std::vector<PauliString> strings;    // restricted to support, phase +1
  std::vector<int> signs;              // +/-1, one per string
  // Which stabilizer generators (1-based indices) multiply to each string.
  std::vector<std::vector<int>> generator_recipe;
};

// Search products of up to max_product_size stabilizer generators whose
// support lies inside `support`, then the smallest subset of those
// products meeting the parity and sign conditions. Candidates are
// enumerated by increasing product size then lexicographic generator
// indices; subsets by increasing cardinality then lexicographic order,
// so the returned certificate is the first hit in that order.
std::optional<ParadoxCertificate> derive_ghz_paradox(const GraphSpec& g,
                                                     std::vector<int> support,
                                                     int max_product_size = 3);

// Checks the parity and sign conditions and that each string stabilizes
// the graph state with its stated sign (numerically, within tol).
bool verify_certificate(const ParadoxCertificate& cert, const GraphSpec& g,
                        double tol = 1e-10);

// Human-readable derivation: generators, products, parity table, signs.
std::string certificate_transcript(const ParadoxCertificate& cert, const GraphSpec& g);

}  // namespace clr
