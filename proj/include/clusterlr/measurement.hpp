#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clusterlr/states.hpp"

// Local Pauli measurement settings, outcome distributions, and Poisson
// photon counting. Outcome index bit 1 means the -1 eigenvalue; labels
// render +1/-1 as D/A (X basis), R/L (Y basis), H/V (Z basis) with
// qubit 1 leftmost.

namespace clr {

enum class Basis { X, Y, Z };

struct Setting {
  std::vector<Basis> bases;

  static Setting parse(const std::string& text);  // e.g. "XYYX"
  std::string str() const;
  int num_qubits() const { return static_cast<int>(bases.size()); }
  // The setting as a +1-phase Pauli string, e.g. XYYX.
  PauliString pauli() const;

  bool operator==(const Setting&) const = default;
};

// One ket per qubit, each drawn from {H,V,D,A,R,L}, e.g. "VVVD".
struct ProjectorString {
  std::vector<Pol> labels;

  static ProjectorString parse(const std::string& text);
  std::string str() const;
  int num_qubits() const { return static_cast<int>(labels.size()); }

  bool operator==(const ProjectorString&) const = default;
};

struct CountsMeta {
  std::uint64_t seed = 0;
  std::string provenance;
};

// Event counts for the 2^n outcomes of one setting, outcome-index order.
// Counts are integer-valued; double storage keeps downstream statistics
// simple.
struct CountsTable {
  Setting setting;
  std::vector<double> counts;
  double duration_s = 60.0;
  CountsMeta meta;

  double total() const;
};

struct FractionStat {
  double value = 0.0;
  double sigma = 0.0;
  std::int64_t n_events = 0;
};

// Born probabilities of the 2^n outcomes, clamped at 0, summing to 1.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Setting& s);

// <k|rho|k> for the product ket named by the projector string.
double projector_probability(const DensityMatrix& rho, const ProjectorString& p);

// Outcome o as polarization labels under the setting, and back.
std::string outcome_labels(const Setting& s, int outcome);
int outcome_index(const Setting& s, const std::string& labels);
// Parity of outcome o on n qubits: +1 for an even number of -1 results.
int outcome_parity(int outcome, int n);

// Independent Poisson counts with mean expected_total * probs[o].
CountsTable sample_counts(const Setting& s, const std::vector<double>& probs,
                          double expected_total, std::uint64_t seed,
                          double duration_s = 60.0,
                          const std::string& provenance = "");

// Fraction of events whose outcome parity matches expected_parity, with
// binomial error sqrt(f(1-f)/N).
FractionStat fraction_predicted(const CountsTable& t, int expected_parity);

// Correlation function sum(parity_o * c_o)/total and its binomial error.
std::pair<double, double> expectation_from_counts(const CountsTable& t);

}  // namespace clr
