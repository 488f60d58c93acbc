#pragma once

#include <array>

#include "clusterlr/measurement.hpp"
#include "clusterlr/paradox.hpp"

// Mermin-style statistics for the four-qubit experiment and exhaustive
// local-realism baselines. The canonical settings are XXXX, XYYX, YXYX,
// YYXX (in that order); the GHZ-type argument predicts parities
// +1, -1, -1, -1 on the ideal mixed target state.

namespace clr {

const std::array<Setting, 4>& canonical_settings();

// Sign of the target-state correlation; the magnitude must be
// deterministic (|E| > 0.5), or the setting does not predict a parity.
int predicted_parity(const DensityMatrix& target, const Setting& s);

// Outcome indices with the given parity. The setting must be one of the
// canonical four.
std::vector<int> predicted_outcome_set(const Setting& s, int expected_parity);

// S = E(XXXX) - E(XYYX) - E(YXYX) - E(YYXX), sigma by quadrature.
std::pair<double, double> mermin_S(
    const std::array<std::pair<double, double>, 4>& expectations);

// Deterministic strategies assign x_j, y_j in {-1, +1} per qubit; these
// enumerate all 2^8 over the canonical settings.
double lr_enumerate_max_S();
double lr_enumerate_min_S();

// Counting argument: every event predicted at XXXX must, under any local
// model, be explained by a spurious (wrong-parity) event at one of the
// other three settings, so fraction(XXXX) <= sum of the three spurious
// fractions. `predicted` holds the predicted-parity fractions at XYYX,
// YXYX, YYXX; the bound is sum(1 - f_k), sigma by quadrature.
std::pair<double, double> lr_counting_bound(const std::array<FractionStat, 3>& predicted);

// Exhaustively checks the counting inequality over all 2^8 deterministic
// strategies (the indicator form with both sides in {0,..,3}).
bool verify_counting_bound();

// (observed - bound) / sqrt(sigma_obs^2 + sigma_bound^2).
double significance(const FractionStat& observed, double bound_value,
                    double bound_sigma);

// True when every +/-1 assignment to the certificate's (qubit, observable)
// pairs satisfies product(equations) = +1 while the quantum signs multiply
// to -1 (checked by enumeration, not via the parity argument).
bool paradox_lr_contradiction(const ParadoxCertificate& cert);

struct SettingStats {
  Setting setting;
  int expected_parity = 1;
  FractionStat fraction;
  double expectation = 0.0;
  double expectation_sigma = 0.0;
};

struct NonlocalityReport {
  std::array<SettingStats, 4> settings;  // canonical order
  double S = 0.0;
  double S_sigma = 0.0;
  double lr_bound = 0.0;
  double lr_bound_sigma = 0.0;
  double counting_significance = 0.0;
  double mermin_significance = 0.0;  // (S - 2) / sigma_S
};

// Full analysis of four counts tables (any order; must cover the
// canonical settings exactly once) against the target state that defines
// the predicted parities.
NonlocalityReport analyze_counts(const std::vector<CountsTable>& tables,
                                 const DensityMatrix& target);

}  // namespace clr
