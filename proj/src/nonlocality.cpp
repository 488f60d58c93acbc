#include "clusterlr/nonlocality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace clr {

const std::array<Setting, 4>& canonical_settings() {
  static const std::array<Setting, 4> settings = {
      Setting::parse("XXXX"), Setting::parse("XYYX"), Setting::parse("YXYX"),
      Setting::parse("YYXX")};
  return settings;
}

int predicted_parity(const DensityMatrix& target, const Setting& s) {
  double e = expectation(target, s.pauli());
  if (std::abs(e) < 0.5)
    throw std::invalid_argument(
        "target state does not predict a deterministic parity for " + s.str());
  return e > 0 ? 1 : -1;
}

std::vector<int> predicted_outcome_set(const Setting& s, int expected_parity) {
  if (expected_parity != 1 && expected_parity != -1)
    throw std::invalid_argument("parity must be +1 or -1");
  const auto& canon = canonical_settings();
  if (std::find(canon.begin(), canon.end(), s) == canon.end())
    throw std::invalid_argument("setting " + s.str() +
                                " is not one of the canonical four");
  std::vector<int> out;
  int n = s.num_qubits();
  for (int o = 0; o < (1 << n); ++o)
    if (outcome_parity(o, n) == expected_parity) out.push_back(o);
  return out;
}

std::pair<double, double> mermin_S(
    const std::array<std::pair<double, double>, 4>& expectations) {
  double s = 0, var = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    auto [e, sigma] = expectations[k];
    if (e < -1.0 - 1e-9 || e > 1.0 + 1e-9)
      throw std::invalid_argument("correlation value outside [-1, 1]");
    if (sigma < 0) throw std::invalid_argument("negative sigma");
    s += (k == 0 ? e : -e);
    var += sigma * sigma;
  }
  return {s, std::sqrt(var)};
}

namespace {

// values[q] under strategy bits: x_j, y_j in {-1,+1} packed as 8 bits.
int strategy_value(unsigned bits, int qubit, Basis b) {
  unsigned shift = static_cast<unsigned>(2 * (qubit - 1));
  bool neg = b == Basis::X ? (bits >> shift) & 1 : (bits >> (shift + 1)) & 1;
  return neg ? -1 : 1;
}

int strategy_correlation(unsigned bits, const Setting& s) {
  int prod = 1;
  for (int q = 1; q <= s.num_qubits(); ++q)
    prod *= strategy_value(bits, q, s.bases[static_cast<std::size_t>(q - 1)]);
  return prod;
}

}  // namespace

double lr_enumerate_max_S() {
  const auto& canon = canonical_settings();
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned bits = 0; bits < 256; ++bits) {
    double s = strategy_correlation(bits, canon[0]) -
               strategy_correlation(bits, canon[1]) -
               strategy_correlation(bits, canon[2]) -
               strategy_correlation(bits, canon[3]);
    best = std::max(best, s);
  }
  return best;
}

double lr_enumerate_min_S() {
  const auto& canon = canonical_settings();
  double worst = std::numeric_limits<double>::infinity();
  for (unsigned bits = 0; bits < 256; ++bits) {
    double s = strategy_correlation(bits, canon[0]) -
               strategy_correlation(bits, canon[1]) -
               strategy_correlation(bits, canon[2]) -
               strategy_correlation(bits, canon[3]);
    worst = std::min(worst, s);
  }
  return worst;
}

std::pair<double, double> lr_counting_bound(
    const std::array<FractionStat, 3>& predicted) {
  double bound = 0, var = 0;
  for (const FractionStat& f : predicted) {
    if (f.value < 0 || f.value > 1)
      throw std::invalid_argument("fraction outside [0, 1]");
    bound += 1.0 - f.value;
    var += f.sigma * f.sigma;
  }
  return {bound, std::sqrt(var)};
}

bool verify_counting_bound() {
  const auto& canon = canonical_settings();
  for (unsigned bits = 0; bits < 256; ++bits) {
    int predicted_xxxx = strategy_correlation(bits, canon[0]) == 1 ? 1 : 0;
    int spurious = 0;
    // Predicted parity is -1 at the other three settings.
    for (int k = 1; k < 4; ++k)
      if (strategy_correlation(bits, canon[static_cast<std::size_t>(k)]) != -1)
        ++spurious;
    if (predicted_xxxx > spurious) return false;
  }
  return true;
}

double significance(const FractionStat& observed, double bound_value,
                    double bound_sigma) {
  double var = observed.sigma * observed.sigma + bound_sigma * bound_sigma;
  if (var <= 0) throw std::invalid_argument("significance needs a nonzero sigma");
  return (observed.value - bound_value) / std::sqrt(var);
}

bool paradox_lr_contradiction(const ParadoxCertificate& cert) {
  if (cert.strings.empty()) return false;
  // Collect the (position, observable) pairs that actually appear.
  std::vector<std::pair<int, Pauli>> pairs;
  for (const PauliString& s : cert.strings)
    for (std::size_t pos = 0; pos < s.size(); ++pos)
      if (s.ops()[pos] != Pauli::I) {
        std::pair<int, Pauli> key{static_cast<int>(pos), s.ops()[pos]};
        if (std::find(pairs.begin(), pairs.end(), key) == pairs.end())
          pairs.push_back(key);
      }
  if (pairs.size() > 20)
    throw std::invalid_argument("certificate too large for assignment enumeration");
  int quantum = 1;
  for (int s : cert.signs) quantum *= s;
  if (quantum != -1) return false;
  for (std::uint64_t assign = 0; assign < (std::uint64_t(1) << pairs.size()); ++assign) {
    int product = 1;
    for (const PauliString& s : cert.strings) {
      for (std::size_t pos = 0; pos < s.size(); ++pos) {
        if (s.ops()[pos] == Pauli::I) continue;
        std::pair<int, Pauli> key{static_cast<int>(pos), s.ops()[pos]};
        std::size_t idx = static_cast<std::size_t>(
            std::find(pairs.begin(), pairs.end(), key) - pairs.begin());
        if ((assign >> idx) & 1) product = -product;
      }
    }
    if (product != 1) return false;
  }
  return true;
}

NonlocalityReport analyze_counts(const std::vector<CountsTable>& tables,
                                 const DensityMatrix& target) {
  const auto& canon = canonical_settings();
  NonlocalityReport report;
  std::array<const CountsTable*, 4> ordered{};
  for (const CountsTable& t : tables) {
    auto it = std::find(canon.begin(), canon.end(), t.setting);
    if (it == canon.end())
      throw std::invalid_argument("setting " + t.setting.str() +
                                  " is not one of the canonical four");
    std::size_t k = static_cast<std::size_t>(it - canon.begin());
    if (ordered[k])
      throw std::invalid_argument("setting " + t.setting.str() + " appears twice");
    ordered[k] = &t;
  }
  for (std::size_t k = 0; k < 4; ++k)
    if (!ordered[k])
      throw std::invalid_argument("missing counts for setting " + canon[k].str());

  std::array<std::pair<double, double>, 4> expectations;
  for (std::size_t k = 0; k < 4; ++k) {
    SettingStats& st = report.settings[k];
    st.setting = canon[k];
    st.expected_parity = predicted_parity(target, canon[k]);
    st.fraction = fraction_predicted(*ordered[k], st.expected_parity);
    auto [e, sigma] = expectation_from_counts(*ordered[k]);
    st.expectation = e;
    st.expectation_sigma = sigma;
    expectations[k] = {e, sigma};
  }
  auto [s, s_sigma] = mermin_S(expectations);
  report.S = s;
  report.S_sigma = s_sigma;
  auto [bound, bound_sigma] = lr_counting_bound(
      {report.settings[1].fraction, report.settings[2].fraction,
       report.settings[3].fraction});
  report.lr_bound = bound;
  report.lr_bound_sigma = bound_sigma;
  report.counting_significance =
      significance(report.settings[0].fraction, bound, bound_sigma);
  if (report.S_sigma <= 0)
    throw std::invalid_argument("Mermin significance needs a nonzero sigma");
  report.mermin_significance = (report.S - 2.0) / report.S_sigma;
  return report;
}

}  // namespace clr
