#include "clusterlr/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "clusterlr/rng.hpp"

namespace clr {

Setting Setting::parse(const std::string& text) {
  Setting s;
  for (char c : text) {
    switch (c) {
      case 'X': s.bases.push_back(Basis::X); break;
      case 'Y': s.bases.push_back(Basis::Y); break;
      case 'Z': s.bases.push_back(Basis::Z); break;
      default:
        throw ParseError(std::string("invalid measurement basis '") + c + "'");
    }
  }
  if (s.bases.empty()) throw ParseError("empty measurement setting");
  return s;
}

std::string Setting::str() const {
  std::string out;
  for (Basis b : bases)
    out += b == Basis::X ? 'X' : b == Basis::Y ? 'Y' : 'Z';
  return out;
}

PauliString Setting::pauli() const {
  std::vector<Pauli> ops;
  ops.reserve(bases.size());
  for (Basis b : bases)
    ops.push_back(b == Basis::X ? Pauli::X : b == Basis::Y ? Pauli::Y : Pauli::Z);
  return PauliString(0, std::move(ops));
}

ProjectorString ProjectorString::parse(const std::string& text) {
  ProjectorString p;
  for (char c : text) p.labels.push_back(pol_from_char(c));
  if (p.labels.empty()) throw ParseError("empty projector string");
  return p;
}

std::string ProjectorString::str() const {
  std::string out;
  for (Pol p : labels) out += pol_char(p);
  return out;
}

double CountsTable::total() const {
  double t = 0;
  for (double c : counts) t += c;
  return t;
}

namespace {

// Eigenvector pair of a basis in outcome order (+1 first).
std::pair<Pol, Pol> basis_outcomes(Basis b) {
  switch (b) {
    case Basis::X: return {Pol::D, Pol::A};
    case Basis::Y: return {Pol::R, Pol::L};
    case Basis::Z: return {Pol::H, Pol::V};
  }
  throw std::invalid_argument("corrupt basis value");
}

Eigen::VectorXcd product_ket_vector(const std::vector<Pol>& labels) {
  return product_ket(labels).amplitudes();
}

}  // namespace

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Setting& s) {
  int n = rho.num_qubits();
  if (s.num_qubits() != n)
    throw DimensionError("setting width does not match register");
  Eigen::Index d = rho.dim();
  std::vector<double> probs(static_cast<std::size_t>(d));
  std::vector<Pol> labels(static_cast<std::size_t>(n));
  for (Eigen::Index o = 0; o < d; ++o) {
    for (int q = 1; q <= n; ++q) {
      auto [plus, minus] = basis_outcomes(s.bases[static_cast<std::size_t>(q - 1)]);
      bool bit = o & (Eigen::Index(1) << (n - q));
      labels[static_cast<std::size_t>(q - 1)] = bit ? minus : plus;
    }
    Eigen::VectorXcd k = product_ket_vector(labels);
    double p = (k.adjoint() * rho.matrix() * k)(0, 0).real();
    probs[static_cast<std::size_t>(o)] = std::max(p, 0.0);
  }
  return probs;
}

double projector_probability(const DensityMatrix& rho, const ProjectorString& p) {
  if (p.num_qubits() != rho.num_qubits())
    throw DimensionError("projector width does not match register");
  Eigen::VectorXcd k = product_ket_vector(p.labels);
  double v = (k.adjoint() * rho.matrix() * k)(0, 0).real();
  return std::clamp(v, 0.0, 1.0);
}

std::string outcome_labels(const Setting& s, int outcome) {
  int n = s.num_qubits();
  if (outcome < 0 || outcome >= (1 << n))
    throw std::invalid_argument("outcome index out of range");
  std::string out;
  for (int q = 1; q <= n; ++q) {
    auto [plus, minus] = basis_outcomes(s.bases[static_cast<std::size_t>(q - 1)]);
    bool bit = outcome & (1 << (n - q));
    out += pol_char(bit ? minus : plus);
  }
  return out;
}

int outcome_index(const Setting& s, const std::string& labels) {
  int n = s.num_qubits();
  if (static_cast<int>(labels.size()) != n)
    throw ParseError("outcome label width does not match setting");
  int outcome = 0;
  for (int q = 1; q <= n; ++q) {
    auto [plus, minus] = basis_outcomes(s.bases[static_cast<std::size_t>(q - 1)]);
    char c = labels[static_cast<std::size_t>(q - 1)];
    if (c == pol_char(minus)) {
      outcome |= 1 << (n - q);
    } else if (c != pol_char(plus)) {
      throw ParseError(std::string("outcome label '") + c +
                       "' does not belong to basis " +
                       s.str().substr(static_cast<std::size_t>(q - 1), 1));
    }
  }
  return outcome;
}

int outcome_parity(int outcome, int n) {
  int bits = 0;
  for (int q = 0; q < n; ++q) bits ^= (outcome >> q) & 1;
  return bits ? -1 : 1;
}

CountsTable sample_counts(const Setting& s, const std::vector<double>& probs,
                          double expected_total, std::uint64_t seed,
                          double duration_s, const std::string& provenance) {
  std::size_t d = std::size_t(1) << s.num_qubits();
  if (probs.size() != d)
    throw DimensionError("probability vector length does not match setting");
  double sum = 0;
  for (double p : probs) {
    if (p < -1e-12 || !std::isfinite(p))
      throw std::invalid_argument("invalid outcome distribution");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("outcome distribution does not sum to 1");
  if (!(expected_total > 0))
    throw std::invalid_argument("expected_total must be positive");
  if (!(duration_s > 0))
    throw std::invalid_argument("duration must be positive");
  CountsTable t;
  t.setting = s;
  t.duration_s = duration_s;
  t.meta.seed = seed;
  t.meta.provenance = provenance;
  t.counts.resize(d);
  CountSampler sampler(seed);
  for (std::size_t o = 0; o < d; ++o)
    t.counts[o] = static_cast<double>(
        sampler.poisson(expected_total * std::max(probs[o], 0.0)));
  return t;
}

namespace {

void check_counts(const CountsTable& t) {
  std::size_t d = std::size_t(1) << t.setting.num_qubits();
  if (t.counts.size() != d)
    throw DimensionError("counts length does not match setting");
  for (double c : t.counts)
    if (c < 0 || std::floor(c) != c || !std::isfinite(c))
      throw std::invalid_argument("counts must be nonnegative integers");
  if (t.total() <= 0)
    throw std::invalid_argument("counts table is empty");
}

}  // namespace

FractionStat fraction_predicted(const CountsTable& t, int expected_parity) {
  if (expected_parity != 1 && expected_parity != -1)
    throw std::invalid_argument("parity must be +1 or -1");
  check_counts(t);
  int n = t.setting.num_qubits();
  double total = t.total(), hit = 0;
  for (std::size_t o = 0; o < t.counts.size(); ++o)
    if (outcome_parity(static_cast<int>(o), n) == expected_parity)
      hit += t.counts[o];
  FractionStat f;
  f.value = hit / total;
  f.sigma = std::sqrt(std::max(f.value * (1.0 - f.value), 0.0) / total);
  f.n_events = static_cast<std::int64_t>(std::llround(total));
  return f;
}

std::pair<double, double> expectation_from_counts(const CountsTable& t) {
  FractionStat f = fraction_predicted(t, +1);
  return {2.0 * f.value - 1.0, 2.0 * f.sigma};
}

}  // namespace clr
