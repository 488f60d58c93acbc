#include "clusterlr/states.hpp"

#include <cmath>

namespace clr {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

char pol_char(Pol p) {
  switch (p) {
    case Pol::H: return 'H';
    case Pol::V: return 'V';
    case Pol::D: return 'D';
    case Pol::A: return 'A';
    case Pol::R: return 'R';
    case Pol::L: return 'L';
  }
  throw std::invalid_argument("corrupt polarization value");
}

Pol pol_from_char(char c) {
  switch (c) {
    case 'H': return Pol::H;
    case 'V': return Pol::V;
    case 'D': return Pol::D;
    case 'A': return Pol::A;
    case 'R': return Pol::R;
    case 'L': return Pol::L;
    default:
      throw ParseError(std::string("invalid polarization letter '") + c + "'");
  }
}

Eigen::Vector2cd pol_ket(Pol p) {
  Eigen::Vector2cd v;
  switch (p) {
    case Pol::H: v << 1, 0; break;
    case Pol::V: v << 0, 1; break;
    case Pol::D: v << kInvSqrt2, kInvSqrt2; break;
    case Pol::A: v << kInvSqrt2, -kInvSqrt2; break;
    case Pol::R: v << kInvSqrt2, Complex(0, kInvSqrt2); break;
    case Pol::L: v << kInvSqrt2, Complex(0, -kInvSqrt2); break;
  }
  return v;
}

Eigen::Matrix2cd basis_pair(const std::string& name) {
  Eigen::Matrix2cd m;
  if (name == "HV") {
    m.col(0) = pol_ket(Pol::H);
    m.col(1) = pol_ket(Pol::V);
  } else if (name == "DA") {
    m.col(0) = pol_ket(Pol::D);
    m.col(1) = pol_ket(Pol::A);
  } else if (name == "RL") {
    m.col(0) = pol_ket(Pol::R);
    m.col(1) = pol_ket(Pol::L);
  } else {
    throw std::invalid_argument("unknown dephasing basis '" + name + "'");
  }
  return m;
}

StateVector product_ket(const std::vector<Pol>& labels) {
  if (labels.empty()) throw std::invalid_argument("product ket needs at least one factor");
  int n = static_cast<int>(labels.size());
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("register exceeds the dense-qubit limit");
  Eigen::VectorXcd v(1);
  v << 1;
  for (Pol p : labels) {
    Eigen::Vector2cd k = pol_ket(p);
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * k(0);
      next(2 * i + 1) = v(i) * k(1);
    }
    v = std::move(next);
  }
  return StateVector(n, std::move(v));
}

StateVector bell_phi_plus() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = kInvSqrt2;
  return StateVector(2, std::move(v));
}

std::pair<StateVector, double> pbs_fusion(const StateVector& s, int a, int b) {
  int n = s.num_qubits();
  if (a == b) throw std::invalid_argument("fusion needs two distinct qubits");
  if (a < 1 || a > n || b < 1 || b > n)
    throw std::invalid_argument("fusion qubit out of range");
  Eigen::Index ma = Eigen::Index(1) << (n - a);
  Eigen::Index mb = Eigen::Index(1) << (n - b);
  Eigen::VectorXcd v = s.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    bool ba = i & ma, bb = i & mb;
    if (ba != bb) v(i) = 0;
  }
  double prob = v.squaredNorm();
  if (prob <= 1e-12)
    throw std::invalid_argument("fusion post-selection is empty");
  v /= std::sqrt(prob);
  return {StateVector(n, std::move(v)), prob};
}

StateVector ghz4() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v(0) = kInvSqrt2;
  v(15) = kInvSqrt2;
  return StateVector(4, std::move(v));
}

StateVector ghz3(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0) = kInvSqrt2;
  v(7) = sign * kInvSqrt2;
  return StateVector(3, std::move(v));
}

StateVector cluster_state(const GraphSpec& g) {
  if (g.n > kMaxDenseQubits)
    throw std::invalid_argument("graph exceeds the dense-qubit limit");
  Eigen::Index d = Eigen::Index(1) << g.n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(d, std::pow(2.0, -g.n / 2.0));
  StateVector s(g.n, std::move(v));
  for (auto [a, b] : g.edges) s = apply_cz(s, a, b);
  return s;
}

DensityMatrix rho_phi() {
  StateVector f1 = product_ket({Pol::D, Pol::H, Pol::D})
                       .tensor(product_ket({Pol::H}));
  StateVector f2 = product_ket({Pol::A, Pol::V, Pol::A})
                       .tensor(product_ket({Pol::H}));
  Eigen::VectorXcd phi1 = (f1.amplitudes() + f2.amplitudes()) * kInvSqrt2;
  StateVector g1 = product_ket({Pol::D, Pol::H, Pol::D})
                       .tensor(product_ket({Pol::V}));
  StateVector g2 = product_ket({Pol::A, Pol::V, Pol::A})
                       .tensor(product_ket({Pol::V}));
  Eigen::VectorXcd phi2 = (g1.amplitudes() - g2.amplitudes()) * kInvSqrt2;
  Eigen::MatrixXcd m = 0.5 * (phi1 * phi1.adjoint() + phi2 * phi2.adjoint());
  return DensityMatrix(4, std::move(m));
}

DensityMatrix rho_psi() {
  StateVector p1 = ghz3(+1).tensor(product_ket({Pol::D}));
  StateVector p2 = ghz3(-1).tensor(product_ket({Pol::A}));
  Eigen::MatrixXcd m = 0.5 * (p1.amplitudes() * p1.amplitudes().adjoint() +
                              p2.amplitudes() * p2.amplitudes().adjoint());
  return DensityMatrix(4, std::move(m));
}

DensityMatrix add_white_noise(const DensityMatrix& rho, double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("white-noise weight must lie in [0,1]");
  Eigen::Index d = rho.dim();
  Eigen::MatrixXcd m = p * rho.matrix() +
                       ((1.0 - p) / static_cast<double>(d)) *
                           Eigen::MatrixXcd::Identity(d, d);
  return DensityMatrix(rho.num_qubits(), std::move(m));
}

PipelineResult generation_pipeline(const NoiseSpec& noise) {
  StateVector pairs = bell_phi_plus().tensor(bell_phi_plus());
  auto [fused, prob] = pbs_fusion(pairs, 2, 3);
  DensityMatrix post_fusion = densify(fused);
  DensityMatrix post_noise = add_white_noise(post_fusion, noise.white_noise_p);
  DensityMatrix final_state = dephase(post_noise, 4, basis_pair("DA"), 1.0);
  for (const DephasingEntry& e : noise.dephasing)
    final_state = dephase(final_state, e.qubit, basis_pair(e.basis), e.lambda);
  return PipelineResult{std::move(post_fusion), std::move(post_noise),
                        std::move(final_state), prob};
}

}  // namespace clr
