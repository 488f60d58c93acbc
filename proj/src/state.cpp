#include "clusterlr/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace clr {

namespace {

Eigen::Index dim_for(int n) {
  if (n < 1) throw std::invalid_argument("register needs at least one qubit");
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("register exceeds the dense-qubit limit");
  return Eigen::Index(1) << n;
}

// Bit position of 1-based qubit q in an n-qubit basis index.
int bit_of(int qubit, int n) {
  if (qubit < 1 || qubit > n) throw std::invalid_argument("qubit index out of range");
  return n - qubit;
}

void check_hermitian_unit_trace(const Eigen::MatrixXcd& m) {
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStructuralTol)
    throw std::invalid_argument("density matrix is not hermitian");
  if (std::abs(m.trace() - Complex(1, 0)) > kStructuralTol)
    throw std::invalid_argument("density matrix trace is not 1");
}

// Transform rows/columns touching one qubit: rho -> (M_q rho M_q^dagger)
// for a 2x2 block M. Works for any M, not just unitaries.
Eigen::MatrixXcd conjugate_single_qubit(const Eigen::MatrixXcd& m, int n, int qubit,
                                        const Eigen::Matrix2cd& u) {
  Eigen::MatrixXcd out = m;
  Eigen::Index d = m.rows();
  Eigen::Index mask = Eigen::Index(1) << bit_of(qubit, n);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (r & mask) continue;
    Eigen::Index r1 = r | mask;
    Eigen::RowVectorXcd a = out.row(r), b = out.row(r1);
    out.row(r) = u(0, 0) * a + u(0, 1) * b;
    out.row(r1) = u(1, 0) * a + u(1, 1) * b;
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    if (c & mask) continue;
    Eigen::Index c1 = c | mask;
    Eigen::VectorXcd a = out.col(c), b = out.col(c1);
    out.col(c) = std::conj(u(0, 0)) * a + std::conj(u(0, 1)) * b;
    out.col(c1) = std::conj(u(1, 0)) * a + std::conj(u(1, 1)) * b;
  }
  return out;
}

void check_unitary2(const Eigen::Matrix2cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kStructuralTol)
    throw std::invalid_argument("local factor is not unitary");
}

}  // namespace

StateVector::StateVector(int num_qubits, Eigen::VectorXcd amplitudes)
    : n_(num_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != dim_for(n_))
    throw DimensionError("amplitude vector length is not 2^n");
  if (std::abs(amps_.norm() - 1.0) > kStructuralTol)
    throw std::invalid_argument("state vector is not normalized");
}

StateVector StateVector::tensor(const StateVector& other) const {
  int n = n_ + other.n_;
  Eigen::Index da = amps_.size(), db = other.amps_.size();
  if (n > kMaxDenseQubits)
    throw std::invalid_argument("tensor product exceeds the dense-qubit limit");
  Eigen::VectorXcd out(da * db);
  for (Eigen::Index a = 0; a < da; ++a)
    out.segment(a * db, db) = amps_(a) * other.amps_;
  return StateVector(n, std::move(out));
}

DensityMatrix::DensityMatrix(int num_qubits, Eigen::MatrixXcd entries)
    : n_(num_qubits), m_(std::move(entries)) {
  Eigen::Index d = dim_for(n_);
  if (m_.rows() != d || m_.cols() != d)
    throw DimensionError("density matrix shape is not 2^n x 2^n");
  check_hermitian_unit_trace(m_);
}

DensityMatrix DensityMatrix::from_matrix(int num_qubits, Eigen::MatrixXcd entries) {
  DensityMatrix rho(num_qubits, std::move(entries));
  rho.validate();
  return rho;
}

void DensityMatrix::validate(double structural_tol, double spectral_tol) const {
  double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > structural_tol)
    throw std::invalid_argument("density matrix is not hermitian");
  if (std::abs(m_.trace() - Complex(1, 0)) > structural_tol)
    throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -spectral_tol)
    throw std::invalid_argument("density matrix has a negative eigenvalue");
}

LocalUnitary LocalUnitary::identity(int n) {
  dim_for(n);
  LocalUnitary u;
  u.factors.assign(static_cast<std::size_t>(n), Eigen::Matrix2cd::Identity());
  return u;
}

LocalUnitary& LocalUnitary::set(int qubit, const Eigen::Matrix2cd& u) {
  if (qubit < 1 || static_cast<std::size_t>(qubit) > factors.size())
    throw std::invalid_argument("qubit index out of range");
  factors[static_cast<std::size_t>(qubit - 1)] = u;
  return *this;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

DensityMatrix densify(const StateVector& s) {
  return DensityMatrix(s.num_qubits(),
                       s.amplitudes() * s.amplitudes().adjoint());
}

StateVector apply_local(const LocalUnitary& u, const StateVector& s) {
  int n = s.num_qubits();
  if (u.factors.size() != static_cast<std::size_t>(n))
    throw DimensionError("local unitary factor count does not match register");
  Eigen::VectorXcd v = s.amplitudes();
  Eigen::Index d = v.size();
  for (int q = 1; q <= n; ++q) {
    const Eigen::Matrix2cd& f = u.factors[static_cast<std::size_t>(q - 1)];
    check_unitary2(f);
    Eigen::Index mask = Eigen::Index(1) << bit_of(q, n);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i & mask) continue;
      Complex a = v(i), b = v(i | mask);
      v(i) = f(0, 0) * a + f(0, 1) * b;
      v(i | mask) = f(1, 0) * a + f(1, 1) * b;
    }
  }
  return StateVector(n, std::move(v));
}

DensityMatrix apply_local(const LocalUnitary& u, const DensityMatrix& rho) {
  int n = rho.num_qubits();
  if (u.factors.size() != static_cast<std::size_t>(n))
    throw DimensionError("local unitary factor count does not match register");
  Eigen::MatrixXcd m = rho.matrix();
  for (int q = 1; q <= n; ++q) {
    const Eigen::Matrix2cd& f = u.factors[static_cast<std::size_t>(q - 1)];
    check_unitary2(f);
    m = conjugate_single_qubit(m, n, q, f);
  }
  return DensityMatrix(n, std::move(m));
}

StateVector apply_cz(const StateVector& s, int a, int b) {
  int n = s.num_qubits();
  if (a == b) throw std::invalid_argument("CZ needs two distinct qubits");
  Eigen::Index ma = Eigen::Index(1) << bit_of(a, n);
  Eigen::Index mb = Eigen::Index(1) << bit_of(b, n);
  Eigen::VectorXcd v = s.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if ((i & ma) && (i & mb)) v(i) = -v(i);
  return StateVector(n, std::move(v));
}

DensityMatrix apply_cz(const DensityMatrix& rho, int a, int b) {
  int n = rho.num_qubits();
  if (a == b) throw std::invalid_argument("CZ needs two distinct qubits");
  Eigen::Index ma = Eigen::Index(1) << bit_of(a, n);
  Eigen::Index mb = Eigen::Index(1) << bit_of(b, n);
  Eigen::MatrixXcd m = rho.matrix();
  Eigen::Index d = m.rows();
  auto sgn = [&](Eigen::Index i) { return ((i & ma) && (i & mb)) ? -1.0 : 1.0; };
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) *= sgn(r) * sgn(c);
  return DensityMatrix(n, std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  int n = rho.num_qubits();
  if (keep.empty()) throw std::invalid_argument("partial trace must keep at least one qubit");
  std::set<int> kept(keep.begin(), keep.end());
  if (kept.size() != keep.size()) throw std::invalid_argument("kept qubits repeat");
  for (int q : kept)
    if (q < 1 || q > n) throw std::invalid_argument("kept qubit out of range");
  int k = static_cast<int>(kept.size());
  int e = n - k;
  // Bit positions of kept qubits in the result (qubit order preserved)
  // and of all qubits in the source.
  std::vector<int> kept_src, env_src;
  for (int q = 1; q <= n; ++q)
    (kept.count(q) ? kept_src : env_src).push_back(bit_of(q, n));
  Eigen::Index dk = Eigen::Index(1) << k;
  Eigen::Index de = Eigen::Index(1) << e;
  auto expand = [](Eigen::Index bits, const std::vector<int>& positions) {
    // positions are listed for qubits in ascending qubit order, i.e.
    // descending bit order; bit k-1-j of `bits` goes to positions[j].
    Eigen::Index out = 0;
    int nb = static_cast<int>(positions.size());
    for (int j = 0; j < nb; ++j)
      if (bits & (Eigen::Index(1) << (nb - 1 - j))) out |= Eigen::Index(1) << positions[static_cast<std::size_t>(j)];
    return out;
  };
  const Eigen::MatrixXcd& m = rho.matrix();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    Eigen::Index rs = expand(r, kept_src);
    for (Eigen::Index c = 0; c < dk; ++c) {
      Eigen::Index cs = expand(c, kept_src);
      Complex acc = 0;
      for (Eigen::Index env = 0; env < de; ++env) {
        Eigen::Index es = expand(env, env_src);
        acc += m(rs | es, cs | es);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(k, std::move(out));
}

namespace {

// P|c> = coef * |r(c)>; fills masks/tables for a fast sweep.
struct PauliAction {
  Eigen::Index flip_mask = 0;  // X and Y positions
  Eigen::Index y_mask = 0;
  Eigen::Index z_mask = 0;
  int y_count = 0;
  Complex phase;
};

PauliAction pauli_action(const PauliString& p, int n) {
  if (p.size() != static_cast<std::size_t>(n))
    throw DimensionError("Pauli string length does not match register");
  PauliAction act;
  act.phase = p.phase();
  for (int q = 1; q <= n; ++q) {
    Eigen::Index mask = Eigen::Index(1) << bit_of(q, n);
    switch (p.op(q)) {
      case Pauli::I: break;
      case Pauli::X: act.flip_mask |= mask; break;
      case Pauli::Y:
        act.flip_mask |= mask;
        act.y_mask |= mask;
        ++act.y_count;
        break;
      case Pauli::Z: act.z_mask |= mask; break;
    }
  }
  return act;
}

// Coefficient of P acting on basis state |c>.
Complex action_coef(const PauliAction& act, Eigen::Index c) {
  // Y contributes i * (-1)^bit; Z contributes (-1)^bit.
  int minus = __builtin_popcountll(static_cast<unsigned long long>(c & (act.z_mask | act.y_mask))) & 1;
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex coef = act.phase * ipow[act.y_count % 4];
  return minus ? -coef : coef;
}

}  // namespace

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (!p.has_real_phase())
    throw std::invalid_argument("expectation of an imaginary-phase Pauli string");
  PauliAction act = pauli_action(p, rho.num_qubits());
  const Eigen::MatrixXcd& m = rho.matrix();
  Complex acc = 0;
  for (Eigen::Index c = 0; c < m.rows(); ++c)
    acc += m(c, c ^ act.flip_mask) * action_coef(act, c);
  return acc.real();
}

StateVector apply_pauli(const PauliString& p, const StateVector& s) {
  PauliAction act = pauli_action(p, s.num_qubits());
  const Eigen::VectorXcd& v = s.amplitudes();
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index c = 0; c < v.size(); ++c)
    out(c ^ act.flip_mask) = action_coef(act, c) * v(c);
  return StateVector(s.num_qubits(), std::move(out));
}

double expectation(const StateVector& s, const PauliString& p) {
  if (!p.has_real_phase())
    throw std::invalid_argument("expectation of an imaginary-phase Pauli string");
  StateVector ps = apply_pauli(p, s);
  return s.amplitudes().dot(ps.amplitudes()).real();
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m, double spectral_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
  Eigen::VectorXd vals = eig.eigenvalues();
  if (vals.minCoeff() < -spectral_tol)
    throw std::invalid_argument("matrix is not positive semidefinite");
  Eigen::VectorXd s = vals.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * s.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.num_qubits() != sigma.num_qubits())
    throw DimensionError("fidelity operands differ in size");
  Eigen::MatrixXcd sr = psd_sqrt(rho.matrix(), kSpectralTol);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> check(sigma.matrix(), Eigen::EigenvaluesOnly);
    if (check.eigenvalues().minCoeff() < -kSpectralTol)
      throw std::invalid_argument("fidelity operand is not positive semidefinite");
  }
  Eigen::MatrixXcd inner = sr * sigma.matrix() * sr;
  // inner is PSD up to rounding; clamp its spectrum at 0.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(inner, Eigen::EigenvaluesOnly);
  double tr = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  double f = tr * tr;
  return std::clamp(f, 0.0, 1.0);
}

DensityMatrix dephase(const DensityMatrix& rho, int qubit,
                      const Eigen::Matrix2cd& basis, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("dephasing strength must lie in [0,1]");
  Eigen::Vector2cd b0 = basis.col(0), b1 = basis.col(1);
  if (std::abs(b0.norm() - 1.0) > kStructuralTol ||
      std::abs(b1.norm() - 1.0) > kStructuralTol ||
      std::abs(b0.dot(b1)) > kStructuralTol)
    throw std::invalid_argument("dephasing basis is not orthonormal");
  int n = rho.num_qubits();
  Eigen::Matrix2cd p0 = b0 * b0.adjoint();
  Eigen::Matrix2cd p1 = b1 * b1.adjoint();
  Eigen::MatrixXcd pinched = conjugate_single_qubit(rho.matrix(), n, qubit, p0) +
                             conjugate_single_qubit(rho.matrix(), n, qubit, p1);
  Eigen::MatrixXcd out = (1.0 - lambda) * rho.matrix() + lambda * pinched;
  return DensityMatrix(n, std::move(out));
}

std::vector<double> eigenvalues(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.matrix(), Eigen::EigenvaluesOnly);
  Eigen::VectorXd vals = eig.eigenvalues();
  std::vector<double> out(vals.data(), vals.data() + vals.size());
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace clr
