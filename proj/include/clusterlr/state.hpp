#pragma once

#include <Eigen/Dense>
#include <vector>

#include "clusterlr/core.hpp"
#include "clusterlr/pauli.hpp"

// Dense state vectors and density matrices on small registers.
// Computational-basis index bit for qubit q (1-based) is bit n-q, so
// qubit 1 is the most significant bit and kron order matches qubit order.

namespace clr {

class StateVector {
 public:
  // Amplitude vector must have length 2^n and unit norm (1e-12).
  StateVector(int num_qubits, Eigen::VectorXcd amplitudes);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  StateVector tensor(const StateVector& other) const;

 private:
  int n_;
  Eigen::VectorXcd amps_;
};

class DensityMatrix {
 public:
  // Checks shape, hermiticity, and unit trace (1e-12). Positivity is a
  // separate O(d^3) check; see validate() and from_matrix().
  DensityMatrix(int num_qubits, Eigen::MatrixXcd entries);

  // Constructor checks plus the spectral check; use at trust boundaries.
  static DensityMatrix from_matrix(int num_qubits, Eigen::MatrixXcd entries);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  // Throws unless hermitian and unit-trace within structural_tol and all
  // eigenvalues >= -spectral_tol.
  void validate(double structural_tol = kStructuralTol,
                double spectral_tol = kSpectralTol) const;

 private:
  int n_;
  Eigen::MatrixXcd m_;
};

// One 2x2 factor per qubit; identity() gives all-identity factors.
struct LocalUnitary {
  std::vector<Eigen::Matrix2cd> factors;

  static LocalUnitary identity(int n);
  LocalUnitary& set(int qubit, const Eigen::Matrix2cd& u);  // 1-based
};

Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd pauli_matrix(Pauli p);

DensityMatrix densify(const StateVector& s);

StateVector apply_local(const LocalUnitary& u, const StateVector& s);
DensityMatrix apply_local(const LocalUnitary& u, const DensityMatrix& rho);

StateVector apply_cz(const StateVector& s, int a, int b);
DensityMatrix apply_cz(const DensityMatrix& rho, int a, int b);

// Keep the listed qubits (ascending, non-empty, distinct) and trace the rest.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Expectation of a +/-1 phase Pauli string; imaginary phases are rejected.
double expectation(const DensityMatrix& rho, const PauliString& p);
double expectation(const StateVector& s, const PauliString& p);

StateVector apply_pauli(const PauliString& p, const StateVector& s);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0,1].
// Inputs must be positive semidefinite within kSpectralTol.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Scale the off-diagonals of qubit `q` by 1-lambda in the given basis.
// `basis` columns are the orthonormal pair defining the dephasing basis;
// lambda in [0,1], lambda = 1 removes the coherences entirely.
DensityMatrix dephase(const DensityMatrix& rho, int qubit,
                      const Eigen::Matrix2cd& basis, double lambda);

// Real spectrum, descending.
std::vector<double> eigenvalues(const DensityMatrix& rho);

}  // namespace clr
