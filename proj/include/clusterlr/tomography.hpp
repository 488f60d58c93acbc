#pragma once

#include <functional>

#include "clusterlr/measurement.hpp"

// Overcomplete product-projector tomography over {H,V,D,R}^n, linear
// inversion, and maximum-likelihood reconstruction under the Poisson
// counting model c_i ~ Poisson(s * <p_i|rho|p_i>) with the overall scale
// s profiled out analytically.

namespace clr {

// One Poisson count per projector, canonical order (see
// tomography_settings).
struct TomographySet {
  int num_qubits = 0;
  std::vector<ProjectorString> projectors;
  std::vector<double> counts;
  double duration_s = 60.0;
  CountsMeta meta;
};

// All 4^n product projectors, letters H < V < D < R, qubit 1 most
// significant.
std::vector<ProjectorString> tomography_settings(int n);

// Counts with mean rate_constant * duration_s * <p_i|rho|p_i>.
TomographySet simulate_tomography(const DensityMatrix& rho, double rate_constant,
                                  double duration_s, std::uint64_t seed,
                                  const std::string& provenance = "");

// Least-squares-free exact inversion on the Pauli coefficients; hermitian
// and unit trace by construction but possibly indefinite on finite counts.
Eigen::MatrixXcd linear_inversion(const TomographySet& t);

struct MleResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string initializer;
  std::vector<double> ll_trace;  // accepted-step log-likelihoods
};

// Gradient ascent on rho = T T^dagger / tr(T T^dagger) with a
// backtracking line search, started from the eigenvalue-clamped linear
// inversion. Accepted steps never decrease the likelihood; convergence
// is a relative log-likelihood change below tol.
MleResult mle_reconstruct(const TomographySet& t, double tol = 1e-10,
                          int max_iter = 5000);

// Project qubit `q` onto `ket`, renormalize, drop the qubit. Returns the
// conditional state and the branch probability; throws when the branch
// probability is below 1e-12.
std::pair<DensityMatrix, double> conditional_state(const DensityMatrix& rho,
                                                   int qubit,
                                                   const Eigen::Vector2cd& ket);

// W = 1/2 - <GHZ3(sign)|rho|GHZ3(sign)>; negative values witness genuine
// three-qubit entanglement.
double ghz_witness(const DensityMatrix& rho3, int sign);

// Parametric bootstrap: resample every count as Poisson(observed),
// recompute the statistic, return the sample standard deviation across
// replicas (reduced in replica order; replica b uses derive_seed(seed, b)).
double bootstrap_sigma(const TomographySet& t,
                       const std::function<double(const TomographySet&)>& statistic,
                       int replicas, std::uint64_t seed);
double bootstrap_sigma(const CountsTable& t,
                       const std::function<double(const CountsTable&)>& statistic,
                       int replicas, std::uint64_t seed);

// One bootstrap pass shared by several statistics; returns one sigma per
// statistic component.
std::vector<double> bootstrap_sigmas(
    const TomographySet& t,
    const std::function<std::vector<double>(const TomographySet&)>& statistics,
    int replicas, std::uint64_t seed);

}  // namespace clr
