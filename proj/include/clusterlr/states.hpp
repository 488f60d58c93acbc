#pragma once

#include <string>
#include <vector>

#include "clusterlr/state.hpp"

// Polarization-encoded states used by the four-photon experiment and its
// simulation: H/V is the computational basis, D/A and R/L the X and Y
// eigenbases.

namespace clr {

enum class Pol { H, V, D, A, R, L };

char pol_char(Pol p);
Pol pol_from_char(char c);
Eigen::Vector2cd pol_ket(Pol p);

// Orthonormal dephasing pair by name: "HV", "DA", or "RL" (columns).
Eigen::Matrix2cd basis_pair(const std::string& name);

// Tensor product of single-photon kets, qubit 1 first.
StateVector product_ket(const std::vector<Pol>& labels);

// (|HH> + |VV>)/sqrt(2).
StateVector bell_phi_plus();

// Post-select qubits a and b on equal polarization (both H or both V),
// as a polarizing beam splitter does in coincidence. Returns the
// renormalized state and the success probability; throws if the
// post-selected component vanishes.
std::pair<StateVector, double> pbs_fusion(const StateVector& s, int a, int b);

// (|HHHH> + |VVVV>)/sqrt(2).
StateVector ghz4();
// (|HHH> +/- |VVV>)/sqrt(2); sign is +1 or -1.
StateVector ghz3(int sign);

// |+>^n followed by CZ on every edge.
StateVector cluster_state(const GraphSpec& g);

// Equal mixture of (|DHD> +/- |AVA>)/sqrt(2) tensored with |H> or |V>.
DensityMatrix rho_phi();
// Equal mixture of GHZ3(+) (x) |D> and GHZ3(-) (x) |A>; equals rho_phi
// after Hadamards on qubits 1, 3, 4.
DensityMatrix rho_psi();

// p * rho + (1-p) * I/2^n.
DensityMatrix add_white_noise(const DensityMatrix& rho, double p);

struct DephasingEntry {
  int qubit = 0;
  std::string basis;  // "HV", "DA", or "RL"
  double lambda = 0.0;
};

struct NoiseSpec {
  double white_noise_p = 1.0;
  std::vector<DephasingEntry> dephasing;  // applied after the built-in stages
};

// Stages of the simulated source: two Bell pairs fused on qubits 2 and 3,
// then a white-noise admixture, then complete D/A dephasing of qubit 4
// (the quartz decoherer), then any extra dephasing entries in order.
struct PipelineResult {
  DensityMatrix post_fusion;
  DensityMatrix post_noise;
  DensityMatrix final_state;
  double fusion_probability = 0.0;
};

PipelineResult generation_pipeline(const NoiseSpec& noise);

}  // namespace clr
