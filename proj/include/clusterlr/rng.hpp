#pragma once

#include <cstdint>
#include <random>

// Deterministic randomness. All sampling sits on top of mt19937_64 raw
// output, and the Poisson draw is implemented here rather than through
// std::poisson_distribution, whose algorithm varies across standard
// libraries. Identical seeds therefore give identical counts everywhere.

namespace clr {

std::uint64_t splitmix64(std::uint64_t x);

// Independent sub-stream seed: master XOR a hash of the stream index.
// Stages of a run (per-setting sampling, tomography, bootstrap replicas)
// each get their own stream so they can execute in any order or
// concurrently and still reduce deterministically.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

class CountSampler {
 public:
  explicit CountSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform();      // [0, 1)
  double exponential();  // Exp(1)
  // Counts renewals of a unit-rate exponential clock before `mean`
  // elapses; exact for any mean without underflow.
  std::int64_t poisson(double mean);

 private:
  std::mt19937_64 rng_;
};

}  // namespace clr
