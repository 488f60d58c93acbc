#include "clusterlr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace clr {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream));
}

double CountSampler::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double CountSampler::exponential() {
  return -std::log1p(-uniform());
}

std::int64_t CountSampler::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("Poisson mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  std::int64_t k = 0;
  double acc = exponential();
  while (acc <= mean) {
    ++k;
    acc += exponential();
  }
  return k;
}

}  // namespace clr
