#include "qlnet/rng.hpp"

#include <cmath>

namespace qlnet {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~index));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL)) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Eigen::VectorXd CounterRng::simplex(std::size_t n) {
  // Normalised unit exponentials are uniform on the simplex.
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = -std::log1p(-uniform());
  const double s = v.sum();
  if (s > 0.0) {
    v /= s;
  } else {
    v.setConstant(1.0 / static_cast<double>(n));
  }
  return v;
}

}  // namespace qlnet
