#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

namespace qlnet {

// Counter-based generator: the i-th draw is a pure function of
// (seed, stream, i), so results do not depend on the standard library's
// distribution implementations or on the order in which streams are used.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform point on the probability simplex of dimension n.
  Eigen::VectorXd simplex(std::size_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Independent child seed, e.g. one per initial condition or per game.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qlnet
