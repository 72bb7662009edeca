#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace qlnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// One undirected edge of a network polymatrix game. `a_kl` is agent k's
// payoff matrix against l (n_k x n_l); `a_lk` is agent l's payoff matrix
// against k (n_l x n_k). A one-way interaction uses a zero matrix for the
// silent direction; the edge still counts in the adjacency matrix.
struct Edge {
  std::size_t k = 0;
  std::size_t l = 0;
  Matrix a_kl;
  Matrix a_lk;
};

// Immutable network polymatrix game. Agent k's payoff is
//   u_k(x) = sum over incident edges of x_k . A^{kl} x_l.
class NetworkGame {
 public:
  // An edge as seen from one of its endpoints.
  struct Incidence {
    std::size_t neighbor = 0;
    std::size_t edge = 0;
    bool forward = true;  // true when this agent is the edge's `k`
  };

  // Throws StructuralError on self-edges, duplicate pairs, out-of-range
  // agents, dimension mismatches, zero-action agents or non-finite payoffs.
  NetworkGame(std::vector<std::size_t> action_counts, std::vector<Edge> edges);

  std::size_t num_agents() const { return action_counts_.size(); }
  std::span<const std::size_t> action_counts() const { return action_counts_; }
  std::size_t actions(std::size_t k) const { return action_counts_.at(k); }
  std::size_t offset(std::size_t k) const { return offsets_.at(k); }
  std::size_t total_actions() const { return offsets_.back(); }

  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::size_t> neighbors(std::size_t k) const {
    return neighbors_.at(k);
  }
  std::span<const Incidence> incidences(std::size_t k) const {
    return incidences_.at(k);
  }

  // The matrix that maps the neighbour's strategy into this agent's rewards.
  const Matrix& payoff_matrix(const Incidence& inc) const {
    const Edge& e = edges_[inc.edge];
    return inc.forward ? e.a_kl : e.a_lk;
  }

  // Symmetric 0/1 adjacency matrix with zero diagonal.
  Matrix adjacency() const;

 private:
  std::vector<std::size_t> action_counts_;
  std::vector<std::size_t> offsets_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::vector<Incidence>> incidences_;
};

// One probability vector per agent, stored contiguously.
class JointStrategy {
 public:
  // Entries must be finite and >= 0. Each block may deviate from unit sum by
  // at most 1e-9 and is renormalised when it deviates by more than 1e-12;
  // anything further off throws StructuralError.
  JointStrategy(std::span<const std::size_t> action_counts, Vector flat);
  explicit JointStrategy(const std::vector<Vector>& per_agent);

  static JointStrategy uniform(std::span<const std::size_t> action_counts);

  std::size_t num_agents() const { return counts_.size(); }
  std::span<const std::size_t> action_counts() const { return counts_; }
  std::size_t offset(std::size_t k) const { return offsets_.at(k); }

  Eigen::VectorBlock<const Vector> agent(std::size_t k) const {
    return flat_.segment(static_cast<Eigen::Index>(offsets_.at(k)),
                         static_cast<Eigen::Index>(counts_.at(k)));
  }
  const Vector& flat() const { return flat_; }
  std::vector<Vector> to_vectors() const;

  friend bool operator==(const JointStrategy& a, const JointStrategy& b) {
    return a.counts_ == b.counts_ && a.flat_ == b.flat_;
  }

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_;
  Vector flat_;
};

// Per-agent softmax temperatures, all strictly positive.
class ExplorationRates {
 public:
  explicit ExplorationRates(std::vector<double> rates);
  static ExplorationRates uniform(std::size_t num_agents, double rate);

  std::size_t size() const { return rates_.size(); }
  double operator[](std::size_t k) const { return rates_.at(k); }
  std::span<const double> values() const { return rates_; }
  double max() const;
  double min() const;

  // Copy with agent k's rate replaced (ArgumentError unless rate > 0).
  ExplorationRates with(std::size_t k, double rate) const;

  friend bool operator==(const ExplorationRates&, const ExplorationRates&) = default;

 private:
  std::vector<double> rates_;
};

// Probabilities below this are treated as zero by operations that need ln x.
inline constexpr double kInteriorFloor = 1e-300;

// Throws StructuralError unless x has the game's action layout.
void check_compatible(const NetworkGame& game, const JointStrategy& x);
void check_compatible(const NetworkGame& game, const ExplorationRates& t);

// r_k(x_{-k}): expected reward of each of agent k's actions.
Vector reward_vector(const NetworkGame& game, std::size_t k, const JointStrategy& x);

// Rewards of every agent, concatenated in the JointStrategy layout.
Vector rewards(const NetworkGame& game, const JointStrategy& x);

// Unchecked kernels used by the simulators: `flat` uses the game's layout.
void reward_vector_into(const NetworkGame& game, std::size_t k, const Vector& flat,
                        Eigen::Ref<Vector> out);
void rewards_into(const NetworkGame& game, const Vector& flat, Vector& out);

// u_k(x), evaluated edge by edge.
double payoff(const NetworkGame& game, std::size_t k, const JointStrategy& x);

// u_k(x) - T_k <x_k, ln x_k>. Requires x_k strictly interior (DomainError).
double perturbed_payoff(const NetworkGame& game, std::size_t k, const JointStrategy& x,
                        const ExplorationRates& t);

// Pseudo-gradient of the entropy-perturbed game: block k is
// T_k (ln x_k + 1) - r_k(x_{-k}). Requires x strictly interior.
Vector pseudo_gradient(const NetworkGame& game, const JointStrategy& x,
                       const ExplorationRates& t);

// Throws DomainError if any entry of x_k is below kInteriorFloor.
void require_interior(const JointStrategy& x, std::size_t k);

}  // namespace qlnet
