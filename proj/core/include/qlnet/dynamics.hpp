#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qlnet/game.hpp"

namespace qlnet {

// Order in which agents apply the Q-update within one iteration.
//   kSequential:   agents 0..N-1 update in turn; agent k already sees the
//                  new strategies of agents < k (the loop order of the
//                  exploration-annealing pseudocode).
//   kSimultaneous: every agent updates from the previous joint strategy.
enum class UpdateOrder { kSequential, kSimultaneous };

std::string_view to_string(UpdateOrder o);
UpdateOrder parse_update_order(std::string_view name);

inline constexpr double kDefaultLearningRate = 0.1;

struct LearnerConfig {
  ExplorationRates rates = ExplorationRates::uniform(1, 1.0);
  std::vector<double> alpha;  // per agent, in [0, 1]
  std::size_t horizon = 2500;
  std::size_t window = 2500;
  double tolerance = 1e-5;
  std::uint64_t seed = 0;
  UpdateOrder order = UpdateOrder::kSequential;
  // Keep every `record_stride`-th state in Trajectory::samples (0 = none).
  std::size_t record_stride = 0;

  // Same T and alpha for every agent.
  static LearnerConfig uniform(std::size_t num_agents, double rate,
                               double alpha = kDefaultLearningRate);

  // ArgumentError / StructuralError on inconsistent settings.
  void validate(const NetworkGame& game) const;
};

// Uniform learning rate min(cap, min_k T_k / L) with L = max_k sum_l ||A^{kl}||_2,
// the largest Lipschitz constant of a reward map. At this step size the
// linearised iteration around a QRE contracts whenever the continuous dynamics
// do, so small exploration rates in games with large skew-symmetric parts
// (e.g. Rock-Paper-Scissors variants) do not make the discrete map overshoot.
// Returns `cap` for edgeless or all-zero games.
double stable_learning_rate(const NetworkGame& game, const ExplorationRates& rates,
                            double cap = kDefaultLearningRate);

// Q-values of every agent in the game's action layout.
struct QState {
  Vector values;
};

struct LearnerState {
  QState q;
  JointStrategy x;
};

// Softmax of q / t with max subtraction. ArgumentError unless t > 0.
Vector boltzmann(const Eigen::Ref<const Vector>& q, double t);

// One Q-learning iteration: Q_k <- (1 - alpha_k) Q_k + alpha_k r_k(x_{-k}),
// x_k <- boltzmann(Q_k, T_k), in the configured update order.
LearnerState q_step(const NetworkGame& game, const LearnerState& state,
                    const LearnerConfig& cfg);

// Q(0) = r(x(0)): the Q-values consistent with the initial strategy.
QState warm_start_q(const NetworkGame& game, const JointStrategy& x);

// Uniform draw on each agent's simplex.
JointStrategy random_strategy(const NetworkGame& game, std::uint64_t seed);

class Trajectory {
 public:
  Trajectory(std::vector<JointStrategy> window, std::vector<std::size_t> sample_steps,
             std::vector<JointStrategy> samples, LearnerState final_state,
             std::size_t steps_run);

  // The final h states, oldest first.
  std::span<const JointStrategy> window() const { return window_; }
  std::span<const std::size_t> sample_steps() const { return sample_steps_; }
  std::span<const JointStrategy> samples() const { return samples_; }
  const LearnerState& final_state() const { return final_; }
  const JointStrategy& final_strategy() const { return final_.x; }
  std::size_t steps_run() const { return steps_run_; }

 private:
  std::vector<JointStrategy> window_;
  std::vector<std::size_t> sample_steps_;
  std::vector<JointStrategy> samples_;
  LearnerState final_;
  std::size_t steps_run_;
};

// cfg.horizon iterations from Q(0) = r(init).
Trajectory run_q_learning(const NetworkGame& game, const LearnerConfig& cfg,
                          const JointStrategy& init);
// Same, from random_strategy(game, cfg.seed).
Trajectory run_q_learning(const NetworkGame& game, const LearnerConfig& cfg);
// cfg.horizon iterations continuing from an existing Q-state.
Trajectory continue_q_learning(const NetworkGame& game, const LearnerConfig& cfg,
                               const LearnerState& start);

// Continuous-time Q-learning dynamics
//   dx_ki/dt = x_ki [ r_ki - <x_k, r_k> + T_k sum_j x_kj ln(x_kj / x_ki) ]
// in the game's action layout. DomainError on boundary points.
Vector qld_vector_field(const NetworkGame& game, const JointStrategy& x,
                        const ExplorationRates& t);

// Explicit Euler integration of the field, for comparison with the discrete
// iteration. Returns every `stride`-th state and the final one.
std::vector<JointStrategy> integrate_qld(const NetworkGame& game, const JointStrategy& x0,
                                         const ExplorationRates& t, double dt,
                                         std::size_t steps, std::size_t stride = 0);

// max over agents and actions of (max_t x - min_t x) / max_t x across the
// window; coordinates with max 0 contribute 0. ArgumentError on an empty window.
double convergence_statistic(std::span<const JointStrategy> window);

// convergence_statistic(window) < tol.
bool converged(std::span<const JointStrategy> window, double tol);

}  // namespace qlnet
