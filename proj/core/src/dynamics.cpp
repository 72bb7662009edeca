#include "qlnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlnet/errors.hpp"
#include "qlnet/rng.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet {
namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

void softmax_into(const Eigen::Ref<const Vector>& q, double t, Eigen::Ref<Vector> out) {
  const double top = q.maxCoeff();
  out = ((q.array() - top) / t).exp().matrix();
  out /= out.sum();
}

// Advances (q, x) in place by one iteration. `scratch` holds rewards.
void step_in_place(const NetworkGame& game, const LearnerConfig& cfg, Vector& q, Vector& x,
                   Vector& scratch) {
  const std::size_t n = game.num_agents();
  if (cfg.order == UpdateOrder::kSimultaneous) {
    rewards_into(game, x, scratch);
    for (std::size_t k = 0; k < n; ++k) {
      const auto off = idx(game.offset(k));
      const auto len = idx(game.actions(k));
      const double a = cfg.alpha[k];
      q.segment(off, len) = (1.0 - a) * q.segment(off, len) + a * scratch.segment(off, len);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto off = idx(game.offset(k));
      const auto len = idx(game.actions(k));
      softmax_into(q.segment(off, len), cfg.rates[k], x.segment(off, len));
    }
    return;
  }
  scratch.resize(idx(game.total_actions()));
  for (std::size_t k = 0; k < n; ++k) {
    const auto off = idx(game.offset(k));
    const auto len = idx(game.actions(k));
    auto r = scratch.segment(off, len);
    reward_vector_into(game, k, x, r);
    const double a = cfg.alpha[k];
    q.segment(off, len) = (1.0 - a) * q.segment(off, len) + a * r;
    softmax_into(q.segment(off, len), cfg.rates[k], x.segment(off, len));
  }
}

Trajectory simulate(const NetworkGame& game, const LearnerConfig& cfg, const Vector& q0,
                    const Vector& x0) {
  Vector q = q0;
  Vector x = x0;
  Vector scratch(idx(game.total_actions()));
  const std::size_t h = std::min(cfg.window, cfg.horizon);
  const std::size_t window_start = cfg.horizon - h;  // record after steps > window_start
  std::vector<JointStrategy> window;
  window.reserve(h);
  std::vector<std::size_t> sample_steps;
  std::vector<JointStrategy> samples;
  const auto counts = game.action_counts();

  for (std::size_t step = 1; step <= cfg.horizon; ++step) {
    step_in_place(game, cfg, q, x, scratch);
    if (!q.allFinite() || !x.allFinite()) {
      throw NumericalError("non-finite Q-values or strategy at step " + std::to_string(step),
                           step);
    }
    if (step > window_start) window.emplace_back(counts, x);
    if (cfg.record_stride > 0 && step % cfg.record_stride == 0) {
      sample_steps.push_back(step);
      samples.emplace_back(counts, x);
    }
  }
  LearnerState final_state{QState{q}, JointStrategy(counts, x)};
  return Trajectory(std::move(window), std::move(sample_steps), std::move(samples),
                    std::move(final_state), cfg.horizon);
}

}  // namespace

std::string_view to_string(UpdateOrder o) {
  return o == UpdateOrder::kSequential ? "sequential" : "simultaneous";
}

UpdateOrder parse_update_order(std::string_view name) {
  if (name == "sequential") return UpdateOrder::kSequential;
  if (name == "simultaneous") return UpdateOrder::kSimultaneous;
  throw ArgumentError("unknown update order '" + std::string(name) +
                      "' (sequential, simultaneous)");
}

LearnerConfig LearnerConfig::uniform(std::size_t num_agents, double rate, double alpha) {
  LearnerConfig cfg;
  cfg.rates = ExplorationRates::uniform(num_agents, rate);
  cfg.alpha.assign(num_agents, alpha);
  return cfg;
}

void LearnerConfig::validate(const NetworkGame& game) const {
  check_compatible(game, rates);
  if (alpha.size() != game.num_agents()) {
    throw StructuralError("expected " + std::to_string(game.num_agents()) +
                          " learning rates, got " + std::to_string(alpha.size()));
  }
  for (double a : alpha) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ArgumentError("learning rates must lie in [0, 1], got " + std::to_string(a));
    }
  }
  if (horizon == 0) throw ArgumentError("horizon must be positive");
  if (window == 0 || window > horizon) {
    throw ArgumentError("window must satisfy 1 <= window <= horizon");
  }
  if (!(tolerance > 0.0)) throw ArgumentError("tolerance must be positive");
}

double stable_learning_rate(const NetworkGame& game, const ExplorationRates& rates, double cap) {
  check_compatible(game, rates);
  if (!(cap > 0.0 && cap <= 1.0)) throw ArgumentError("learning-rate cap must lie in (0, 1]");
  double lip = 0.0;
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    double sum = 0.0;
    for (const auto& inc : game.incidences(k)) sum += op_norm_two(game.payoff_matrix(inc));
    lip = std::max(lip, sum);
  }
  if (lip == 0.0) return cap;
  return std::min(cap, rates.min() / lip);
}

Vector boltzmann(const Eigen::Ref<const Vector>& q, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ArgumentError("Boltzmann temperature must be positive, got " + std::to_string(t));
  }
  if (q.size() == 0) throw ArgumentError("Boltzmann of an empty vector");
  if (!q.allFinite()) throw ArgumentError("Boltzmann of non-finite Q-values");
  Vector out(q.size());
  softmax_into(q, t, out);
  return out;
}

LearnerState q_step(const NetworkGame& game, const LearnerState& state,
                    const LearnerConfig& cfg) {
  check_compatible(game, state.x);
  check_compatible(game, cfg.rates);
  if (cfg.alpha.size() != game.num_agents()) {
    throw StructuralError("learning rate count does not match the game");
  }
  if (state.q.values.size() != idx(game.total_actions())) {
    throw StructuralError("Q-state layout does not match the game");
  }
  Vector q = state.q.values;
  Vector x = state.x.flat();
  Vector scratch;
  step_in_place(game, cfg, q, x, scratch);
  return LearnerState{QState{std::move(q)}, JointStrategy(game.action_counts(), std::move(x))};
}

QState warm_start_q(const NetworkGame& game, const JointStrategy& x) {
  return QState{rewards(game, x)};
}

JointStrategy random_strategy(const NetworkGame& game, std::uint64_t seed) {
  CounterRng rng(seed, /*stream=*/1);
  Vector flat(idx(game.total_actions()));
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    flat.segment(idx(game.offset(k)), idx(game.actions(k))) = rng.simplex(game.actions(k));
  }
  return JointStrategy(game.action_counts(), std::move(flat));
}

Trajectory::Trajectory(std::vector<JointStrategy> window, std::vector<std::size_t> sample_steps,
                       std::vector<JointStrategy> samples, LearnerState final_state,
                       std::size_t steps_run)
    : window_(std::move(window)),
      sample_steps_(std::move(sample_steps)),
      samples_(std::move(samples)),
      final_(std::move(final_state)),
      steps_run_(steps_run) {}

Trajectory run_q_learning(const NetworkGame& game, const LearnerConfig& cfg,
                          const JointStrategy& init) {
  cfg.validate(game);
  check_compatible(game, init);
  return simulate(game, cfg, warm_start_q(game, init).values, init.flat());
}

Trajectory run_q_learning(const NetworkGame& game, const LearnerConfig& cfg) {
  return run_q_learning(game, cfg, random_strategy(game, cfg.seed));
}

Trajectory continue_q_learning(const NetworkGame& game, const LearnerConfig& cfg,
                               const LearnerState& start) {
  cfg.validate(game);
  check_compatible(game, start.x);
  if (start.q.values.size() != idx(game.total_actions())) {
    throw StructuralError("Q-state layout does not match the game");
  }
  return simulate(game, cfg, start.q.values, start.x.flat());
}

Vector qld_vector_field(const NetworkGame& game, const JointStrategy& x,
                        const ExplorationRates& t) {
  check_compatible(game, t);
  const Vector r = rewards(game, x);
  Vector field(r.size());
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    require_interior(x, k);
    const auto off = idx(game.offset(k));
    const auto len = idx(game.actions(k));
    const auto xk = x.agent(k);
    const auto rk = r.segment(off, len);
    const Vector log_x = xk.array().log().matrix();
    const double mean_reward = xk.dot(rk);
    const double neg_entropy = xk.dot(log_x);
    // sum_j x_kj ln(x_kj / x_ki) = <x_k, ln x_k> - ln x_ki
    field.segment(off, len) =
        (xk.array() * (rk.array() - mean_reward + t[k] * (neg_entropy - log_x.array())))
            .matrix();
  }
  return field;
}

std::vector<JointStrategy> integrate_qld(const NetworkGame& game, const JointStrategy& x0,
                                         const ExplorationRates& t, double dt,
                                         std::size_t steps, std::size_t stride) {
  if (!(dt > 0.0)) throw ArgumentError("Euler step must be positive");
  std::vector<JointStrategy> out;
  JointStrategy x = x0;
  for (std::size_t s = 1; s <= steps; ++s) {
    Vector next = x.flat() + dt * qld_vector_field(game, x, t);
    // Euler steps can leave the simplex by rounding; project back.
    for (std::size_t k = 0; k < game.num_agents(); ++k) {
      auto seg = next.segment(idx(game.offset(k)), idx(game.actions(k)));
      seg = seg.cwiseMax(kInteriorFloor * 1e10);
      seg /= seg.sum();
    }
    x = JointStrategy(game.action_counts(), std::move(next));
    if (stride > 0 && s % stride == 0 && s != steps) out.push_back(x);
  }
  out.push_back(x);
  return out;
}

double convergence_statistic(std::span<const JointStrategy> window) {
  if (window.empty()) throw ArgumentError("convergence test needs a non-empty window");
  const Eigen::Index dim = window.front().flat().size();
  Vector hi = window.front().flat();
  Vector lo = hi;
  for (const auto& s : window.subspan(1)) {
    if (s.flat().size() != dim) throw StructuralError("window states have different layouts");
    hi = hi.cwiseMax(s.flat());
    lo = lo.cwiseMin(s.flat());
  }
  double stat = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (hi(i) > 0.0) stat = std::max(stat, (hi(i) - lo(i)) / hi(i));
  }
  return stat;
}

bool converged(std::span<const JointStrategy> window, double tol) {
  return convergence_statistic(window) < tol;
}

}  // namespace qlnet
