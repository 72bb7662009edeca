#include "qlnet/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlnet/equilibria.hpp"
#include "qlnet/errors.hpp"

namespace qlnet {
namespace {

AnnealStep make_step(const NetworkGame& game, const LearnerConfig& cfg, const Trajectory& traj,
                     std::optional<std::size_t> annealed, std::size_t iterations) {
  const JointStrategy& x = traj.final_strategy();
  const EpsilonNash eps = epsilon_nash(game, x, cfg.rates);
  const double stat = convergence_statistic(traj.window());
  return AnnealStep{
      .rates = cfg.rates,
      .strategy = x,
      .epsilon = eps.epsilon,
      .per_agent_epsilon = eps.per_agent,
      .exploitability = exploitability(game, x),
      .qre_residual = qre_residual(game, x, cfg.rates),
      .convergence_statistic = stat,
      .converged = stat < cfg.tolerance,
      .annealed_agent = annealed,
      .iterations = iterations,
  };
}

}  // namespace

std::string_view to_string(AnnealStatus s) {
  switch (s) {
    case AnnealStatus::kMaxAnneals: return "max_anneals";
    case AnnealStatus::kUnstable: return "unstable";
    case AnnealStatus::kFloorReached: return "floor_reached";
  }
  return "?";
}

const AnnealStep& AnnealHistory::result() const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->converged) return *it;
  }
  throw ArgumentError("anneal history has no converged step");
}

std::vector<const AnnealStep*> AnnealHistory::accepted() const {
  std::vector<const AnnealStep*> out;
  for (const auto& s : steps)
    if (s.converged) out.push_back(&s);
  return out;
}

std::size_t select_annealed_agent(std::span<const double> per_agent_epsilon) {
  if (per_agent_epsilon.empty()) throw ArgumentError("no agents to anneal");
  const double top = *std::max_element(per_agent_epsilon.begin(), per_agent_epsilon.end());
  const double slack = 1e-12 * std::max(1.0, std::abs(top));
  for (std::size_t k = 0; k < per_agent_epsilon.size(); ++k) {
    if (per_agent_epsilon[k] >= top - slack) return k;
  }
  return 0;
}

ExplorationRates initial_rates(const StabilityReport& report, const AnnealParams& params) {
  if (!(params.safety_margin >= 1.0)) throw ArgumentError("safety margin must be >= 1");
  if (!(params.min_initial_rate > 0.0)) throw ArgumentError("min_initial_rate must be positive");
  std::vector<double> t = report.thresholds(params.initial_condition);
  for (double& v : t) v = std::max(params.safety_margin * v, params.min_initial_rate);
  return ExplorationRates(std::move(t));
}

AnnealHistory anneal(const NetworkGame& game, const AnnealParams& params,
                     std::span<const double> alpha, std::uint64_t seed) {
  const StabilityReport report = stability_report(game);
  const ExplorationRates t0 = initial_rates(report, params);
  const auto thresholds = report.thresholds(params.initial_condition);
  const double max_threshold = *std::max_element(thresholds.begin(), thresholds.end());

  AnnealHistory history;
  history.delta_t = params.delta_t.value_or(0.02 * (max_threshold > 0.0 ? max_threshold : t0.max()));
  history.horizon = params.horizon.value_or(500 * game.num_agents());
  if (!(history.delta_t > 0.0)) throw ArgumentError("annealing step must be positive");

  LearnerConfig cfg;
  cfg.rates = t0;
  cfg.alpha.assign(alpha.begin(), alpha.end());
  cfg.horizon = history.horizon;
  cfg.window = params.window;
  cfg.tolerance = params.tol;
  cfg.seed = seed;
  cfg.order = params.order;
  cfg.validate(game);

  Trajectory traj = run_q_learning(game, cfg);
  std::size_t iterations = traj.steps_run();
  history.steps.push_back(make_step(game, cfg, traj, std::nullopt, iterations));
  if (!history.steps.back().converged) {
    throw NumericalError("initial threshold did not converge (convergence statistic " +
                             std::to_string(history.steps.back().convergence_statistic) +
                             "); increase the safety margin or horizon",
                         iterations, history.steps.back().convergence_statistic);
  }

  LearnerState state = traj.final_state();
  history.status = AnnealStatus::kMaxAnneals;
  for (std::size_t m = 0; m < params.max_anneals; ++m) {
    const AnnealStep& last = history.steps.back();
    const std::size_t agent = select_annealed_agent(last.per_agent_epsilon);
    const double lowered = cfg.rates[agent] - history.delta_t;
    if (!(lowered > 0.0)) {
      history.status = AnnealStatus::kFloorReached;
      break;
    }
    cfg.rates = cfg.rates.with(agent, lowered);
    traj = continue_q_learning(game, cfg, state);
    state = traj.final_state();
    iterations += traj.steps_run();
    history.steps.push_back(make_step(game, cfg, traj, agent, iterations));
    if (!history.steps.back().converged) {
      history.status = AnnealStatus::kUnstable;
      break;
    }
  }
  return history;
}

}  // namespace qlnet
