#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qlnet/dynamics.hpp"
#include "qlnet/game.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet {

// Exploration annealing: start every agent inside a convergence region,
// then repeatedly lower the rate of the agent with the largest
// T_k A_k(x_k) by delta_t, re-running Q-learning from the current Q-values,
// until the windowed convergence test fails.
struct AnnealParams {
  std::optional<double> delta_t;       // default: 2% of the initial max threshold
  std::size_t max_anneals = 1000;
  std::optional<std::size_t> horizon;  // default: 500 N
  std::size_t window = 500;
  double tol = 1e-5;
  Condition initial_condition = Condition::kC1;
  double safety_margin = 1.05;
  // Lower bound on T_k(0); keeps zero thresholds (pairwise zero-sum games)
  // usable.
  double min_initial_rate = 0.1;
  UpdateOrder order = UpdateOrder::kSequential;
};

enum class AnnealStatus {
  kMaxAnneals,    // every requested anneal converged
  kUnstable,      // the convergence test failed; the last step is rejected
  kFloorReached,  // the next decrease would make a rate non-positive
};

std::string_view to_string(AnnealStatus s);

struct AnnealStep {
  ExplorationRates rates;
  JointStrategy strategy;  // final strategy of this run
  double epsilon = 0.0;
  std::vector<double> per_agent_epsilon;
  double exploitability = 0.0;
  double qre_residual = 0.0;
  double convergence_statistic = 0.0;
  bool converged = false;
  std::optional<std::size_t> annealed_agent;  // none for the initial run
  std::size_t iterations = 0;                 // cumulative Q-learning steps
};

struct AnnealHistory {
  std::vector<AnnealStep> steps;  // initial run first; a rejected step, if any, last
  AnnealStatus status = AnnealStatus::kMaxAnneals;
  double delta_t = 0.0;
  std::size_t horizon = 0;

  // The last converged step: the learned QRE.
  const AnnealStep& result() const;
  const AnnealStep& initial() const { return steps.front(); }
  std::vector<const AnnealStep*> accepted() const;
};

// argmax_k of the per-agent values; values within 1e-12 (relative) of the
// maximum are ties and resolve to the lowest index.
std::size_t select_annealed_agent(std::span<const double> per_agent_epsilon);

// Initial per-agent rates: max(safety_margin * threshold_k, min_initial_rate).
// ArgumentError when C3 is selected on a game without a shared bimatrix.
ExplorationRates initial_rates(const StabilityReport& report, const AnnealParams& params);

// NumericalError("initial threshold did not converge") when the first run
// fails the convergence test.
AnnealHistory anneal(const NetworkGame& game, const AnnealParams& params,
                     std::span<const double> alpha, std::uint64_t seed);

}  // namespace qlnet
