#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlnet/annealer.hpp"
#include "qlnet/catalog.hpp"
#include "qlnet/dynamics.hpp"
#include "qlnet/game.hpp"

namespace qlnet {

enum class GameFamily { kShapley, kSato, kChakraborty, kMismatching, kRandom };

std::string_view to_string(GameFamily f);
GameFamily parse_game_family(std::string_view name);

// A catalog game together with the size and topology to build it on.
// Chakraborty and mismatching games are always directed rings and ignore
// `topology`.
struct GameSpec {
  GameFamily family = GameFamily::kShapley;
  Topology topology = Topology::kRing;
  std::size_t num_agents = 3;
  double shapley_beta = 0.2;
  double sato_eps_x = 0.01;
  double sato_eps_y = -0.05;
  double chakraborty_alpha = 2.5;
  double chakraborty_beta = 1.5;
  double mismatch_m = 2.0;
  std::size_t actions_per_agent = 2;  // random family
  double payoff_low = 0.0;
  double payoff_high = 5.0;
  std::uint64_t seed = 0;
};

NetworkGame build_game(const GameSpec& spec);

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). The first exception thrown by any task is rethrown after all
// workers stop.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

// Learning-rate choice for experiment runs: a fixed value, or
// stable_learning_rate() evaluated at each T.
struct LearningRate {
  std::optional<double> fixed;  // none = automatic

  double at(const NetworkGame& game, const ExplorationRates& rates) const;
  std::string describe() const;
};

struct RunSettings {
  std::size_t num_inits = 10;
  std::size_t horizon = 20000;
  std::size_t window = 2500;
  double tol = 1e-5;
  std::uint64_t seed = 0;  // init i uses derive_seed(seed, i)
  LearningRate alpha;
  UpdateOrder order = UpdateOrder::kSequential;
};

// Outcome of running every initial condition at one exploration rate.
struct PointResult {
  double rate = 0.0;
  double alpha = 0.0;
  bool all_converged = false;
  std::size_t converged_count = 0;
  double worst_statistic = 0.0;
  // Largest pairwise l-infinity distance between the final strategies of
  // converged runs (0 when fewer than two converged).
  double agreement = 0.0;
  std::vector<JointStrategy> finals;
  std::vector<double> statistics;
};

// Q-learning from num_inits random starts at uniform rate `rate`. Runs that
// overflow count as not converged.
PointResult evaluate_rate(const NetworkGame& game, double rate, const RunSettings& run,
                          std::size_t threads = 1);

enum class SearchMode { kGrid, kBisection };

std::string_view to_string(SearchMode m);
SearchMode parse_search_mode(std::string_view name);

struct TSearch {
  SearchMode mode = SearchMode::kBisection;
  double lo = 0.01;
  double hi = 10.0;
  double step = 0.01;  // grid spacing or bisection resolution
};

struct SweepSpec {
  GameSpec game;
  std::vector<std::size_t> agent_counts{3, 6, 9, 12, 15};
  TSearch search;
  RunSettings run;
  // Multiplier on the smallest certified uniform threshold for the
  // sufficiency run reported next to each boundary (0 disables it).
  double certify_margin = 1.05;
  std::size_t threads = 0;

  void validate() const;
};

struct BoundaryRow {
  std::size_t num_agents = 0;
  bool found = false;
  double t_star = 0.0;  // meaningful when found
  double c1_max = 0.0;
  double c2 = 0.0;
  std::optional<double> c3;
  double min_threshold = 0.0;
  std::size_t evaluations = 0;
  double t_star_agreement = 0.0;
  // Bracketing certificate around t_star.
  bool upper_converges = false;  // every init converges at 1.02 t_star
  bool lower_fails = false;      // some init fails at 0.98 t_star
  // t_star <= min_threshold + search step.
  bool bound_respected = true;
  // Sufficiency run at certify_margin * min_threshold (floored at search.lo).
  std::optional<double> certified_rate;
  bool certified_converged = false;
  double certified_agreement = 0.0;
};

struct BoundaryTable {
  SweepSpec spec;
  std::vector<BoundaryRow> rows;  // ascending num_agents
};

// Smallest T in the search range for which every init converges; rows whose
// range contains no converging T are flagged with found = false.
BoundaryTable stability_sweep(const SweepSpec& spec);

struct SpreadRow {
  double rate = 0.0;
  std::size_t init = 0;
  std::size_t agent = 0;
  std::size_t action = 0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
  double relative_range = 0.0;  // (max - min) / max, 0 when max is 0
};

// Linear-interpolation quantile of sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

// Window statistics of every (T, init, agent, action), sorted in that order.
std::vector<SpreadRow> spread_report(const NetworkGame& game, std::span<const double> rates,
                                     const RunSettings& run, std::size_t threads = 0);

struct CurveRow {
  Topology topology = Topology::kRing;
  std::size_t num_agents = 0;
  double c1_max = 0.0;
  double c2 = 0.0;
  std::optional<double> c3;  // none when not applicable
  double sigma_i = 0.0;
  double norm_inf = 0.0;
  double norm_two = 0.0;
};

// Theorem thresholds of `family` over topologies x agent counts. The
// family's num_agents and topology fields are overridden per row.
std::vector<CurveRow> threshold_curves(const GameSpec& family, std::span<const Topology> topologies,
                                       std::span<const std::size_t> agent_counts);

struct BatchRow {
  std::size_t game_id = 0;
  std::uint64_t seed = 0;
  std::string status;  // anneal status, or "error"
  std::string message; // error text when status == "error"
  double initial_exploitability = 0.0;
  double final_exploitability = 0.0;
  double initial_epsilon = 0.0;
  double final_epsilon = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t steps_run = 0;

  double exploitability_decrease() const { return initial_exploitability - final_exploitability; }
  double epsilon_decrease() const { return initial_epsilon - final_epsilon; }
};

struct BatchSpec {
  RandomGameSpec game;      // seed is replaced per game
  std::size_t count = 50;
  std::uint64_t master_seed = 0;
  AnnealParams anneal;
  double alpha = kDefaultLearningRate;
  std::size_t threads = 0;
};

// Game i uses seed derive_seed(master_seed, i) for both its payoffs and its
// initial strategy. Failures become rows with status "error".
std::vector<BatchRow> random_batch(const BatchSpec& spec);

}  // namespace qlnet
