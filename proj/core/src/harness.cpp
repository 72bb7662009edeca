#include "qlnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "qlnet/equilibria.hpp"
#include "qlnet/errors.hpp"
#include "qlnet/rng.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet {
namespace {

double linf_distance(const JointStrategy& a, const JointStrategy& b) {
  return (a.flat() - b.flat()).cwiseAbs().maxCoeff();
}

double max_pairwise_distance(std::span<const JointStrategy> xs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) worst = std::max(worst, linf_distance(xs[i], xs[j]));
  return worst;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

std::string_view to_string(GameFamily f) {
  switch (f) {
    case GameFamily::kShapley: return "shapley";
    case GameFamily::kSato: return "sato";
    case GameFamily::kChakraborty: return "chakraborty";
    case GameFamily::kMismatching: return "mismatching";
    case GameFamily::kRandom: return "random";
  }
  return "?";
}

GameFamily parse_game_family(std::string_view name) {
  for (GameFamily f : {GameFamily::kShapley, GameFamily::kSato, GameFamily::kChakraborty,
                       GameFamily::kMismatching, GameFamily::kRandom}) {
    if (name == to_string(f)) return f;
  }
  throw ArgumentError("unknown game family '" + std::string(name) +
                      "' (shapley, sato, chakraborty, mismatching, random)");
}

NetworkGame build_game(const GameSpec& spec) {
  const TopologySpec topo{spec.topology, spec.num_agents};
  switch (spec.family) {
    case GameFamily::kShapley: return shapley_game(spec.shapley_beta, topo);
    case GameFamily::kSato: return sato_game(spec.sato_eps_x, spec.sato_eps_y, topo);
    case GameFamily::kChakraborty:
      return chakraborty_game(spec.chakraborty_alpha, spec.chakraborty_beta, spec.num_agents);
    case GameFamily::kMismatching: return mismatching_game(spec.mismatch_m, spec.num_agents);
    case GameFamily::kRandom: {
      RandomGameSpec r;
      r.num_agents = spec.num_agents;
      r.actions_per_agent = spec.actions_per_agent;
      r.topology = topo;
      r.payoff_low = spec.payoff_low;
      r.payoff_high = spec.payoff_high;
      r.seed = spec.seed;
      return random_game(r);
    }
  }
  throw ArgumentError("unknown game family");
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (first) std::rethrow_exception(first);
}

double LearningRate::at(const NetworkGame& game, const ExplorationRates& rates) const {
  if (fixed) return *fixed;
  return stable_learning_rate(game, rates);
}

std::string LearningRate::describe() const {
  return fixed ? std::to_string(*fixed) : std::string("auto");
}

PointResult evaluate_rate(const NetworkGame& game, double rate, const RunSettings& run,
                          std::size_t threads) {
  if (run.num_inits == 0) throw ArgumentError("num_inits must be at least 1");
  PointResult out;
  out.rate = rate;
  const ExplorationRates rates = ExplorationRates::uniform(game.num_agents(), rate);
  out.alpha = run.alpha.at(game, rates);

  LearnerConfig cfg = LearnerConfig::uniform(game.num_agents(), rate, out.alpha);
  cfg.horizon = run.horizon;
  cfg.window = run.window;
  cfg.tolerance = run.tol;
  cfg.order = run.order;
  cfg.validate(game);

  std::vector<std::optional<JointStrategy>> finals(run.num_inits);
  std::vector<double> stats(run.num_inits, 0.0);
  parallel_for(run.num_inits, threads, [&](std::size_t i) {
    LearnerConfig local = cfg;
    local.seed = derive_seed(run.seed, i);
    try {
      const Trajectory traj = run_q_learning(game, local);
      stats[i] = convergence_statistic(traj.window());
      finals[i] = traj.final_strategy();
    } catch (const NumericalError&) {
      stats[i] = std::numeric_limits<double>::infinity();
    }
  });

  std::vector<JointStrategy> converged_finals;
  for (std::size_t i = 0; i < run.num_inits; ++i) {
    out.worst_statistic = std::max(out.worst_statistic, stats[i]);
    if (stats[i] < run.tol) {
      ++out.converged_count;
      converged_finals.push_back(*finals[i]);
    }
    if (finals[i]) out.finals.push_back(*finals[i]);
  }
  out.statistics = std::move(stats);
  out.all_converged = out.converged_count == run.num_inits;
  out.agreement = max_pairwise_distance(converged_finals);
  return out;
}

std::string_view to_string(SearchMode m) { return m == SearchMode::kGrid ? "grid" : "bisection"; }

SearchMode parse_search_mode(std::string_view name) {
  if (name == "grid") return SearchMode::kGrid;
  if (name == "bisection") return SearchMode::kBisection;
  throw ArgumentError("unknown search mode '" + std::string(name) + "' (grid, bisection)");
}

void SweepSpec::validate() const {
  if (!(search.lo > 0.0)) throw ArgumentError("search lower bound must be positive");
  if (!(search.lo < search.hi)) throw ArgumentError("search range needs lo < hi");
  if (!(search.step > 0.0)) throw ArgumentError("search step must be positive");
  if (run.num_inits == 0) throw ArgumentError("num_inits must be at least 1");
  if (agent_counts.empty()) throw ArgumentError("no agent counts to sweep");
  if (run.window == 0 || run.window > run.horizon) {
    throw ArgumentError("window must satisfy 1 <= window <= horizon");
  }
  if (!(run.tol > 0.0)) throw ArgumentError("tolerance must be positive");
  if (!(certify_margin == 0.0 || certify_margin >= 1.0)) {
    throw ArgumentError("certify margin must be 0 or >= 1");
  }
  if (run.alpha.fixed && !(*run.alpha.fixed > 0.0 && *run.alpha.fixed <= 1.0)) {
    throw ArgumentError("learning rate must lie in (0, 1]");
  }
}

BoundaryTable stability_sweep(const SweepSpec& spec) {
  spec.validate();
  BoundaryTable table;
  table.spec = spec;
  std::vector<std::size_t> counts = spec.agent_counts;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

  for (std::size_t n : counts) {
    GameSpec gs = spec.game;
    gs.num_agents = n;
    const NetworkGame game = build_game(gs);
    const StabilityReport rep = stability_report(game);

    BoundaryRow row;
    row.num_agents = n;
    row.c1_max = rep.c1_max();
    row.c2 = rep.c2;
    if (rep.c3_applicable) row.c3 = rep.c3;
    row.min_threshold = rep.min_uniform_threshold();

    auto eval = [&](double t) {
      ++row.evaluations;
      return evaluate_rate(game, t, spec.run, spec.threads);
    };

    std::optional<PointResult> best;
    const TSearch& s = spec.search;
    if (s.mode == SearchMode::kGrid) {
      const auto steps = static_cast<std::size_t>(std::floor((s.hi - s.lo) / s.step + 1e-9));
      for (std::size_t i = 0; i <= steps; ++i) {
        const double t = s.lo + static_cast<double>(i) * s.step;
        PointResult p = eval(t);
        if (p.all_converged) {
          best = std::move(p);
          break;
        }
      }
    } else {
      PointResult top = eval(s.hi);
      if (top.all_converged) {
        PointResult bottom = eval(s.lo);
        if (bottom.all_converged) {
          best = std::move(bottom);
        } else {
          double lo = s.lo;
          double hi = s.hi;
          best = std::move(top);
          while (hi - lo > s.step) {
            const double mid = 0.5 * (lo + hi);
            PointResult p = eval(mid);
            if (p.all_converged) {
              hi = mid;
              best = std::move(p);
            } else {
              lo = mid;
            }
          }
        }
      }
    }

    if (best) {
      row.found = true;
      row.t_star = best->rate;
      row.t_star_agreement = best->agreement;
      row.upper_converges = eval(1.02 * row.t_star).all_converged;
      row.lower_fails = !eval(0.98 * row.t_star).all_converged;
      row.bound_respected = row.t_star <= row.min_threshold + s.step;
    }
    if (spec.certify_margin > 0.0) {
      const double t = std::max(spec.certify_margin * row.min_threshold, s.lo);
      const PointResult p = eval(t);
      row.certified_rate = t;
      row.certified_converged = p.all_converged;
      row.certified_agreement = p.agreement;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ArgumentError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<SpreadRow> spread_report(const NetworkGame& game, std::span<const double> rates,
                                     const RunSettings& run, std::size_t threads) {
  if (rates.empty()) throw ArgumentError("no exploration rates given");
  if (run.num_inits == 0) throw ArgumentError("num_inits must be at least 1");
  const std::size_t cells = rates.size() * run.num_inits;
  std::vector<std::vector<SpreadRow>> per_cell(cells);

  parallel_for(cells, threads, [&](std::size_t c) {
    const std::size_t ti = c / run.num_inits;
    const std::size_t init = c % run.num_inits;
    const double t = rates[ti];
    const ExplorationRates er = ExplorationRates::uniform(game.num_agents(), t);
    LearnerConfig cfg = LearnerConfig::uniform(game.num_agents(), t, run.alpha.at(game, er));
    cfg.horizon = run.horizon;
    cfg.window = run.window;
    cfg.tolerance = run.tol;
    cfg.order = run.order;
    cfg.seed = derive_seed(run.seed, init);
    cfg.validate(game);
    const Trajectory traj = run_q_learning(game, cfg);
    const auto window = traj.window();

    std::vector<double> values(window.size());
    for (std::size_t k = 0; k < game.num_agents(); ++k) {
      for (std::size_t i = 0; i < game.actions(k); ++i) {
        const auto flat = static_cast<Eigen::Index>(game.offset(k) + i);
        for (std::size_t w = 0; w < window.size(); ++w) values[w] = window[w].flat()(flat);
        std::sort(values.begin(), values.end());
        SpreadRow r;
        r.rate = t;
        r.init = init;
        r.agent = k;
        r.action = i;
        r.min = values.front();
        r.q25 = quantile_sorted(values, 0.25);
        r.median = quantile_sorted(values, 0.5);
        r.q75 = quantile_sorted(values, 0.75);
        r.max = values.back();
        r.relative_range = r.max > 0.0 ? (r.max - r.min) / r.max : 0.0;
        per_cell[c].push_back(r);
      }
    }
  });

  std::vector<SpreadRow> out;
  for (auto& rows : per_cell) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

std::vector<CurveRow> threshold_curves(const GameSpec& family, std::span<const Topology> topologies,
                                       std::span<const std::size_t> agent_counts) {
  std::vector<CurveRow> out;
  for (Topology top : topologies) {
    for (std::size_t n : agent_counts) {
      GameSpec gs = family;
      gs.topology = top;
      gs.num_agents = n;
      const StabilityReport rep = stability_report(build_game(gs));
      CurveRow row;
      row.topology = top;
      row.num_agents = n;
      row.c1_max = rep.c1_max();
      row.c2 = rep.c2;
      if (rep.c3_applicable) row.c3 = rep.c3;
      row.sigma_i = rep.sigma_i;
      row.norm_inf = rep.norm_inf;
      row.norm_two = rep.norm_two;
      out.push_back(row);
    }
  }
  return out;
}

std::vector<BatchRow> random_batch(const BatchSpec& spec) {
  if (spec.count == 0) throw ArgumentError("batch count must be at least 1");
  if (!(spec.game.payoff_low < spec.game.payoff_high)) {
    throw ArgumentError("payoff range needs low < high");
  }
  std::vector<BatchRow> rows(spec.count);
  parallel_for(spec.count, spec.threads, [&](std::size_t i) {
    BatchRow& row = rows[i];
    row.game_id = i;
    row.seed = derive_seed(spec.master_seed, i);
    try {
      RandomGameSpec gs = spec.game;
      gs.seed = row.seed;
      const NetworkGame game = random_game(gs);
      const std::vector<double> alpha(game.num_agents(), spec.alpha);
      const AnnealHistory hist = anneal(game, spec.anneal, alpha, row.seed);
      const AnnealStep& first = hist.initial();
      const AnnealStep& last = hist.result();
      row.status = std::string(to_string(hist.status));
      row.initial_exploitability = first.exploitability;
      row.final_exploitability = last.exploitability;
      row.initial_epsilon = first.epsilon;
      row.final_epsilon = last.epsilon;
      row.accepted_steps = hist.accepted().size();
      row.steps_run = hist.steps.back().iterations;
    } catch (const std::exception& e) {
      row.status = "error";
      row.message = e.what();
    }
  });
  return rows;
}

}  // namespace qlnet
