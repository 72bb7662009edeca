#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "qlnet/annealer.hpp"
#include "qlnet/catalog.hpp"
#include "qlnet/csv.hpp"
#include "qlnet/dynamics.hpp"
#include "qlnet/equilibria.hpp"
#include "qlnet/errors.hpp"
#include "qlnet/game_io.hpp"
#include "qlnet/harness.hpp"
#include "qlnet/rng.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet::cli {
namespace {

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::size_t> default_counts() { return {3, 6, 9, 12, 15}; }

struct AnnealOptions {
  double delta_t = 0.0;
  std::size_t max_anneals = 1000;
  std::size_t horizon = 0;
  std::size_t window = 500;
  double tol = 1e-5;
  std::string condition = "c1";
  double margin = 1.05;
  double min_rate = 0.1;
  std::string order = "sequential";

  void add_to(CLI::App& app) {
    app.add_option("--delta-t", delta_t, "Annealing step (0: 2% of the largest initial threshold)")
        ->capture_default_str();
    app.add_option("--max-anneals", max_anneals, "Maximum number of anneals")->capture_default_str();
    app.add_option("--horizon", horizon, "Q-learning steps per anneal (0: 500 N)")
        ->capture_default_str();
    app.add_option("--window", window, "Convergence window")->capture_default_str();
    app.add_option("--tol", tol, "Convergence tolerance")->capture_default_str();
    app.add_option("--condition", condition, "Initial threshold: c1, c2 or c3")->capture_default_str();
    app.add_option("--margin", margin, "Safety margin on the initial threshold")
        ->capture_default_str();
    app.add_option("--min-rate", min_rate, "Lower bound on initial exploration rates")
        ->capture_default_str();
    app.add_option("--order", order, "Update order: sequential or simultaneous")
        ->capture_default_str();
  }

  AnnealParams params() const {
    AnnealParams p;
    if (delta_t < 0.0) throw ArgumentError("--delta-t must be positive (or 0 for the default)");
    if (delta_t > 0.0) p.delta_t = delta_t;
    p.max_anneals = max_anneals;
    if (horizon > 0) p.horizon = horizon;
    p.window = window;
    p.tol = tol;
    p.initial_condition = parse_condition(condition);
    p.safety_margin = margin;
    p.min_initial_rate = min_rate;
    p.order = order_from(order);
    if (p.window == 0) throw ArgumentError("--window must be positive");
    if (!(p.tol > 0.0)) throw ArgumentError("--tol must be positive");
    return p;
  }
};

// ---------------------------------------------------------------- simulate

class Simulate : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "simulate", "Run Q-learning and record trajectories");
    game_.add_to(*sub);
    sub->add_option("--T", rates_, "Exploration rate, one value or one per agent")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--alpha", alpha_, "Learning rate: number, per-agent list or 'auto'")
        ->capture_default_str();
    sub->add_option("--horizon", horizon_, "Iterations")->capture_default_str();
    sub->add_option("--window", window_, "Convergence window length")->capture_default_str();
    sub->add_option("--tol", tol_, "Convergence tolerance")->capture_default_str();
    sub->add_option("--seeds", seeds_, "Seeds of the random initial strategies")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--init", init_, "Initial strategy file (replaces random starts)");
    sub->add_option("--stride", stride_, "Record every stride-th state (0: none)")
        ->capture_default_str();
    sub->add_option("--order", order_, "Update order: sequential or simultaneous")
        ->capture_default_str();
  }

  void run() override {
    const NetworkGame game = game_.build();
    const ExplorationRates rates = rates_for(game, rates_);
    LearnerConfig cfg;
    cfg.rates = rates;
    cfg.alpha = AlphaSpec::parse(alpha_).resolve(game, rates);
    cfg.horizon = horizon_;
    cfg.window = window_;
    cfg.tolerance = tol_;
    cfg.record_stride = stride_;
    cfg.order = order_from(order_);
    cfg.validate(game);

    std::optional<JointStrategy> init;
    if (!init_.empty()) {
      init = load_strategy(init_).strategy;
      check_compatible(game, *init);
    }
    const std::vector<std::uint64_t> seeds = init ? std::vector<std::uint64_t>{} : seeds_;
    if (!init && seeds.empty()) throw ArgumentError("no seeds given");

    std::ostringstream csv;
    CsvWriter w(csv, {"seed", "step", "agent", "action", "probability"});
    json runs = json::array();
    const std::size_t n_runs = init ? 1 : seeds.size();
    for (std::size_t r = 0; r < n_runs; ++r) {
      cfg.seed = init ? 0 : seeds[r];
      const Trajectory traj = init ? run_q_learning(game, cfg, *init) : run_q_learning(game, cfg);
      const std::string label = init ? std::string("init") : std::to_string(cfg.seed);
      auto emit = [&](std::size_t step, const JointStrategy& x) {
        for (std::size_t k = 0; k < game.num_agents(); ++k)
          for (std::size_t i = 0; i < game.actions(k); ++i)
            w.field(label).field(step).field(k).field(i).field(x.agent(k)(static_cast<Eigen::Index>(i))).end_row();
      };
      for (std::size_t s = 0; s < traj.samples().size(); ++s) emit(traj.sample_steps()[s], traj.samples()[s]);
      if (stride_ == 0 || traj.steps_run() % stride_ != 0) emit(traj.steps_run(), traj.final_strategy());

      const JointStrategy& x = traj.final_strategy();
      const double stat = convergence_statistic(traj.window());
      json run{{"seed", label},
               {"converged", stat < tol_},
               {"convergence_statistic", stat},
               {"qre_residual", qre_residual(game, x, rates)},
               {"epsilon", epsilon_nash(game, x, rates).epsilon},
               {"exploitability", exploitability(game, x)},
               {"final_strategy", strategy_json(x)}};
      if (!out.quiet) {
        std::cout << "run " << label << ": " << (stat < tol_ ? "converged" : "not converged")
                  << " (statistic " << fmt(stat) << "), exploitability "
                  << fmt(exploitability(game, x)) << "\n";
      }
      runs.push_back(std::move(run));
    }
    json summary{{"game", game_.describe()},
                 {"alpha", cfg.alpha},
                 {"T", std::vector<double>(rates.values().begin(), rates.values().end())},
                 {"runs", runs}};
    bool all = true;
    for (const auto& r : runs) all = all && r["converged"].get<bool>();
    summary["all_converged"] = all;
    write_outputs(out, *sub, csv.str(), summary, seeds);
  }

 private:
  GameOptions game_;
  std::vector<double> rates_{1.0};
  std::string alpha_ = "0.1";
  std::size_t horizon_ = 2500;
  std::size_t window_ = 2500;
  double tol_ = 1e-5;
  std::vector<std::uint64_t> seeds_{0};
  std::string init_;
  std::size_t stride_ = 100;
  std::string order_ = "sequential";
};

// ---------------------------------------------------------------- bounds

class Bounds : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "bounds", "Structural quantities and convergence thresholds of a game");
    game_.add_to(*sub);
  }

  void run() override {
    const NetworkGame game = game_.build();
    const StabilityReport rep = stability_report(game);
    const BlockNormCheck block = verify_block_norm_bound(game);
    const bool zero_sum = is_pairwise_zero_sum(game);

    std::ostringstream csv;
    CsvWriter w(csv, {"agent", "delta", "neighbors", "c1", "c2", "c3"});
    const std::optional<double> c3 = rep.c3_applicable ? std::optional<double>(rep.c3) : std::nullopt;
    for (std::size_t k = 0; k < game.num_agents(); ++k) {
      w.field(k).field(rep.influence_bound[k]).field(rep.neighbor_count[k]).field(rep.c1[k])
          .field(rep.c2).field(c3).end_row();
    }

    if (!out.quiet) {
      std::printf("%6s %12s %10s %12s\n", "agent", "delta", "neighbors", "c1");
      for (std::size_t k = 0; k < game.num_agents(); ++k) {
        std::printf("%6zu %12.6g %10zu %12.6g\n", k, rep.influence_bound[k], rep.neighbor_count[k],
                    rep.c1[k]);
      }
      std::printf("sigma_I      %.6g\n", rep.sigma_i);
      std::printf("||G||_inf    %.6g\n", rep.norm_inf);
      std::printf("||G||_2      %.6g\n", rep.norm_two);
      std::printf("c1 max       %.6g\n", rep.c1_max());
      std::printf("c2           %.6g\n", rep.c2);
      if (rep.c3_applicable) {
        std::printf("c3           %.6g\n", rep.c3);
      } else {
        std::printf("c3           n/a (edges do not share one bimatrix game)\n");
      }
      std::printf("zero-sum     %s\n", zero_sum ? "yes" : "no");
    }

    json summary{{"game", game_.describe()},
                 {"influence_bound", rep.influence_bound},
                 {"neighbor_count", rep.neighbor_count},
                 {"c1", rep.c1},
                 {"c1_max", rep.c1_max()},
                 {"sigma_i", rep.sigma_i},
                 {"norm_inf", rep.norm_inf},
                 {"norm_two", rep.norm_two},
                 {"c2", rep.c2},
                 {"c3", nullable(c3)},
                 {"c3_applicable", rep.c3_applicable},
                 {"min_uniform_threshold", rep.min_uniform_threshold()},
                 {"pairwise_zero_sum", zero_sum},
                 {"block_norm_bound", {{"lhs", block.lhs}, {"rhs", block.rhs}, {"holds", block.holds}}}};
    write_outputs(out, *sub, csv.str(), summary, {});
  }

 private:
  GameOptions game_;
};

// ---------------------------------------------------------------- report

class Report : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "report", "Equilibrium quality of a joint strategy");
    game_.add_to(*sub);
    sub->add_option("--strategy", strategy_, "Strategy file {\"strategies\": [...], \"T\": [...]}");
    sub->add_option("--T", rates_, "Exploration rates (overrides the strategy file)")->delimiter(',');
    sub->add_option("--qre-tol", qre_tol_, "Residual below which x counts as a QRE")
        ->capture_default_str();
  }

  void run() override {
    if (strategy_.empty()) throw ArgumentError("--strategy is required");
    const NetworkGame game = game_.build();
    const StrategyFile sf = load_strategy(strategy_);
    check_compatible(game, sf.strategy);
    std::optional<ExplorationRates> rates;
    if (!rates_.empty()) {
      rates = rates_for(game, rates_);
    } else {
      rates = sf.rates;
    }
    if (!rates) throw ArgumentError("exploration rates missing: pass --T or add \"T\" to the strategy file");
    check_compatible(game, *rates);
    const JointStrategy& x = sf.strategy;
    const EquilibriumReport rep = equilibrium_report(game, x, *rates);

    std::ostringstream csv;
    CsvWriter w(csv, {"agent", "T", "A_k", "eps_k", "best_response_gain"});
    for (std::size_t k = 0; k < game.num_agents(); ++k) {
      w.field(k).field((*rates)[k]).field(rep.surprisal[k]).field(rep.per_agent_epsilon[k])
          .field(rep.best_response_gain[k]).end_row();
    }
    w.field("summary").field("").field("").field(rep.epsilon).field(rep.exploitability).end_row();

    double eps_sum = 0.0;
    for (double e : rep.per_agent_epsilon) eps_sum += e;
    bool interior = true;
    for (Eigen::Index i = 0; i < x.flat().size(); ++i) interior = interior && x.flat()(i) >= kInteriorFloor;
    std::vector<double> abar(game.num_agents(), 0.0);
    for (std::size_t k = 0; k < game.num_agents(); ++k) {
      abar[k] = game.actions(k) >= 2 ? surprisal_gap_max(game.actions(k)).value : 0.0;
    }

    json summary{{"game", game_.describe()},
                 {"qre_residual", rep.qre_residual},
                 {"is_qre", rep.qre_residual < qre_tol_},
                 {"epsilon", rep.epsilon},
                 {"per_agent_epsilon", rep.per_agent_epsilon},
                 {"surprisal_gap", rep.surprisal},
                 {"surprisal_gap_max", abar},
                 {"best_response_gain", rep.best_response_gain},
                 {"exploitability", rep.exploitability},
                 {"sum_T_A", eps_sum}};
    if (interior) summary["perturbed_stationarity_residual"] = perturbed_stationarity_residual(game, x, *rates);

    if (!out.quiet) {
      std::printf("%6s %10s %12s %12s %12s\n", "agent", "T", "A_k", "eps_k", "br_gain");
      for (std::size_t k = 0; k < game.num_agents(); ++k) {
        std::printf("%6zu %10.4g %12.6g %12.6g %12.6g\n", k, (*rates)[k], rep.surprisal[k],
                    rep.per_agent_epsilon[k], rep.best_response_gain[k]);
      }
      std::printf("QRE residual   %.3g%s\n", rep.qre_residual,
                  rep.qre_residual < qre_tol_ ? " (QRE)" : " (not a QRE; epsilon is not a deviation bound)");
      std::printf("epsilon        %.6g\n", rep.epsilon);
      std::printf("exploitability %.6g\n", rep.exploitability);
    }
    write_outputs(out, *sub, csv.str(), summary, {});
  }

 private:
  GameOptions game_;
  std::string strategy_;
  std::vector<double> rates_;
  double qre_tol_ = 1e-5;
};

// ---------------------------------------------------------------- sweep

struct RunOptions {
  std::size_t inits = 10;
  std::size_t horizon = 20000;
  std::size_t window = 2500;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  std::string alpha = "auto";
  std::string order = "sequential";
  std::size_t threads = 0;

  void add_to(CLI::App& app) {
    app.add_option("--inits", inits, "Random initial conditions per T")->capture_default_str();
    app.add_option("--horizon", horizon, "Iterations per run")->capture_default_str();
    app.add_option("--window", window, "Convergence window")->capture_default_str();
    app.add_option("--tol", tol, "Convergence tolerance")->capture_default_str();
    app.add_option("--seed", seed, "Master seed of the initial conditions")->capture_default_str();
    app.add_option("--alpha", alpha, "Learning rate: number or 'auto'")->capture_default_str();
    app.add_option("--order", order, "Update order: sequential or simultaneous")
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  }

  RunSettings settings() const {
    RunSettings r;
    r.num_inits = inits;
    r.horizon = horizon;
    r.window = window;
    r.tol = tol;
    r.seed = seed;
    r.alpha = AlphaSpec::parse(alpha).uniform();
    r.order = order_from(order);
    return r;
  }

  std::vector<std::uint64_t> seeds() const {
    std::vector<std::uint64_t> s;
    for (std::size_t i = 0; i < inits; ++i) s.push_back(derive_seed(seed, i));
    return s;
  }
};

class Sweep : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "sweep", "Empirical stability boundary against agent count");
    game_.add_to(*sub, {.file = false, .topology = true, .agents = false});
    sub->add_option("--agent-counts", counts_, "Agent counts")->delimiter(',')->capture_default_str();
    sub->add_option("--search", mode_, "T search: grid or bisection")->capture_default_str();
    sub->add_option("--t-lo", lo_, "Lower end of the T range")->capture_default_str();
    sub->add_option("--t-hi", hi_, "Upper end of the T range")->capture_default_str();
    sub->add_option("--t-step", step_, "Grid spacing or bisection resolution")->capture_default_str();
    sub->add_option("--certify-margin", certify_, "Sufficiency run at margin x threshold (0: off)")
        ->capture_default_str();
    run_.add_to(*sub);
  }

  void run() override {
    SweepSpec spec;
    spec.game = game_.spec();
    spec.agent_counts = counts_;
    spec.search = TSearch{parse_search_mode(mode_), lo_, hi_, step_};
    spec.run = run_.settings();
    spec.certify_margin = certify_;
    spec.threads = run_.threads;
    const BoundaryTable table = stability_sweep(spec);

    std::ostringstream csv;
    CsvWriter w(csv, {"N", "found", "T_star", "c1_max", "c2", "c3", "min_threshold",
                      "upper_converges", "lower_fails", "bound_respected", "agreement",
                      "certified_T", "certified_converged", "certified_agreement", "evaluations"});
    json rows = json::array();
    for (const auto& r : table.rows) {
      w.field(r.num_agents).field(r.found).field(r.found ? std::optional<double>(r.t_star) : std::nullopt)
          .field(r.c1_max).field(r.c2).field(r.c3).field(r.min_threshold).field(r.upper_converges)
          .field(r.lower_fails).field(r.bound_respected).field(r.t_star_agreement)
          .field(r.certified_rate).field(r.certified_converged).field(r.certified_agreement)
          .field(r.evaluations).end_row();
      rows.push_back({{"N", r.num_agents},
                      {"found", r.found},
                      {"T_star", r.found ? json(r.t_star) : json(nullptr)},
                      {"c1_max", r.c1_max},
                      {"c2", r.c2},
                      {"c3", nullable(r.c3)},
                      {"bracket", {{"upper_converges", r.upper_converges}, {"lower_fails", r.lower_fails}}},
                      {"bound_respected", r.bound_respected},
                      {"certified_T", nullable(r.certified_rate)},
                      {"certified_converged", r.certified_converged},
                      {"certified_agreement", r.certified_agreement}});
    }
    if (!out.quiet) {
      std::printf("%4s %10s %10s %10s %10s %8s %10s\n", "N", "T_star", "c1_max", "c2", "c3", "bracket",
                  "certified");
      for (const auto& r : table.rows) {
        std::printf("%4zu %10s %10.4g %10.4g %10s %8s %10s\n", r.num_agents,
                    r.found ? fmt(r.t_star, 5).c_str() : "not found", r.c1_max, r.c2,
                    r.c3 ? fmt(*r.c3, 4).c_str() : "n/a",
                    r.found ? (r.upper_converges && r.lower_fails ? "ok" : "loose") : "-",
                    r.certified_rate ? (r.certified_converged ? "yes" : "NO") : "-");
      }
    }
    json summary{{"game", game_.describe()},
                 {"search", {{"mode", mode_}, {"lo", lo_}, {"hi", hi_}, {"step", step_}}},
                 {"alpha", run_.alpha},
                 {"rows", rows}};
    write_outputs(out, *sub, csv.str(), summary, run_.seeds());
  }

 private:
  GameOptions game_;
  std::vector<std::size_t> counts_ = default_counts();
  std::string mode_ = "bisection";
  double lo_ = 0.01;
  double hi_ = 10.0;
  double step_ = 0.01;
  double certify_ = 1.05;
  RunOptions run_;
};

// ---------------------------------------------------------------- spread

class Spread : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "spread", "Window statistics of action probabilities at several T");
    game_.add_to(*sub);
    sub->add_option("--T", rates_, "Exploration rates to test")->delimiter(',')->capture_default_str();
    run_.inits = 1;
    run_.add_to(*sub);
  }

  void run() override {
    const NetworkGame game = game_.build();
    for (double t : rates_)
      if (!(t > 0.0)) throw ArgumentError("exploration rates must be positive");
    const RunSettings settings = run_.settings();
    const auto rows = spread_report(game, rates_, settings, run_.threads);

    std::ostringstream csv;
    CsvWriter w(csv, {"T", "init", "agent", "action", "min", "q25", "median", "q75", "max",
                      "relative_range"});
    json per_t = json::array();
    for (double t : rates_) {
      double worst = 0.0;
      double range = 0.0;
      for (const auto& r : rows) {
        if (r.rate != t) continue;
        worst = std::max(worst, r.relative_range);
        range = std::max(range, r.max - r.min);
      }
      per_t.push_back({{"T", t}, {"max_relative_range", worst}, {"max_range", range},
                       {"stationary", worst < run_.tol}});
      if (!out.quiet) {
        std::printf("T=%-10.5g max spread %-12.4g relative %-12.4g %s\n", t, range, worst,
                    worst < run_.tol ? "stationary" : "moving");
      }
    }
    for (const auto& r : rows) {
      w.field(r.rate).field(r.init).field(r.agent).field(r.action).field(r.min).field(r.q25)
          .field(r.median).field(r.q75).field(r.max).field(r.relative_range).end_row();
    }
    json summary{{"game", game_.describe()}, {"alpha", run_.alpha}, {"per_T", per_t}};
    write_outputs(out, *sub, csv.str(), summary, run_.seeds());
  }

 private:
  GameOptions game_;
  std::vector<double> rates_{1.0};
  RunOptions run_;
};

// ---------------------------------------------------------------- anneal

class Anneal : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "anneal", "Exploration annealing towards a Nash equilibrium");
    game_.add_to(*sub);
    anneal_.add_to(*sub);
    sub->add_option("--alpha", alpha_, "Learning rate: number or per-agent list")
        ->capture_default_str();
    sub->add_option("--seed", seed_, "Seed of the initial strategy")->capture_default_str();
  }

  void run() override {
    const NetworkGame game = game_.build();
    const AnnealParams params = anneal_.params();
    const AlphaSpec a = AlphaSpec::parse(alpha_);
    if (a.automatic) throw ArgumentError("anneal needs an explicit learning rate");
    const std::vector<double> alpha =
        a.resolve(game, ExplorationRates::uniform(game.num_agents(), 1.0));
    const AnnealHistory hist = anneal(game, params, alpha, seed_);

    std::vector<std::string> header{"step", "annealed_agent"};
    for (std::size_t k = 0; k < game.num_agents(); ++k) header.push_back("T_" + std::to_string(k));
    for (const char* c : {"epsilon", "exploitability", "qre_residual", "convergence_statistic",
                          "converged", "iterations"})
      header.emplace_back(c);
    std::ostringstream csv;
    CsvWriter w(csv, header);
    for (std::size_t s = 0; s < hist.steps.size(); ++s) {
      const AnnealStep& st = hist.steps[s];
      w.field(s);
      if (st.annealed_agent) {
        w.field(*st.annealed_agent);
      } else {
        w.field("");
      }
      for (double t : st.rates.values()) w.field(t);
      w.field(st.epsilon).field(st.exploitability).field(st.qre_residual)
          .field(st.convergence_statistic).field(st.converged).field(st.iterations).end_row();
    }

    const AnnealStep& first = hist.initial();
    const AnnealStep& last = hist.result();
    json summary{{"game", game_.describe()},
                 {"status", std::string(to_string(hist.status))},
                 {"delta_t", hist.delta_t},
                 {"horizon", hist.horizon},
                 {"alpha", alpha},
                 {"accepted_steps", hist.accepted().size()},
                 {"iterations", hist.steps.back().iterations},
                 {"initial", {{"epsilon", first.epsilon}, {"exploitability", first.exploitability},
                              {"T", std::vector<double>(first.rates.values().begin(), first.rates.values().end())}}},
                 {"final", {{"epsilon", last.epsilon}, {"exploitability", last.exploitability},
                            {"T", std::vector<double>(last.rates.values().begin(), last.rates.values().end())},
                            {"strategy", strategy_json(last.strategy)}}}};
    if (!out.quiet) {
      std::printf("status          %s after %zu accepted steps (%zu iterations)\n",
                  std::string(to_string(hist.status)).c_str(), hist.accepted().size(),
                  hist.steps.back().iterations);
      std::printf("epsilon         %.6g -> %.6g\n", first.epsilon, last.epsilon);
      std::printf("exploitability  %.6g -> %.6g\n", first.exploitability, last.exploitability);
    }
    write_outputs(out, *sub, csv.str(), summary, {seed_});
  }

 private:
  GameOptions game_;
  AnnealOptions anneal_;
  std::string alpha_ = "0.1";
  std::uint64_t seed_ = 0;
};

// ---------------------------------------------------------------- batch

class Batch : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "batch", "Anneal a batch of random games");
    sub->add_option("--count", count_, "Number of games")->capture_default_str();
    sub->add_option("--master-seed", master_, "Master seed")->capture_default_str();
    sub->add_option("--agents", agents_, "Agents per game")->capture_default_str();
    sub->add_option("--actions", actions_, "Actions per agent")->capture_default_str();
    sub->add_option("--topology", topology_, "ring, star or full")->capture_default_str();
    sub->add_option("--payoff-low", low_, "Lower payoff bound")->capture_default_str();
    sub->add_option("--payoff-high", high_, "Upper payoff bound")->capture_default_str();
    sub->add_option("--alpha", alpha_, "Learning rate")->capture_default_str();
    sub->add_option("--threads", threads_, "Worker threads (0: all cores)")->capture_default_str();
    anneal_.add_to(*sub);
  }

  void run() override {
    BatchSpec spec;
    spec.game.num_agents = agents_;
    spec.game.actions_per_agent = actions_;
    spec.game.topology = TopologySpec{parse_topology(topology_), agents_};
    spec.game.payoff_low = low_;
    spec.game.payoff_high = high_;
    spec.count = count_;
    spec.master_seed = master_;
    spec.anneal = anneal_.params();
    if (!(alpha_ > 0.0 && alpha_ <= 1.0)) throw ArgumentError("--alpha must lie in (0, 1]");
    spec.alpha = alpha_;
    spec.threads = threads_;
    const auto rows = random_batch(spec);

    std::ostringstream csv;
    CsvWriter w(csv, {"game_id", "seed", "status", "initial_exploitability", "final_exploitability",
                      "exploitability_decrease", "initial_epsilon", "final_epsilon",
                      "epsilon_decrease", "accepted_steps", "steps_run", "message"});
    std::size_t ok = 0;
    std::size_t errors = 0;
    std::size_t expl_nonneg = 0;
    std::size_t eps_nonneg = 0;
    std::vector<std::uint64_t> seeds;
    for (const auto& r : rows) {
      seeds.push_back(r.seed);
      w.field(r.game_id).field(std::to_string(r.seed)).field(r.status);
      if (r.status == "error") {
        ++errors;
        for (int i = 0; i < 8; ++i) w.field("");
      } else {
        ++ok;
        if (r.exploitability_decrease() >= 0.0) ++expl_nonneg;
        if (r.epsilon_decrease() >= 0.0) ++eps_nonneg;
        w.field(r.initial_exploitability).field(r.final_exploitability).field(r.exploitability_decrease())
            .field(r.initial_epsilon).field(r.final_epsilon).field(r.epsilon_decrease())
            .field(r.accepted_steps).field(r.steps_run);
      }
      w.field(r.message).end_row();
    }
    json summary{{"count", count_},
                 {"completed", ok},
                 {"errors", errors},
                 {"exploitability_decrease_nonnegative", expl_nonneg},
                 {"epsilon_decrease_nonnegative", eps_nonneg},
                 {"fraction_exploitability_nonnegative",
                  ok > 0 ? static_cast<double>(expl_nonneg) / static_cast<double>(ok) : 0.0}};
    if (!out.quiet) {
      std::printf("games %zu, completed %zu, errors %zu\n", count_, ok, errors);
      std::printf("exploitability decrease >= 0 in %zu games, epsilon decrease >= 0 in %zu games\n",
                  expl_nonneg, eps_nonneg);
    }
    write_outputs(out, *sub, csv.str(), summary, seeds);
  }

 private:
  std::size_t count_ = 50;
  std::uint64_t master_ = 0;
  std::size_t agents_ = 15;
  std::size_t actions_ = 2;
  std::string topology_ = "ring";
  double low_ = 0.0;
  double high_ = 5.0;
  double alpha_ = kDefaultLearningRate;
  std::size_t threads_ = 0;
  AnnealOptions anneal_;
};

// ---------------------------------------------------------------- curves

class Curves : public Command {
 public:
  void add(CLI::App& app) override {
    make(app, "curves", "Convergence thresholds against agent count and topology");
    game_.add_to(*sub, {.file = false, .topology = false, .agents = false});
    sub->add_option("--topologies", topologies_, "Topologies")->delimiter(',')->capture_default_str();
    sub->add_option("--agent-counts", counts_, "Agent counts")->delimiter(',')->capture_default_str();
  }

  void run() override {
    std::vector<Topology> tops;
    for (const auto& t : topologies_) tops.push_back(parse_topology(t));
    const auto rows = threshold_curves(game_.spec(), tops, counts_);
    std::ostringstream csv;
    CsvWriter w(csv, {"N", "topology", "c1_max", "c2", "c3", "sigma_i", "norm_inf", "norm_two"});
    json jrows = json::array();
    for (const auto& r : rows) {
      w.field(r.num_agents).field(to_string(r.topology)).field(r.c1_max).field(r.c2).field(r.c3)
          .field(r.sigma_i).field(r.norm_inf).field(r.norm_two).end_row();
      jrows.push_back({{"N", r.num_agents}, {"topology", std::string(to_string(r.topology))},
                       {"c1_max", r.c1_max}, {"c2", r.c2}, {"c3", nullable(r.c3)}});
      if (!out.quiet) {
        std::printf("%-5s N=%-3zu c1_max=%-10.4g c2=%-10.4g c3=%s\n",
                    std::string(to_string(r.topology)).c_str(), r.num_agents, r.c1_max, r.c2,
                    r.c3 ? fmt(*r.c3, 4).c_str() : "n/a");
      }
    }
    write_outputs(out, *sub, csv.str(), json{{"game", game_.describe()}, {"rows", jrows}}, {});
  }

 private:
  GameOptions game_;
  std::vector<std::string> topologies_{"ring", "star", "full"};
  std::vector<std::size_t> counts_ = default_counts();
};

// ---------------------------------------------------------------- game

class EmitGame : public Command {
 public:
  void add(CLI::App& app) override {
    sub = app.add_subcommand("game", "Write a catalog game in the game file format");
    sub->add_option("--config", config, "JSON file with option values");
    game_.add_to(*sub, {.file = false, .topology = true, .agents = true});
    sub->add_option("--output,-o", output_, "Destination file ('-' for stdout)")->capture_default_str();
  }

  bool writes_outputs() const override { return false; }

  void run() override {
    const NetworkGame game = game_.build();
    if (output_ == "-") {
      std::cout << serialize_game(game) << "\n";
    } else {
      save_game(game, output_);
    }
  }

 private:
  GameOptions game_;
  std::string output_ = "-";
};

}  // namespace

CLI::App* Command::make(CLI::App& app, const std::string& name, const std::string& help) {
  sub = app.add_subcommand(name, help);
  sub->add_option("--config", config, "JSON file with option values (command-line flags win)");
  out.add_to(*sub, name);
  return sub;
}

std::vector<std::unique_ptr<Command>> make_commands() {
  std::vector<std::unique_ptr<Command>> cmds;
  cmds.push_back(std::make_unique<Simulate>());
  cmds.push_back(std::make_unique<Bounds>());
  cmds.push_back(std::make_unique<Report>());
  cmds.push_back(std::make_unique<Sweep>());
  cmds.push_back(std::make_unique<Spread>());
  cmds.push_back(std::make_unique<Anneal>());
  cmds.push_back(std::make_unique<Batch>());
  cmds.push_back(std::make_unique<Curves>());
  cmds.push_back(std::make_unique<EmitGame>());
  return cmds;
}

}  // namespace qlnet::cli
