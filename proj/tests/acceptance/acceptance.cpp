// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qlnet/annealer.hpp"
#include "qlnet/catalog.hpp"
#include "qlnet/dynamics.hpp"
#include "qlnet/equilibria.hpp"
#include "qlnet/harness.hpp"
#include "qlnet/spectral.hpp"

namespace {

using namespace qlnet;
using Clock = std::chrono::steady_clock;

struct Qre {
  std::string label;
  NetworkGame game;
  ExplorationRates rates;
  JointStrategy x;
};

// Fixed points collected by the simulation criteria, checked again later.
std::vector<Qre> g_points;

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

void collect(const std::string& label, const NetworkGame& g, double rate, const PointResult& p) {
  for (std::size_t i = 0; i < p.finals.size(); ++i) {
    if (!(p.statistics[i] < 1e-5)) continue;
    g_points.push_back({label + " init " + std::to_string(i), g,
                        ExplorationRates::uniform(g.num_agents(), rate), p.finals[i]});
  }
}

void criterion1() {
  const auto t0 = Clock::now();
  const NetworkGame g = sato_game(0.0, 0.0, {Topology::kRing, 3});
  RunSettings run;
  run.alpha = LearningRate{0.1};
  run.seed = 1;
  const PointResult p = evaluate_rate(g, 0.1, run, workers());
  double worst = 0.0;
  for (const auto& f : p.finals) worst = std::max(worst, (f.flat().array() - 1.0 / 3.0).abs().maxCoeff());
  const double secs = seconds_since(t0);
  collect("zero-sum ring", g, 0.1, p);
  report("1", p.all_converged && p.finals.size() == 10 && worst < 1e-4 && secs < 5.0,
         fmt("zero-sum RPS ring N=3 T=0.1: %zu/10 converged, max |x - uniform| = %.2e, %.2f s",
             p.converged_count, worst, secs));
}

void criterion2() {
  const auto t0 = Clock::now();
  std::size_t ok = 0;
  std::size_t total = 0;
  std::string worst_case;
  double worst_agree = 0.0;
  for (int fam = 0; fam < 2; ++fam) {
    for (Topology top : {Topology::kRing, Topology::kStar, Topology::kFull}) {
      for (std::size_t n : {3u, 6u, 9u, 12u, 15u}) {
        const TopologySpec ts{top, n};
        const NetworkGame g = fam == 0 ? shapley_game(0.2, ts) : sato_game(0.01, -0.05, ts);
        const double t = 1.05 * stability_report(g).min_uniform_threshold();
        RunSettings run;
        run.seed = 2;
        const PointResult p = evaluate_rate(g, t, run, workers());
        ++total;
        const std::string label = fmt("%s %s N=%zu", fam == 0 ? "shapley" : "sato",
                                      std::string(to_string(top)).c_str(), n);
        if (p.all_converged && p.agreement < 1e-3) {
          ++ok;
        } else if (worst_case.empty()) {
          worst_case = fmt(" first failure: %s at T=%.4f (stat %.2e, agreement %.2e)", label.c_str(), t,
                           p.worst_statistic, p.agreement);
        }
        worst_agree = std::max(worst_agree, p.agreement);
        collect(label, g, t, p);
      }
    }
  }
  const double secs = seconds_since(t0);
  report("2", ok == total && secs < 600.0,
         fmt("%zu/%zu cases converge for all 10 inits at 1.05x threshold, worst agreement %.2e, %.1f s%s",
             ok, total, worst_agree, secs, worst_case.c_str()));
}

void criterion3() {
  const auto t0 = Clock::now();
  SweepSpec spec;
  spec.game.family = GameFamily::kShapley;
  spec.game.shapley_beta = 0.2;
  spec.search = TSearch{SearchMode::kBisection, 0.01, 16.0, 0.005};
  spec.run.seed = 3;
  spec.certify_margin = 0.0;
  spec.threads = workers();

  spec.game.topology = Topology::kRing;
  spec.agent_counts = {3, 6, 9, 12, 15};
  const BoundaryTable ring = stability_sweep(spec);
  spec.game.topology = Topology::kFull;
  spec.agent_counts = {3, 15};
  const BoundaryTable full = stability_sweep(spec);

  bool found = true;
  double lo = INFINITY;
  double hi = 0.0;
  std::string ring_text;
  for (const auto& r : ring.rows) {
    found = found && r.found;
    lo = std::min(lo, r.t_star);
    hi = std::max(hi, r.t_star);
    ring_text += fmt(" %.3f", r.t_star);
  }
  for (const auto& r : full.rows) found = found && r.found;
  const double variation = (hi - lo) / lo;
  const double ratio = full.rows.at(1).t_star / full.rows.at(0).t_star;

  // Converged points at the ring boundary also count as fixed points.
  RunSettings run = spec.run;
  for (const auto& r : ring.rows) {
    GameSpec gs = ring.spec.game;
    gs.num_agents = r.num_agents;
    const NetworkGame g = build_game(gs);
    collect(fmt("shapley ring boundary N=%zu", r.num_agents), g, r.t_star,
            evaluate_rate(g, r.t_star, run, workers()));
  }
  report("3", found && variation < 0.25 && ratio > 2.0,
         fmt("ring T* =%s (variation %.1f%%); full T*(3)=%.3f T*(15)=%.3f (ratio %.2f); %.1f s",
             ring_text.c_str(), 100.0 * variation, full.rows.at(0).t_star, full.rows.at(1).t_star,
             ratio, seconds_since(t0)));
}

void criterion4() {
  const auto t0 = Clock::now();
  const NetworkGame g = chakraborty_game(7.0, 8.5, 3);
  RunSettings run;
  run.alpha = LearningRate{0.1};
  run.seed = 4;
  const PointResult low = evaluate_rate(g, 0.7, run, workers());
  const PointResult high = evaluate_rate(g, 2.7, run, workers());
  const double secs = seconds_since(t0);
  collect("chakraborty T=2.7", g, 2.7, high);
  report("4", low.converged_count == 0 && high.all_converged && secs < 30.0,
         fmt("chakraborty(7, 8.5, 3): T=0.7 %zu/10 converged (worst stat %.2e); T=2.7 %zu/10 "
             "converged, agreement %.2e; %.2f s",
             low.converged_count, low.worst_statistic, high.converged_count, high.agreement, secs));
}

void criterion5() {
  std::size_t checked = 0;
  double worst_phi = 0.0;
  double worst_eps = 0.0;
  for (const Qre& q : g_points) {
    if (!(qre_residual(q.game, q.x, q.rates) < 1e-5)) continue;
    ++checked;
    const EquilibriumReport r = equilibrium_report(q.game, q.x, q.rates);
    double sum = 0.0;
    for (double v : r.per_agent_epsilon) sum += v;
    const double best = *std::max_element(r.best_response_gain.begin(), r.best_response_gain.end());
    worst_phi = std::max(worst_phi, std::abs(r.exploitability - sum));
    worst_eps = std::max(worst_eps, std::abs(r.epsilon - best));
  }
  report("5", checked > 0 && worst_phi < 1e-5 && worst_eps < 1e-5,
         fmt("%zu QREs (of %zu collected fixed points): max |phi - sum T A| = %.2e, max |eps - max gain| = %.2e",
             checked, g_points.size(), worst_phi, worst_eps));
}

void criterion6() {
  double worst_search = 0.0;
  double worst_point = 0.0;
  bool below_log = true;
  for (std::size_t n = 2; n <= 10; ++n) {
    const SurprisalGapMax m = surprisal_gap_max(n);
    worst_search = std::max(worst_search, std::abs(m.value - oracle::surprisal_line_search(n, 1e-6)));
    Vector x = Vector::Constant(static_cast<Eigen::Index>(n), (1.0 - m.maximizer_weight) / static_cast<double>(n));
    x(0) += m.maximizer_weight;
    worst_point = std::max(worst_point, std::abs(surprisal_gap(x) - m.value));
    below_log = below_log && m.value < std::log(static_cast<double>(n));
  }
  double worst_w = 0.0;
  const double lo = -1.0 / std::exp(1.0) + 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const double z = lo + (10.0 - lo) * i / 999.0;
    const double w = lambert_w(z);
    worst_w = std::max(worst_w, std::abs(w * std::exp(w) - z));
  }
  report("6", worst_search < 1e-5 && worst_point < 1e-10 && below_log && worst_w < 1e-12,
         fmt("max gap vs line search %.2e, at maximizer %.2e, below ln n: %s; Lambert W residual %.2e",
             worst_search, worst_point, below_log ? "yes" : "no", worst_w));
}

void criterion7() {
  std::mt19937_64 rng(7);
  std::size_t holds = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkGame g = oracle::random_small_game(rng, 10, 4);
    const BlockNormCheck c = verify_block_norm_bound(g);
    if (c.holds) ++holds;
    const auto ev = oracle::jacobi_eigenvalues(oracle::symmetric_blocks(g));
    const double dense = std::max(std::abs(ev.front()), std::abs(ev.back()));
    worst = std::max(worst, std::abs(c.lhs - dense));
    for (const Edge& e : g.edges()) {
      const Matrix s = e.a_kl + e.a_lk.transpose();
      worst = std::max(worst, std::abs(op_norm_two(s) - oracle::spectral_norm(s)));
      worst = std::max(worst, std::abs(op_norm_two(e.a_kl) - oracle::spectral_norm(e.a_kl)));
    }
  }
  report("7", holds == 100 && worst < 1e-8,
         fmt("block-norm bound holds on %zu/100 random games; max power-iteration vs Jacobi error %.2e",
             holds, worst));
}

void criterion8() {
  const auto t0 = Clock::now();
  const NetworkGame g = chakraborty_game(2.5, 1.5, 5);
  const std::vector<double> alpha(5, 0.1);
  const AnnealHistory h = anneal(g, AnnealParams{}, alpha, 1);
  const auto acc = h.accepted();
  std::size_t eps_up = 0;
  std::size_t phi_up = 0;
  double worst_up = 0.0;
  for (std::size_t i = 1; i < acc.size(); ++i) {
    const double d = acc[i]->epsilon - acc[i - 1]->epsilon;
    if (d > 0.0) {
      ++eps_up;
      worst_up = std::max(worst_up, d);
    }
    if (acc[i]->exploitability > acc[i - 1]->exploitability) ++phi_up;
  }
  report("8a", eps_up == 0,
         fmt("chakraborty(2.5, 1.5, 5) anneal: eps rises on %zu of %zu accepted steps (largest rise %.2e); "
             "exploitability rises on %zu; status %s after %zu iterations",
             eps_up, acc.size() - 1, worst_up, phi_up, std::string(to_string(h.status)).c_str(),
             h.steps.back().iterations));
  report("8b", h.result().exploitability < h.initial().exploitability && h.status == AnnealStatus::kUnstable,
         fmt("exploitability %.4f -> %.4f, eps %.4f -> %.4f, halted on instability: %s; %.1f s",
             h.initial().exploitability, h.result().exploitability, h.initial().epsilon,
             h.result().epsilon, h.status == AnnealStatus::kUnstable ? "yes" : "no", seconds_since(t0)));

  const auto t1 = Clock::now();
  BatchSpec spec;
  spec.count = 50;
  spec.master_seed = 2024;
  spec.threads = workers();
  const auto rows = random_batch(spec);
  std::size_t good = 0;
  std::size_t errors = 0;
  for (const auto& r : rows) {
    if (r.status == "error") {
      ++errors;
    } else if (r.exploitability_decrease() >= 0.0) {
      ++good;
    }
  }
  report("8c", 2 * good > rows.size(),
         fmt("random batch (50 games, 15 agents, 2 actions, ring, payoffs [0,5]): %zu/50 with "
             "exploitability decrease >= 0, %zu errors; %.1f s",
             good, errors, seconds_since(t1)));
}

void criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> temp(0.01, 5.0);
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const NetworkGame g = oracle::random_small_game(rng, 6, 4);
    std::vector<double> t(g.num_agents());
    for (double& v : t) v = temp(rng);
    const JointStrategy x = oracle::random_interior(rng, g, 1e-6);
    const Vector f = qld_vector_field(g, x, ExplorationRates(t));
    for (std::size_t k = 0; k < g.num_agents(); ++k)
      worst_sum = std::max(worst_sum, std::abs(f.segment(static_cast<Eigen::Index>(g.offset(k)),
                                                         static_cast<Eigen::Index>(g.actions(k))).sum()));
  }
  double worst_field = 0.0;
  for (const Qre& q : g_points) worst_field = std::max(worst_field, qld_vector_field(q.game, q.x, q.rates).norm());

  bool identical = true;
  const NetworkGame g = shapley_game(0.2, {Topology::kFull, 6});
  for (UpdateOrder o : {UpdateOrder::kSequential, UpdateOrder::kSimultaneous}) {
    LearnerConfig cfg = LearnerConfig::uniform(6, 1.0, 0.1);
    cfg.horizon = 5000;
    cfg.window = 500;
    cfg.seed = 99;
    cfg.order = o;
    const Trajectory a = run_q_learning(g, cfg);
    const Trajectory b = run_q_learning(g, cfg);
    identical = identical && a.final_state().q.values == b.final_state().q.values &&
                a.final_strategy() == b.final_strategy();
    for (std::size_t i = 0; i < a.window().size(); ++i) identical = identical && a.window()[i] == b.window()[i];
  }
  report("9", worst_sum < 1e-12 && !g_points.empty() && worst_field < 1e-6 && identical,
         fmt("QLD tangency max |sum| %.2e on 1000 points; max field norm %.2e at %zu fixed points; "
             "repeat runs bitwise identical: %s",
             worst_sum, worst_field, g_points.size(), identical ? "yes" : "no"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                    criterion6, criterion7, criterion8, criterion9};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("[FAIL] unexpected error: %s\n", e.what());
      ++g_failures;
    }
  }
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
