#include "qlnet/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qlnet/dynamics.hpp"
#include "qlnet/errors.hpp"

namespace qlnet {
namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

constexpr double kInvE = 1.0 / std::numbers::e;

double lambert_w_bisect(double z) {
  double lo = -1.0;
  double hi = std::max(1.0, std::log1p(std::max(z, 0.0)));
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < z) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double qre_residual(const NetworkGame& game, const JointStrategy& x, const ExplorationRates& t) {
  check_compatible(game, t);
  const Vector r = rewards(game, x);
  double worst = 0.0;
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    const Vector response = boltzmann(r.segment(idx(game.offset(k)), idx(game.actions(k))), t[k]);
    worst = std::max(worst, (x.agent(k) - response).cwiseAbs().maxCoeff());
  }
  return worst;
}

double surprisal_gap(const Eigen::Ref<const Vector>& xk) {
  if (xk.size() == 0) throw ArgumentError("surprisal gap of an empty vector");
  if (!xk.allFinite() || (xk.array() < 0.0).any()) {
    throw ArgumentError("surprisal gap needs a probability vector");
  }
  const double sum = xk.sum();
  if (sum == 0.0) throw ArgumentError("surprisal gap of the all-zero vector");
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("surprisal gap needs a probability vector");
  double top = -std::numeric_limits<double>::infinity();
  double neg_entropy = 0.0;
  for (Eigen::Index i = 0; i < xk.size(); ++i) {
    const double p = xk(i);
    if (p <= 0.0) continue;
    const double lp = std::log(p);
    top = std::max(top, lp);
    neg_entropy += p * lp;
  }
  return std::max(0.0, top - neg_entropy);
}

EpsilonNash epsilon_nash(const NetworkGame& game, const JointStrategy& x,
                         const ExplorationRates& t) {
  check_compatible(game, x);
  check_compatible(game, t);
  EpsilonNash out;
  out.per_agent.resize(game.num_agents());
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    out.per_agent[k] = t[k] * surprisal_gap(x.agent(k));
    out.epsilon = std::max(out.epsilon, out.per_agent[k]);
  }
  return out;
}

std::vector<double> best_response_gains(const NetworkGame& game, const JointStrategy& x) {
  const Vector r = rewards(game, x);
  std::vector<double> gains(game.num_agents());
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    const auto rk = r.segment(idx(game.offset(k)), idx(game.actions(k)));
    // Linear in the deviation, so a pure action attains the max.
    gains[k] = std::max(0.0, rk.maxCoeff() - x.agent(k).dot(rk));
  }
  return gains;
}

double exploitability(const NetworkGame& game, const JointStrategy& x) {
  double total = 0.0;
  for (double g : best_response_gains(game, x)) total += g;
  return total;
}

double perturbed_stationarity_residual(const NetworkGame& game, const JointStrategy& x,
                                       const ExplorationRates& t) {
  check_compatible(game, t);
  const Vector r = rewards(game, x);
  double worst = 0.0;
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    require_interior(x, k);
    const auto rk = r.segment(idx(game.offset(k)), idx(game.actions(k)));
    Vector grad = rk - t[k] * (x.agent(k).array().log() + 1.0).matrix();
    grad.array() -= grad.mean();
    worst = std::max(worst, grad.cwiseAbs().maxCoeff());
  }
  return worst;
}

double lambert_w(double z) {
  if (std::isnan(z)) throw DomainError("Lambert W of NaN");
  if (z < -kInvE) {
    // Allow the rounding of -1/e itself.
    if (z < -kInvE - 1e-16) {
      throw DomainError("Lambert W principal branch needs z >= -1/e, got " + std::to_string(z));
    }
    return -1.0;
  }
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;

  double w;
  if (z < -0.25) {
    // Series about the branch point.
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    if (p == 0.0) return -1.0;
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = std::log1p(z);
  }

  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double next = w - f / denom;
    if (!std::isfinite(next)) break;
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next))) {
      return next;
    }
    w = next;
  }
  const double check = w * std::exp(w) - z;
  if (std::abs(check) <= 1e-14 * std::max(1.0, std::abs(z))) return w;
  return lambert_w_bisect(z);
}

SurprisalGapMax surprisal_gap_max(std::size_t n) {
  if (n < 2) throw ArgumentError("surprisal gap maximum needs n >= 2 actions");
  const double m = static_cast<double>(n - 1);
  const double w = lambert_w(m / std::numbers::e);
  SurprisalGapMax out;
  out.value = (std::log(m) - std::log(w)) / (1.0 + 1.0 / w);
  out.top_probability = 1.0 / (w + 1.0);
  // Weight on the vertex that puts top_probability on the first action.
  const double nd = static_cast<double>(n);
  out.maximizer_weight = (nd * out.top_probability - 1.0) / (nd - 1.0);
  return out;
}

EquilibriumReport equilibrium_report(const NetworkGame& game, const JointStrategy& x,
                                     const ExplorationRates& t) {
  EquilibriumReport rep;
  rep.qre_residual = qre_residual(game, x, t);
  const EpsilonNash eps = epsilon_nash(game, x, t);
  rep.epsilon = eps.epsilon;
  rep.per_agent_epsilon = eps.per_agent;
  rep.surprisal.resize(game.num_agents());
  for (std::size_t k = 0; k < game.num_agents(); ++k) rep.surprisal[k] = surprisal_gap(x.agent(k));
  rep.best_response_gain = best_response_gains(game, x);
  for (double g : rep.best_response_gain) rep.exploitability += g;
  return rep;
}

}  // namespace qlnet
