#pragma once

#include <cstddef>
#include <vector>

#include "qlnet/game.hpp"

namespace qlnet {

// max over agents and actions of |x_ki - softmax(r_k(x_{-k}) / T_k)_i|.
// Zero exactly at a quantal response equilibrium.
double qre_residual(const NetworkGame& game, const JointStrategy& x, const ExplorationRates& t);

// A_k(x_k) = max_i ln x_ki - <x_k, ln x_k>, with 0 ln 0 = 0 and the max taken
// over the support. Always >= 0. ArgumentError on an all-zero or
// non-probability vector.
double surprisal_gap(const Eigen::Ref<const Vector>& xk);

struct EpsilonNash {
  double epsilon = 0.0;
  std::vector<double> per_agent;  // T_k A_k(x_k)
};

// epsilon = max_k T_k A_k(x_k). This equals the best unilateral gain only
// when x is a QRE for the same rates; elsewhere use exploitability().
EpsilonNash epsilon_nash(const NetworkGame& game, const JointStrategy& x,
                         const ExplorationRates& t);

// Per-agent best-response gain max_i r_ki(x_{-k}) - <x_k, r_k(x_{-k})>.
std::vector<double> best_response_gains(const NetworkGame& game, const JointStrategy& x);

// Sum of best-response gains. Zero exactly at a Nash equilibrium.
double exploitability(const NetworkGame& game, const JointStrategy& x);

// Residual of the Nash condition of the entropy-perturbed game: the
// largest entry of the gradient of u_k^H w.r.t. x_k after projecting out the
// simplex normal. Vanishes at a QRE. Requires x strictly interior.
double perturbed_stationarity_residual(const NetworkGame& game, const JointStrategy& x,
                                       const ExplorationRates& t);

// Principal branch W_0 by Halley iteration (at most 100 steps, bisection
// fallback). DomainError for z < -1/e.
double lambert_w(double z);

struct SurprisalGapMax {
  double value = 0.0;             // max over the simplex of A_k
  double top_probability = 0.0;   // largest entry of the maximizer x*
  double maximizer_weight = 0.0;  // c with x* = c e_i + (1 - c) uniform
};

// Closed form of the largest surprisal gap on an n-action simplex
// (ArgumentError for n < 2). With w = W((n-1)/e):
//   value           = [ln(n-1) - ln w] / (1 + 1/w),
//   top_probability = 1 / (w + 1),
//   c               = (n top_probability - 1) / (n - 1).
SurprisalGapMax surprisal_gap_max(std::size_t n);

struct EquilibriumReport {
  double qre_residual = 0.0;
  double epsilon = 0.0;
  std::vector<double> surprisal;         // A_k(x_k)
  std::vector<double> per_agent_epsilon; // T_k A_k(x_k)
  std::vector<double> best_response_gain;
  double exploitability = 0.0;
};

EquilibriumReport equilibrium_report(const NetworkGame& game, const JointStrategy& x,
                                     const ExplorationRates& t);

}  // namespace qlnet
