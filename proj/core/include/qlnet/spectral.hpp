#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qlnet/game.hpp"

namespace qlnet {

// Sufficient exploration conditions for convergence to a unique QRE:
//   C1: T_k > delta_k |N_k|            (per agent)
//   C2: T_k > 0.5 sigma_I ||G||_inf    (uniform)
//   C3: T_k > 0.5 sigma_I ||G||_2      (uniform, shared-bimatrix games only)
enum class Condition { kC1, kC2, kC3 };

std::string_view to_string(Condition c);
Condition parse_condition(std::string_view name);

struct StabilityReport {
  std::vector<double> influence_bound;     // delta_k
  std::vector<std::size_t> neighbor_count; // |N_k|
  std::vector<double> c1;                  // delta_k |N_k|
  double sigma_i = 0.0;
  double norm_inf = 0.0;  // ||G||_inf
  double norm_two = 0.0;  // ||G||_2
  double c2 = 0.0;
  double c3 = 0.0;
  bool c3_applicable = false;

  double c1_max() const;
  // Smallest uniform T certified by any applicable condition.
  double min_uniform_threshold() const;
  // Per-agent lower bounds on T_k under the chosen condition.
  // ArgumentError when C3 is requested but not applicable.
  std::vector<double> thresholds(Condition c) const;
};

// Maximum absolute row sum.
double op_norm_inf(const Matrix& m);
// Maximum absolute column sum.
double op_norm_one(const Matrix& m);

// Largest singular value by block power iteration on M^T M (up to six
// vectors with a Rayleigh-Ritz step; relative tolerance 1e-10, at most
// 10000 iterations). The block spans the all-ones vector and fixed
// irregular starts, so a start orthogonal to the dominant singular space
// cannot hide it. Throws NumericalError (with the last estimate) on
// non-convergence.
double op_norm_two(const Matrix& m);

// delta_k: largest change in one of agent k's rewards when a single
// neighbour switches pure action. 0 for isolated agents.
double influence_bound(const NetworkGame& game, std::size_t k);

// sigma_I = max over edges of ||A^{kl} + (A^{lk})^T||_2.
// ArgumentError when the game has no edges.
double identical_interest_intensity(const NetworkGame& game);

// A^{kl} + (A^{lk})^T = 0 on every edge, entrywise within `tol`.
bool is_pairwise_zero_sum(const NetworkGame& game, double tol = 1e-12);

// Every edge carries the same ordered (A^{kl}, A^{lk}) pair.
bool shares_one_bimatrix(const NetworkGame& game);

StabilityReport stability_report(const NetworkGame& game);

// Block matrix of size (sum n_k)^2 with block (k, l) = -A^{kl} on edges and
// zero elsewhere; its sparsity pattern is the adjacency matrix.
Matrix interaction_block_matrix(const NetworkGame& game);

// Symmetric block matrix with block (k, l) = (A^{kl} + (A^{lk})^T) / 2 on
// edges: the symmetric part of the interaction matrix.
Matrix symmetric_interaction_matrix(const NetworkGame& game);

struct BlockNormCheck {
  double lhs = 0.0;  // ||S||_2 of the symmetric interaction matrix
  double rhs = 0.0;  // sqrt(||G||_1 ||G||_inf) * max block 2-norm
  bool holds = false;
};

BlockNormCheck verify_block_norm_bound(const NetworkGame& game);

}  // namespace qlnet
