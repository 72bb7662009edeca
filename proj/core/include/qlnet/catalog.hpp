#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlnet/game.hpp"

namespace qlnet {

enum class Topology { kRing, kStar, kFull };

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view name);  // ArgumentError on unknown names

// Ring connects k <-> k+1 mod N (N >= 3), star uses agent 0 as the hub,
// full connects every pair. All need N >= 2.
struct TopologySpec {
  Topology kind = Topology::kRing;
  std::size_t num_agents = 3;
};

// Undirected edge list with k < l, in a fixed deterministic order.
std::vector<std::pair<std::size_t, std::size_t>> topology_edges(const TopologySpec& spec);

// 0/1 symmetric adjacency matrix with zero diagonal.
Matrix make_network(const TopologySpec& spec);

// Every undirected edge (k, l), k < l, gets A^{kl} = a and A^{lk} = b.
NetworkGame shared_bimatrix_game(const Matrix& a, const Matrix& b, const TopologySpec& spec);

// Shapley's 3x3 game, beta in (0, 1).
Matrix shapley_row_matrix(double beta);
Matrix shapley_column_matrix(double beta);
NetworkGame shapley_game(double beta, const TopologySpec& spec);

// Sato's perturbed Rock-Paper-Scissors; eps_x = eps_y = 0 is zero-sum RPS.
Matrix sato_matrix(double eps);
NetworkGame sato_game(double eps_x, double eps_y, const TopologySpec& spec);

// Directed ring: agent k is paid x_k^T A x_{k-1 mod N} and nothing else.
// The reverse direction of each edge carries the zero matrix.
NetworkGame directed_ring_game(const Matrix& a, std::size_t num_agents);

// A = [[1, alpha], [beta, 0]], N >= 3.
NetworkGame chakraborty_game(double alpha, double beta, std::size_t num_agents);

// A = [[0, 1], [m, 0]], m >= 1, N >= 3.
NetworkGame mismatching_game(double m, std::size_t num_agents);

struct RandomGameSpec {
  std::size_t num_agents = 15;
  std::size_t actions_per_agent = 2;
  TopologySpec topology{Topology::kRing, 15};
  double payoff_low = 0.0;
  double payoff_high = 5.0;
  std::uint64_t seed = 0;
};

// i.i.d. uniform payoffs in [payoff_low, payoff_high); both directions of
// each edge are drawn independently. Deterministic given the seed.
NetworkGame random_game(const RandomGameSpec& spec);

}  // namespace qlnet
