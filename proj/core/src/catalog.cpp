#include "qlnet/catalog.hpp"

#include <string>

#include "qlnet/errors.hpp"
#include "qlnet/rng.hpp"

namespace qlnet {

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::kRing: return "ring";
    case Topology::kStar: return "star";
    case Topology::kFull: return "full";
  }
  return "?";
}

Topology parse_topology(std::string_view name) {
  if (name == "ring") return Topology::kRing;
  if (name == "star") return Topology::kStar;
  if (name == "full") return Topology::kFull;
  throw ArgumentError("unknown topology '" + std::string(name) + "' (ring, star, full)");
}

std::vector<std::pair<std::size_t, std::size_t>> topology_edges(const TopologySpec& spec) {
  const std::size_t n = spec.num_agents;
  if (n < 2) throw ArgumentError("a network needs at least 2 agents");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  switch (spec.kind) {
    case Topology::kRing:
      if (n < 3) throw ArgumentError("a ring needs at least 3 agents");
      for (std::size_t k = 0; k + 1 < n; ++k) edges.emplace_back(k, k + 1);
      edges.emplace_back(0, n - 1);
      break;
    case Topology::kStar:
      for (std::size_t l = 1; l < n; ++l) edges.emplace_back(0, l);
      break;
    case Topology::kFull:
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) edges.emplace_back(k, l);
      break;
  }
  return edges;
}

Matrix make_network(const TopologySpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.num_agents);
  Matrix g = Matrix::Zero(n, n);
  for (auto [k, l] : topology_edges(spec)) {
    g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = 1.0;
    g(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return g;
}

NetworkGame shared_bimatrix_game(const Matrix& a, const Matrix& b, const TopologySpec& spec) {
  if (a.rows() != b.cols() || a.cols() != b.rows() || a.rows() != a.cols()) {
    throw ArgumentError("shared bimatrix games need square A and B of equal size");
  }
  std::vector<Edge> edges;
  for (auto [k, l] : topology_edges(spec)) edges.push_back(Edge{k, l, a, b});
  return NetworkGame(std::vector<std::size_t>(spec.num_agents, static_cast<std::size_t>(a.rows())),
                     std::move(edges));
}

Matrix shapley_row_matrix(double beta) {
  Matrix a(3, 3);
  a << 1, 0, beta,
       beta, 1, 0,
       0, beta, 1;
  return a;
}

Matrix shapley_column_matrix(double beta) {
  Matrix b(3, 3);
  b << -beta, 1, 0,
       0, -beta, 1,
       1, 0, -beta;
  return b;
}

NetworkGame shapley_game(double beta, const TopologySpec& spec) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ArgumentError("Shapley beta must lie in (0, 1), got " + std::to_string(beta));
  }
  return shared_bimatrix_game(shapley_row_matrix(beta), shapley_column_matrix(beta), spec);
}

Matrix sato_matrix(double eps) {
  Matrix a(3, 3);
  a << eps, -1, 1,
       1, eps, -1,
       -1, 1, eps;
  return a;
}

NetworkGame sato_game(double eps_x, double eps_y, const TopologySpec& spec) {
  return shared_bimatrix_game(sato_matrix(eps_x), sato_matrix(eps_y), spec);
}

NetworkGame directed_ring_game(const Matrix& a, std::size_t num_agents) {
  if (num_agents < 3) throw ArgumentError("a directed ring needs at least 3 agents");
  if (a.rows() != a.cols()) throw ArgumentError("directed ring payoff must be square");
  const Matrix zero = Matrix::Zero(a.rows(), a.cols());
  std::vector<Edge> edges;
  for (auto [k, l] : topology_edges({Topology::kRing, num_agents})) {
    // Agent j listens to j-1 mod N: on (k, k+1) the higher agent is paid;
    // on the closing edge (0, N-1) agent 0 is paid.
    const bool lower_is_paid = (k == 0 && l == num_agents - 1);
    edges.push_back(lower_is_paid ? Edge{k, l, a, zero} : Edge{k, l, zero, a});
  }
  return NetworkGame(std::vector<std::size_t>(num_agents, static_cast<std::size_t>(a.rows())),
                     std::move(edges));
}

NetworkGame chakraborty_game(double alpha, double beta, std::size_t num_agents) {
  if (num_agents < 3) throw ArgumentError("Chakraborty game needs N >= 3");
  Matrix a(2, 2);
  a << 1, alpha,
       beta, 0;
  return directed_ring_game(a, num_agents);
}

NetworkGame mismatching_game(double m, std::size_t num_agents) {
  if (!(m >= 1.0)) throw ArgumentError("mismatching game needs M >= 1");
  if (num_agents < 3) throw ArgumentError("mismatching game needs N >= 3");
  Matrix a(2, 2);
  a << 0, 1,
       m, 0;
  return directed_ring_game(a, num_agents);
}

NetworkGame random_game(const RandomGameSpec& spec) {
  if (!(spec.payoff_low < spec.payoff_high)) {
    throw ArgumentError("random game needs payoff_low < payoff_high");
  }
  if (spec.actions_per_agent == 0) throw ArgumentError("random game needs at least one action");
  if (spec.topology.num_agents != spec.num_agents) {
    throw ArgumentError("random game topology size does not match num_agents");
  }
  CounterRng rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.actions_per_agent);
  auto draw = [&] {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.uniform(spec.payoff_low, spec.payoff_high);
    return m;
  };
  std::vector<Edge> edges;
  for (auto [k, l] : topology_edges(spec.topology)) {
    Matrix a_kl = draw();
    Matrix a_lk = draw();
    edges.push_back(Edge{k, l, std::move(a_kl), std::move(a_lk)});
  }
  return NetworkGame(std::vector<std::size_t>(spec.num_agents, spec.actions_per_agent),
                     std::move(edges));
}

}  // namespace qlnet
