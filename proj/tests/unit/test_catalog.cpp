#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qlnet/catalog.hpp"
#include "qlnet/errors.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet {
namespace {

Matrix m3(std::initializer_list<double> xs) {
  Matrix m(3, 3);
  auto it = xs.begin();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = *it++;
  return m;
}

TEST(Topology, EdgeCountsAndDegrees) {
  EXPECT_EQ(topology_edges({Topology::kRing, 7}).size(), 7u);
  EXPECT_EQ(topology_edges({Topology::kStar, 7}).size(), 6u);
  EXPECT_EQ(topology_edges({Topology::kFull, 7}).size(), 21u);
  for (auto [k, l] : topology_edges({Topology::kFull, 5})) EXPECT_LT(k, l);
  const Matrix star = make_network({Topology::kStar, 5});
  EXPECT_EQ(star.row(0).sum(), 4.0);
  EXPECT_EQ(star.row(3).sum(), 1.0);
  EXPECT_THROW(topology_edges({Topology::kRing, 2}), ArgumentError);
  EXPECT_THROW(topology_edges({Topology::kFull, 1}), ArgumentError);
  EXPECT_EQ(parse_topology("star"), Topology::kStar);
  EXPECT_THROW(parse_topology("mesh"), ArgumentError);
}

TEST(Topology, AdjacencyNorms) {
  const Matrix ring = make_network({Topology::kRing, 5});
  const Matrix star = make_network({Topology::kStar, 5});
  const Matrix full = make_network({Topology::kFull, 5});
  EXPECT_EQ(op_norm_inf(ring), 2.0);
  EXPECT_NEAR(op_norm_two(ring), 2.0, 1e-9);
  EXPECT_EQ(op_norm_inf(star), 4.0);
  EXPECT_NEAR(op_norm_two(star), 2.0, 1e-9);
  EXPECT_EQ(op_norm_inf(full), 4.0);
  EXPECT_NEAR(op_norm_two(full), 4.0, 1e-9);
}

TEST(Shapley, PrintedMatrices) {
  const NetworkGame g = shapley_game(0.5, {Topology::kRing, 3});
  ASSERT_EQ(g.edges().size(), 3u);
  const Matrix a = m3({1, 0, 0.5, 0.5, 1, 0, 0, 0.5, 1});
  const Matrix b = m3({-0.5, 1, 0, 0, -0.5, 1, 1, 0, -0.5});
  for (const Edge& e : g.edges()) {
    EXPECT_EQ(e.a_kl, a);
    EXPECT_EQ(e.a_lk, b);
  }
  const Matrix a2 = m3({1, 0, 0.2, 0.2, 1, 0, 0, 0.2, 1});
  EXPECT_TRUE(shapley_row_matrix(0.2).isApprox(a2, 0.0));
  EXPECT_THROW(shapley_game(1.0, {Topology::kRing, 3}), ArgumentError);
  EXPECT_THROW(shapley_game(0.0, {Topology::kRing, 3}), ArgumentError);
}

TEST(Shapley, IntensityIsTwoForAnyBeta) {
  for (double beta : {0.05, 0.2, 0.5, 0.9})
    EXPECT_NEAR(identical_interest_intensity(shapley_game(beta, {Topology::kRing, 3})), 2.0, 1e-9);
}

TEST(Sato, ZeroSumWhenEpsilonsVanish) {
  EXPECT_TRUE(is_pairwise_zero_sum(sato_game(0.0, 0.0, {Topology::kRing, 3})));
  EXPECT_FALSE(is_pairwise_zero_sum(sato_game(0.01, -0.05, {Topology::kRing, 3})));
}

TEST(Sato, SymmetricPartIsScaledIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double ex = trial == 0 ? 0.01 : u(rng);
    const double ey = trial == 0 ? -0.05 : u(rng);
    const Matrix s = sato_matrix(ex) + sato_matrix(ey).transpose();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(s(i, j), i == j ? ex + ey : 0.0, 1e-15);
  }
}

TEST(Chakraborty, DirectedRingStructure) {
  const NetworkGame g = chakraborty_game(7.0, 8.5, 3);
  Matrix a(2, 2);
  a << 1, 7, 8.5, 0;
  EXPECT_EQ(g.num_agents(), 3u);
  EXPECT_EQ(g.edges().size(), 3u);
  std::mt19937_64 rng(8);
  const JointStrategy x = oracle::random_interior(rng, g);
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t prev = (k + 2) % 3;
    const Vector expect = a * x.agent(prev);
    EXPECT_TRUE(reward_vector(g, k, x).isApprox(expect, 1e-14));
    // Only agent k-1 matters.
    auto parts = x.to_vectors();
    for (std::size_t j = 0; j < 3; ++j)
      if (j != prev) parts[j] = oracle::random_simplex(rng, 2);
    EXPECT_TRUE(reward_vector(g, k, JointStrategy(parts)).isApprox(expect, 1e-14));
  }
  const NetworkGame g5 = chakraborty_game(2.5, 1.5, 5);
  EXPECT_EQ(g5.num_agents(), 5u);
  EXPECT_EQ(g5.edges().size(), 5u);
}

TEST(Mismatching, Structure) {
  const NetworkGame g = mismatching_game(2.0, 3);
  Matrix a(2, 2);
  a << 0, 1, 2, 0;
  const JointStrategy x(std::vector<Vector>{Vector::Unit(2, 0), Vector::Unit(2, 1), Vector::Unit(2, 0)});
  // Agent 1 listens to agent 0.
  EXPECT_TRUE(reward_vector(g, 1, x).isApprox(a * x.agent(0)));
  EXPECT_EQ(mismatching_game(4.0, 5).num_agents(), 5u);
  EXPECT_THROW(mismatching_game(0.5, 3), ArgumentError);
}

TEST(Mismatching, UnitInfluenceAtMEqualsOne) {
  const NetworkGame g = mismatching_game(1.0, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_DOUBLE_EQ(oracle::brute_influence_bound(g, k), 1.0);
    EXPECT_DOUBLE_EQ(influence_bound(g, k), 1.0);
  }
}

TEST(RandomGame, DeterministicBoundedAndShaped) {
  RandomGameSpec spec;
  spec.seed = 99;
  const NetworkGame a = random_game(spec);
  const NetworkGame b = random_game(spec);
  ASSERT_EQ(a.edges().size(), 15u);
  for (std::size_t i = 0; i < a.edges().size(); ++i) {
    EXPECT_EQ(a.edges()[i].a_kl, b.edges()[i].a_kl);
    EXPECT_EQ(a.edges()[i].a_lk, b.edges()[i].a_lk);
    EXPECT_EQ(a.edges()[i].a_kl.rows(), 2);
    EXPECT_EQ(a.edges()[i].a_kl.cols(), 2);
    for (const Matrix* m : {&a.edges()[i].a_kl, &a.edges()[i].a_lk}) {
      EXPECT_GE(m->minCoeff(), 0.0);
      EXPECT_LE(m->maxCoeff(), 5.0);
    }
  }
  spec.seed = 100;
  EXPECT_NE(random_game(spec).edges()[0].a_kl, a.edges()[0].a_kl);
}

}  // namespace
}  // namespace qlnet
