#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qlnet/catalog.hpp"
#include "qlnet/errors.hpp"
#include "qlnet/game.hpp"
#include "qlnet/spectral.hpp"

namespace qlnet {
namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector v(std::initializer_list<double> xs) {
  Vector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

NetworkGame matching_pennies() {
  const Matrix a = m2(1, -1, -1, 1);
  return NetworkGame({2, 2}, {Edge{0, 1, a, -a.transpose()}});
}

TEST(NetworkGame, RejectsSelfEdges) {
  EXPECT_THROW(NetworkGame({2, 2}, {Edge{0, 0, Matrix::Zero(2, 2), Matrix::Zero(2, 2)}}),
               StructuralError);
}

TEST(NetworkGame, RejectsDuplicatePairsInEitherOrientation) {
  const Matrix z = Matrix::Zero(2, 2);
  EXPECT_THROW(NetworkGame({2, 2}, {Edge{0, 1, z, z}, Edge{1, 0, z, z}}), StructuralError);
}

TEST(NetworkGame, RejectsDimensionMismatch) {
  EXPECT_THROW(NetworkGame({2, 3}, {Edge{0, 1, Matrix::Zero(2, 2), Matrix::Zero(3, 2)}}),
               StructuralError);
  EXPECT_THROW(NetworkGame({2, 3}, {Edge{0, 1, Matrix::Zero(2, 3), Matrix::Zero(2, 3)}}),
               StructuralError);
}

TEST(NetworkGame, RejectsOutOfRangeAgentsAndBadPayoffs) {
  const Matrix z = Matrix::Zero(2, 2);
  EXPECT_THROW(NetworkGame({2, 2}, {Edge{0, 2, z, z}}), StructuralError);
  EXPECT_THROW(NetworkGame({2, 0}, {}), StructuralError);
  Matrix bad = z;
  bad(0, 0) = std::nan("");
  EXPECT_THROW(NetworkGame({2, 2}, {Edge{0, 1, bad, z}}), StructuralError);
}

TEST(NetworkGame, AdjacencyIsSymmetricZeroOne) {
  const NetworkGame g = shapley_game(0.5, {Topology::kStar, 5});
  const Matrix a = g.adjacency();
  EXPECT_TRUE(a.isApprox(a.transpose()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    EXPECT_EQ(a(i, i), 0.0);
    for (Eigen::Index j = 0; j < a.cols(); ++j) EXPECT_TRUE(a(i, j) == 0.0 || a(i, j) == 1.0);
  }
  EXPECT_EQ(a.sum(), 8.0);
}

TEST(NetworkGame, NeighborsAreSorted) {
  const NetworkGame g = shapley_game(0.5, {Topology::kRing, 5});
  const auto nb = g.neighbors(0);
  ASSERT_EQ(nb.size(), 2u);
  EXPECT_EQ(nb[0], 1u);
  EXPECT_EQ(nb[1], 4u);
}

TEST(JointStrategy, RenormalisesSmallDrift) {
  const std::vector<std::size_t> counts{2};
  const JointStrategy x(counts, v({0.5 + 5e-10, 0.5}));
  EXPECT_NEAR(x.agent(0).sum(), 1.0, 1e-15);
}

TEST(JointStrategy, RejectsLargeDriftAndNegatives) {
  const std::vector<std::size_t> counts{2};
  EXPECT_THROW(JointStrategy(counts, v({0.5 + 1e-6, 0.5})), StructuralError);
  EXPECT_THROW(JointStrategy(counts, v({1.5, -0.5})), StructuralError);
  EXPECT_THROW(JointStrategy(counts, v({0.5, 0.25, 0.25})), StructuralError);
}

TEST(ExplorationRates, RequiresPositiveRates) {
  EXPECT_THROW(ExplorationRates({1.0, 0.0}), ArgumentError);
  EXPECT_THROW(ExplorationRates({-1.0}), ArgumentError);
  EXPECT_THROW(ExplorationRates({INFINITY}), ArgumentError);
  const ExplorationRates t({1.0, 2.0});
  EXPECT_EQ(t.with(0, 0.5)[0], 0.5);
  EXPECT_THROW(t.with(0, 0.0), ArgumentError);
}

TEST(Payoff, MatchingPenniesUniformIsZero) {
  const NetworkGame g = matching_pennies();
  const JointStrategy x = JointStrategy::uniform(g.action_counts());
  EXPECT_EQ(payoff(g, 0, x), 0.0);
  EXPECT_EQ(payoff(g, 1, x), 0.0);
}

TEST(Payoff, PureStrategyLooksUpTheTable) {
  const NetworkGame g({2, 2}, {Edge{0, 1, m2(1, 0, 0, 0), Matrix::Zero(2, 2)}});
  const JointStrategy x(std::vector<Vector>{v({1, 0}), v({1, 0})});
  EXPECT_EQ(payoff(g, 0, x), 1.0);
}

TEST(Payoff, SatoRingMatchesDoubleSum) {
  const NetworkGame g = sato_game(0.01, -0.05, {Topology::kRing, 3});
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const JointStrategy x = trial == 0 ? JointStrategy::uniform(g.action_counts())
                                       : oracle::random_interior(rng, g);
    for (std::size_t k = 0; k < 3; ++k)
      EXPECT_NEAR(payoff(g, k, x), oracle::direct_payoff(g, k, x), 1e-14);
  }
}

TEST(RewardVector, ZeroSumRpsAgainstUniformVanishes) {
  const NetworkGame g = sato_game(0.0, 0.0, {Topology::kRing, 3});
  const Vector r = reward_vector(g, 0, JointStrategy::uniform(g.action_counts()));
  EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RewardVector, IdentityMatrixEchoesOpponent) {
  const NetworkGame g({2, 2}, {Edge{0, 1, Matrix::Identity(2, 2), Matrix::Zero(2, 2)}});
  const JointStrategy x(std::vector<Vector>{v({0.5, 0.5}), v({0.3, 0.7})});
  const Vector r = reward_vector(g, 0, x);
  EXPECT_DOUBLE_EQ(r(0), 0.3);
  EXPECT_DOUBLE_EQ(r(1), 0.7);
}

TEST(RewardVector, ShapleyRingMatchesPerEdgeOracle) {
  const NetworkGame g = shapley_game(0.5, {Topology::kRing, 5});
  std::mt19937_64 rng(11);
  const JointStrategy x = oracle::random_interior(rng, g);
  for (std::size_t k = 0; k < 5; ++k) {
    const Vector r = reward_vector(g, k, x);
    const auto ref = oracle::direct_reward(g, k, x);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r(static_cast<Eigen::Index>(i)), ref[i], 1e-14);
  }
}

TEST(RewardVector, RewardsConcatenatesAgents) {
  const NetworkGame g = shapley_game(0.3, {Topology::kFull, 4});
  std::mt19937_64 rng(3);
  const JointStrategy x = oracle::random_interior(rng, g);
  const Vector all = rewards(g, x);
  for (std::size_t k = 0; k < 4; ++k)
    EXPECT_TRUE(all.segment(static_cast<Eigen::Index>(g.offset(k)), 3).isApprox(reward_vector(g, k, x)));
}

TEST(PerturbedPayoff, UniformTwoActionsIsLn2) {
  const NetworkGame g({2, 2}, {Edge{0, 1, Matrix::Zero(2, 2), Matrix::Zero(2, 2)}});
  const JointStrategy x = JointStrategy::uniform(g.action_counts());
  EXPECT_NEAR(perturbed_payoff(g, 0, x, ExplorationRates::uniform(2, 1.0)), std::log(2.0), 1e-15);
}

TEST(PerturbedPayoff, TendsToPayoffAsRateVanishes) {
  const NetworkGame g = shapley_game(0.4, {Topology::kRing, 3});
  std::mt19937_64 rng(5);
  const JointStrategy x = oracle::random_interior(rng, g);
  EXPECT_NEAR(perturbed_payoff(g, 1, x, ExplorationRates::uniform(3, 1e-12)), payoff(g, 1, x), 1e-11);
}

TEST(PerturbedPayoff, ShapleyEdgeAddsScaledEntropy) {
  const NetworkGame g({3, 3}, {Edge{0, 1, shapley_row_matrix(0.5), shapley_column_matrix(0.5)}});
  const JointStrategy x(std::vector<Vector>{v({0.5, 0.25, 0.25}), v({0.2, 0.3, 0.5})});
  const double entropy = -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  EXPECT_NEAR(perturbed_payoff(g, 0, x, ExplorationRates({2.0, 1.0})),
              oracle::direct_payoff(g, 0, x) + 2.0 * entropy, 1e-14);
}

TEST(PerturbedPayoff, BoundaryIsADomainError) {
  const NetworkGame g = matching_pennies();
  const JointStrategy x(std::vector<Vector>{v({1, 0}), v({0.5, 0.5})});
  EXPECT_THROW(perturbed_payoff(g, 0, x, ExplorationRates::uniform(2, 1.0)), DomainError);
  EXPECT_NO_THROW(perturbed_payoff(g, 1, x, ExplorationRates::uniform(2, 1.0)));
}

TEST(PseudoGradient, ZeroSumRpsAtUniform) {
  const NetworkGame g = sato_game(0.0, 0.0, {Topology::kRing, 3});
  const Vector f = pseudo_gradient(g, JointStrategy::uniform(g.action_counts()),
                                   ExplorationRates::uniform(3, 1.0));
  for (Eigen::Index i = 0; i < f.size(); ++i) EXPECT_NEAR(f(i), 1.0 + std::log(1.0 / 3.0), 1e-15);
}

TEST(PseudoGradient, BoundaryIsADomainError) {
  const NetworkGame g = matching_pennies();
  const JointStrategy x(std::vector<Vector>{v({1, 0}), v({0.5, 0.5})});
  EXPECT_THROW(pseudo_gradient(g, x, ExplorationRates::uniform(2, 1.0)), DomainError);
}

TEST(GameProperties, PayoffTwoWaysAgree) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const NetworkGame g = oracle::random_small_game(rng, 8, 4);
    const JointStrategy x = oracle::random_interior(rng, g, 0.0);
    double by_edges = 0.0;
    double by_rewards = 0.0;
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
      by_edges += oracle::direct_payoff(g, k, x);
      by_rewards += x.agent(k).dot(reward_vector(g, k, x));
      EXPECT_NEAR(payoff(g, k, x), oracle::direct_payoff(g, k, x), 1e-12);
    }
    EXPECT_NEAR(by_edges, by_rewards, 1e-12);
  }
}

TEST(GameProperties, RewardIgnoresOwnStrategyAndIsAffineInNeighbours) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkGame g = oracle::random_small_game(rng, 6, 3);
    const JointStrategy x = oracle::random_interior(rng, g);
    const JointStrategy y = oracle::random_interior(rng, g);
    const std::size_t k = 0;
    // Changing x_k alone leaves r_k unchanged.
    auto parts = x.to_vectors();
    parts[k] = y.agent(k);
    EXPECT_LT((reward_vector(g, k, x) - reward_vector(g, k, JointStrategy(parts))).cwiseAbs().maxCoeff(), 1e-14);
    // Mixing one neighbour's strategy mixes the rewards.
    if (g.neighbors(k).empty()) continue;
    const std::size_t l = g.neighbors(k)[0];
    const double lam = 0.3;
    auto pa = x.to_vectors();
    auto pb = x.to_vectors();
    auto pm = x.to_vectors();
    pb[l] = y.agent(l);
    pm[l] = lam * x.agent(l) + (1 - lam) * y.agent(l);
    const Vector ra = reward_vector(g, k, JointStrategy(pa));
    const Vector rb = reward_vector(g, k, JointStrategy(pb));
    const Vector rm = reward_vector(g, k, JointStrategy(pm));
    EXPECT_LT((rm - (lam * ra + (1 - lam) * rb)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// With every T_k above the C2 threshold the pseudo-gradient of the perturbed
// game is monotone.
TEST(GameProperties, PseudoGradientMonotoneUnderC2) {
  std::mt19937_64 rng(303);
  for (const auto& g : {shapley_game(0.2, {Topology::kRing, 6}), shapley_game(0.7, {Topology::kFull, 4}),
                        sato_game(0.01, -0.05, {Topology::kStar, 5})}) {
    const StabilityReport rep = stability_report(g);
    const ExplorationRates t = ExplorationRates::uniform(g.num_agents(), 1.05 * rep.c2 + 1e-9);
    for (int trial = 0; trial < 100; ++trial) {
      const JointStrategy x = oracle::random_interior(rng, g, 1e-4);
      const JointStrategy y = oracle::random_interior(rng, g, 1e-4);
      const double inner = (pseudo_gradient(g, x, t) - pseudo_gradient(g, y, t)).dot(x.flat() - y.flat());
      EXPECT_GE(inner, 0.0);
    }
  }
}

}  // namespace
}  // namespace qlnet
