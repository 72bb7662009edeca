#include "qlnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qlnet/errors.hpp"

namespace qlnet {
namespace {

constexpr double kPowerTolerance = 1e-10;
constexpr int kPowerMaxIterations = 10000;

// lambda_max(M^T M) by subspace (block power) iteration with a
// Rayleigh-Ritz step. The block starts with the normalised all-ones vector
// and fixed irregular vectors, so results are reproducible; a block of
// several vectors keeps the rate at lambda_{p+1} / lambda_1 even when the
// two largest singular values nearly coincide.
double power_iterate(const Matrix& m) {
  const Eigen::Index n = m.cols();
  const Eigen::Index p = std::min<Eigen::Index>(n, 6);
  Matrix v(n, p);
  v.col(0).setOnes();
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i, j) = std::sin(1.0 + 2.399963229728653 * static_cast<double>(j * n + i + 1));
    }
  }
  Matrix w(n, p);
  double lambda = 0.0;
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    const Eigen::HouseholderQR<Matrix> qr(v);
    v = qr.householderQ() * Matrix::Identity(n, p);
    w.noalias() = m.transpose() * (m * v);
    const Matrix small = v.transpose() * w;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (small + small.transpose()));
    const double next = eig.eigenvalues()(p - 1);
    if (next <= 0.0 && w.isZero(0.0)) return 0.0;
    // Rotate the block onto its Ritz vectors, largest first.
    v.noalias() = w * eig.eigenvectors().rowwise().reverse();
    if (it > 0 && std::abs(next - lambda) <= kPowerTolerance * std::abs(next)) return next;
    lambda = next;
  }
  throw NumericalError("power iteration did not converge in " +
                           std::to_string(kPowerMaxIterations) + " iterations",
                       std::nullopt, std::sqrt(std::max(lambda, 0.0)));
}

void add_block(Matrix& big, const NetworkGame& game, std::size_t row_agent,
               std::size_t col_agent, const Matrix& block) {
  big.block(static_cast<Eigen::Index>(game.offset(row_agent)),
            static_cast<Eigen::Index>(game.offset(col_agent)), block.rows(), block.cols()) += block;
}

}  // namespace

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::kC1: return "C1";
    case Condition::kC2: return "C2";
    case Condition::kC3: return "C3";
  }
  return "?";
}

Condition parse_condition(std::string_view name) {
  if (name == "C1" || name == "c1") return Condition::kC1;
  if (name == "C2" || name == "c2") return Condition::kC2;
  if (name == "C3" || name == "c3") return Condition::kC3;
  throw ArgumentError("unknown condition '" + std::string(name) + "' (C1, C2, C3)");
}

double StabilityReport::c1_max() const {
  return c1.empty() ? 0.0 : *std::max_element(c1.begin(), c1.end());
}

double StabilityReport::min_uniform_threshold() const {
  double t = std::min(c1_max(), c2);
  if (c3_applicable) t = std::min(t, c3);
  return t;
}

std::vector<double> StabilityReport::thresholds(Condition c) const {
  switch (c) {
    case Condition::kC1: return c1;
    case Condition::kC2: return std::vector<double>(c1.size(), c2);
    case Condition::kC3:
      if (!c3_applicable) {
        throw ArgumentError("condition C3 needs every edge to carry the same bimatrix game");
      }
      return std::vector<double>(c1.size(), c3);
  }
  return {};
}

double op_norm_inf(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double op_norm_one(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double op_norm_two(const Matrix& m) {
  if (!m.allFinite()) throw ArgumentError("op_norm_two needs finite entries");
  if (m.size() == 0 || m.isZero(0.0)) return 0.0;
  const double lambda = power_iterate(m);
  return std::sqrt(std::max(lambda, 0.0));
}

double influence_bound(const NetworkGame& game, std::size_t k) {
  if (k >= game.num_agents()) throw ArgumentError("agent index out of range");
  double delta = 0.0;
  for (const auto& inc : game.incidences(k)) {
    const Matrix& a = game.payoff_matrix(inc);
    if (a.cols() == 0) continue;
    const Vector range = a.rowwise().maxCoeff() - a.rowwise().minCoeff();
    delta = std::max(delta, range.maxCoeff());
  }
  return delta;
}

double identical_interest_intensity(const NetworkGame& game) {
  if (game.edges().empty()) {
    throw ArgumentError("intensity of identical interests needs at least one edge");
  }
  double sigma = 0.0;
  for (const Edge& e : game.edges()) {
    sigma = std::max(sigma, op_norm_two(e.a_kl + e.a_lk.transpose()));
  }
  return sigma;
}

bool is_pairwise_zero_sum(const NetworkGame& game, double tol) {
  return std::all_of(game.edges().begin(), game.edges().end(), [tol](const Edge& e) {
    return (e.a_kl + e.a_lk.transpose()).cwiseAbs().maxCoeff() <= tol;
  });
}

bool shares_one_bimatrix(const NetworkGame& game) {
  const auto edges = game.edges();
  if (edges.empty()) return false;
  const Edge& first = edges.front();
  return std::all_of(edges.begin(), edges.end(), [&](const Edge& e) {
    return e.a_kl.rows() == first.a_kl.rows() && e.a_kl.cols() == first.a_kl.cols() &&
           e.a_kl == first.a_kl && e.a_lk == first.a_lk;
  });
}

StabilityReport stability_report(const NetworkGame& game) {
  StabilityReport r;
  const std::size_t n = game.num_agents();
  r.influence_bound.resize(n);
  r.neighbor_count.resize(n);
  r.c1.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    r.influence_bound[k] = influence_bound(game, k);
    r.neighbor_count[k] = game.neighbors(k).size();
    r.c1[k] = r.influence_bound[k] * static_cast<double>(r.neighbor_count[k]);
  }
  const Matrix g = game.adjacency();
  r.norm_inf = op_norm_inf(g);
  r.norm_two = op_norm_two(g);
  r.sigma_i = game.edges().empty() ? 0.0 : identical_interest_intensity(game);
  r.c2 = 0.5 * r.sigma_i * r.norm_inf;
  r.c3 = 0.5 * r.sigma_i * r.norm_two;
  r.c3_applicable = shares_one_bimatrix(game);
  return r;
}

Matrix interaction_block_matrix(const NetworkGame& game) {
  const auto dim = static_cast<Eigen::Index>(game.total_actions());
  Matrix big = Matrix::Zero(dim, dim);
  for (const Edge& e : game.edges()) {
    add_block(big, game, e.k, e.l, -e.a_kl);
    add_block(big, game, e.l, e.k, -e.a_lk);
  }
  return big;
}

Matrix symmetric_interaction_matrix(const NetworkGame& game) {
  const auto dim = static_cast<Eigen::Index>(game.total_actions());
  Matrix big = Matrix::Zero(dim, dim);
  for (const Edge& e : game.edges()) {
    const Matrix block = 0.5 * (e.a_kl + e.a_lk.transpose());
    add_block(big, game, e.k, e.l, block);
    add_block(big, game, e.l, e.k, block.transpose());
  }
  return big;
}

BlockNormCheck verify_block_norm_bound(const NetworkGame& game) {
  BlockNormCheck check;
  const Matrix g = game.adjacency();
  double max_block = 0.0;
  for (const Edge& e : game.edges()) {
    max_block = std::max(max_block, op_norm_two(0.5 * (e.a_kl + e.a_lk.transpose())));
  }
  check.lhs = op_norm_two(symmetric_interaction_matrix(game));
  check.rhs = std::sqrt(op_norm_one(g) * op_norm_inf(g)) * max_block;
  check.holds = check.lhs <= check.rhs + 1e-9;
  return check;
}

}  // namespace qlnet
