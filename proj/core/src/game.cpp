#include "qlnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "qlnet/errors.hpp"

namespace qlnet {
namespace {

constexpr double kSumExact = 1e-12;
constexpr double kSumRenormalize = 1e-9;

std::vector<std::size_t> prefix_offsets(std::span<const std::size_t> counts) {
  std::vector<std::size_t> offsets(counts.size() + 1, 0);
  for (std::size_t k = 0; k < counts.size(); ++k) offsets[k + 1] = offsets[k] + counts[k];
  return offsets;
}

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.k) + "," + std::to_string(e.l) + ")";
}

}  // namespace

NetworkGame::NetworkGame(std::vector<std::size_t> action_counts, std::vector<Edge> edges)
    : action_counts_(std::move(action_counts)), edges_(std::move(edges)) {
  if (action_counts_.empty()) throw StructuralError("game has no agents");
  for (std::size_t k = 0; k < action_counts_.size(); ++k) {
    if (action_counts_[k] == 0) {
      throw StructuralError("agent " + std::to_string(k) + " has no actions");
    }
  }
  offsets_ = prefix_offsets(action_counts_);

  const std::size_t n = action_counts_.size();
  neighbors_.assign(n, {});
  incidences_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
    const Edge& e = edges_[idx];
    if (e.k >= n || e.l >= n) throw StructuralError("edge " + edge_name(e) + " names an unknown agent");
    if (e.k == e.l) throw StructuralError("self-edge on agent " + std::to_string(e.k));
    if (!seen.insert(std::minmax(e.k, e.l)).second) {
      throw StructuralError("duplicate edge " + edge_name(e));
    }
    const auto nk = static_cast<Eigen::Index>(action_counts_[e.k]);
    const auto nl = static_cast<Eigen::Index>(action_counts_[e.l]);
    if (e.a_kl.rows() != nk || e.a_kl.cols() != nl || e.a_lk.rows() != nl || e.a_lk.cols() != nk) {
      throw StructuralError("payoff matrix dimensions do not match action counts on edge " +
                            edge_name(e));
    }
    if (!e.a_kl.allFinite() || !e.a_lk.allFinite()) {
      throw StructuralError("non-finite payoff on edge " + edge_name(e));
    }
    neighbors_[e.k].push_back(e.l);
    neighbors_[e.l].push_back(e.k);
    incidences_[e.k].push_back({e.l, idx, true});
    incidences_[e.l].push_back({e.k, idx, false});
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

Matrix NetworkGame::adjacency() const {
  const auto n = static_cast<Eigen::Index>(num_agents());
  Matrix g = Matrix::Zero(n, n);
  for (const Edge& e : edges_) {
    g(static_cast<Eigen::Index>(e.k), static_cast<Eigen::Index>(e.l)) = 1.0;
    g(static_cast<Eigen::Index>(e.l), static_cast<Eigen::Index>(e.k)) = 1.0;
  }
  return g;
}

JointStrategy::JointStrategy(std::span<const std::size_t> action_counts, Vector flat)
    : counts_(action_counts.begin(), action_counts.end()),
      offsets_(prefix_offsets(action_counts)),
      flat_(std::move(flat)) {
  if (static_cast<std::size_t>(flat_.size()) != offsets_.back()) {
    throw StructuralError("strategy length " + std::to_string(flat_.size()) +
                          " does not match total action count " +
                          std::to_string(offsets_.back()));
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    auto block = flat_.segment(static_cast<Eigen::Index>(offsets_[k]),
                               static_cast<Eigen::Index>(counts_[k]));
    if (counts_[k] == 0) throw StructuralError("agent " + std::to_string(k) + " has no actions");
    if (!block.allFinite() || (block.array() < 0.0).any()) {
      throw StructuralError("strategy of agent " + std::to_string(k) +
                            " has negative or non-finite entries");
    }
    const double sum = block.sum();
    const double dev = std::abs(sum - 1.0);
    if (dev > kSumRenormalize) {
      throw StructuralError("strategy of agent " + std::to_string(k) + " sums to " +
                            std::to_string(sum));
    }
    if (dev > kSumExact) block /= sum;
  }
  offsets_.pop_back();
}

JointStrategy::JointStrategy(const std::vector<Vector>& per_agent)
    : JointStrategy(
          [&] {
            std::vector<std::size_t> c;
            for (const auto& v : per_agent) c.push_back(static_cast<std::size_t>(v.size()));
            return c;
          }(),
          [&] {
            Eigen::Index total = 0;
            for (const auto& v : per_agent) total += v.size();
            Vector f(total);
            Eigen::Index pos = 0;
            for (const auto& v : per_agent) {
              f.segment(pos, v.size()) = v;
              pos += v.size();
            }
            return f;
          }()) {}

JointStrategy JointStrategy::uniform(std::span<const std::size_t> action_counts) {
  std::size_t total = 0;
  for (auto c : action_counts) total += c;
  Vector flat(static_cast<Eigen::Index>(total));
  std::size_t pos = 0;
  for (auto c : action_counts) {
    if (c == 0) throw StructuralError("agent with no actions");
    flat.segment(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(c))
        .setConstant(1.0 / static_cast<double>(c));
    pos += c;
  }
  return JointStrategy(action_counts, std::move(flat));
}

std::vector<Vector> JointStrategy::to_vectors() const {
  std::vector<Vector> out;
  out.reserve(counts_.size());
  for (std::size_t k = 0; k < counts_.size(); ++k) out.emplace_back(agent(k));
  return out;
}

ExplorationRates::ExplorationRates(std::vector<double> rates) : rates_(std::move(rates)) {
  for (std::size_t k = 0; k < rates_.size(); ++k) {
    if (!(rates_[k] > 0.0) || !std::isfinite(rates_[k])) {
      throw ArgumentError("exploration rate of agent " + std::to_string(k) +
                          " must be positive and finite, got " + std::to_string(rates_[k]));
    }
  }
}

ExplorationRates ExplorationRates::uniform(std::size_t num_agents, double rate) {
  return ExplorationRates(std::vector<double>(num_agents, rate));
}

double ExplorationRates::max() const {
  return rates_.empty() ? 0.0 : *std::max_element(rates_.begin(), rates_.end());
}

double ExplorationRates::min() const {
  return rates_.empty() ? 0.0 : *std::min_element(rates_.begin(), rates_.end());
}

ExplorationRates ExplorationRates::with(std::size_t k, double rate) const {
  std::vector<double> r = rates_;
  r.at(k) = rate;
  return ExplorationRates(std::move(r));
}

void check_compatible(const NetworkGame& game, const JointStrategy& x) {
  const auto a = game.action_counts();
  const auto b = x.action_counts();
  if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) {
    throw StructuralError("strategy layout does not match the game's action counts");
  }
}

void check_compatible(const NetworkGame& game, const ExplorationRates& t) {
  if (t.size() != game.num_agents()) {
    throw StructuralError("expected " + std::to_string(game.num_agents()) +
                          " exploration rates, got " + std::to_string(t.size()));
  }
}

namespace {

void check_agent(const NetworkGame& game, std::size_t k) {
  if (k >= game.num_agents()) {
    throw ArgumentError("agent index " + std::to_string(k) + " out of range");
  }
}

}  // namespace

void reward_vector_into(const NetworkGame& game, std::size_t k, const Vector& flat,
                        Eigen::Ref<Vector> out) {
  out.setZero();
  for (const auto& inc : game.incidences(k)) {
    const auto l = inc.neighbor;
    out.noalias() += game.payoff_matrix(inc) *
                     flat.segment(static_cast<Eigen::Index>(game.offset(l)),
                                  static_cast<Eigen::Index>(game.actions(l)));
  }
}

void rewards_into(const NetworkGame& game, const Vector& flat, Vector& out) {
  out.resize(static_cast<Eigen::Index>(game.total_actions()));
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    reward_vector_into(game, k,
                       flat, out.segment(static_cast<Eigen::Index>(game.offset(k)),
                                         static_cast<Eigen::Index>(game.actions(k))));
  }
}

Vector reward_vector(const NetworkGame& game, std::size_t k, const JointStrategy& x) {
  check_agent(game, k);
  check_compatible(game, x);
  Vector r(static_cast<Eigen::Index>(game.actions(k)));
  reward_vector_into(game, k, x.flat(), r);
  return r;
}

Vector rewards(const NetworkGame& game, const JointStrategy& x) {
  check_compatible(game, x);
  Vector r;
  rewards_into(game, x.flat(), r);
  return r;
}

double payoff(const NetworkGame& game, std::size_t k, const JointStrategy& x) {
  check_agent(game, k);
  check_compatible(game, x);
  double u = 0.0;
  for (const auto& inc : game.incidences(k)) {
    u += x.agent(k).dot(game.payoff_matrix(inc) * x.agent(inc.neighbor));
  }
  return u;
}

void require_interior(const JointStrategy& x, std::size_t k) {
  if ((x.agent(k).array() < kInteriorFloor).any()) {
    throw DomainError("strategy of agent " + std::to_string(k) +
                      " is on the simplex boundary; ln x is undefined");
  }
}

double perturbed_payoff(const NetworkGame& game, std::size_t k, const JointStrategy& x,
                        const ExplorationRates& t) {
  check_compatible(game, t);
  const double u = payoff(game, k, x);
  require_interior(x, k);
  const auto xk = x.agent(k);
  return u - t[k] * xk.dot(xk.array().log().matrix());
}

Vector pseudo_gradient(const NetworkGame& game, const JointStrategy& x,
                       const ExplorationRates& t) {
  check_compatible(game, x);
  check_compatible(game, t);
  for (std::size_t k = 0; k < game.num_agents(); ++k) require_interior(x, k);
  Vector f = -rewards(game, x);
  for (std::size_t k = 0; k < game.num_agents(); ++k) {
    auto seg = f.segment(static_cast<Eigen::Index>(game.offset(k)),
                         static_cast<Eigen::Index>(game.actions(k)));
    seg.array() += t[k] * (x.agent(k).array().log() + 1.0);
  }
  return f;
}

}  // namespace qlnet
