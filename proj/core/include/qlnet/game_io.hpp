#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qlnet/game.hpp"

namespace qlnet {

// Game files are JSON objects
//
//   {"agents": N,
//    "action_counts": [n_0, ..., n_{N-1}],
//    "edges": [{"k": 0, "l": 1, "A_kl": [[...], ...], "A_lk": [[...], ...]}, ...]}
//
// with matrices written as arrays of rows. Loading validates every game
// invariant and throws StructuralError on any violation.
std::string serialize_game(const NetworkGame& game, int indent = 2);
NetworkGame parse_game(std::string_view text);
NetworkGame load_game(const std::filesystem::path& path);
void save_game(const NetworkGame& game, const std::filesystem::path& path);

// Strategy files: {"strategies": [[x_00, x_01, ...], ...], "T": [T_0, ...]}.
// "T" is optional.
struct StrategyFile {
  JointStrategy strategy;
  std::optional<ExplorationRates> rates;
};

std::string serialize_strategy(const JointStrategy& x,
                               const std::optional<ExplorationRates>& rates = std::nullopt,
                               int indent = 2);
StrategyFile parse_strategy(std::string_view text);
StrategyFile load_strategy(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace qlnet
