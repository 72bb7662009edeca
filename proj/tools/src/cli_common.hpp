#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qlnet/dynamics.hpp"
#include "qlnet/game.hpp"
#include "qlnet/harness.hpp"

namespace qlnet::cli {

using nlohmann::json;

// Catalog or file game selection shared by most subcommands.
struct GameOptions {
  std::string file;
  std::string family = "shapley";
  std::string topology = "ring";
  std::size_t agents = 3;
  double beta = 0.2;
  double eps_x = 0.01;
  double eps_y = -0.05;
  double chak_alpha = 2.5;
  double chak_beta = 1.5;
  double mismatch = 2.0;
  std::size_t actions = 2;
  double payoff_low = 0.0;
  double payoff_high = 5.0;
  std::uint64_t game_seed = 0;

  struct Parts {
    bool file = true;
    bool topology = true;
    bool agents = true;
  };
  void add_to(CLI::App& app, Parts parts);
  void add_to(CLI::App& app) { add_to(app, Parts{}); }

  GameSpec spec() const;
  NetworkGame build() const;
  json describe() const;
};

// --output-prefix P writes P.csv and P.json.
struct OutputOptions {
  std::string prefix;
  bool quiet = false;

  void add_to(CLI::App& app, const std::string& default_prefix);
  std::string csv_path() const { return prefix + ".csv"; }
  std::string json_path() const { return prefix + ".json"; }
};

// Values from a JSON object are applied to every option of `app` that was
// not given on the command line. Keys are long option names with or without
// the leading dashes; underscores may replace dashes. Unknown keys are an
// ArgumentError.
void apply_config_file(CLI::App& app, const std::string& path);

// Every option of `app` with its effective value (command line, config file
// or default), for the run manifest.
json option_snapshot(const CLI::App& app);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// "auto" or a number (or one number per agent).
struct AlphaSpec {
  bool automatic = false;
  std::vector<double> values;

  static AlphaSpec parse(const std::string& text);
  std::vector<double> resolve(const NetworkGame& game, const ExplorationRates& rates) const;
  LearningRate uniform() const;  // ArgumentError for per-agent lists
};

// One value (uniform) or one per agent.
ExplorationRates rates_for(const NetworkGame& game, const std::vector<double>& values);

UpdateOrder order_from(const std::string& name);

json strategy_json(const JointStrategy& x);

// Writes the CSV text and the summary JSON with its manifest:
//   {"command", "status", "summary", "manifest": {"config", "seeds", "artifacts"}}.
void write_outputs(const OutputOptions& out, const CLI::App& sub, const std::string& csv_text,
                   const json& summary, const std::vector<std::uint64_t>& seeds);

// Summary written when a command fails after its options were parsed.
void write_error(const OutputOptions& out, const CLI::App& sub, int exit_code,
                 const std::string& message);

}  // namespace qlnet::cli
