#include "cli_common.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlnet/catalog.hpp"
#include "qlnet/errors.hpp"
#include "qlnet/game_io.hpp"

namespace qlnet::cli {
namespace {

std::string json_scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw ArgumentError("config values must be strings, numbers, booleans or arrays of these");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ArgumentError("failed writing '" + path + "'");
}

}  // namespace

void GameOptions::add_to(CLI::App& app, Parts parts) {
  if (parts.file) {
    app.add_option("--game", file, "Game file (JSON); overrides the catalog options");
  }
  app.add_option("--family", family, "Catalog game: shapley, sato, chakraborty, mismatching, random")
      ->capture_default_str();
  if (parts.topology) {
    app.add_option("--topology", topology, "Network: ring, star or full")->capture_default_str();
  }
  if (parts.agents) app.add_option("--agents", agents, "Number of agents")->capture_default_str();
  app.add_option("--beta", beta, "Shapley beta")->capture_default_str();
  app.add_option("--eps-x", eps_x, "Sato eps_X")->capture_default_str();
  app.add_option("--eps-y", eps_y, "Sato eps_Y")->capture_default_str();
  app.add_option("--chak-alpha", chak_alpha, "Chakraborty alpha")->capture_default_str();
  app.add_option("--chak-beta", chak_beta, "Chakraborty beta")->capture_default_str();
  app.add_option("--mismatch", mismatch, "Mismatching game M")->capture_default_str();
  app.add_option("--actions", actions, "Actions per agent (random games)")->capture_default_str();
  app.add_option("--payoff-low", payoff_low, "Lower payoff bound (random games)")
      ->capture_default_str();
  app.add_option("--payoff-high", payoff_high, "Upper payoff bound (random games)")
      ->capture_default_str();
  app.add_option("--game-seed", game_seed, "Seed of a random game")->capture_default_str();
}

GameSpec GameOptions::spec() const {
  GameSpec s;
  s.family = parse_game_family(family);
  s.topology = parse_topology(topology);
  s.num_agents = agents;
  s.shapley_beta = beta;
  s.sato_eps_x = eps_x;
  s.sato_eps_y = eps_y;
  s.chakraborty_alpha = chak_alpha;
  s.chakraborty_beta = chak_beta;
  s.mismatch_m = mismatch;
  s.actions_per_agent = actions;
  s.payoff_low = payoff_low;
  s.payoff_high = payoff_high;
  s.seed = game_seed;
  return s;
}

NetworkGame GameOptions::build() const {
  if (!file.empty()) return load_game(file);
  return build_game(spec());
}

json GameOptions::describe() const {
  if (!file.empty()) return json{{"file", file}};
  json j{{"family", family}, {"agents", agents}};
  const GameFamily f = parse_game_family(family);
  if (f != GameFamily::kChakraborty && f != GameFamily::kMismatching) j["topology"] = topology;
  switch (f) {
    case GameFamily::kShapley: j["beta"] = beta; break;
    case GameFamily::kSato: j["eps_x"] = eps_x; j["eps_y"] = eps_y; break;
    case GameFamily::kChakraborty: j["alpha"] = chak_alpha; j["beta"] = chak_beta; break;
    case GameFamily::kMismatching: j["M"] = mismatch; break;
    case GameFamily::kRandom:
      j["actions"] = actions;
      j["payoff_low"] = payoff_low;
      j["payoff_high"] = payoff_high;
      j["seed"] = game_seed;
      break;
  }
  return j;
}

void OutputOptions::add_to(CLI::App& app, const std::string& default_prefix) {
  prefix = default_prefix;
  app.add_option("--output-prefix,-o", prefix, "Writes <prefix>.csv and <prefix>.json")
      ->capture_default_str();
  app.add_flag("--quiet,-q", quiet, "Suppress the text summary on stdout");
}

void apply_config_file(CLI::App& app, const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ArgumentError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ArgumentError("config file must hold a JSON object");
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    for (char& c : key)
      if (c == '_') c = '-';
    if (key == "config") throw ArgumentError("config files cannot include other config files");
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ArgumentError("unknown config key '" + raw_key + "' for subcommand '" +
                          app.get_name() + "'");
    }
    if (opt->count() > 0) continue;  // the command line wins
    std::vector<std::string> items;
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(json_scalar_text(v));
    } else {
      items.push_back(json_scalar_text(value));
    }
    opt->add_result(items);
    opt->run_callback();
  }
}

json option_snapshot(const CLI::App& app) {
  json out = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

AlphaSpec AlphaSpec::parse(const std::string& text) {
  AlphaSpec a;
  if (text == "auto") {
    a.automatic = true;
    return a;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ArgumentError("learning rate must be 'auto' or numbers, got '" + text + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("learning rates must lie in [0, 1]");
    a.values.push_back(v);
  }
  if (a.values.empty()) throw ArgumentError("empty learning rate");
  return a;
}

std::vector<double> AlphaSpec::resolve(const NetworkGame& game, const ExplorationRates& rates) const {
  const std::size_t n = game.num_agents();
  if (automatic) return std::vector<double>(n, stable_learning_rate(game, rates));
  if (values.size() == 1) return std::vector<double>(n, values.front());
  if (values.size() != n) {
    throw ArgumentError("expected 1 or " + std::to_string(n) + " learning rates, got " +
                        std::to_string(values.size()));
  }
  return values;
}

LearningRate AlphaSpec::uniform() const {
  if (automatic) return LearningRate{};
  if (values.size() != 1) throw ArgumentError("this command takes a single learning rate");
  if (!(values.front() > 0.0)) throw ArgumentError("learning rate must be positive");
  return LearningRate{values.front()};
}

ExplorationRates rates_for(const NetworkGame& game, const std::vector<double>& values) {
  if (values.size() == 1) return ExplorationRates::uniform(game.num_agents(), values.front());
  if (values.size() != game.num_agents()) {
    throw ArgumentError("expected 1 or " + std::to_string(game.num_agents()) +
                        " exploration rates, got " + std::to_string(values.size()));
  }
  return ExplorationRates(values);
}

UpdateOrder order_from(const std::string& name) { return parse_update_order(name); }

json strategy_json(const JointStrategy& x) {
  json out = json::array();
  for (std::size_t k = 0; k < x.num_agents(); ++k) {
    const auto xk = x.agent(k);
    out.push_back(std::vector<double>(xk.data(), xk.data() + xk.size()));
  }
  return out;
}

void write_outputs(const OutputOptions& out, const CLI::App& sub, const std::string& csv_text,
                   const json& summary, const std::vector<std::uint64_t>& seeds) {
  write_file(out.csv_path(), csv_text);
  json doc;
  doc["command"] = sub.get_name();
  doc["status"] = "ok";
  doc["summary"] = summary;
  doc["manifest"] = {
      {"version", "0.1.0"},
      {"config", option_snapshot(sub)},
      {"seeds", seeds},
      {"artifacts",
       {{out.csv_path(),
         {{"fnv1a64", hex64(fnv1a64(csv_text))}, {"bytes", csv_text.size()}}}}},
  };
  write_file(out.json_path(), doc.dump(2) + "\n");
}

void write_error(const OutputOptions& out, const CLI::App& sub, int exit_code,
                 const std::string& message) {
  json doc;
  doc["command"] = sub.get_name();
  doc["status"] = "error";
  doc["exit_code"] = exit_code;
  doc["message"] = message;
  doc["manifest"] = {{"version", "0.1.0"}, {"config", option_snapshot(sub)}};
  try {
    write_file(out.json_path(), doc.dump(2) + "\n");
  } catch (const std::exception&) {
    // The original error is what matters; it is already on stderr.
  }
}

}  // namespace qlnet::cli
