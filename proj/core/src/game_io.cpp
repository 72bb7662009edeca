#include "qlnet/game_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qlnet/errors.hpp"

namespace qlnet {
namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw StructuralError(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) throw StructuralError(std::string(what) + " rows must be arrays");
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError(std::string(what) + " is ragged");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw StructuralError(std::string(what) + " has a non-numeric entry");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T required(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw StructuralError(std::string("missing field '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw StructuralError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

}  // namespace

std::string serialize_game(const NetworkGame& game, int indent) {
  json j;
  j["agents"] = game.num_agents();
  j["action_counts"] = std::vector<std::size_t>(game.action_counts().begin(),
                                                game.action_counts().end());
  json edges = json::array();
  for (const Edge& e : game.edges()) {
    edges.push_back({{"k", e.k}, {"l", e.l}, {"A_kl", matrix_to_json(e.a_kl)},
                     {"A_lk", matrix_to_json(e.a_lk)}});
  }
  j["edges"] = std::move(edges);
  return j.dump(indent);
}

NetworkGame parse_game(std::string_view text) {
  const json j = parse_json(text);
  const auto agents = required<std::size_t>(j, "agents");
  auto counts = required<std::vector<std::size_t>>(j, "action_counts");
  if (counts.size() != agents) {
    throw StructuralError("'action_counts' has " + std::to_string(counts.size()) +
                          " entries but 'agents' is " + std::to_string(agents));
  }
  const json& edges_json = j.contains("edges") ? j.at("edges") : json::array();
  if (!edges_json.is_array()) throw StructuralError("'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (const json& ej : edges_json) {
    Edge e;
    e.k = required<std::size_t>(ej, "k");
    e.l = required<std::size_t>(ej, "l");
    if (!ej.contains("A_kl") || !ej.contains("A_lk")) {
      throw StructuralError("edge is missing 'A_kl' or 'A_lk'");
    }
    e.a_kl = matrix_from_json(ej.at("A_kl"), "A_kl");
    e.a_lk = matrix_from_json(ej.at("A_lk"), "A_lk");
    edges.push_back(std::move(e));
  }
  return NetworkGame(std::move(counts), std::move(edges));
}

NetworkGame load_game(const std::filesystem::path& path) {
  return parse_game(read_text_file(path));
}

void save_game(const NetworkGame& game, const std::filesystem::path& path) {
  write_text_file(path, serialize_game(game) + "\n");
}

std::string serialize_strategy(const JointStrategy& x,
                               const std::optional<ExplorationRates>& rates, int indent) {
  json j;
  json s = json::array();
  for (std::size_t k = 0; k < x.num_agents(); ++k) {
    const auto xk = x.agent(k);
    s.push_back(std::vector<double>(xk.begin(), xk.end()));
  }
  j["strategies"] = std::move(s);
  if (rates) j["T"] = std::vector<double>(rates->values().begin(), rates->values().end());
  return j.dump(indent);
}

StrategyFile parse_strategy(std::string_view text) {
  const json j = parse_json(text);
  const auto rows = required<std::vector<std::vector<double>>>(j, "strategies");
  std::vector<Vector> per_agent;
  for (const auto& r : rows) per_agent.push_back(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size())));
  StrategyFile out{JointStrategy(per_agent), std::nullopt};
  if (j.contains("T")) out.rates = ExplorationRates(required<std::vector<double>>(j, "T"));
  return out;
}

StrategyFile load_strategy(const std::filesystem::path& path) {
  return parse_strategy(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path.string());
  out << text;
  if (!out) throw StructuralError("write failed for " + path.string());
}

}  // namespace qlnet
