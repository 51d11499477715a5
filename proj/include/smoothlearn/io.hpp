#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smoothlearn/bayesian.hpp"
#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/smoothness.hpp"

namespace smoothlearn {

using json = nlohmann::json;

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorCode::io, "failed to format number");
  return std::string(buf.data(), ptr);
}

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Game JSON

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& parent = "") {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::invalid_argument, "missing field '" + (parent.empty() ? "" : parent + ".") + name + "'");
  }
  return j.at(name);
}

template <typename T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, "field '" + where + "': " + e.what());
  }
}

inline ActionCounts read_actions(const json& j) {
  const std::size_t n = get_as<std::size_t>(field(j, "players"), "players");
  auto actions = get_as<ActionCounts>(field(j, "actions"), "actions");
  if (actions.size() != n) {
    throw Error(ErrorCode::invalid_argument, "field 'actions': expected " + std::to_string(n) + " entries, got " +
                                                 std::to_string(actions.size()));
  }
  return actions;
}

inline Vec flatten_matrix(const json& m, const std::string& where) {
  if (m.is_array() && !m.empty() && m.front().is_array()) {
    Vec out;
    for (const auto& row : m) {
      auto r = get_as<Vec>(row, where);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  return get_as<Vec>(m, where);
}

}  // namespace detail

inline Game parse_game(const json& j) {
  const std::string kind = j.contains("kind") ? detail::get_as<std::string>(j.at("kind"), "kind") : "normal";
  const ActionCounts actions = detail::read_actions(j);
  if (kind == "normal") {
    auto utils = detail::get_as<std::vector<Vec>>(detail::field(j, "utilities"), "utilities");
    return Game(NormalFormGame(actions, std::move(utils)));
  }
  if (kind == "polymatrix") {
    std::vector<PolymatrixGame::Edge> edges;
    const json& list = detail::field(j, "edges");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string where = "edges[" + std::to_string(e) + "]";
      PolymatrixGame::Edge edge;
      edge.from = detail::get_as<std::size_t>(detail::field(list[e], "from", where), where + ".from");
      edge.to = detail::get_as<std::size_t>(detail::field(list[e], "to", where), where + ".to");
      edge.matrix = detail::flatten_matrix(detail::field(list[e], "matrix", where), where + ".matrix");
      edges.push_back(std::move(edge));
    }
    return Game(PolymatrixGame(actions, std::move(edges)));
  }
  if (kind == "graphical") {
    auto nbrs = detail::get_as<std::vector<std::vector<std::size_t>>>(detail::field(j, "neighbors"), "neighbors");
    auto tables = detail::get_as<std::vector<Vec>>(detail::field(j, "tables"), "tables");
    std::optional<std::size_t> degree;
    if (j.contains("degree")) degree = detail::get_as<std::size_t>(j.at("degree"), "degree");
    return Game(GraphicalGame(actions, std::move(nbrs), std::move(tables), degree));
  }
  throw Error(ErrorCode::invalid_argument, "field 'kind': unknown game kind '" + kind + "'");
}

inline bool is_bayesian(const json& j) { return j.contains("kind") && j.at("kind") == "bayesian"; }

inline BayesianGame parse_bayesian(const json& j) {
  const ActionCounts actions = detail::read_actions(j);
  auto types = detail::get_as<std::vector<std::size_t>>(detail::field(j, "types"), "types");
  auto utils = detail::get_as<std::vector<std::vector<Vec>>>(detail::field(j, "utilities"), "utilities");
  std::optional<Vec> revenue;
  if (j.contains("revenue")) revenue = detail::get_as<Vec>(j.at("revenue"), "revenue");
  return BayesianGame(actions, std::move(types), std::move(utils), std::move(revenue));
}

inline json to_json(const NormalFormGame& g) {
  json j;
  j["players"] = g.num_players();
  j["actions"] = g.actions();
  json u = json::array();
  for (std::size_t i = 0; i < g.num_players(); ++i) u.push_back(g.tensor(i));
  j["utilities"] = u;
  return j;
}

inline json to_json(const BayesianGame& bg) {
  json j;
  j["kind"] = "bayesian";
  j["players"] = bg.num_players();
  j["actions"] = bg.actions();
  j["types"] = bg.types();
  json u = json::array();
  for (std::size_t i = 0; i < bg.num_players(); ++i) {
    json per_type = json::array();
    for (std::size_t v = 0; v < bg.types()[i]; ++v) {
      Vec t(bg.num_profiles());
      for (std::size_t idx = 0; idx < t.size(); ++idx) t[idx] = bg.utility(i, v, idx);
      per_type.push_back(t);
    }
    u.push_back(per_type);
  }
  j["utilities"] = u;
  if (bg.has_revenue()) {
    Vec r(bg.num_profiles());
    for (std::size_t idx = 0; idx < r.size(); ++idx) r[idx] = bg.revenue(idx);
    j["revenue"] = r;
  }
  return j;
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_argument, source + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Certificates

inline json to_json(const SmoothnessCertificate& c) {
  json j;
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["mu"] = c.mu ? json(*c.mu) : json(nullptr);
  j["rho"] = c.rho;
  if (c.weighted) {
    j["z_i"] = c.z_i;
  } else {
    j["z"] = c.z;
  }
  j["a_star"] = c.a_star;
  j["z_min"] = c.z_min;
  j["flagged_degenerate"] = c.degenerate;
  return j;
}

inline json to_json(const MintyCertificate& c) {
  json j;
  j["feasible"] = c.feasible;
  j["worst_slack"] = c.worst_slack;
  j["x_star"] = c.x_star.strategies;
  return j;
}

}  // namespace smoothlearn
