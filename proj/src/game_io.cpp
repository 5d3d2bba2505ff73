#include "altcfr/game_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "altcfr/builders.hpp"
#include "json.hpp"

namespace altcfr {

namespace {

using nlohmann::ordered_json;

const ordered_json& require(const ordered_json& obj, const char* key,
                            const std::string& path) {
  if (!obj.contains(key)) {
    throw GameParseError(path + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number_at(const ordered_json& value, const std::string& path) {
  if (!value.is_number()) {
    throw GameParseError(path + ": expected a number");
  }
  return value.get<double>();
}

struct Loader {
  Game game = make_rooted_shell();
  std::map<std::string, int> infosets_by_id;

  int parse_node(const ordered_json& j, const std::string& path) {
    if (!j.is_object() || j.size() != 1) {
      throw GameParseError(path + ": node must be a single-key object");
    }
    if (j.contains("terminal")) return parse_terminal(j.at("terminal"), path);
    if (j.contains("chance")) return parse_chance(j.at("chance"), path);
    if (j.contains("decision")) return parse_decision(j.at("decision"), path);
    throw GameParseError(path + ": unknown node kind '" + j.begin().key() + "'");
  }

  int parse_terminal(const ordered_json& j, const std::string& path) {
    double u1 = number_at(require(j, "u1", path), path + ".u1");
    if (j.contains("u2")) {
      double u2 = number_at(j.at("u2"), path + ".u2");
      if (std::abs(u1 + u2) > 1e-9) {
        throw GameValidationError(path + ": utilities are not zero-sum");
      }
    }
    Node node;
    node.kind = NodeKind::Terminal;
    node.utility1 = u1;
    game.nodes.push_back(std::move(node));
    return static_cast<int>(game.nodes.size()) - 1;
  }

  int parse_chance(const ordered_json& j, const std::string& path) {
    const auto& probs_json = require(j, "probs", path);
    const auto& children_json = require(j, "children", path);
    if (!probs_json.is_array() || !children_json.is_array()) {
      throw GameParseError(path + ": probs and children must be arrays");
    }
    if (probs_json.size() != children_json.size() || probs_json.empty()) {
      throw GameParseError(path + ": probs/children size mismatch");
    }
    std::vector<double> probs;
    double sum = 0.0;
    for (size_t i = 0; i < probs_json.size(); ++i) {
      double p = number_at(probs_json[i], path + ".probs[" + std::to_string(i) + "]");
      if (p < 0.0) {
        throw GameValidationError(path + ".probs[" + std::to_string(i) +
                                  "]: negative probability");
      }
      probs.push_back(p);
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw GameValidationError(path + ".probs: sum differs from 1 by more than 1e-9");
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      // Mildly off files are renormalised; exact files keep their bits.
      double acc = 0.0;
      for (size_t i = 0; i + 1 < probs.size(); ++i) {
        probs[i] /= sum;
        acc += probs[i];
      }
      probs.back() = 1.0 - acc;
    }

    Node node;
    node.kind = NodeKind::Chance;
    node.chance_probs = std::move(probs);
    game.nodes.push_back(std::move(node));
    int index = static_cast<int>(game.nodes.size()) - 1;
    std::vector<int> children;
    for (size_t i = 0; i < children_json.size(); ++i) {
      children.push_back(
          parse_node(children_json[i], path + ".children[" + std::to_string(i) + "]"));
    }
    game.nodes[index].children = std::move(children);
    return index;
  }

  int parse_decision(const ordered_json& j, const std::string& path) {
    const auto& player_json = require(j, "player", path);
    if (!player_json.is_number_integer()) {
      throw GameParseError(path + ".player: expected 1 or 2");
    }
    int player = player_json.get<int>();
    if (player != 1 && player != 2) {
      throw GameParseError(path + ".player: expected 1 or 2");
    }
    const auto& id_json = require(j, "infoset", path);
    if (!id_json.is_string()) {
      throw GameParseError(path + ".infoset: expected a string id");
    }
    std::string id = id_json.get<std::string>();
    const auto& actions_json = require(j, "actions", path);
    const auto& children_json = require(j, "children", path);
    if (!actions_json.is_array() || actions_json.empty()) {
      throw GameParseError(path + ".actions: expected a non-empty array");
    }
    if (!children_json.is_array() || children_json.size() != actions_json.size()) {
      throw GameParseError(path + ".children: size must match actions");
    }
    std::vector<std::string> actions;
    for (size_t i = 0; i < actions_json.size(); ++i) {
      if (!actions_json[i].is_string()) {
        throw GameParseError(path + ".actions[" + std::to_string(i) +
                             "]: expected a string");
      }
      actions.push_back(actions_json[i].get<std::string>());
    }

    int infoset;
    auto it = infosets_by_id.find(id);
    if (it == infosets_by_id.end()) {
      infoset = static_cast<int>(game.infosets.size());
      game.infosets.push_back({player, id, actions, {}});
      infosets_by_id.emplace(id, infoset);
    } else {
      infoset = it->second;
      const InfoSet& existing = game.infosets[infoset];
      if (existing.player != player || existing.actions != actions) {
        throw GameValidationError(path + ": infoset '" + id +
                                  "' disagrees with an earlier member");
      }
    }

    Node node;
    node.kind = NodeKind::Decision;
    node.infoset = infoset;
    game.nodes.push_back(std::move(node));
    int index = static_cast<int>(game.nodes.size()) - 1;
    game.infosets[infoset].members.push_back(index);
    std::vector<int> children;
    for (size_t i = 0; i < children_json.size(); ++i) {
      children.push_back(
          parse_node(children_json[i], path + ".children[" + std::to_string(i) + "]"));
    }
    game.nodes[index].children = std::move(children);
    return index;
  }
};

ordered_json node_to_json(const Game& game, int index) {
  const Node& node = game.nodes[index];
  ordered_json j;
  switch (node.kind) {
    case NodeKind::Terminal:
      j["terminal"] = {{"u1", node.utility1}};
      break;
    case NodeKind::Chance: {
      ordered_json children = ordered_json::array();
      for (int c : node.children) children.push_back(node_to_json(game, c));
      j["chance"] = {{"probs", node.chance_probs}, {"children", std::move(children)}};
      break;
    }
    case NodeKind::Decision: {
      const InfoSet& is = game.infosets[node.infoset];
      ordered_json children = ordered_json::array();
      for (int c : node.children) children.push_back(node_to_json(game, c));
      j["decision"] = {{"player", is.player},
                       {"infoset", is.id},
                       {"actions", is.actions},
                       {"children", std::move(children)}};
      break;
    }
  }
  return j;
}

}  // namespace

Game load_game(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GameParseError(std::string("game text: ") + e.what());
  }
  if (!doc.is_object()) throw GameParseError("top level: expected an object");
  const auto& players = require(doc, "players", "top level");
  if (!players.is_number_integer() || players.get<int>() != 2) {
    throw GameParseError("top level.players: must be 2");
  }

  Loader loader;
  int real_root = loader.parse_node(require(doc, "root", "top level"), "root");
  loader.game.nodes[1].children = {real_root};

  ValidationReport report = validate(loader.game);
  if (!report.ok()) {
    throw GameValidationError("loaded game is invalid:\n" + report.to_string());
  }
  return std::move(loader.game);
}

std::string save_game(const Game& game) {
  // Strip the reserved root wrappers; they are re-added on load.
  const Node& r1 = game.nodes[game.root];
  if (r1.kind != NodeKind::Decision || r1.children.size() != 1) {
    throw std::logic_error("save_game: malformed root shell");
  }
  const Node& r2 = game.nodes[r1.children.front()];
  if (r2.kind != NodeKind::Decision || r2.children.size() != 1) {
    throw std::logic_error("save_game: malformed root shell");
  }
  ordered_json doc;
  doc["players"] = 2;
  doc["root"] = node_to_json(game, r2.children.front());
  return doc.dump(2) + "\n";
}

Game load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open game file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_game(buffer.str());
}

}  // namespace altcfr
