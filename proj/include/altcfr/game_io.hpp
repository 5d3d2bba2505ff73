#pragma once

#include <stdexcept>
#include <string>

#include "altcfr/game.hpp"

namespace altcfr {

/// Malformed game text: wrong syntax, wrong types, or missing fields.
/// The message names the JSON path (or byte offset) of the problem.
struct GameParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed text that fails the game invariants
/// (probability sums, partition consistency, zero-sum, perfect recall).
struct GameValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the JSON game format:
///   {"players": 2, "root": <node>}
/// with node variants
///   {"chance":   {"probs": [...], "children": [...]}}
///   {"decision": {"player": 1|2, "infoset": "id",
///                 "actions": [...], "children": [...]}}
///   {"terminal": {"u1": number}}            (optional "u2", must be -u1)
/// Infoset membership is shared string ids. Chance probabilities must
/// sum to 1 within 1e-9. The reserved root infosets are added on load
/// and stripped again on save.
Game load_game(const std::string& text);
std::string save_game(const Game& game);

Game load_game_file(const std::string& path);

}  // namespace altcfr
