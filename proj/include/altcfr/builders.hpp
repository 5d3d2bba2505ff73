#pragma once

#include <cstdint>

#include "altcfr/game.hpp"

namespace altcfr {

/// Empty game shell holding only the two reserved single-action root
/// decisions. The caller appends the real tree starting at node index 2
/// (already linked as the child of node 1).
Game make_rooted_shell();

/// 2x2 matrix-style game: Player 1 picks an action, Player 2 picks one
/// without observing it. u1 = 1 on (1,1), 0 elsewhere. Terminal order
/// 00, 01, 10, 11.
Game build_observation1_game();

/// Three-card Kuhn poker with antes folded into the terminal payoffs:
/// chance deals one of 6 ordered card pairs at 1/6 each, pass/bet rules,
/// u1 in {-2,-1,1,2}; six decision infosets per player.
Game build_kuhn_poker();

/// Deterministic random game: alternating decision levels (Player 1
/// first), seed-chosen chance levels in between, uniform branching.
/// Opponent actions and chance outcomes are observed only through a
/// seeded bucket signal, so infosets merge histories while perfect
/// recall holds by construction. Terminal u1 ~ U[-1, 1].
///
/// Throws std::invalid_argument if depth < 1, branching < 2, or the
/// tree would exceed `node_budget` nodes.
Game random_game(std::uint64_t seed, int depth, int branching,
                 long node_budget = 100000);

}  // namespace altcfr
