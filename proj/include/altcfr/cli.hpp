#pragma once

#include <span>
#include <string>

#include "altcfr/game.hpp"
#include "altcfr/solver.hpp"

namespace altcfr {

// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage error, 3 unreadable or invalid game file.
int cli_main(int argc, const char* const* argv);

/// Builds a game from a builtin name (obs1, kuhn,
/// random:<seed>:<depth>:<branching>) or loads it from a file path.
Game resolve_game(const std::string& spec);

/// The forced strategy sequence sigma^0..sigma^{2T} where both players
/// play action (t mod 2) at their real infoset.
std::vector<Profile> obs1_forced_sequence(const Game& obs1_game, long big_t);

void write_record_csv(std::ostream& os, const SolveRecord& record);

}  // namespace altcfr
