#pragma once

#include <span>
#include <vector>

#include "altcfr/game.hpp"

namespace altcfr {

enum class UpdateMode { Simultaneous, Alternating };

// Per-history reach probabilities split into the two player contributions
// and the chance contribution, so that pi(h) = own(p,h) * external(p,h)
// for either player.
struct ReachDecomposition {
  std::vector<double> total;
  std::vector<double> own1;
  std::vector<double> own2;
  std::vector<double> chance;

  double own(int player, int node) const {
    return player == 1 ? own1[node] : own2[node];
  }
  double external(int player, int node) const {
    return (player == 1 ? own2[node] : own1[node]) * chance[node];
  }
};

ReachDecomposition reach(const Game& game, const Profile& profile);

/// Exact expected utility of the profile for `player` (zero-sum, so the
/// Player 2 value is the negated Player 1 value).
double expected_utility(const Game& game, const Profile& profile, int player);

// Counterfactual action values per infoset of one player: component a is
// the external-reach-weighted expected payoff of taking a at the infoset
// and following the profile afterwards. Entries for the other player's
// infosets stay empty.
struct CfvTable {
  std::vector<std::vector<double>> values;

  std::span<const double> at(int infoset) const { return values[infoset]; }
};

/// One bottom-up sweep over the tree.
CfvTable counterfactual_values(const Game& game, const Profile& profile,
                               int player);

/// Oracle twin of counterfactual_values: evaluates the literal double sum
/// over terminals per (history, action) with full per-terminal reach
/// products and no shared recursion. Quadratic; use on small games.
CfvTable brute_force_cfv(const Game& game, const Profile& profile, int player);

struct BestResponse {
  BehaviorStrategy strategy;  // pure; ties go to the earliest action
  double value = 0.0;         // expected utility of the response
};

/// Exact best response of `player` against a fixed opponent strategy.
BestResponse best_response(const Game& game, const BehaviorStrategy& opponent,
                           int player);

/// Sum of both players' best-response values against the profile;
/// non-negative, zero exactly at an equilibrium.
double exploitability(const Game& game, const Profile& profile);

/// Realization-weighted strategy average: per infoset, policies are
/// blended with weight w_i times the own-action reach of the infoset
/// under strategy i, so the result is utility-equivalent to the weighted
/// mixture of the inputs. Zero-mass infosets fall back to uniform.
/// Throws on length mismatch or non-positive weights.
BehaviorStrategy average_strategy(const Game& game, int player,
                                  std::span<const BehaviorStrategy> strategies,
                                  std::span<const double> weights);

/// Average regret of `player` over a played sequence of profiles
/// sigma^0..sigma^t (the trace holds t+1 entries): best-response value
/// against the opponent's played average minus the mean realized utility.
/// With alternating updates, Player 2's realized profiles pair sigma^i_2
/// with the refreshed sigma^{i+1}_1, and the best response is taken
/// against the average of sigma^1_1..sigma^t_1.
double average_regret(const Game& game, std::span<const Profile> trace,
                      int player, UpdateMode order);

}  // namespace altcfr
