#pragma once

// Test-only oracles, kept independent of the library's recursive tree
// sweeps: expected utility as a literal sum of per-terminal path products,
// and best response by exhaustive enumeration of pure strategies.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "altcfr/evaluator.hpp"
#include "altcfr/game.hpp"

namespace altcfr::test {

inline void parent_edges(const Game& game, std::vector<int>& parent,
                         std::vector<int>& edge) {
  parent.assign(game.nodes.size(), -1);
  edge.assign(game.nodes.size(), -1);
  for (int v = 0; v < static_cast<int>(game.nodes.size()); ++v) {
    for (int a = 0; a < static_cast<int>(game.nodes[v].children.size()); ++a) {
      parent[game.nodes[v].children[a]] = v;
      edge[game.nodes[v].children[a]] = a;
    }
  }
}

inline double oracle_expected_utility(const Game& game, const Profile& profile,
                                      int player) {
  std::vector<int> parent, edge;
  parent_edges(game, parent, edge);
  double total = 0.0;
  for (int z : game.terminals()) {
    double reach = 1.0;
    for (int cur = z; cur != game.root; cur = parent[cur]) {
      const Node& pn = game.nodes[parent[cur]];
      reach *= pn.kind == NodeKind::Chance
                   ? pn.chance_probs[edge[cur]]
                   : profile.of(game.acting_player(parent[cur])).at(pn.infoset)[edge[cur]];
    }
    total += reach * game.utility(z, player);
  }
  return total;
}

inline long pure_strategy_count(const Game& game, int player, long cap) {
  long count = 1;
  for (int i : game.infosets_of(player)) {
    count *= game.num_actions(i);
    if (count > cap) return count;
  }
  return count;
}

/// Max over all pure strategies of `player` of the exact expected utility
/// against the fixed opponent strategy. Exponential; guard with
/// pure_strategy_count first.
inline double enumerate_best_response_value(const Game& game,
                                            const BehaviorStrategy& opponent,
                                            int player) {
  std::vector<int> own = game.infosets_of(player);
  std::vector<int> combo(own.size(), 0);
  Profile profile;
  profile.of(player).player = player;
  profile.of(player).policies.resize(game.infosets.size());
  profile.of(3 - player) = opponent;

  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    for (size_t k = 0; k < own.size(); ++k) {
      Policy pure;
      pure.probs.assign(game.num_actions(own[k]), 0.0);
      pure.probs[combo[k]] = 1.0;
      profile.of(player).policies[own[k]] = std::move(pure);
    }
    best = std::max(best, oracle_expected_utility(game, profile, player));

    size_t k = 0;
    for (; k < own.size(); ++k) {
      if (++combo[k] < game.num_actions(own[k])) break;
      combo[k] = 0;
    }
    if (k == own.size()) break;
  }
  return best;
}

inline std::uint64_t mix_bits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Policy random_policy(int num_actions, std::mt19937_64& rng) {
  Policy policy;
  policy.probs.resize(num_actions);
  double sum = 0.0;
  for (double& p : policy.probs) {
    p = 0.05 + unit_draw(rng);
    sum += p;
  }
  double acc = 0.0;
  for (int a = 0; a < num_actions - 1; ++a) {
    policy.probs[a] /= sum;
    acc += policy.probs[a];
  }
  policy.probs[num_actions - 1] = 1.0 - acc;
  return policy;
}

inline BehaviorStrategy random_strategy(const Game& game, int player,
                                        std::mt19937_64& rng) {
  BehaviorStrategy strategy;
  strategy.player = player;
  strategy.policies.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    strategy.policies[i] = random_policy(game.num_actions(i), rng);
  }
  return strategy;
}

inline Profile random_profile(const Game& game, std::mt19937_64& rng) {
  return Profile{random_strategy(game, 1, rng), random_strategy(game, 2, rng)};
}

}  // namespace altcfr::test
