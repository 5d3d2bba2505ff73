#include "altcfr/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace altcfr {

namespace {

void reach_walk(const Game& game, const Profile& profile, int node,
                double own1, double own2, double chance_part,
                ReachDecomposition& out) {
  out.own1[node] = own1;
  out.own2[node] = own2;
  out.chance[node] = chance_part;
  out.total[node] = own1 * own2 * chance_part;
  const Node& n = game.nodes[node];
  for (int a = 0; a < static_cast<int>(n.children.size()); ++a) {
    if (n.kind == NodeKind::Chance) {
      reach_walk(game, profile, n.children[a], own1, own2,
                 chance_part * n.chance_probs[a], out);
    } else {
      int player = game.acting_player(node);
      double p = profile.of(player).at(n.infoset)[a];
      reach_walk(game, profile, n.children[a], player == 1 ? own1 * p : own1,
                 player == 2 ? own2 * p : own2, chance_part, out);
    }
  }
}

double value_walk(const Game& game, const Profile& profile, int node) {
  const Node& n = game.nodes[node];
  if (n.kind == NodeKind::Terminal) return n.utility1;
  double value = 0.0;
  for (int a = 0; a < static_cast<int>(n.children.size()); ++a) {
    double p = n.kind == NodeKind::Chance
                   ? n.chance_probs[a]
                   : profile.of(game.acting_player(node)).at(n.infoset)[a];
    value += p * value_walk(game, profile, n.children[a]);
  }
  return value;
}

// External reach (chance and opponent only) of every node, top-down.
void external_walk(const Game& game, const BehaviorStrategy& opponent,
                   int player, int node, double ext, std::vector<double>& out) {
  out[node] = ext;
  const Node& n = game.nodes[node];
  for (int a = 0; a < static_cast<int>(n.children.size()); ++a) {
    double factor = 1.0;
    if (n.kind == NodeKind::Chance) {
      factor = n.chance_probs[a];
    } else if (game.acting_player(node) != player) {
      factor = opponent.at(n.infoset)[a];
    }
    external_walk(game, opponent, player, n.children[a], ext * factor, out);
  }
}

// f(h) = sum over terminals below h of external reach times the player's
// action probabilities strictly below h times u_p. Fills the per-infoset
// action rows along the way.
double cfv_walk(const Game& game, const Profile& profile, int player, int node,
                const std::vector<double>& ext, CfvTable& table) {
  const Node& n = game.nodes[node];
  if (n.kind == NodeKind::Terminal) {
    return ext[node] * game.utility(node, player);
  }
  double value = 0.0;
  if (n.kind == NodeKind::Decision && game.acting_player(node) == player) {
    auto& row = table.values[n.infoset];
    for (int a = 0; a < static_cast<int>(n.children.size()); ++a) {
      double child = cfv_walk(game, profile, player, n.children[a], ext, table);
      row[a] += child;
      value += profile.of(player).at(n.infoset)[a] * child;
    }
  } else {
    for (int child : n.children) {
      value += cfv_walk(game, profile, player, child, ext, table);
    }
  }
  return value;
}

}  // namespace

ReachDecomposition reach(const Game& game, const Profile& profile) {
  ReachDecomposition out;
  out.total.resize(game.nodes.size(), 0.0);
  out.own1.resize(game.nodes.size(), 0.0);
  out.own2.resize(game.nodes.size(), 0.0);
  out.chance.resize(game.nodes.size(), 0.0);
  reach_walk(game, profile, game.root, 1.0, 1.0, 1.0, out);
  return out;
}

double expected_utility(const Game& game, const Profile& profile, int player) {
  double u1 = value_walk(game, profile, game.root);
  return player == 1 ? u1 : -u1;
}

CfvTable counterfactual_values(const Game& game, const Profile& profile,
                               int player) {
  std::vector<double> ext(game.nodes.size(), 0.0);
  external_walk(game, profile.of(3 - player), player, game.root, 1.0, ext);
  CfvTable table;
  table.values.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    table.values[i].assign(game.num_actions(i), 0.0);
  }
  cfv_walk(game, profile, player, game.root, ext, table);
  return table;
}

CfvTable brute_force_cfv(const Game& game, const Profile& profile, int player) {
  const int n = static_cast<int>(game.nodes.size());
  std::vector<int> parent(n, -1);
  std::vector<int> edge(n, -1);
  for (int v = 0; v < n; ++v) {
    for (int a = 0; a < static_cast<int>(game.nodes[v].children.size()); ++a) {
      parent[game.nodes[v].children[a]] = v;
      edge[game.nodes[v].children[a]] = a;
    }
  }

  CfvTable table;
  table.values.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    const InfoSet& is = game.infosets[i];
    std::vector<double> row(is.actions.size(), 0.0);
    for (int member : is.members) {
      for (int a = 0; a < static_cast<int>(is.actions.size()); ++a) {
        int start = game.nodes[member].children[a];
        std::vector<int> stack = {start};
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          if (!game.is_terminal(v)) {
            const auto& ch = game.nodes[v].children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
            continue;
          }
          // One literal product along the root-to-terminal path: external
          // factors everywhere, own factors only strictly below the action.
          double own_below = 1.0;
          double external = 1.0;
          bool below_action = true;
          int cur = v;
          while (cur != game.root) {
            if (cur == start) below_action = false;
            int par = parent[cur];
            const Node& pn = game.nodes[par];
            if (pn.kind == NodeKind::Chance) {
              external *= pn.chance_probs[edge[cur]];
            } else if (game.acting_player(par) == player) {
              if (below_action) {
                own_below *= profile.of(player).at(pn.infoset)[edge[cur]];
              }
            } else {
              external *= profile.of(3 - player).at(pn.infoset)[edge[cur]];
            }
            cur = par;
          }
          row[a] += external * own_below * game.utility(v, player);
        }
      }
    }
    table.values[i] = std::move(row);
  }
  return table;
}

namespace {

// Best-response value of the subtree, following already-fixed choices at
// the responder's infosets. Values are memoised per node; external reach
// is baked into the terminal contributions.
double response_walk(const Game& game, int player, int node,
                     const std::vector<double>& ext,
                     const std::vector<int>& chosen, std::vector<double>& memo,
                     std::vector<char>& have) {
  if (have[node]) return memo[node];
  const Node& n = game.nodes[node];
  double value = 0.0;
  if (n.kind == NodeKind::Terminal) {
    value = ext[node] * game.utility(node, player);
  } else if (n.kind == NodeKind::Decision && game.acting_player(node) == player) {
    value = response_walk(game, player, n.children[chosen[n.infoset]], ext,
                          chosen, memo, have);
  } else {
    for (int child : n.children) {
      value += response_walk(game, player, child, ext, chosen, memo, have);
    }
  }
  memo[node] = value;
  have[node] = 1;
  return value;
}

}  // namespace

BestResponse best_response(const Game& game, const BehaviorStrategy& opponent,
                           int player) {
  std::vector<double> ext(game.nodes.size(), 0.0);
  external_walk(game, opponent, player, game.root, 1.0, ext);

  // Deeper own infosets first: by perfect recall every own infoset below
  // (I, a) has a strictly longer own sequence than I.
  std::vector<OwnSequence> seqs = own_sequences(game, player);
  std::vector<int> order = game.infosets_of(player);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return seqs[a].size() > seqs[b].size();
  });

  std::vector<int> chosen(game.infosets.size(), 0);
  std::vector<double> memo(game.nodes.size(), 0.0);
  std::vector<char> have(game.nodes.size(), 0);
  for (int i : order) {
    const InfoSet& is = game.infosets[i];
    int best_action = 0;
    double best_value = 0.0;
    for (int a = 0; a < static_cast<int>(is.actions.size()); ++a) {
      double q = 0.0;
      for (int member : is.members) {
        q += response_walk(game, player, game.nodes[member].children[a], ext,
                           chosen, memo, have);
      }
      if (a == 0 || q > best_value) {
        best_value = q;
        best_action = a;
      }
    }
    chosen[i] = best_action;
  }

  BestResponse out;
  out.strategy.player = player;
  out.strategy.policies.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    Policy pure;
    pure.probs.assign(game.num_actions(i), 0.0);
    pure.probs[chosen[i]] = 1.0;
    out.strategy.policies[i] = std::move(pure);
  }
  out.value = response_walk(game, player, game.root, ext, chosen, memo, have);
  return out;
}

double exploitability(const Game& game, const Profile& profile) {
  return best_response(game, profile.strategy2, 1).value +
         best_response(game, profile.strategy1, 2).value;
}

BehaviorStrategy average_strategy(const Game& game, int player,
                                  std::span<const BehaviorStrategy> strategies,
                                  std::span<const double> weights) {
  if (strategies.size() != weights.size()) {
    throw std::invalid_argument("average_strategy: weight count mismatch");
  }
  if (strategies.empty()) {
    throw std::invalid_argument("average_strategy: empty sequence");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("average_strategy: weights must be positive");
    }
  }

  std::vector<OwnSequence> seqs = own_sequences(game, player);
  BehaviorStrategy out;
  out.player = player;
  out.policies.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    std::vector<double> mass(game.num_actions(i), 0.0);
    for (size_t k = 0; k < strategies.size(); ++k) {
      double m = weights[k] * own_reach(seqs, i, strategies[k]);
      if (m == 0.0) continue;
      const Policy& policy = strategies[k].at(i);
      for (int a = 0; a < static_cast<int>(mass.size()); ++a) {
        mass[a] += m * policy[a];
      }
    }
    double total = 0.0;
    for (double m : mass) total += m;
    Policy averaged;
    if (total > 0.0) {
      averaged.probs.resize(mass.size());
      for (size_t a = 0; a < mass.size(); ++a) averaged.probs[a] = mass[a] / total;
    } else {
      averaged = uniform_policy(static_cast<int>(mass.size()));
    }
    out.policies[i] = std::move(averaged);
  }
  return out;
}

double average_regret(const Game& game, std::span<const Profile> trace,
                      int player, UpdateMode order) {
  if (trace.size() < 2) {
    throw std::invalid_argument("average_regret: need at least one played step");
  }
  const int t = static_cast<int>(trace.size()) - 1;
  const int opponent = 3 - player;

  // Opponent strategies the regret is measured against, uniform weights.
  std::vector<BehaviorStrategy> targets;
  std::vector<double> weights(t, 1.0);
  double realized_sum = 0.0;
  for (int i = 0; i < t; ++i) {
    if (player == 2 && order == UpdateMode::Alternating) {
      targets.push_back(trace[i + 1].strategy1);
      realized_sum += expected_utility(
          game, Profile{trace[i + 1].strategy1, trace[i].strategy2}, player);
    } else {
      targets.push_back(trace[i].of(opponent));
      realized_sum += expected_utility(game, trace[i], player);
    }
  }

  BehaviorStrategy averaged = average_strategy(game, opponent, targets, weights);
  double br = best_response(game, averaged, player).value;
  return br - realized_sum / t;
}

}  // namespace altcfr
