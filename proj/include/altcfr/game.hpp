#pragma once

#include <span>
#include <string>
#include <vector>

namespace altcfr {

// Two-player zero-sum extensive form game tree. Player 2 utilities are
// always -u1, so only u1 is stored. Decision nodes reference an infoset
// by index; the action list lives on the infoset and is shared by all
// of its member histories.
//
// Index 0 and 1 of Game::infosets are reserved for the per-player root
// infosets: a single-member, single-action decision for each player that
// precedes the rest of the game. Builders and the loader install them;
// validate() checks the convention.

enum class NodeKind { Chance, Decision, Terminal };

struct Node {
  NodeKind kind = NodeKind::Terminal;
  std::vector<int> children;         // chance/decision; aligned with probs/actions
  std::vector<double> chance_probs;  // chance only; sums to 1
  int infoset = -1;                  // decision only
  double utility1 = 0.0;             // terminal only, Player 1 payoff
};

struct InfoSet {
  int player = 0;                    // 1 or 2
  std::string id;                    // stable external name
  std::vector<std::string> actions;  // fixed action order
  std::vector<int> members;          // node indices, discovery order
};

struct Game {
  std::vector<Node> nodes;
  std::vector<InfoSet> infosets;
  int root = 0;

  int num_actions(int infoset) const {
    return static_cast<int>(infosets[infoset].actions.size());
  }
  bool is_terminal(int node) const { return nodes[node].kind == NodeKind::Terminal; }
  double utility(int terminal_node, int player) const {
    return player == 1 ? nodes[terminal_node].utility1 : -nodes[terminal_node].utility1;
  }
  int acting_player(int node) const { return infosets[nodes[node].infoset].player; }

  /// Infoset indices owned by `player`, including the reserved root infoset.
  std::vector<int> infosets_of(int player) const;
  /// Terminal node indices in depth-first order.
  std::vector<int> terminals() const;
};

constexpr int kRootInfoset1 = 0;
constexpr int kRootInfoset2 = 1;

// Probability distribution over the actions of one infoset.
struct Policy {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int a) const { return probs[a]; }
};

// Policy per infoset of one player. `policies` is indexed by global
// infoset index; entries for the other player's infosets stay empty.
struct BehaviorStrategy {
  int player = 0;
  std::vector<Policy> policies;

  const Policy& at(int infoset) const { return policies[infoset]; }
  Policy& at(int infoset) { return policies[infoset]; }
};

struct Profile {
  BehaviorStrategy strategy1;
  BehaviorStrategy strategy2;

  const BehaviorStrategy& of(int player) const {
    return player == 1 ? strategy1 : strategy2;
  }
  BehaviorStrategy& of(int player) { return player == 1 ? strategy1 : strategy2; }
};

Policy uniform_policy(int num_actions);
BehaviorStrategy uniform_strategy(const Game& game, int player);
Profile uniform_profile(const Game& game);

/// Deterministic profile playing `action_per_infoset[i]` at infoset i.
/// The span covers every infoset of the game (both players).
Profile pure_profile(const Game& game, std::span<const int> action_per_infoset);

/// Index of the infoset with the given id, or -1.
int infoset_index(const Game& game, const std::string& id);

bool is_valid_policy(const Policy& policy, int num_actions, double tol = 1e-12);
bool is_valid_strategy(const Game& game, const BehaviorStrategy& strategy,
                       double tol = 1e-12);

struct ValidationIssue {
  std::string what;   // which invariant is broken
  std::string where;  // node index or infoset id
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant: tree shape, partition consistency,
/// chance probabilities, perfect recall, root infosets, finite utilities.
/// Violations are collected, not thrown.
ValidationReport validate(const Game& game);

// One (infoset, action) step of the acting player's own history.
struct OwnStep {
  int infoset = -1;
  int action = -1;

  bool operator==(const OwnStep&) const = default;
};
using OwnSequence = std::vector<OwnStep>;

/// Per-infoset sequence of own (infoset, action) pairs leading to it.
/// Well-defined for valid (perfect recall) games; entries for the other
/// player's infosets stay empty. The root infoset has an empty sequence.
std::vector<OwnSequence> own_sequences(const Game& game, int player);

/// Own-action reach probability of `infoset`'s sequence under `strategy`.
double own_reach(const std::vector<OwnSequence>& sequences, int infoset,
                 const BehaviorStrategy& strategy);

/// Deep structural equality: same tree, same utilities and probabilities
/// (bit-exact), same action lists, same infoset ids and partition.
bool structurally_equal(const Game& a, const Game& b);

}  // namespace altcfr
