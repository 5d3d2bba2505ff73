#include "altcfr/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace altcfr {

std::vector<int> Game::infosets_of(int player) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(infosets.size()); ++i) {
    if (infosets[i].player == player) out.push_back(i);
  }
  return out;
}

std::vector<int> Game::terminals() const {
  std::vector<int> out;
  std::vector<int> stack = {root};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (nodes[n].kind == NodeKind::Terminal) out.push_back(n);
    const auto& ch = nodes[n].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

Policy uniform_policy(int num_actions) {
  return Policy{std::vector<double>(num_actions, 1.0 / num_actions)};
}

BehaviorStrategy uniform_strategy(const Game& game, int player) {
  BehaviorStrategy s;
  s.player = player;
  s.policies.resize(game.infosets.size());
  for (int i : game.infosets_of(player)) {
    s.policies[i] = uniform_policy(game.num_actions(i));
  }
  return s;
}

Profile uniform_profile(const Game& game) {
  return Profile{uniform_strategy(game, 1), uniform_strategy(game, 2)};
}

Profile pure_profile(const Game& game, std::span<const int> action_per_infoset) {
  if (action_per_infoset.size() != game.infosets.size()) {
    throw std::invalid_argument("pure_profile: need one action per infoset");
  }
  Profile profile;
  profile.strategy1.player = 1;
  profile.strategy2.player = 2;
  profile.strategy1.policies.resize(game.infosets.size());
  profile.strategy2.policies.resize(game.infosets.size());
  for (int i = 0; i < static_cast<int>(game.infosets.size()); ++i) {
    Policy pure;
    pure.probs.assign(game.num_actions(i), 0.0);
    pure.probs.at(action_per_infoset[i]) = 1.0;
    profile.of(game.infosets[i].player).policies[i] = std::move(pure);
  }
  return profile;
}

int infoset_index(const Game& game, const std::string& id) {
  for (int i = 0; i < static_cast<int>(game.infosets.size()); ++i) {
    if (game.infosets[i].id == id) return i;
  }
  return -1;
}

bool is_valid_policy(const Policy& policy, int num_actions, double tol) {
  if (policy.size() != num_actions) return false;
  double sum = 0.0;
  for (double p : policy.probs) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

bool is_valid_strategy(const Game& game, const BehaviorStrategy& strategy,
                       double tol) {
  if (strategy.policies.size() != game.infosets.size()) return false;
  for (int i = 0; i < static_cast<int>(game.infosets.size()); ++i) {
    bool own = game.infosets[i].player == strategy.player;
    if (own && !is_valid_policy(strategy.policies[i], game.num_actions(i), tol))
      return false;
    if (!own && !strategy.policies[i].probs.empty()) return false;
  }
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& issue : issues) {
    os << issue.what << " (" << issue.where << ")\n";
  }
  return os.str();
}

namespace {

std::string node_ref(int index) { return "node " + std::to_string(index); }

// DFS that tolerates malformed trees: returns false on bad indices or
// revisited nodes so validate() can report instead of crashing.
bool safe_walk(const Game& g, std::vector<int>& order, std::vector<int>& parent,
               ValidationReport& report) {
  const int n = static_cast<int>(g.nodes.size());
  if (g.root < 0 || g.root >= n) {
    report.issues.push_back({"root index out of range", node_ref(g.root)});
    return false;
  }
  std::vector<char> seen(n, 0);
  parent.assign(n, -1);
  std::vector<int> stack = {g.root};
  seen[g.root] = 1;
  bool ok = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : g.nodes[v].children) {
      if (c < 0 || c >= n) {
        report.issues.push_back({"child index out of range", node_ref(v)});
        ok = false;
        continue;
      }
      if (seen[c]) {
        report.issues.push_back({"node reached from two parents", node_ref(c)});
        ok = false;
        continue;
      }
      seen[c] = 1;
      parent[c] = v;
      stack.push_back(c);
    }
  }
  return ok;
}

}  // namespace

ValidationReport validate(const Game& game) {
  ValidationReport report;
  if (game.nodes.empty()) {
    report.issues.push_back({"game has no nodes", "root"});
    return report;
  }

  std::vector<int> order;
  std::vector<int> parent;
  if (!safe_walk(game, order, parent, report)) return report;
  if (order.size() != game.nodes.size()) {
    report.issues.push_back(
        {"unreachable nodes present",
         std::to_string(game.nodes.size() - order.size()) + " nodes"});
  }

  const int num_infosets = static_cast<int>(game.infosets.size());
  for (int v = 0; v < static_cast<int>(game.nodes.size()); ++v) {
    const Node& node = game.nodes[v];
    switch (node.kind) {
      case NodeKind::Terminal:
        if (!node.children.empty())
          report.issues.push_back({"terminal node has children", node_ref(v)});
        if (!std::isfinite(node.utility1))
          report.issues.push_back({"terminal utility not finite", node_ref(v)});
        break;
      case NodeKind::Chance: {
        if (node.children.empty())
          report.issues.push_back({"chance node has no outcomes", node_ref(v)});
        if (node.chance_probs.size() != node.children.size())
          report.issues.push_back(
              {"chance probability count differs from child count", node_ref(v)});
        double sum = 0.0;
        bool negative = false;
        for (double p : node.chance_probs) {
          if (!(p >= 0.0)) negative = true;
          sum += p;
        }
        if (negative)
          report.issues.push_back({"chance probability negative", node_ref(v)});
        if (std::abs(sum - 1.0) > 1e-12)
          report.issues.push_back({"chance sum != 1", node_ref(v)});
        break;
      }
      case NodeKind::Decision: {
        if (node.infoset < 0 || node.infoset >= num_infosets) {
          report.issues.push_back({"decision node has no information set", node_ref(v)});
          break;
        }
        const InfoSet& is = game.infosets[node.infoset];
        if (is.actions.empty())
          report.issues.push_back({"information set has no actions", is.id});
        if (node.children.size() != is.actions.size())
          report.issues.push_back(
              {"child count differs from action count", node_ref(v)});
        if (std::count(is.members.begin(), is.members.end(), v) != 1)
          report.issues.push_back(
              {"decision node missing from its information set", node_ref(v)});
        break;
      }
    }
  }

  for (int i = 0; i < num_infosets; ++i) {
    const InfoSet& is = game.infosets[i];
    if (is.player != 1 && is.player != 2)
      report.issues.push_back({"information set player not in {1,2}", is.id});
    for (int m : is.members) {
      if (m < 0 || m >= static_cast<int>(game.nodes.size()) ||
          game.nodes[m].kind != NodeKind::Decision || game.nodes[m].infoset != i) {
        report.issues.push_back({"information set lists a foreign node", is.id});
      }
    }
    if (is.members.empty())
      report.issues.push_back({"information set has no members", is.id});
  }

  // Perfect recall: every member of an infoset must be reached through the
  // same (infoset, action) sequence of the acting player.
  {
    std::vector<OwnSequence> seq_of_node(game.nodes.size());
    std::vector<int> stack = {game.root};
    std::vector<OwnSequence> pending(game.nodes.size());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      const Node& node = game.nodes[v];
      if (node.kind != NodeKind::Decision && node.kind != NodeKind::Chance) continue;
      for (int a = 0; a < static_cast<int>(node.children.size()); ++a) {
        int c = node.children[a];
        pending[c] = pending[v];
        if (node.kind == NodeKind::Decision && node.infoset >= 0 &&
            node.infoset < num_infosets) {
          pending[c].push_back({node.infoset, a});
        }
        stack.push_back(c);
      }
    }
    for (int i = 0; i < num_infosets; ++i) {
      const InfoSet& is = game.infosets[i];
      if (is.members.empty()) continue;
      // Keep only the acting player's steps for comparison.
      auto own_only = [&](int member) {
        OwnSequence out;
        for (const OwnStep& s : pending[member]) {
          if (game.infosets[s.infoset].player == is.player) out.push_back(s);
        }
        return out;
      };
      OwnSequence first = own_only(is.members.front());
      for (size_t m = 1; m < is.members.size(); ++m) {
        if (own_only(is.members[m]) != first) {
          report.issues.push_back({"perfect recall violated", is.id});
          break;
        }
      }
    }
  }

  // Reserved root infosets: single member, single action, player order 1 then 2.
  auto check_root = [&](int infoset, int player, int expected_node) {
    if (infoset >= num_infosets) {
      report.issues.push_back({"missing root information set", "player " + std::to_string(player)});
      return -1;
    }
    const InfoSet& is = game.infosets[infoset];
    if (is.player != player || is.members.size() != 1 || is.actions.size() != 1 ||
        is.members.front() != expected_node) {
      report.issues.push_back(
          {"root information set malformed", "player " + std::to_string(player)});
      return -1;
    }
    const Node& node = game.nodes[expected_node];
    if (node.kind != NodeKind::Decision || node.infoset != infoset ||
        node.children.size() != 1) {
      report.issues.push_back(
          {"root information set malformed", "player " + std::to_string(player)});
      return -1;
    }
    return node.children.front();
  };
  int below1 = check_root(kRootInfoset1, 1, game.root);
  if (below1 >= 0) check_root(kRootInfoset2, 2, below1);

  return report;
}

std::vector<OwnSequence> own_sequences(const Game& game, int player) {
  std::vector<OwnSequence> result(game.infosets.size());
  std::vector<char> done(game.infosets.size(), 0);
  // DFS carrying the player's own (infoset, action) prefix.
  struct Frame {
    int node;
    OwnSequence prefix;
  };
  std::vector<Frame> stack;
  stack.push_back({game.root, {}});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const Node& node = game.nodes[f.node];
    if (node.kind == NodeKind::Terminal) continue;
    bool own = node.kind == NodeKind::Decision &&
               game.infosets[node.infoset].player == player;
    if (own && !done[node.infoset]) {
      result[node.infoset] = f.prefix;
      done[node.infoset] = 1;
    }
    for (int a = 0; a < static_cast<int>(node.children.size()); ++a) {
      Frame next{node.children[a], f.prefix};
      if (own) next.prefix.push_back({node.infoset, a});
      stack.push_back(std::move(next));
    }
  }
  return result;
}

double own_reach(const std::vector<OwnSequence>& sequences, int infoset,
                 const BehaviorStrategy& strategy) {
  double reach = 1.0;
  for (const OwnStep& step : sequences[infoset]) {
    reach *= strategy.at(step.infoset)[step.action];
  }
  return reach;
}

namespace {

bool nodes_equal(const Game& a, const Game& b, int na, int nb,
                 std::vector<int>& infoset_map) {
  const Node& x = a.nodes[na];
  const Node& y = b.nodes[nb];
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case NodeKind::Terminal:
      return x.utility1 == y.utility1;
    case NodeKind::Chance:
      if (x.chance_probs != y.chance_probs) return false;
      break;
    case NodeKind::Decision: {
      const InfoSet& ia = a.infosets[x.infoset];
      const InfoSet& ib = b.infosets[y.infoset];
      if (ia.player != ib.player || ia.id != ib.id || ia.actions != ib.actions)
        return false;
      // Partition consistency: an infoset of `a` must always map to the
      // same infoset of `b`.
      if (infoset_map[x.infoset] == -1) {
        infoset_map[x.infoset] = y.infoset;
      } else if (infoset_map[x.infoset] != y.infoset) {
        return false;
      }
      break;
    }
  }
  if (x.children.size() != y.children.size()) return false;
  for (size_t i = 0; i < x.children.size(); ++i) {
    if (!nodes_equal(a, b, x.children[i], y.children[i], infoset_map)) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const Game& a, const Game& b) {
  if (a.infosets.size() != b.infosets.size()) return false;
  std::vector<int> infoset_map(a.infosets.size(), -1);
  return nodes_equal(a, b, a.root, b.root, infoset_map);
}

}  // namespace altcfr
