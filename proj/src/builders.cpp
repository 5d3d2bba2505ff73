#include "altcfr/builders.hpp"

#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace altcfr {

namespace {

int add_infoset(Game& game, std::map<std::string, int>& index_by_id,
                const std::string& id, int player,
                std::vector<std::string> actions) {
  auto it = index_by_id.find(id);
  if (it != index_by_id.end()) return it->second;
  int index = static_cast<int>(game.infosets.size());
  game.infosets.push_back({player, id, std::move(actions), {}});
  index_by_id.emplace(id, index);
  return index;
}

int add_decision(Game& game, int infoset) {
  int index = static_cast<int>(game.nodes.size());
  Node node;
  node.kind = NodeKind::Decision;
  node.infoset = infoset;
  game.nodes.push_back(std::move(node));
  game.infosets[infoset].members.push_back(index);
  return index;
}

int add_terminal(Game& game, double u1) {
  int index = static_cast<int>(game.nodes.size());
  Node node;
  node.kind = NodeKind::Terminal;
  node.utility1 = u1;
  game.nodes.push_back(std::move(node));
  return index;
}

int add_chance(Game& game, std::vector<double> probs) {
  int index = static_cast<int>(game.nodes.size());
  Node node;
  node.kind = NodeKind::Chance;
  node.chance_probs = std::move(probs);
  game.nodes.push_back(std::move(node));
  return index;
}

}  // namespace

Game make_rooted_shell() {
  Game game;
  game.infosets.push_back({1, "@root:1", {"start"}, {0}});
  game.infosets.push_back({2, "@root:2", {"start"}, {1}});
  Node r1;
  r1.kind = NodeKind::Decision;
  r1.infoset = kRootInfoset1;
  r1.children = {1};
  Node r2;
  r2.kind = NodeKind::Decision;
  r2.infoset = kRootInfoset2;
  r2.children = {2};
  game.nodes.push_back(std::move(r1));
  game.nodes.push_back(std::move(r2));
  game.root = 0;
  return game;
}

Game build_observation1_game() {
  Game game = make_rooted_shell();
  std::map<std::string, int> ids;
  int ix = add_infoset(game, ids, "x", 1, {"0", "1"});
  int iy = add_infoset(game, ids, "y", 2, {"0", "1"});

  int x = add_decision(game, ix);        // node 2
  int y0 = add_decision(game, iy);       // after Player 1 plays 0
  int y1 = add_decision(game, iy);       // after Player 1 plays 1
  game.nodes[x].children = {y0, y1};
  game.nodes[y0].children = {add_terminal(game, 0.0), add_terminal(game, 0.0)};
  game.nodes[y1].children = {add_terminal(game, 0.0), add_terminal(game, 1.0)};
  return game;
}

Game build_kuhn_poker() {
  Game game = make_rooted_shell();
  std::map<std::string, int> ids;
  const std::string cards[] = {"J", "Q", "K"};

  int deal = add_chance(game, std::vector<double>(6, 1.0 / 6.0));  // node 2

  auto showdown = [](int c1, int c2, double stake) {
    return c1 > c2 ? stake : -stake;
  };

  for (int c1 = 0; c1 < 3; ++c1) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (c1 == c2) continue;
      int p1_open = add_decision(
          game, add_infoset(game, ids, "1:" + cards[c1], 1, {"p", "b"}));
      game.nodes[deal].children.push_back(p1_open);

      // Player 1 passes: Player 2 may pass (showdown for 1) or bet.
      int p2_after_pass = add_decision(
          game, add_infoset(game, ids, "2:" + cards[c2] + ":p", 2, {"p", "b"}));
      // Player 1 bets: Player 2 folds (+1) or calls (showdown for 2).
      int p2_after_bet = add_decision(
          game, add_infoset(game, ids, "2:" + cards[c2] + ":b", 2, {"p", "b"}));
      game.nodes[p1_open].children = {p2_after_pass, p2_after_bet};

      int pp = add_terminal(game, showdown(c1, c2, 1.0));
      // Player 2 bet after a pass: Player 1 folds (-1) or calls.
      int p1_facing_bet = add_decision(
          game, add_infoset(game, ids, "1:" + cards[c1] + ":pb", 1, {"p", "b"}));
      game.nodes[p2_after_pass].children = {pp, p1_facing_bet};

      int pbp = add_terminal(game, -1.0);
      int pbb = add_terminal(game, showdown(c1, c2, 2.0));
      game.nodes[p1_facing_bet].children = {pbp, pbb};

      int bp = add_terminal(game, 1.0);
      int bb = add_terminal(game, showdown(c1, c2, 2.0));
      game.nodes[p2_after_bet].children = {bp, bb};
    }
  }
  return game;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                  std::uint64_t c) {
  return splitmix64(seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Level {
  bool chance = false;
  int player = 0;  // decision levels only
};

}  // namespace

Game random_game(std::uint64_t seed, int depth, int branching, long node_budget) {
  if (depth < 1) throw std::invalid_argument("random_game: depth must be >= 1");
  if (branching < 2) throw std::invalid_argument("random_game: branching must be >= 2");

  // Level schedule is a pure function of the seed, shared by all histories.
  std::vector<Level> levels;
  for (int d = 0; d < depth; ++d) {
    if (mix(seed, 0xC0FFEE, d, 0) & 1) levels.push_back({true, 0});
    levels.push_back({false, 1 + (d % 2)});
  }

  long total = 1;
  long layer = 1;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (layer > node_budget || total > node_budget) break;
    layer *= branching;
    total += layer;
  }
  if (total > node_budget) {
    throw std::invalid_argument("random_game: node budget exceeded");
  }

  Game game = make_rooted_shell();
  std::map<std::string, int> ids;
  std::mt19937_64 rng(seed);
  const int buckets = std::max(1, branching - 1);

  // obs[p]: what player p+1 has observed so far; own actions appear in
  // full, opponent actions and chance outcomes only as bucket signals.
  struct Pending {
    int parent;
    int slot;
    size_t level;
    std::string obs[2];
  };
  std::vector<Pending> stack;
  stack.push_back({1, 0, 0, {"", ""}});

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();

    int node;
    if (cur.level == levels.size()) {
      node = add_terminal(game, 2.0 * unit_draw(rng) - 1.0);
    } else if (levels[cur.level].chance) {
      std::vector<double> probs(branching);
      double sum = 0.0;
      for (int a = 0; a < branching; ++a) {
        probs[a] = 0.05 + unit_draw(rng);
        sum += probs[a];
      }
      double acc = 0.0;
      for (int a = 0; a < branching - 1; ++a) {
        probs[a] /= sum;
        acc += probs[a];
      }
      probs[branching - 1] = 1.0 - acc;  // exact unit sum
      node = add_chance(game, std::move(probs));
      for (int a = branching - 1; a >= 0; --a) {
        Pending next{node, a, cur.level + 1, {cur.obs[0], cur.obs[1]}};
        for (int p = 0; p < 2; ++p) {
          next.obs[p] += ":c" + std::to_string(cur.level) + "=" +
                         std::to_string(mix(seed, cur.level, a, 100 + p) % buckets);
        }
        stack.push_back(std::move(next));
      }
    } else {
      int player = levels[cur.level].player;
      std::vector<std::string> actions;
      for (int a = 0; a < branching; ++a) actions.push_back("a" + std::to_string(a));
      std::string key = "p" + std::to_string(player) + "L" +
                        std::to_string(cur.level) + cur.obs[player - 1];
      node = add_decision(game, add_infoset(game, ids, key, player, std::move(actions)));
      for (int a = branching - 1; a >= 0; --a) {
        Pending next{node, a, cur.level + 1, {cur.obs[0], cur.obs[1]}};
        next.obs[player - 1] += ":a" + std::to_string(cur.level) + "=" +
                                std::to_string(a);
        next.obs[2 - player] += ":s" + std::to_string(cur.level) + "=" +
                                std::to_string(mix(seed, cur.level, a, 200) % buckets);
        stack.push_back(std::move(next));
      }
    }

    Node& parent = game.nodes[cur.parent];
    if (static_cast<int>(parent.children.size()) <= cur.slot) {
      parent.children.resize(cur.slot + 1, -1);
    }
    parent.children[cur.slot] = node;
  }

  return game;
}

}  // namespace altcfr
