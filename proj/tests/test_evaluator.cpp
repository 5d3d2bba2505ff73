#include <cmath>
#include <random>

#include "altcfr/builders.hpp"
#include "altcfr/evaluator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace altcfr;

namespace {

Profile obs1_profile(const Game& game, Policy x_policy, Policy y_policy) {
  Profile profile = uniform_profile(game);
  profile.strategy1.at(infoset_index(game, "x")) = std::move(x_policy);
  profile.strategy2.at(infoset_index(game, "y")) = std::move(y_policy);
  return profile;
}

}  // namespace

TEST_CASE("reach decomposition basics") {
  Game game = build_observation1_game();
  Profile profile = obs1_profile(game, Policy{{0.5, 0.5}}, Policy{{1.0, 0.0}});
  ReachDecomposition r = reach(game, profile);

  CHECK(r.total[game.root] == 1.0);
  CHECK(r.own(1, game.root) == 1.0);
  CHECK(r.external(1, game.root) == 1.0);

  // History "00" is the first terminal in depth-first order.
  int t00 = game.terminals()[0];
  CHECK(r.total[t00] == 0.5);
  CHECK(r.own(1, t00) == 0.5);
  CHECK(r.external(1, t00) == 1.0);

  Game kuhn = build_kuhn_poker();
  Profile uniform = uniform_profile(kuhn);
  ReachDecomposition rk = reach(kuhn, uniform);
  int deal = kuhn.nodes[kuhn.nodes[kuhn.root].children[0]].children[0];
  for (int child : kuhn.nodes[deal].children) {
    CHECK(rk.external(1, child) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(rk.external(2, child) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }
}

TEST_CASE("reach factorisation and chain rule") {
  Game game = build_kuhn_poker();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Profile profile = test::random_profile(game, rng);
    ReachDecomposition r = reach(game, profile);

    std::vector<int> parent, edge;
    test::parent_edges(game, parent, edge);
    for (int v = 0; v < static_cast<int>(game.nodes.size()); ++v) {
      CHECK(std::abs(r.total[v] - r.own(1, v) * r.external(1, v)) <= 1e-12);
      CHECK(std::abs(r.total[v] - r.own(2, v) * r.external(2, v)) <= 1e-12);
      // pi(h) = pi(j) * pi(h|j) for every ancestor j.
      double conditional = 1.0;
      for (int cur = v; cur != game.root; cur = parent[cur]) {
        const Node& pn = game.nodes[parent[cur]];
        conditional *= pn.kind == NodeKind::Chance
                           ? pn.chance_probs[edge[cur]]
                           : profile.of(game.acting_player(parent[cur]))
                                 .at(pn.infoset)[edge[cur]];
        CHECK(std::abs(r.total[v] - r.total[parent[cur]] * conditional) <= 1e-12);
      }
    }
  }
}

TEST_CASE("expected utility on the matrix game") {
  Game game = build_observation1_game();
  CHECK(expected_utility(game, uniform_profile(game), 1) == 0.25);

  Profile both_one = obs1_profile(game, Policy{{0.0, 1.0}}, Policy{{0.0, 1.0}});
  CHECK(expected_utility(game, both_one, 1) == 1.0);
  CHECK(expected_utility(game, both_one, 2) == -1.0);

  std::mt19937_64 rng(17);
  Game kuhn = build_kuhn_poker();
  for (int trial = 0; trial < 10; ++trial) {
    Profile profile = test::random_profile(kuhn, rng);
    CHECK(expected_utility(kuhn, profile, 1) + expected_utility(kuhn, profile, 2) ==
          0.0);
    CHECK(std::abs(expected_utility(kuhn, profile, 1) -
                   test::oracle_expected_utility(kuhn, profile, 1)) <= 1e-12);
  }
}

TEST_CASE("counterfactual values on the matrix game") {
  Game game = build_observation1_game();
  int x = infoset_index(game, "x");

  Profile y_zero = obs1_profile(game, Policy{{0.5, 0.5}}, Policy{{1.0, 0.0}});
  CfvTable t0 = counterfactual_values(game, y_zero, 1);
  CHECK(t0.at(x)[0] == 0.0);
  CHECK(t0.at(x)[1] == 0.0);

  Profile y_one = obs1_profile(game, Policy{{0.5, 0.5}}, Policy{{0.0, 1.0}});
  CfvTable t1 = counterfactual_values(game, y_one, 1);
  CHECK(t1.at(x)[0] == 0.0);
  CHECK(t1.at(x)[1] == 1.0);
}

TEST_CASE("fast and brute-force counterfactual values agree") {
  std::mt19937_64 rng(23);
  std::vector<Game> games;
  games.push_back(build_observation1_game());
  games.push_back(build_kuhn_poker());
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    games.push_back(random_game(seed, 1 + seed % 3, 2 + seed % 2));
  }
  for (const Game& game : games) {
    for (int trial = 0; trial < 3; ++trial) {
      Profile profile =
          trial == 0 ? uniform_profile(game) : test::random_profile(game, rng);
      for (int player : {1, 2}) {
        CfvTable fast = counterfactual_values(game, profile, player);
        CfvTable brute = brute_force_cfv(game, profile, player);
        for (int i : game.infosets_of(player)) {
          REQUIRE(fast.at(i).size() == brute.at(i).size());
          for (size_t a = 0; a < fast.at(i).size(); ++a) {
            CHECK(std::abs(fast.at(i)[a] - brute.at(i)[a]) <= 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("root infoset value equals expected utility") {
  std::mt19937_64 rng(31);
  Game game = build_kuhn_poker();
  for (int trial = 0; trial < 10; ++trial) {
    Profile profile = test::random_profile(game, rng);
    for (int player : {1, 2}) {
      CfvTable table = counterfactual_values(game, profile, player);
      int root_infoset = player == 1 ? kRootInfoset1 : kRootInfoset2;
      CHECK(std::abs(table.at(root_infoset)[0] -
                     expected_utility(game, profile, player)) <= 1e-12);
    }
  }
}

TEST_CASE("counterfactual values are bounded by the utility range") {
  std::mt19937_64 rng(37);
  Game game = random_game(3, 2, 3);
  double max_abs = 0.0;
  for (int z : game.terminals()) {
    max_abs = std::max(max_abs, std::abs(game.nodes[z].utility1));
  }
  for (int trial = 0; trial < 5; ++trial) {
    Profile profile = test::random_profile(game, rng);
    for (int player : {1, 2}) {
      CfvTable table = counterfactual_values(game, profile, player);
      for (int i : game.infosets_of(player)) {
        for (double v : table.at(i)) CHECK(std::abs(v) <= max_abs + 1e-12);
      }
    }
  }
}

TEST_CASE("best response on the matrix game") {
  Game game = build_observation1_game();
  int x = infoset_index(game, "x");
  int y = infoset_index(game, "y");

  Profile uniform = uniform_profile(game);
  BestResponse brx = best_response(game, uniform.strategy2, 1);
  CHECK(brx.value == 0.5);
  CHECK(brx.strategy.at(x)[1] == 1.0);

  Profile x_one = obs1_profile(game, Policy{{0.0, 1.0}}, Policy{{0.5, 0.5}});
  BestResponse bry = best_response(game, x_one.strategy1, 2);
  CHECK(bry.value == 0.0);
  CHECK(bry.strategy.at(y)[0] == 1.0);
}

TEST_CASE("best response value matches pure-strategy enumeration") {
  std::mt19937_64 rng(41);
  std::vector<Game> games;
  games.push_back(build_observation1_game());
  games.push_back(build_kuhn_poker());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    games.push_back(random_game(seed, 1 + seed % 2, 2 + seed % 2));
  }
  for (const Game& game : games) {
    for (int player : {1, 2}) {
      REQUIRE(test::pure_strategy_count(game, player, 100000) <= 100000);
      for (int trial = 0; trial < 2; ++trial) {
        BehaviorStrategy opponent =
            trial == 0 ? uniform_strategy(game, 3 - player)
                       : test::random_strategy(game, 3 - player, rng);
        double fast = best_response(game, opponent, player).value;
        double oracle = test::enumerate_best_response_value(game, opponent, player);
        CHECK(std::abs(fast - oracle) <= 1e-10);
      }
    }
  }
}

TEST_CASE("exploitability on the matrix game") {
  Game game = build_observation1_game();
  CHECK(exploitability(game, uniform_profile(game)) == 0.5);

  // Find the pure equilibrium by enumerating all four pure profiles with
  // the oracle, then check the evaluator agrees it is exact.
  int x = infoset_index(game, "x");
  int y = infoset_index(game, "y");
  int eq_x = -1, eq_y = -1;
  for (int ax = 0; ax < 2; ++ax) {
    for (int ay = 0; ay < 2; ++ay) {
      std::vector<int> actions(game.infosets.size(), 0);
      actions[x] = ax;
      actions[y] = ay;
      Profile profile = pure_profile(game, actions);
      double eps =
          test::enumerate_best_response_value(game, profile.strategy2, 1) +
          test::enumerate_best_response_value(game, profile.strategy1, 2);
      if (eps == 0.0) {
        eq_x = ax;
        eq_y = ay;
      }
    }
  }
  REQUIRE(eq_x == 1);
  REQUIRE(eq_y == 0);
  std::vector<int> actions(game.infosets.size(), 0);
  actions[x] = eq_x;
  actions[y] = eq_y;
  CHECK(exploitability(game, pure_profile(game, actions)) == 0.0);
}

TEST_CASE("exploitability is never negative") {
  std::mt19937_64 rng(43);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Game game = random_game(seed, 2, 2 + seed % 2);
    for (int trial = 0; trial < 4; ++trial) {
      CHECK(exploitability(game, test::random_profile(game, rng)) >= -1e-12);
    }
  }
}

TEST_CASE("average of a single strategy is that strategy") {
  Game game = build_kuhn_poker();
  std::mt19937_64 rng(47);
  BehaviorStrategy s = test::random_strategy(game, 1, rng);
  std::vector<BehaviorStrategy> seq = {s};
  std::vector<double> weights = {1.0};
  BehaviorStrategy avg = average_strategy(game, 1, seq, weights);
  for (int i : game.infosets_of(1)) {
    for (int a = 0; a < game.num_actions(i); ++a) {
      CHECK(avg.at(i)[a] == doctest::Approx(s.at(i)[a]).epsilon(1e-15));
    }
  }
}

TEST_CASE("forced matrix-game averages are exactly uniform") {
  Game game = build_observation1_game();
  int x = infoset_index(game, "x");
  const long big_t = 4;
  std::vector<BehaviorStrategy> window;
  for (long i = 1; i <= 2 * big_t; ++i) {
    std::vector<int> actions(game.infosets.size(), 0);
    actions[x] = static_cast<int>(i % 2);
    window.push_back(pure_profile(game, actions).strategy1);
  }
  std::vector<double> weights(window.size(), 1.0);
  BehaviorStrategy avg = average_strategy(game, 1, window, weights);
  CHECK(avg.at(x)[0] == 0.5);
  CHECK(avg.at(x)[1] == 0.5);
}

TEST_CASE("averaging is utility-linear against any opponent") {
  Game game = build_kuhn_poker();
  std::mt19937_64 rng(53);
  BehaviorStrategy a = test::random_strategy(game, 2, rng);
  BehaviorStrategy b = test::random_strategy(game, 2, rng);
  std::vector<BehaviorStrategy> seq = {a, b};
  std::vector<double> weights = {1.0, 1.0};
  BehaviorStrategy mix = average_strategy(game, 2, seq, weights);
  for (int trial = 0; trial < 50; ++trial) {
    BehaviorStrategy probe = test::random_strategy(game, 1, rng);
    double mixed = expected_utility(game, Profile{probe, mix}, 1);
    double direct = 0.5 * expected_utility(game, Profile{probe, a}, 1) +
                    0.5 * expected_utility(game, Profile{probe, b}, 1);
    CHECK(std::abs(mixed - direct) <= 1e-10);
  }
}

TEST_CASE("average_strategy rejects bad input") {
  Game game = build_kuhn_poker();
  std::vector<BehaviorStrategy> seq = {uniform_strategy(game, 1)};
  std::vector<double> bad_len = {1.0, 2.0};
  CHECK_THROWS_AS(average_strategy(game, 1, seq, bad_len), std::invalid_argument);
  std::vector<double> bad_weight = {0.0};
  CHECK_THROWS_AS(average_strategy(game, 1, seq, bad_weight),
                  std::invalid_argument);
}

TEST_CASE("average regret of the forced sequence is exactly zero") {
  Game game = build_observation1_game();
  int x = infoset_index(game, "x");
  int y = infoset_index(game, "y");
  const long big_t = 5;
  std::vector<Profile> trace;
  for (long i = 0; i <= 2 * big_t; ++i) {
    std::vector<int> actions(game.infosets.size(), 0);
    actions[x] = static_cast<int>(i % 2);
    actions[y] = static_cast<int>(i % 2);
    trace.push_back(pure_profile(game, actions));
  }
  CHECK(average_regret(game, trace, 1, UpdateMode::Alternating) == 0.0);
  CHECK(average_regret(game, trace, 2, UpdateMode::Alternating) == 0.0);
}

TEST_CASE("average regret of a constant sequence is the best-response gap") {
  Game game = build_kuhn_poker();
  std::mt19937_64 rng(59);
  Profile profile = test::random_profile(game, rng);
  std::vector<Profile> trace(5, profile);
  for (UpdateMode mode : {UpdateMode::Simultaneous, UpdateMode::Alternating}) {
    for (int player : {1, 2}) {
      double expected = best_response(game, profile.of(3 - player), player).value -
                        expected_utility(game, profile, player);
      CHECK(std::abs(average_regret(game, trace, player, mode) - expected) <=
            1e-12);
    }
  }
}

TEST_CASE("average regret needs a played step") {
  Game game = build_observation1_game();
  std::vector<Profile> trace = {uniform_profile(game)};
  CHECK_THROWS_AS(average_regret(game, trace, 1, UpdateMode::Alternating),
                  std::invalid_argument);
}
