#include "altcfr/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "altcfr/verifier.hpp"

namespace altcfr {

Solver::Solver(const Game& game, SolverConfig config)
    : game_(&game), config_(config) {
  if (config_.iterations < 1) {
    throw std::invalid_argument("solver: iterations must be >= 1");
  }
  if (config_.stride < 1) {
    throw std::invalid_argument("solver: stride must be >= 1");
  }
  const int num_infosets = static_cast<int>(game.infosets.size());
  states_.reserve(num_infosets);
  for (int i = 0; i < num_infosets; ++i) {
    states_.push_back(make_regret_state(config_.minimizer, game.num_actions(i)));
  }
  profile_ = uniform_profile(game);
  for (int p = 0; p < 2; ++p) {
    seqs_[p] = own_sequences(game, p + 1);
    pre_[p].resize(num_infosets);
    for (int i : game.infosets_of(p + 1)) {
      pre_[p][i].assign(game.num_actions(i), 0.0);
    }
  }
  post1_ = pre_[0];
  weighted1_ = pre_[0];
  weighted2_ = pre_[1];

  BoundInputs inputs = bound_inputs(game);
  bound_infosets_ = inputs.infoset_count;
  bound_l_ = inputs.utility_range;
  bound_k_ = inputs.max_actions;
}

void Solver::accumulate(Mass& mass, int player, const BehaviorStrategy& strategy,
                        double weight) {
  for (int i : game_->infosets_of(player)) {
    double m = weight * own_reach(seqs_[player - 1], i, strategy);
    if (m == 0.0) continue;
    const Policy& policy = strategy.at(i);
    for (int a = 0; a < policy.size(); ++a) {
      mass[i][a] += m * policy[a];
    }
  }
}

BehaviorStrategy Solver::strategy_from(const Mass& mass, int player) const {
  BehaviorStrategy out;
  out.player = player;
  out.policies.resize(game_->infosets.size());
  for (int i : game_->infosets_of(player)) {
    const auto& row = mass[i];
    double total = 0.0;
    for (double m : row) total += m;
    if (total > 0.0) {
      Policy policy;
      policy.probs.resize(row.size());
      for (size_t a = 0; a < row.size(); ++a) policy.probs[a] = row[a] / total;
      out.policies[i] = std::move(policy);
    } else {
      out.policies[i] = uniform_policy(static_cast<int>(row.size()));
    }
  }
  return out;
}

void Solver::apply_update(int player, const CfvTable& values) {
  for (int i : game_->infosets_of(player)) {
    states_[i] = update(states_[i], values.at(i));
  }
  BehaviorStrategy& strategy = profile_.of(player);
  for (int i : game_->infosets_of(player)) {
    strategy.at(i) = policy_from_state(states_[i]);
  }
}

void Solver::iterate() {
  const Game& game = *game_;
  const double linear_weight = static_cast<double>(t_ + 1);

  accumulate(pre_[0], 1, profile_.strategy1, 1.0);
  accumulate(pre_[1], 2, profile_.strategy2, 1.0);
  if (config_.averaging == Averaging::Linear) {
    accumulate(weighted2_, 2, profile_.strategy2, linear_weight);
  }
  const double u1_before = expected_utility(game, profile_, 1);

  CfvTable values1 = counterfactual_values(game, profile_, 1);
  double u1_mixed;
  if (config_.update == UpdateMode::Simultaneous) {
    CfvTable values2 = counterfactual_values(game, profile_, 2);
    BehaviorStrategy old2 = profile_.strategy2;
    apply_update(1, values1);
    u1_mixed = expected_utility(game, Profile{profile_.strategy1, old2}, 1);
    apply_update(2, values2);
  } else {
    apply_update(1, values1);
    // Between the sub-updates profile_ is (sigma^{t+1}_1, sigma^t_2), the
    // profile Player 2 is updated against.
    u1_mixed = expected_utility(game, profile_, 1);
    CfvTable values2 = counterfactual_values(game, profile_, 2);
    apply_update(2, values2);
  }

  accumulate(post1_, 1, profile_.strategy1, 1.0);
  if (config_.averaging == Averaging::Linear) {
    accumulate(weighted1_, 1, profile_.strategy1, linear_weight);
  }

  sum_u1_ += u1_before;
  sum_u2_realized_ += config_.update == UpdateMode::Alternating ? -u1_mixed
                                                                : -u1_before;
  last_improvement_ = u1_mixed - u1_before;
  ++t_;
}

Profile Solver::output_profile() const {
  if (config_.averaging == Averaging::Linear) {
    return Profile{strategy_from(weighted1_, 1), strategy_from(weighted2_, 2)};
  }
  return uniform_window_profile();
}

Profile Solver::uniform_window_profile() const {
  return Profile{strategy_from(post1_, 1), strategy_from(pre_[1], 2)};
}

double Solver::average_regret_estimate(int player) const {
  if (t_ == 0) return 0.0;
  if (player == 1) {
    double br = best_response(*game_, strategy_from(pre_[1], 2), 1).value;
    return br - sum_u1_ / static_cast<double>(t_);
  }
  const Mass& window =
      config_.update == UpdateMode::Alternating ? post1_ : pre_[0];
  double br = best_response(*game_, strategy_from(window, 1), 2).value;
  return br - sum_u2_realized_ / static_cast<double>(t_);
}

SnapshotRow Solver::snapshot() const {
  SnapshotRow row;
  row.t = t_;
  row.exploitability = exploitability(*game_, output_profile());
  row.avg_regret_1 = average_regret_estimate(1);
  row.avg_regret_2 = average_regret_estimate(2);
  row.improvement = last_improvement_;
  row.bound = theorem5_bound(static_cast<double>(t_), bound_infosets_, bound_l_,
                             bound_k_);
  return row;
}

SolveResult run(const Game& game, const SolverConfig& config) {
  Solver solver(game, config);
  SolveResult result;
  result.trace.update = config.update;
  if (config.record_trace) result.trace.profiles.push_back(solver.profile());
  for (long i = 0; i < config.iterations; ++i) {
    solver.iterate();
    if (config.record_trace) result.trace.profiles.push_back(solver.profile());
    long t = solver.iteration();
    if (t % config.stride == 0 || t == config.iterations) {
      result.record.rows.push_back(solver.snapshot());
    }
  }
  return result;
}

namespace {

std::vector<BehaviorStrategy> strategy_window(std::span<const Profile> profiles,
                                              int player, long from, long to) {
  std::vector<BehaviorStrategy> out;
  out.reserve(to - from + 1);
  for (long i = from; i <= to; ++i) out.push_back(profiles[i].of(player));
  return out;
}

}  // namespace

SolveRecord replay_forced_sequence(const Game& game,
                                   std::span<const Profile> profiles,
                                   UpdateMode update) {
  if (profiles.size() < 2) {
    throw std::invalid_argument("replay: need at least sigma^0 and sigma^1");
  }
  const long total = static_cast<long>(profiles.size()) - 1;
  BoundInputs inputs = bound_inputs(game);

  SolveRecord record;
  for (long i = 0; i < total; ++i) {
    double u1_before = expected_utility(game, profiles[i], 1);
    double u1_mixed = expected_utility(
        game, Profile{profiles[i + 1].strategy1, profiles[i].strategy2}, 1);

    const long t = i + 1;
    auto head = profiles.subspan(0, t + 1);
    std::vector<double> weights(t, 1.0);
    SnapshotRow row;
    row.t = t;
    row.exploitability = exploitability(
        game,
        Profile{average_strategy(game, 1, strategy_window(head, 1, 1, t), weights),
                average_strategy(game, 2, strategy_window(head, 2, 0, t - 1),
                                 weights)});
    row.avg_regret_1 = average_regret(game, head, 1, update);
    row.avg_regret_2 = average_regret(game, head, 2, update);
    row.improvement = u1_mixed - u1_before;
    row.bound = theorem5_bound(static_cast<double>(t), inputs.infoset_count,
                               inputs.utility_range, inputs.max_actions);
    record.rows.push_back(row);
  }
  return record;
}

}  // namespace altcfr
