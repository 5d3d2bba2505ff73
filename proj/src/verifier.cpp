#include "altcfr/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "altcfr/evaluator.hpp"
#include "altcfr/regret.hpp"

namespace altcfr {

std::string TheoremReport::to_string() const {
  std::ostringstream os;
  os << id << " instances=" << instances << " worst=" << worst_violation << " "
     << (pass ? "PASS" : "FAIL");
  return os.str();
}

TheoremReport make_report(std::string id, long instances, double worst,
                          double tolerance) {
  TheoremReport report;
  report.id = std::move(id);
  report.instances = instances;
  report.worst_violation = worst;
  report.tolerance = tolerance;
  report.pass = worst <= tolerance;
  return report;
}

std::vector<TheoremReport> merge_reports(
    std::span<const std::vector<TheoremReport>> groups) {
  std::vector<TheoremReport> merged;
  for (const auto& group : groups) {
    for (const TheoremReport& report : group) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& r) {
        return r.id == report.id;
      });
      if (it == merged.end()) {
        merged.push_back(report);
      } else {
        it->instances += report.instances;
        it->worst_violation = std::max(it->worst_violation, report.worst_violation);
        it->pass = it->worst_violation <= it->tolerance;
      }
    }
  }
  return merged;
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

std::vector<TheoremReport> check_folk_decomposition(const Game& game,
                                                    const SolveTrace& trace) {
  if (trace.profiles.size() < 2) {
    throw std::invalid_argument("folk check: trace too short");
  }
  std::span<const Profile> profiles(trace.profiles);
  const long t = static_cast<long>(profiles.size()) - 1;

  double r1 = average_regret(game, profiles, 1, UpdateMode::Alternating);
  double r2 = average_regret(game, profiles, 2, UpdateMode::Alternating);

  std::vector<double> weights(t, 1.0);
  Profile averages{
      average_strategy(game, 1, strategy_window(profiles, 1, 1, t), weights),
      average_strategy(game, 2, strategy_window(profiles, 2, 0, t - 1), weights)};
  double expl = exploitability(game, averages);

  double improvement_sum = 0.0;
  for (long i = 0; i < t; ++i) {
    double u1_mixed = expected_utility(
        game, Profile{profiles[i + 1].strategy1, profiles[i].strategy2}, 1);
    improvement_sum += u1_mixed - expected_utility(game, profiles[i], 1);
  }
  double mean_improvement = improvement_sum / static_cast<double>(t);

  // r1 + r2 = expl(averages) + mean improvement, exactly; the bound form
  // reads expl <= eps1 + eps2 - mean improvement.
  double identity_residual = std::abs(r1 + r2 - expl - mean_improvement);
  double inequality_violation = std::max(0.0, expl - (r1 + r2 - mean_improvement));

  return {make_report("folk.identity", t, identity_residual, 1e-9),
          make_report("folk.inequality", t, inequality_violation, 1e-9)};
}

namespace {

struct RmTally {
  long instances = 0;
  double positive_persistence = 0.0;  // boolean breaks reported as 1
  double uniform_relapse = 0.0;
  double clamped_delta_sign = 0.0;
  double one_step_improvement = 0.0;
  double regret_bound = 0.0;

  void merge(const RmTally& other) {
    instances += other.instances;
    positive_persistence = std::max(positive_persistence, other.positive_persistence);
    uniform_relapse = std::max(uniform_relapse, other.uniform_relapse);
    clamped_delta_sign = std::max(clamped_delta_sign, other.clamped_delta_sign);
    one_step_improvement = std::max(one_step_improvement, other.one_step_improvement);
    regret_bound = std::max(regret_bound, other.regret_bound);
  }
};

bool has_positive(std::span<const double> stored) {
  for (double v : stored) {
    if (v > 0.0) return true;
  }
  return false;
}

RmTally rm_tally_for_seed(std::uint64_t seed, int steps) {
  RmTally tally;
  for (MinimizerKind kind :
       {MinimizerKind::RegretMatching, MinimizerKind::RegretMatchingPlus}) {
    const int num_actions = 2 + static_cast<int>(seed % 4);
    std::mt19937_64 rng(seed ^ (kind == MinimizerKind::RegretMatching
                                    ? 0x9E3779B97F4A7C15ULL
                                    : 0xD1B54A32D192ED03ULL));
    auto draw = [&rng] {
      return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    };

    RegretState state = make_regret_state(kind, num_actions);
    bool left_uniform = false;
    for (int step = 0; step < steps; ++step) {
      std::vector<double> values(num_actions);
      for (double& v : values) v = draw();

      Policy policy = policy_from_state(state);
      double expected = 0.0;
      for (int a = 0; a < num_actions; ++a) expected += policy[a] * values[a];

      bool positive_before = has_positive(state.stored);
      RegretState next = update(state, values);
      bool positive_after = has_positive(next.stored);

      if (positive_before && !positive_after) tally.positive_persistence = 1.0;
      if (left_uniform && !positive_after) tally.uniform_relapse = 1.0;
      if (positive_after) left_uniform = true;

      std::vector<double> before_plus = positive_part(state.stored);
      std::vector<double> after_plus = positive_part(next.stored);
      for (int a = 0; a < num_actions; ++a) {
        double expr = (after_plus[a] - before_plus[a]) * (values[a] - expected);
        tally.clamped_delta_sign = std::max(tally.clamped_delta_sign, -expr);
      }

      Policy next_policy = policy_from_state(next);
      double next_value = 0.0;
      for (int a = 0; a < num_actions; ++a) next_value += next_policy[a] * values[a];
      tally.one_step_improvement =
          std::max(tally.one_step_improvement, expected - next_value);

      if (kind == MinimizerKind::RegretMatching) {
        double max_regret = *std::max_element(next.stored.begin(), next.stored.end());
        double bound = 2.0 * std::sqrt(static_cast<double>(num_actions) * (step + 1));
        tally.regret_bound = std::max(tally.regret_bound, max_regret - bound);
      }

      state = std::move(next);
      ++tally.instances;
    }
  }
  return tally;
}

}  // namespace

int verification_thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (cap > 8) cap = 8;
  if (const char* env = std::getenv("CFR_ALT_THREADS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) cap = static_cast<int>(std::min(parsed, 64L));
  }
  return cap;
}

std::vector<TheoremReport> check_rm_lemmas(std::span<const std::uint64_t> seeds,
                                           int steps) {
  if (seeds.empty()) {
    throw std::invalid_argument("rm check: need at least one seed");
  }
  std::vector<RmTally> tallies(seeds.size());
  const int workers =
      std::min<int>(verification_thread_cap(), static_cast<int>(seeds.size()));
  std::vector<std::thread> threads;
  std::atomic<size_t> cursor{0};
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = cursor.fetch_add(1); i < seeds.size();
           i = cursor.fetch_add(1)) {
        tallies[i] = rm_tally_for_seed(seeds[i], steps);
      }
    });
  }
  for (auto& thread : threads) thread.join();

  RmTally total;
  for (const RmTally& tally : tallies) total.merge(tally);

  return {
      make_report("rm.positive-persistence", total.instances,
                  total.positive_persistence, 0.0),
      make_report("rm.no-uniform-relapse", total.instances, total.uniform_relapse,
                  0.0),
      make_report("rm.clamped-delta-sign", total.instances,
                  total.clamped_delta_sign, 1e-12),
      make_report("rm.one-step-improvement", total.instances,
                  total.one_step_improvement, 1e-12),
      make_report("rm.external-regret-bound", total.instances, total.regret_bound,
                  1e-9),
  };
}

std::vector<TheoremReport> check_cfr_improvement(const Game& game,
                                                 const SolveTrace& trace) {
  if (trace.profiles.size() < 2) {
    throw std::invalid_argument("improvement check: trace too short");
  }
  const auto& profiles = trace.profiles;
  const long t = static_cast<long>(profiles.size()) - 1;

  long infoset_instances = 0;
  long root_instances = 0;
  double worst_infoset = 0.0;
  double worst_root = 0.0;

  auto check_sub_update = [&](int player, const Profile& before,
                              const Profile& after) {
    CfvTable pre = counterfactual_values(game, before, player);
    CfvTable post = counterfactual_values(game, after, player);
    for (int i : game.infosets_of(player)) {
      for (int a = 0; a < game.num_actions(i); ++a) {
        worst_infoset = std::max(worst_infoset, pre.at(i)[a] - post.at(i)[a]);
        ++infoset_instances;
      }
    }
    worst_root = std::max(worst_root, expected_utility(game, before, player) -
                                          expected_utility(game, after, player));
    ++root_instances;
  };

  for (long i = 0; i < t; ++i) {
    const Profile& cur = profiles[i];
    const Profile& next = profiles[i + 1];
    // Player 1 updates against sigma^i_2 in both modes.
    check_sub_update(1, cur, Profile{next.strategy1, cur.strategy2});
    if (trace.update == UpdateMode::Alternating) {
      check_sub_update(2, Profile{next.strategy1, cur.strategy2}, next);
    } else {
      check_sub_update(2, cur, Profile{cur.strategy1, next.strategy2});
    }
  }

  return {make_report("cfr.infoset-value-monotone", infoset_instances,
                      worst_infoset, 1e-9),
          make_report("cfr.root-value-monotone", root_instances, worst_root,
                      1e-9)};
}

BoundInputs bound_inputs(const Game& game) {
  BoundInputs inputs;
  inputs.infoset_count =
      static_cast<long>(game.infosets.size()) - 2;  // reserved roots excluded
  double max_u1 = -std::numeric_limits<double>::infinity();
  for (int z : game.terminals()) {
    max_u1 = std::max(max_u1, game.nodes[z].utility1);
  }
  inputs.utility_range = 2.0 * max_u1;  // max u1(y) - u2(z) = max u1 + max u1
  inputs.max_actions = 1;
  for (size_t i = 2; i < game.infosets.size(); ++i) {
    inputs.max_actions = std::max(
        inputs.max_actions, static_cast<int>(game.infosets[i].actions.size()));
  }
  return inputs;
}

double theorem5_bound(double t, long infoset_count, double utility_range_l,
                      int max_actions_k) {
  if (!(t > 0.0) || infoset_count <= 0 || !(utility_range_l > 0.0) ||
      max_actions_k <= 0) {
    throw std::invalid_argument("bound: arguments must be positive");
  }
  return 2.0 * static_cast<double>(infoset_count) * utility_range_l *
         std::sqrt(static_cast<double>(max_actions_k) / t);
}

std::vector<TheoremReport> certify_run(const Game& game,
                                       const SolverConfig& config) {
  if (config.minimizer != MinimizerKind::RegretMatchingPlus ||
      config.update != UpdateMode::Alternating ||
      config.averaging != Averaging::Linear) {
    throw std::invalid_argument(
        "certify_run: requires regret-matching+, alternating updates, linear averaging");
  }
  SolverConfig traced = config;
  traced.record_trace = true;
  SolveResult result = run(game, traced);

  double worst_bound = 0.0;
  for (const SnapshotRow& row : result.record.rows) {
    worst_bound = std::max(worst_bound, row.exploitability - row.bound);
  }
  std::vector<std::vector<TheoremReport>> groups;
  groups.push_back({make_report("bound.certified-run",
                                static_cast<long>(result.record.rows.size()),
                                worst_bound, 1e-9)});
  groups.push_back(check_cfr_improvement(game, result.trace));
  groups.push_back(check_folk_decomposition(game, result.trace));
  return merge_reports(groups);
}

SolveTrace argmin_update_trace(const Game& game, int iterations) {
  SolveTrace trace;
  trace.update = UpdateMode::Alternating;
  Profile profile = uniform_profile(game);
  trace.profiles.push_back(profile);
  for (int i = 0; i < iterations; ++i) {
    for (int player : {1, 2}) {
      CfvTable values = counterfactual_values(game, profile, player);
      BehaviorStrategy& strategy = profile.of(player);
      for (int is : game.infosets_of(player)) {
        auto row = values.at(is);
        int worst = 0;
        for (int a = 1; a < static_cast<int>(row.size()); ++a) {
          if (row[a] < row[worst]) worst = a;
        }
        Policy pure;
        pure.probs.assign(row.size(), 0.0);
        pure.probs[worst] = 1.0;
        strategy.at(is) = std::move(pure);
      }
    }
    trace.profiles.push_back(profile);
  }
  return trace;
}

}  // namespace altcfr
