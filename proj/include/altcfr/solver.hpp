#pragma once

#include <span>
#include <vector>

#include "altcfr/evaluator.hpp"
#include "altcfr/game.hpp"
#include "altcfr/regret.hpp"

namespace altcfr {

enum class Averaging { Uniform, Linear };

struct SolverConfig {
  MinimizerKind minimizer = MinimizerKind::RegretMatchingPlus;
  UpdateMode update = UpdateMode::Alternating;
  Averaging averaging = Averaging::Linear;
  long iterations = 1000;
  long stride = 10;
  bool record_trace = true;
};

struct SnapshotRow {
  long t = 0;
  double exploitability = 0.0;  // of the configured output profile
  double avg_regret_1 = 0.0;
  double avg_regret_2 = 0.0;
  double improvement = 0.0;     // u1(refreshed s1, old s2) - u1(old profile)
  double bound = 0.0;           // 2 |I| l sqrt(k/t)
};

struct SolveRecord {
  std::vector<SnapshotRow> rows;
};

// Full per-iteration strategy history sigma^0..sigma^t, enough to audit a
// run from outside the solver.
struct SolveTrace {
  UpdateMode update = UpdateMode::Alternating;
  std::vector<Profile> profiles;
};

struct SolveResult {
  SolveRecord record;
  SolveTrace trace;
};

// One CFR / CFR+ run. Iteration 0 starts from all-zero stored values,
// which regret matching maps to the uniform profile. In alternating mode
// Player 1 updates against sigma^t and Player 2 against the refreshed
// (sigma^{t+1}_1, sigma^t_2), Player 1 first. Output averages follow the
// window convention: Player 1 over sigma^1..sigma^t (weight i for the
// linear scheme), Player 2 over sigma^0..sigma^{t-1} (weight i+1).
class Solver {
 public:
  Solver(const Game& game, SolverConfig config);

  void iterate();

  long iteration() const { return t_; }
  const Profile& profile() const { return profile_; }
  const RegretState& state(int infoset) const { return states_[infoset]; }

  /// Average profile under the configured averaging scheme.
  Profile output_profile() const;
  /// Uniform-window average profile regardless of configuration.
  Profile uniform_window_profile() const;

  double last_improvement() const { return last_improvement_; }
  double average_regret_estimate(int player) const;

  /// Current row of the convergence log; runs best responses.
  SnapshotRow snapshot() const;

 private:
  using Mass = std::vector<std::vector<double>>;

  void accumulate(Mass& mass, int player, const BehaviorStrategy& strategy,
                  double weight);
  BehaviorStrategy strategy_from(const Mass& mass, int player) const;
  void apply_update(int player, const CfvTable& values);

  const Game* game_;
  SolverConfig config_;
  std::vector<RegretState> states_;
  Profile profile_;
  std::vector<OwnSequence> seqs_[2];
  Mass pre_[2];        // sigma^0..sigma^{t-1} windows, uniform weights
  Mass post1_;         // sigma^1..sigma^t window for Player 1, uniform
  Mass weighted1_;     // linear weights, Player 1 post-update window
  Mass weighted2_;     // linear weights, Player 2 pre-update window
  double sum_u1_ = 0.0;           // realized Player 1 utilities
  double sum_u2_realized_ = 0.0;  // Player 2 realized, mode-dependent pairing
  double last_improvement_ = 0.0;
  long t_ = 0;
  long bound_infosets_ = 0;
  double bound_l_ = 0.0;
  int bound_k_ = 1;
};

SolveResult run(const Game& game, const SolverConfig& config);

/// Evaluates an externally imposed strategy sequence sigma^0..sigma^t as
/// if it had been produced by a run with the given update order: regrets,
/// uniform-window average exploitability, improvement terms, bound. One
/// row per step.
SolveRecord replay_forced_sequence(const Game& game,
                                   std::span<const Profile> profiles,
                                   UpdateMode update);

}  // namespace altcfr
