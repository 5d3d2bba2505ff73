#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "altcfr/game.hpp"
#include "altcfr/solver.hpp"

namespace altcfr {

// Outcome of one numeric property check over many instances. A check
// passes iff its worst violation stays within the stated tolerance.
struct TheoremReport {
  std::string id;
  long instances = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  std::string to_string() const;
};

TheoremReport make_report(std::string id, long instances, double worst,
                          double tolerance);

/// Combines reports with the same id: instances add up, the worst
/// violation is the maximum. Ids keep their first-appearance order.
std::vector<TheoremReport> merge_reports(
    std::span<const std::vector<TheoremReport>> groups);

/// Alternating-update regret/exploitability decomposition on a recorded
/// run: r1 + r2 equals the exploitability of the uniform-window average
/// profile plus the mean one-step improvement, and the matching
/// inequality with eps_p set to the computed regrets.
/// Throws if the trace has no played step.
std::vector<TheoremReport> check_folk_decomposition(const Game& game,
                                                    const SolveTrace& trace);

/// Drives both minimizer kinds with seeded value sequences in [-1, 1] and
/// checks, per step: a positive stored value persists once present, the
/// uniform fallback is never revisited afterwards, clamped stored deltas
/// agree in sign with the instantaneous regret, the refreshed policy never
/// values the step worse, and accumulated regret-matching regrets stay
/// under the sqrt bound.
std::vector<TheoremReport> check_rm_lemmas(std::span<const std::uint64_t> seeds,
                                           int steps);

/// Per-iteration single-player update monotonicity over a recorded run:
/// no counterfactual action value and no root utility of the updated
/// player decreases against the opponent strategy of that sub-update.
std::vector<TheoremReport> check_cfr_improvement(const Game& game,
                                                 const SolveTrace& trace);

struct BoundInputs {
  long infoset_count = 0;   // decision infosets, reserved roots excluded
  double utility_range = 0.0;  // max u1(y) - u2(z) over terminal pairs
  int max_actions = 1;
};

/// Reads the bound parameters off the game's terminals and infosets.
BoundInputs bound_inputs(const Game& game);

/// 2 * infoset_count * l * sqrt(k / t). Throws on non-positive arguments.
double theorem5_bound(double t, long infoset_count, double utility_range_l,
                      int max_actions_k);

/// Runs the solver (requires regret-matching+, alternating updates,
/// linear averaging) and certifies the run: the logged exploitability
/// stays under the bound at every snapshot, plus the improvement and
/// decomposition checks on the trace.
std::vector<TheoremReport> certify_run(const Game& game,
                                       const SolverConfig& config);

/// Negative control: an alternating run whose updates always pick the
/// pure worst-valued action. Feeding it to check_cfr_improvement must
/// produce a failing report.
SolveTrace argmin_update_trace(const Game& game, int iterations);

/// Worker cap for seed-parallel checks; reads CFR_ALT_THREADS.
int verification_thread_cap();

}  // namespace altcfr
