#pragma once

#include <span>
#include <vector>

#include "altcfr/game.hpp"

namespace altcfr {

enum class MinimizerKind { RegretMatching, RegretMatchingPlus };

// Stored values of one per-infoset online minimizer: accumulated regrets
// for regret-matching, clamped regret-like values for regret-matching+.
// Starts at all zeros; the RegretMatchingPlus variant keeps every entry
// non-negative.
struct RegretState {
  MinimizerKind kind = MinimizerKind::RegretMatching;
  std::vector<double> stored;
};

RegretState make_regret_state(MinimizerKind kind, int num_actions);

/// Positive part x+ = max(x, 0), applied componentwise.
std::vector<double> positive_part(std::span<const double> values);

/// Maps stored values to a policy: normalised positive part when any
/// entry is strictly positive, uniform otherwise. The positivity test is
/// exact (> 0, no epsilon).
Policy policy_from_state(const RegretState& state);

/// One minimizer step with the given action values. The policy charged
/// for the step is policy_from_state(state). Pure: returns the new state
/// and leaves the input untouched. Throws on length mismatch.
RegretState update(const RegretState& state, std::span<const double> values);

}  // namespace altcfr
