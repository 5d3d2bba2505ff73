#include "altcfr/regret.hpp"

#include <stdexcept>

namespace altcfr {

RegretState make_regret_state(MinimizerKind kind, int num_actions) {
  return RegretState{kind, std::vector<double>(num_actions, 0.0)};
}

std::vector<double> positive_part(std::span<const double> values) {
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = values[i] > 0.0 ? values[i] : 0.0;
  }
  return out;
}

Policy policy_from_state(const RegretState& state) {
  const auto& s = state.stored;
  double positive_sum = 0.0;
  bool any_positive = false;
  for (double v : s) {
    if (v > 0.0) {
      any_positive = true;
      positive_sum += v;
    }
  }
  if (!any_positive) return uniform_policy(static_cast<int>(s.size()));
  Policy policy;
  policy.probs.resize(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    policy.probs[i] = s[i] > 0.0 ? s[i] / positive_sum : 0.0;
  }
  return policy;
}

RegretState update(const RegretState& state, std::span<const double> values) {
  if (values.size() != state.stored.size()) {
    throw std::invalid_argument("regret update: value count differs from action count");
  }
  Policy policy = policy_from_state(state);
  double expected = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    expected += policy[static_cast<int>(i)] * values[i];
  }
  RegretState next;
  next.kind = state.kind;
  next.stored.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    double v = state.stored[i] + values[i] - expected;
    if (state.kind == MinimizerKind::RegretMatchingPlus && v < 0.0) v = 0.0;
    next.stored[i] = v;
  }
  return next;
}

}  // namespace altcfr
