#include "qv/election.hpp"

#include <algorithm>

namespace qv {

const NoBudget& as_no_budget(const ElectionConfig& c) {
  if (const auto* nb = std::get_if<NoBudget>(&c)) return *nb;
  throw ConfigError("expected a no-budget election config");
}

const FixedBudget& as_fixed_budget(const ElectionConfig& c) {
  if (const auto* fb = std::get_if<FixedBudget>(&c)) return *fb;
  throw ConfigError("expected a fixed-budget election config");
}

void validate_election(const Election& e) {
  if (e.utilities.rows() < 1 || e.utilities.cols() < 1) {
    throw ShapeError("election needs at least one agent and one outcome");
  }
  if (const auto* nb = std::get_if<NoBudget>(&e.config)) {
    if (nb->alpha <= 0) throw ConfigError("alpha must be positive");
  } else {
    if (as_fixed_budget(e.config).budget < 0) {
      throw ConfigError("budget must be non-negative");
    }
  }
  if (!e.outcome_labels.empty() &&
      static_cast<Index>(e.outcome_labels.size()) != e.num_outcomes()) {
    throw ShapeError("outcome label count does not match the outcome count");
  }
  if (!e.agent_labels.empty() &&
      static_cast<Index>(e.agent_labels.size()) != e.num_agents()) {
    throw ShapeError("agent label count does not match the agent count");
  }
}

void validate_profile_shape(const Election& e, const StrategyProfile& profile) {
  validate_election(e);
  if (profile.rows() != e.num_agents() || profile.cols() != e.num_outcomes()) {
    throw ShapeError("profile shape does not match the utility matrix");
  }
}

void validate_agent_budget(const Election& e, const StrategyProfile& profile,
                           Index agent) {
  if (const auto* fb = std::get_if<FixedBudget>(&e.config)) {
    if (squared_vote_sum(profile.row(agent)) > BigInt(fb->budget)) {
      throw BudgetError("agent " + std::to_string(agent) + " exceeds the budget of " +
                            std::to_string(fb->budget) + " credits",
                        agent);
    }
  }
}

void validate_profile(const Election& e, const StrategyProfile& profile) {
  validate_profile_shape(e, profile);
  for (Index i = 0; i < profile.rows(); ++i) validate_agent_budget(e, profile, i);
}

void validate_agent(const Election& e, Index agent) {
  if (agent < 0 || agent >= e.num_agents()) {
    throw ArgumentError("agent index " + std::to_string(agent) + " out of range");
  }
}

bool TallyResult::is_winner(Index outcome) const {
  return std::binary_search(winners.begin(), winners.end(), outcome);
}

Rat TallyResult::probability(Index outcome) const {
  if (!is_winner(outcome)) return Rat(0);
  return Rat(1, static_cast<std::int64_t>(winners.size()));
}

TallyResult tally(const StrategyProfile& profile) {
  if (profile.rows() < 1 || profile.cols() < 1) {
    throw ShapeError("cannot tally an empty profile");
  }
  TallyResult result;
  result.totals = profile.colwise().sum();
  const Vote best = result.totals.maxCoeff();
  for (Index w = 0; w < result.totals.size(); ++w) {
    if (result.totals(w) == best) result.winners.push_back(w);
  }
  return result;
}

Rat refund(const StrategyProfile& profile, Index agent, const Rat& alpha) {
  if (alpha <= 0) throw ArgumentError("refund: alpha must be positive");
  if (agent < 0 || agent >= profile.rows()) {
    throw ArgumentError("refund: agent index out of range");
  }
  const Index n = profile.rows();
  if (n < 2) {
    throw RefundUndefinedError("the refund divides by N-1; it is undefined for N=1");
  }
  BigInt others = 0;
  for (Index j = 0; j < n; ++j) {
    if (j == agent) continue;
    others += squared_vote_sum(profile.row(j));
  }
  return alpha * Rat(others) / Rat(n - 1);
}

Rat expected_outcome_utility(const Eigen::Ref<const IntRowVector>& utilities,
                             const TallyResult& result) {
  BigInt winner_sum = 0;
  for (Index w : result.winners) winner_sum += BigInt(utilities(w));
  return Rat(winner_sum) / Rat(static_cast<std::int64_t>(result.winners.size()));
}

Rat total_utility(const Election& e, const StrategyProfile& profile, Index agent,
                  bool include_refund) {
  validate_profile_shape(e, profile);
  validate_agent(e, agent);
  validate_agent_budget(e, profile, agent);
  const TallyResult result = tally(profile);
  const Rat expected = expected_outcome_utility(e.utilities.row(agent), result);
  if (const auto* nb = std::get_if<NoBudget>(&e.config)) {
    Rat u = expected - payment(profile.row(agent), nb->alpha);
    if (include_refund) u += refund(profile, agent, nb->alpha);
    return u;
  }
  return expected;
}

bool decide_binary_motion(const Eigen::Ref<const IntVector>& votes) {
  return votes.sum() >= 0;
}

std::vector<bool> validate_budget(const StrategyProfile& profile, Vote budget) {
  std::vector<bool> ok(static_cast<std::size_t>(profile.rows()));
  for (Index i = 0; i < profile.rows(); ++i) {
    ok[static_cast<std::size_t>(i)] = squared_vote_sum(profile.row(i)) <= BigInt(budget);
  }
  return ok;
}

}  // namespace qv
