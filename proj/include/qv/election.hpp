#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qv/rational.hpp"

namespace qv {

using Vote = std::int64_t;
using Util = std::int64_t;
using Index = Eigen::Index;

/// Rows are agents, columns are outcomes.
using IntMatrix = Eigen::Matrix<Vote, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Vote, Eigen::Dynamic, 1>;
using IntRowVector = Eigen::Matrix<Vote, 1, Eigen::Dynamic>;
using UtilityMatrix = IntMatrix;
using StrategyProfile = IntMatrix;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct ArgumentError : Error {
  using Error::Error;
};
/// The refund formula divides by N-1; a single-agent election has no refund.
struct RefundUndefinedError : Error {
  using Error::Error;
};
struct BudgetError : Error {
  BudgetError(const std::string& msg, Index offending_agent)
      : Error(msg), agent(offending_agent) {}
  Index agent;
};
struct SearchLimitError : Error {
  using Error::Error;
};

/// Payments are real money scaled by alpha; no cap on spending.
struct NoBudget {
  Rat alpha;  // > 0
};
/// Every agent holds the same credit budget; utility has no payment term.
struct FixedBudget {
  Vote budget = 0;  // >= 0
};
using ElectionConfig = std::variant<NoBudget, FixedBudget>;

inline bool is_no_budget(const ElectionConfig& c) {
  return std::holds_alternative<NoBudget>(c);
}
const NoBudget& as_no_budget(const ElectionConfig& c);      // throws ConfigError
const FixedBudget& as_fixed_budget(const ElectionConfig& c);  // throws ConfigError

struct Election {
  ElectionConfig config;
  UtilityMatrix utilities;
  std::vector<std::string> outcome_labels;  // empty or one per outcome
  std::vector<std::string> agent_labels;    // empty or one per agent

  Index num_agents() const { return utilities.rows(); }
  Index num_outcomes() const { return utilities.cols(); }
};

void validate_election(const Election& e);
/// Shape check plus, under a fixed budget, feasibility of every row. Used by
/// whole-profile operations; per-agent operations only constrain the queried
/// agent's ballot (opponent ballots are taken as given).
void validate_profile(const Election& e, const StrategyProfile& profile);
void validate_profile_shape(const Election& e, const StrategyProfile& profile);
void validate_agent_budget(const Election& e, const StrategyProfile& profile, Index agent);
void validate_agent(const Election& e, Index agent);

struct TallyResult {
  IntVector totals;
  std::vector<Index> winners;  // argmax of totals, ascending, non-empty

  bool is_winner(Index outcome) const;
  /// 1/|winners| for members, 0 otherwise; sums to exactly 1.
  Rat probability(Index outcome) const;
};

TallyResult tally(const StrategyProfile& profile);

template <typename Derived>
BigInt squared_vote_sum(const Eigen::MatrixBase<Derived>& ballot) {
  BigInt total = 0;
  for (Index i = 0; i < ballot.size(); ++i) {
    const BigInt v(ballot(i));
    total += v * v;
  }
  return total;
}

/// alpha * sum of squared votes. In fixed-budget contexts call with alpha = 1
/// to get the credit cost.
template <typename Derived>
Rat payment(const Eigen::MatrixBase<Derived>& ballot, const Rat& alpha) {
  if (alpha <= 0) throw ArgumentError("payment: alpha must be positive");
  return alpha * Rat(squared_vote_sum(ballot));
}

/// Mean of the prices paid by the other agents: alpha/(N-1) * sum_{j != i}.
Rat refund(const StrategyProfile& profile, Index agent, const Rat& alpha);

/// Expected winner utility for one agent's utility row against a tally.
Rat expected_outcome_utility(const Eigen::Ref<const IntRowVector>& utilities,
                             const TallyResult& result);

/// No-budget: expected outcome minus payment, plus the refund when asked for.
/// The refund never enters best-response comparisons (it does not depend on
/// the agent's own ballot). Fixed-budget: expected outcome only.
Rat total_utility(const Election& e, const StrategyProfile& profile, Index agent,
                  bool include_refund = false);

/// Binary special case: the motion passes iff the vote sum is non-negative.
bool decide_binary_motion(const Eigen::Ref<const IntVector>& votes);

/// Entry i is true iff agent i's ballot costs at most `budget` credits.
std::vector<bool> validate_budget(const StrategyProfile& profile, Vote budget);

}  // namespace qv
