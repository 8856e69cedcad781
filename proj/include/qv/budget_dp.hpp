#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qv/best_response.hpp"
#include "qv/election.hpp"

namespace qv {

/// Per-outcome credit prices at a fixed target level V:
/// take(w) = (V+1-s_w)^2 puts w into the winner set, leave(w) keeps it out
/// (0 when the residual is already at or below V, (s_w-V)^2 otherwise).
/// Values above the budget are clamped to budget+1; only comparisons against
/// the remaining budget matter.
struct TakeLeaveCosts {
  std::vector<Vote> take;
  std::vector<Vote> leave;
};

TakeLeaveCosts take_leave_costs(const Eigen::Ref<const IntVector>& residuals,
                                Vote level, Vote budget);

constexpr std::int64_t kDpNegInf = std::numeric_limits<std::int64_t>::min();

/// dp[n][p][b] = maximum utility sum from taking p of the first n outcomes
/// with at most b credits; infeasible cells hold kDpNegInf. Utility sums stay
/// integral; division by the winner count happens only at extraction.
class DPTable {
 public:
  DPTable(const TakeLeaveCosts& costs,
          const Eigen::Ref<const IntRowVector>& utilities, Vote budget);

  Index num_outcomes() const { return n_outcomes_; }
  Vote budget() const { return budget_; }
  bool feasible(Index n, Index p, Vote b) const { return value(n, p, b) != kDpNegInf; }
  std::int64_t value(Index n, Index p, Vote b) const;

  /// Taken outcome set reaching dp[n][w][budget], reconstructed backwards;
  /// take/leave ties resolve toward leave. nullopt when infeasible.
  std::optional<std::vector<Index>> backtrack_taken(Index w) const;

 private:
  std::size_t slot(Index n, Index p, Vote b) const;

  Index n_outcomes_;
  Vote budget_;
  TakeLeaveCosts costs_;
  IntRowVector utilities_;
  std::vector<std::int64_t> data_;
};

/// Convenience accessor matching the recurrence directly; builds the table.
std::int64_t dp_value(const TakeLeaveCosts& costs,
                      const Eigen::Ref<const IntRowVector>& utilities, Index n,
                      Index p, Vote b);

Vote floor_isqrt(Vote value);
Vote ceil_isqrt(Vote value);

/// Beneficial-deviation search under a fixed budget. Iterates the target
/// level over [lambda - ceil(sqrt(B)) - 1, lambda + floor(sqrt(B))] where
/// lambda is the top residual, solves the take/leave program per level, and
/// returns the best strictly-improving reconstructed ballot. Ties across
/// candidates prefer the cheaper ballot, then the smaller level, then the
/// lexicographically smaller ballot.
std::optional<Deviation> deviate_fixed(const Election& e,
                                       const StrategyProfile& profile, Index agent);

}  // namespace qv
