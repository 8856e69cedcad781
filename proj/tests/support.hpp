#pragma once

#include <array>
#include <random>
#include <utility>

#include "qv/budget_dp.hpp"
#include "qv/election.hpp"

namespace qv::testing {

inline IntMatrix make_matrix(std::initializer_list<std::initializer_list<Vote>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.begin()->size());
  IntMatrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (Vote v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline IntVector make_vector(std::initializer_list<Vote> values) {
  IntVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (Vote x : values) v(i++) = x;
  return v;
}

/// Seeded instance generator for the randomized suites.
class InstanceGen {
 public:
  explicit InstanceGen(std::uint64_t seed) : rng_(seed) {}

  Vote pick(Vote lo, Vote hi) {
    return std::uniform_int_distribution<Vote>(lo, hi)(rng_);
  }

  IntMatrix int_matrix(Index rows, Index cols, Vote lo, Vote hi) {
    IntMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) m(i, j) = pick(lo, hi);
    }
    return m;
  }

  /// No-budget election + profile. Every agent's residual spread must satisfy
  /// spread + 1 <= oracle_bound for the bounded oracle to provably contain an
  /// optimal deviation; draws outside that coverage are rejected.
  std::pair<Election, StrategyProfile> no_budget_instance(Index max_agents,
                                                          Index max_outcomes,
                                                          Util max_abs_utility,
                                                          Vote max_abs_vote,
                                                          Vote oracle_bound) {
    while (true) {
      const Index agents = pick(1, max_agents);
      const Index outcomes = pick(1, max_outcomes);
      Election e;
      const std::array<Rat, 3> alphas{Rat(1), Rat(1, 2), Rat(2)};
      e.config = NoBudget{alphas[static_cast<std::size_t>(pick(0, 2))]};
      e.utilities = int_matrix(agents, outcomes, -max_abs_utility, max_abs_utility);
      StrategyProfile profile =
          int_matrix(agents, outcomes, -max_abs_vote, max_abs_vote);

      bool covered = true;
      for (Index i = 0; i < agents && covered; ++i) {
        const IntVector residuals =
            profile.colwise().sum().transpose() - profile.row(i).transpose();
        const Vote spread = residuals.maxCoeff() - residuals.minCoeff();
        covered = spread + 1 <= oracle_bound;
      }
      if (covered) return {std::move(e), std::move(profile)};
    }
  }

  StrategyProfile budget_profile(Index agents, Index outcomes, Vote budget,
                                 Vote max_abs_vote) {
    StrategyProfile profile(agents, outcomes);
    for (Index i = 0; i < agents; ++i) {
      for (int attempt = 0;; ++attempt) {
        IntVector row(outcomes);
        for (Index j = 0; j < outcomes; ++j) row(j) = pick(-max_abs_vote, max_abs_vote);
        if (squared_vote_sum(row) <= BigInt(budget) || attempt > 200) {
          if (attempt > 200) row.setZero();
          profile.row(i) = row.transpose();
          break;
        }
      }
    }
    return profile;
  }

  std::pair<Election, StrategyProfile> fixed_budget_instance(Index max_agents,
                                                             Index max_outcomes,
                                                             Util max_abs_utility,
                                                             Vote budget) {
    const Index agents = pick(1, max_agents);
    const Index outcomes = pick(1, max_outcomes);
    Election e;
    e.config = FixedBudget{budget};
    e.utilities = int_matrix(agents, outcomes, -max_abs_utility, max_abs_utility);
    StrategyProfile profile =
        budget_profile(agents, outcomes, budget, floor_isqrt(budget) + 1);
    return {std::move(e), std::move(profile)};
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qv::testing
