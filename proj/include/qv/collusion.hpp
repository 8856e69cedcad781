#pragma once

#include <optional>
#include <vector>

#include "qv/election.hpp"

namespace qv {

struct Coalition {
  std::vector<Index> members;  // sorted, unique, non-empty
};

Coalition make_coalition(std::vector<Index> members, Index num_agents);

struct CancelResult {
  StrategyProfile profile;
  /// Remaining opposite-direction mass at the start of each member iteration.
  std::vector<Vote> d_trace;
};

/// Opposing-votes cancellation on a single outcome column: consumes the
/// weaker direction to shrink the stronger one, member by member in index
/// order. Requires both strictly positive and strictly negative coalition
/// votes on the outcome; the mirrored case (negative mass dominant) runs the
/// same loop with flipped signs. Only the coalition's entries in that column
/// change; their column sum is preserved and no entry grows in magnitude.
CancelResult cancel_opposing(const StrategyProfile& profile, const Coalition& coalition,
                             Index outcome);

struct PrefEdge {
  Index from = 0;
  Index to = 0;
  Index agent = 0;
  bool strictly_beneficial = false;  // votes(from) < votes(to) - 1
  Vote head_votes = 0;               // votes the agent casts on `to`
};

/// Directed multigraph over outcomes: an edge from -> to annotated by agent i
/// whenever i casts fewer votes for `from` than for `to`.
struct PreferenceGraph {
  Index num_outcomes = 0;
  std::vector<PrefEdge> edges;  // sorted by (agent, from, to)
};

PreferenceGraph build_preference_graph(const StrategyProfile& profile);

bool has_cycle(const PreferenceGraph& graph);

/// Simple directed cycle containing at least one strictly beneficial edge,
/// or nullopt. Seeds are the strictly beneficial edges in (agent, from, to)
/// order; the path search back to the seed tail prefers edges whose agent
/// casts the most votes on the head (strongest claimed preference first),
/// then lower (to, agent).
std::optional<std::vector<PrefEdge>> find_beneficial_cycle(const PreferenceGraph& graph);

/// One vote transferred along every cycle edge: +1 on the tail outcome, -1 on
/// the head, in the annotating agent's row. Transfers by the same agent on
/// several edges compose additively.
StrategyProfile apply_cycle_transfers(const StrategyProfile& profile,
                                      const std::vector<PrefEdge>& cycle);

struct CollusionCheck {
  bool totals_preserved = false;    // per-outcome coalition sums unchanged
  bool no_member_pays_more = false;
  bool some_member_pays_less = false;
  std::optional<bool> within_budget;  // set when a budget was supplied

  bool ok() const {
    return totals_preserved && no_member_pays_more && some_member_pays_less &&
           within_budget.value_or(true);
  }
};

/// Checks the strictly-beneficial collusion conditions in exact integer
/// arithmetic. Rows outside the coalition must be identical in both profiles.
/// Passing a budget additionally confirms the after-profile stays feasible
/// (implied by the payment conditions, asserted explicitly).
CollusionCheck verify_collusion(const StrategyProfile& before,
                                const StrategyProfile& after, const Coalition& coalition,
                                std::optional<Vote> budget = std::nullopt);

}  // namespace qv
