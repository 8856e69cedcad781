#pragma once

#include <optional>
#include <vector>

#include "qv/election.hpp"

namespace qv {

struct Deviation {
  IntVector strategy;  // replacement ballot for the deviating agent
  Rat utility;         // exact utility of the new profile, refund excluded
};

/// Per-outcome vote totals with one agent's ballot removed, kept alongside a
/// descending order (ties by outcome index). Sorted positions are 1-based to
/// allow the +inf / -inf sentinels at 0 and size+1.
class ResidualTally {
 public:
  ResidualTally(const StrategyProfile& profile, Index agent);
  explicit ResidualTally(IntVector residuals);

  Index num_outcomes() const { return residuals_.size(); }
  Vote residual(Index outcome) const { return residuals_(outcome); }
  const IntVector& residuals() const { return residuals_; }

  /// Outcome occupying sorted position pos (1..n, descending residual).
  Index outcome_at(Index pos) const { return order_[static_cast<std::size_t>(pos - 1)]; }
  Vote sorted_residual(Index pos) const { return residuals_(outcome_at(pos)); }
  /// Sorted residual with sentinels: pos 0 -> +inf, pos n+1 -> -inf.
  ExtRat sorted_residual_ext(Index pos) const;

  Vote max_residual() const { return residuals_.maxCoeff(); }

 private:
  void sort_order();

  IntVector residuals_;
  std::vector<Index> order_;
};

/// The w_size outcomes among the top-m (by residual) that maximize
/// f(w) = u_w/|W| + 2*alpha*s_w; ties break toward the lowest outcome index.
/// Returned ascending by outcome index.
std::vector<Index> rank_w_minus(const ResidualTally& res,
                                const Eigen::Ref<const IntRowVector>& utilities,
                                Index m, Index w_size, Index total_w,
                                const Rat& alpha);

/// Unconstrained maximizer of the candidate utility in the target level:
/// (sum of the top-m residuals + sum of the residuals in w_plus - |W|) / (m + |w_plus|).
/// nullopt when m + |w_plus| = 0 (vacuous combination).
std::optional<Rat> optimal_v(const ResidualTally& res, Index m,
                             const std::vector<Index>& w_plus, Index total_w);

/// {ceil(v_min), floor(v_star), ceil(v_star), floor(v_max)} clamped to
/// [v_min, v_max]; empty when the interval is. Utility is concave in the
/// level, so these cover the integer optimum.
std::vector<Vote> integer_v_candidates(const Rat& v_star, const ExtRat& v_min,
                                       const ExtRat& v_max);

/// Breakpoints where two per-outcome gain curves
/// g_w(V) = u_w/total_w - alpha*(V+1-s_w)^2 cross. Equal leading coefficients
/// make each pairwise difference linear, so pairs with distinct residuals
/// cross exactly once and pairs with equal residuals never do.
struct IntersectionSet {
  std::vector<ExtRat> breakpoints;  // sorted, unique, with -inf/+inf sentinels
};
IntersectionSet intersection_set(const ResidualTally& res,
                                 const Eigen::Ref<const IntRowVector>& utilities,
                                 Index total_w, const Rat& alpha);

Rat g_value(const ResidualTally& res, const Eigen::Ref<const IntRowVector>& utilities,
            Index total_w, const Rat& alpha, Index outcome, const Rat& v);

/// Ballot that brings every outcome in winner_set to level+1 total votes and
/// every other outcome with a residual above level down to level.
IntVector reconstruct_strategy(const ResidualTally& res, Vote level,
                               const std::vector<Index>& winner_set);

/// Beneficial-deviation search for the no-budget variant. Enumerates the
/// polynomial candidate set (winner-set sizes, residual cut m, gain-curve
/// intervals, integer levels) and returns the exact-utility maximum when it
/// strictly beats the agent's current utility, refund excluded on both sides.
/// Candidate ties break toward the lowest winner set (by outcome indices),
/// then the smallest level.
std::optional<Deviation> deviate_nobudget(const Election& e,
                                          const StrategyProfile& profile,
                                          Index agent);

}  // namespace qv
