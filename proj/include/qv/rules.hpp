#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qv/election.hpp"

namespace qv {

enum class RuleKind { Plurality, Borda, Approval, Score, QV };

struct RuleId {
  RuleKind kind = RuleKind::Plurality;
  Vote score_max = 10;  // Score only; k >= 1
};

RuleId rule_from_name(const std::string& name, Vote score_max = 10);
std::string rule_name(const RuleId& rule);

/// Ballot derivation from utilities, one row per agent:
///  - Plurality: indicator of the max-utility outcome (ties to the lowest index)
///  - Borda: dense ranks, best unique value worth |outcomes|-1 points
///  - Approval: approve iff utility >= the agent's row mean
///  - Score: round-half-up of k*(u-min)/(max-min); an all-equal row scores 0
///  - QV: pass-through (the argument already is a vote profile; QV has no
///    canonical sincere map from utilities)
IntMatrix sincere_ballots(const RuleId& rule, const IntMatrix& utilities);

/// Aggregate score per outcome. Every supported rule sums ballot columns.
IntVector rule_totals(const RuleId& rule, const IntMatrix& ballots);
/// Argmax of the aggregate; the full tied set, ascending.
std::vector<Index> rule_winner(const RuleId& rule, const IntMatrix& ballots);

enum class Criterion {
  Intensity,
  MajoritySafe,
  Consistency,
  CloneIndependence,
  IIA,
  NFB,
};

Criterion criterion_from_name(const std::string& name);
std::string criterion_name(Criterion c);

struct CriterionResult {
  Criterion criterion = Criterion::Intensity;
  RuleId rule;
  bool holds = false;
  /// The decisive instance: a violation for Consistency/Clone/IIA/NFB, a
  /// majority-favorite-loses witness for MajoritySafe. Self-contained JSON;
  /// feeding it back through check_criterion reproduces the outcome.
  std::optional<nlohmann::json> witness;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// Seeded randomized search. Dimensions are exact, values are sampled.
struct CriterionSearch {
  std::uint64_t seed = 0;
  int trials = 100;
  Index agents = 3;
  Index outcomes = 3;
  Util max_abs_utility = 20;
  Vote max_abs_vote = 3;        // QV profile entries
  std::optional<Rat> alpha;     // QV no-budget context (default 1)
  std::optional<Vote> budget;   // QV fixed-budget context
  Vote nfb_vote_bound = 4;      // betrayal enumeration box for no-budget QV
};

/// Replays one explicit instance. Field layout by criterion (all matrices are
/// arrays of int arrays; "ballots" means rule ballots, a vote profile for QV):
///  - majority_safe:      {"utilities", "ballots"?}
///  - consistency:        {"ballots_a", "ballots_b"}
///  - clone_independence: {"utilities", "ballots"?, "clone_of",
///                         "plurality_splits"? (0/1 per agent)}
///  - iia:                {"utilities", "ballots"?, "added_utilities"? |
///                         "added_votes"?}
///  - nfb:                {"utilities", "agent", "ballots"? (QV current
///                         profile), "variant"?, "alpha"?, "budget"?,
///                         "max_abs_vote"?}
///  - intensity:          {} (structural property, reported descriptively)
///
/// NFB flags a violation when some ballot rating another outcome strictly
/// above every sincere favorite earns strictly more than the agent's current
/// utility (the given profile row for QV, the sincere ballot otherwise).
/// MajoritySafe has inverted polarity: holds when an instance exhibits a
/// majority favorite losing, so the stored instance is a safety witness
/// rather than a counterexample.
CriterionResult check_criterion(Criterion c, const RuleId& rule,
                                const nlohmann::json& instance);

CriterionResult check_criterion(Criterion c, const RuleId& rule,
                                const CriterionSearch& search);

}  // namespace qv
