#include "qv/rules.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "qv/budget_dp.hpp"
#include "qv/election.hpp"
#include "qv/json_util.hpp"

namespace qv {

namespace {

using nlohmann::json;

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("cannot stack ballots of unequal width");
  IntMatrix out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a;
  out.bottomRows(b.rows()) = b;
  return out;
}

IntMatrix append_column(const IntMatrix& m, const IntVector& col) {
  if (col.size() != m.rows()) throw ShapeError("appended column has the wrong height");
  IntMatrix out(m.rows(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  out.col(m.cols()) = col;
  return out;
}

std::vector<Index> argmax_set(const Eigen::Ref<const IntRowVector>& row) {
  std::vector<Index> out;
  const Vote best = row.maxCoeff();
  for (Index i = 0; i < row.size(); ++i) {
    if (row(i) == best) out.push_back(i);
  }
  return out;
}

Rat expected_rule_utility(const RuleId& rule, const IntMatrix& ballots,
                          const Eigen::Ref<const IntRowVector>& utilities) {
  const auto winners = rule_winner(rule, ballots);
  BigInt sum = 0;
  for (Index w : winners) sum += BigInt(utilities(w));
  return Rat(sum) / Rat(static_cast<std::int64_t>(winners.size()));
}

}  // namespace

RuleId rule_from_name(const std::string& name, Vote score_max) {
  if (name == "plurality" || name == "1p1v") return {RuleKind::Plurality, score_max};
  if (name == "borda") return {RuleKind::Borda, score_max};
  if (name == "approval") return {RuleKind::Approval, score_max};
  if (name == "score") return {RuleKind::Score, score_max};
  if (name == "qv") return {RuleKind::QV, score_max};
  throw ArgumentError("unknown rule: " + name);
}

std::string rule_name(const RuleId& rule) {
  switch (rule.kind) {
    case RuleKind::Plurality: return "plurality";
    case RuleKind::Borda: return "borda";
    case RuleKind::Approval: return "approval";
    case RuleKind::Score: return "score";
    case RuleKind::QV: return "qv";
  }
  throw ArgumentError("unknown rule kind");
}

Criterion criterion_from_name(const std::string& name) {
  if (name == "intensity") return Criterion::Intensity;
  if (name == "majority-safe") return Criterion::MajoritySafe;
  if (name == "consistency") return Criterion::Consistency;
  if (name == "clone-independence") return Criterion::CloneIndependence;
  if (name == "iia") return Criterion::IIA;
  if (name == "nfb") return Criterion::NFB;
  throw ArgumentError("unknown criterion: " + name);
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Intensity: return "intensity";
    case Criterion::MajoritySafe: return "majority-safe";
    case Criterion::Consistency: return "consistency";
    case Criterion::CloneIndependence: return "clone-independence";
    case Criterion::IIA: return "iia";
    case Criterion::NFB: return "nfb";
  }
  throw ArgumentError("unknown criterion");
}

IntMatrix sincere_ballots(const RuleId& rule, const IntMatrix& utilities) {
  if (utilities.rows() < 1 || utilities.cols() < 1) {
    throw ShapeError("sincere_ballots: empty utility matrix");
  }
  const Index n = utilities.rows();
  const Index k = utilities.cols();
  IntMatrix ballots = IntMatrix::Zero(n, k);

  switch (rule.kind) {
    case RuleKind::Plurality:
      for (Index i = 0; i < n; ++i) {
        ballots(i, argmax_set(utilities.row(i)).front()) = 1;
      }
      return ballots;
    case RuleKind::Borda:
      for (Index i = 0; i < n; ++i) {
        std::vector<Vote> values(static_cast<std::size_t>(k));
        for (Index w = 0; w < k; ++w) values[static_cast<std::size_t>(w)] = utilities(i, w);
        std::vector<Vote> distinct = values;
        std::sort(distinct.begin(), distinct.end(), std::greater<>());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (Index w = 0; w < k; ++w) {
          const auto rank = std::find(distinct.begin(), distinct.end(), utilities(i, w)) -
                            distinct.begin();
          ballots(i, w) = k - 1 - static_cast<Vote>(rank);
        }
      }
      return ballots;
    case RuleKind::Approval:
      for (Index i = 0; i < n; ++i) {
        const Vote row_sum = utilities.row(i).sum();
        for (Index w = 0; w < k; ++w) {
          ballots(i, w) = (k * utilities(i, w) >= row_sum) ? 1 : 0;
        }
      }
      return ballots;
    case RuleKind::Score: {
      if (rule.score_max < 1) throw ArgumentError("score rule needs k >= 1");
      for (Index i = 0; i < n; ++i) {
        const Vote lo = utilities.row(i).minCoeff();
        const Vote hi = utilities.row(i).maxCoeff();
        if (lo == hi) continue;  // all-equal row rates everything 0
        for (Index w = 0; w < k; ++w) {
          const Rat scaled = Rat(rule.score_max) *
                             Rat(BigInt(utilities(i, w)) - BigInt(lo)) /
                             Rat(BigInt(hi) - BigInt(lo));
          ballots(i, w) = to_int64(rat_round_half_up(scaled));
        }
      }
      return ballots;
    }
    case RuleKind::QV:
      return utilities;  // already a vote profile
  }
  throw ArgumentError("unknown rule kind");
}

IntVector rule_totals(const RuleId&, const IntMatrix& ballots) {
  if (ballots.rows() < 1 || ballots.cols() < 1) {
    throw ShapeError("rule_totals: empty ballot matrix");
  }
  return ballots.colwise().sum();
}

std::vector<Index> rule_winner(const RuleId& rule, const IntMatrix& ballots) {
  const IntVector totals = rule_totals(rule, ballots);
  std::vector<Index> winners;
  const Vote best = totals.maxCoeff();
  for (Index w = 0; w < totals.size(); ++w) {
    if (totals(w) == best) winners.push_back(w);
  }
  return winners;
}

namespace {

// ---- criterion transformations on explicit instances ----

IntMatrix base_ballots(const RuleId& rule, const json& instance) {
  if (rule.kind == RuleKind::QV || instance.contains("ballots")) {
    return matrix_from_json(instance.at("ballots"), "ballots");
  }
  return sincere_ballots(rule, matrix_from_json(instance.at("utilities"), "utilities"));
}

bool consistency_violated(const RuleId& rule, const IntMatrix& a, const IntMatrix& b) {
  const auto wa = rule_winner(rule, a);
  const auto wb = rule_winner(rule, b);
  std::vector<Index> common;
  std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(),
                        std::back_inserter(common));
  if (common.empty()) return false;  // not applicable
  return rule_winner(rule, vstack(a, b)) != common;
}

bool clone_violated(const RuleId& rule, const json& instance) {
  const IntMatrix before = base_ballots(rule, instance);
  const Index clone_of = instance.at("clone_of").get<Index>();
  if (clone_of < 0 || clone_of >= before.cols()) {
    throw ArgumentError("clone_of out of range");
  }
  const auto winners_before = rule_winner(rule, before);

  IntMatrix after;
  if (rule.kind == RuleKind::Plurality) {
    // A forced single choice splits between the clone and the original;
    // the per-agent direction comes with the instance.
    after = append_column(before, IntVector::Zero(before.rows()));
    std::vector<int> splits(static_cast<std::size_t>(before.rows()), 0);
    if (instance.contains("plurality_splits")) {
      const auto& arr = instance.at("plurality_splits");
      if (static_cast<Index>(arr.size()) != before.rows()) {
        throw ArgumentError("plurality_splits: one entry per agent expected");
      }
      for (std::size_t i = 0; i < arr.size(); ++i) splits[i] = arr[i].get<int>();
    }
    for (Index i = 0; i < before.rows(); ++i) {
      if (before(i, clone_of) == 1 && splits[static_cast<std::size_t>(i)] != 0) {
        after(i, clone_of) = 0;
        after(i, before.cols()) = 1;
      }
    }
  } else {
    // Rated-style extension: the clone copies the original's entry exactly,
    // every other entry held fixed.
    after = append_column(before, before.col(clone_of));
  }

  auto winners_after = rule_winner(rule, after);
  // Collapse the clone back onto its original before comparing: electing the
  // clone in place of the original is not a change of winner.
  for (Index& w : winners_after) {
    if (w == before.cols()) w = clone_of;
  }
  std::sort(winners_after.begin(), winners_after.end());
  winners_after.erase(std::unique(winners_after.begin(), winners_after.end()),
                      winners_after.end());
  return winners_after != winners_before;
}

bool iia_violated(const RuleId& rule, const json& instance) {
  const IntMatrix before = base_ballots(rule, instance);
  const Index k = before.cols();
  IntMatrix after;

  switch (rule.kind) {
    case RuleKind::QV:
      after = append_column(before, vector_from_json(instance.at("added_votes"),
                                                     "added_votes"));
      break;
    case RuleKind::Approval:
    case RuleKind::Score: {
      // Independent evaluation: the new outcome is rated on the agent's
      // original scale, existing entries stay fixed.
      const IntMatrix utilities =
          matrix_from_json(instance.at("utilities"), "utilities");
      const IntVector added =
          vector_from_json(instance.at("added_utilities"), "added_utilities");
      IntVector col = IntVector::Zero(before.rows());
      for (Index i = 0; i < before.rows(); ++i) {
        if (rule.kind == RuleKind::Approval) {
          col(i) = (k * added(i) >= utilities.row(i).sum()) ? 1 : 0;
        } else {
          const Vote lo = utilities.row(i).minCoeff();
          const Vote hi = utilities.row(i).maxCoeff();
          if (lo == hi) continue;
          const Rat scaled = Rat(rule.score_max) * Rat(BigInt(added(i)) - BigInt(lo)) /
                             Rat(BigInt(hi) - BigInt(lo));
          const BigInt rounded = rat_round_half_up(scaled);
          Vote v = rounded < 0 ? 0 : to_int64(rounded);
          col(i) = std::min(v, rule.score_max);
        }
      }
      after = append_column(before, col);
      break;
    }
    case RuleKind::Plurality:
    case RuleKind::Borda: {
      // Forced-choice and ranked ballots cannot hold entries fixed.
      const IntMatrix utilities =
          matrix_from_json(instance.at("utilities"), "utilities");
      const IntVector added =
          vector_from_json(instance.at("added_utilities"), "added_utilities");
      after = sincere_ballots(rule, append_column(utilities, added));
      break;
    }
  }

  const IntVector t_before = rule_totals(rule, before);
  const IntVector t_after = rule_totals(rule, after);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      if (t_before(a) > t_before(b) && t_after(a) < t_after(b)) return true;
    }
  }
  return false;
}

bool majority_witnessed(const RuleId& rule, const json& instance) {
  const IntMatrix utilities = matrix_from_json(instance.at("utilities"), "utilities");
  const IntMatrix ballots = base_ballots(rule, instance);
  if (ballots.cols() != utilities.cols()) {
    throw ShapeError("ballots and utilities disagree on the outcome count");
  }
  const auto winners = rule_winner(rule, ballots);
  const Index n = utilities.rows();
  for (Index w = 0; w < utilities.cols(); ++w) {
    // "Ranked first" means a strict favorite; a tied top row ranks nothing
    // first.
    Index first_count = 0;
    for (Index i = 0; i < n; ++i) {
      if (argmax_set(utilities.row(i)) == std::vector<Index>{w}) ++first_count;
    }
    const bool majority_favorite = 2 * first_count >= n;
    const bool loses = !std::binary_search(winners.begin(), winners.end(), w);
    if (majority_favorite && loses) return true;
  }
  return false;
}

bool is_betrayal(const Eigen::Ref<const IntRowVector>& ballot,
                 const std::vector<Index>& favorites, Index num_outcomes) {
  Vote fav_best = std::numeric_limits<Vote>::min();
  for (Index f : favorites) fav_best = std::max(fav_best, ballot(f));
  for (Index w = 0; w < num_outcomes; ++w) {
    if (std::binary_search(favorites.begin(), favorites.end(), w)) continue;
    if (ballot(w) > fav_best) return true;
  }
  return false;
}

template <typename Fn>
void enumerate_rule_ballots(const RuleId& rule, Index outcomes, const Fn& visit) {
  switch (rule.kind) {
    case RuleKind::Plurality: {
      IntVector b = IntVector::Zero(outcomes);
      for (Index w = 0; w < outcomes; ++w) {
        b.setZero();
        b(w) = 1;
        visit(b);
      }
      return;
    }
    case RuleKind::Borda: {
      if (outcomes > 7) throw SearchLimitError("borda ballot enumeration too large");
      std::vector<Vote> points(static_cast<std::size_t>(outcomes));
      std::iota(points.begin(), points.end(), 0);
      IntVector b(outcomes);
      do {
        for (Index w = 0; w < outcomes; ++w) b(w) = points[static_cast<std::size_t>(w)];
        visit(b);
      } while (std::next_permutation(points.begin(), points.end()));
      return;
    }
    case RuleKind::Approval: {
      if (outcomes > 20) throw SearchLimitError("approval ballot enumeration too large");
      IntVector b(outcomes);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << outcomes); ++mask) {
        for (Index w = 0; w < outcomes; ++w) b(w) = (mask >> w) & 1;
        visit(b);
      }
      return;
    }
    case RuleKind::Score: {
      double space = 1;
      for (Index w = 0; w < outcomes; ++w) space *= static_cast<double>(rule.score_max + 1);
      if (space > 1e6) throw SearchLimitError("score ballot enumeration too large");
      IntVector b = IntVector::Zero(outcomes);
      while (true) {
        visit(b);
        Index pos = 0;
        while (pos < outcomes && b(pos) == rule.score_max) b(pos++) = 0;
        if (pos == outcomes) return;
        ++b(pos);
      }
    }
    case RuleKind::QV:
      throw ArgumentError("QV ballots are enumerated against an election config");
  }
}

struct NfbOutcome {
  bool violated = false;
  IntVector betrayal;
};

NfbOutcome nfb_check(const RuleId& rule, const json& instance) {
  const IntMatrix utilities = matrix_from_json(instance.at("utilities"), "utilities");
  const Index agent = instance.at("agent").get<Index>();
  if (agent < 0 || agent >= utilities.rows()) throw ArgumentError("agent out of range");
  const auto favorites = argmax_set(utilities.row(agent));
  if (static_cast<Index>(favorites.size()) == utilities.cols()) return {};

  NfbOutcome out;
  if (rule.kind == RuleKind::QV) {
    Election e;
    e.utilities = utilities;
    const std::string variant = instance.value("variant", "no_budget");
    if (variant == "fixed_budget") {
      e.config = FixedBudget{instance.at("budget").get<Vote>()};
    } else {
      auto alpha = rat_from_string(instance.value("alpha", "1"));
      if (!alpha || *alpha <= 0) throw ArgumentError("alpha must be a positive rational");
      e.config = NoBudget{*alpha};
    }
    const StrategyProfile profile = matrix_from_json(instance.at("ballots"), "ballots");
    validate_profile_shape(e, profile);
    validate_agent_budget(e, profile, agent);
    const Rat baseline = total_utility(e, profile, agent, /*include_refund=*/false);

    StrategyProfile scratch = profile;
    std::optional<Rat> best;
    const auto visit = [&](const IntVector& ballot) {
      if (!is_betrayal(ballot.transpose(), favorites, e.num_outcomes())) return;
      scratch.row(agent) = ballot.transpose();
      Rat utility = total_utility(e, scratch, agent, /*include_refund=*/false);
      if (utility <= baseline) return;
      if (!best || utility > *best) {
        best = std::move(utility);
        out.betrayal = ballot;
      }
    };
    if (variant == "fixed_budget") {
      const Vote budget = as_fixed_budget(e.config).budget;
      IntVector ballot(e.num_outcomes());
      const std::function<void(Index, Vote)> rec = [&](Index pos, Vote remaining) {
        if (pos == ballot.size()) {
          visit(ballot);
          return;
        }
        const Vote top = floor_isqrt(remaining);
        for (Vote v = -top; v <= top; ++v) {
          ballot(pos) = v;
          rec(pos + 1, remaining - v * v);
        }
      };
      rec(0, budget);
    } else {
      const Vote k = instance.value("max_abs_vote", Vote{4});
      IntVector ballot(e.num_outcomes());
      const std::function<void(Index)> rec = [&](Index pos) {
        if (pos == ballot.size()) {
          visit(ballot);
          return;
        }
        for (Vote v = -k; v <= k; ++v) {
          ballot(pos) = v;
          rec(pos + 1);
        }
      };
      rec(0);
    }
    out.violated = best.has_value();
    return out;
  }

  const IntMatrix sincere = sincere_ballots(rule, utilities);
  const Rat baseline = expected_rule_utility(rule, sincere, utilities.row(agent));
  IntMatrix scratch = sincere;
  std::optional<Rat> best;
  enumerate_rule_ballots(rule, utilities.cols(), [&](const IntVector& ballot) {
    if (!is_betrayal(ballot.transpose(), favorites, utilities.cols())) return;
    scratch.row(agent) = ballot.transpose();
    Rat utility = expected_rule_utility(rule, scratch, utilities.row(agent));
    if (utility <= baseline) return;
    if (!best || utility > *best) {
      best = std::move(utility);
      out.betrayal = ballot;
    }
  });
  out.violated = best.has_value();
  return out;
}

}  // namespace

CriterionResult check_criterion(Criterion c, const RuleId& rule, const json& instance) {
  CriterionResult result;
  result.criterion = c;
  result.rule = rule;

  switch (c) {
    case Criterion::Intensity:
      // Structural property of the ballot language, reported descriptively:
      // vote counts and scores carry strength, single choices and ranks do not.
      result.holds = rule.kind == RuleKind::QV || rule.kind == RuleKind::Score;
      return result;
    case Criterion::MajoritySafe: {
      const bool witnessed = majority_witnessed(rule, instance);
      result.holds = witnessed;
      if (witnessed) result.witness = instance;
      return result;
    }
    case Criterion::Consistency: {
      const IntMatrix a = matrix_from_json(instance.at("ballots_a"), "ballots_a");
      const IntMatrix b = matrix_from_json(instance.at("ballots_b"), "ballots_b");
      const bool violated = consistency_violated(rule, a, b);
      result.holds = !violated;
      if (violated) result.witness = instance;
      return result;
    }
    case Criterion::CloneIndependence: {
      const bool violated = clone_violated(rule, instance);
      result.holds = !violated;
      if (violated) result.witness = instance;
      return result;
    }
    case Criterion::IIA: {
      const bool violated = iia_violated(rule, instance);
      result.holds = !violated;
      if (violated) result.witness = instance;
      return result;
    }
    case Criterion::NFB: {
      const NfbOutcome outcome = nfb_check(rule, instance);
      result.holds = !outcome.violated;
      if (outcome.violated) {
        json witness = instance;
        witness["betrayal_ballot"] = vector_to_json(outcome.betrayal);
        result.witness = std::move(witness);
      }
      return result;
    }
  }
  throw ArgumentError("unknown criterion");
}

namespace {

class Sampler {
 public:
  explicit Sampler(const CriterionSearch& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Vote pick(Vote lo, Vote hi) {
    return std::uniform_int_distribution<Vote>(lo, hi)(rng_);
  }

  IntMatrix utilities() {
    IntMatrix m(cfg_.agents, cfg_.outcomes);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        m(i, j) = pick(-cfg_.max_abs_utility, cfg_.max_abs_utility);
      }
    }
    return m;
  }

  IntVector profile_row(Index outcomes) {
    IntVector row(outcomes);
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (Index j = 0; j < outcomes; ++j) {
        row(j) = pick(-cfg_.max_abs_vote, cfg_.max_abs_vote);
      }
      if (!cfg_.budget || squared_vote_sum(row) <= BigInt(*cfg_.budget)) return row;
    }
    row.setZero();
    return row;
  }

  IntMatrix profile() {
    IntMatrix m(cfg_.agents, cfg_.outcomes);
    for (Index i = 0; i < m.rows(); ++i) m.row(i) = profile_row(cfg_.outcomes).transpose();
    return m;
  }

  IntMatrix ballots(const RuleId& rule) {
    if (rule.kind == RuleKind::QV) return profile();
    return sincere_ballots(rule, utilities());
  }

 private:
  const CriterionSearch& cfg_;
  std::mt19937_64 rng_;
};

}  // namespace

CriterionResult check_criterion(Criterion c, const RuleId& rule,
                                const CriterionSearch& search) {
  CriterionResult result;
  result.criterion = c;
  result.rule = rule;
  result.seed = search.seed;

  if (c == Criterion::Intensity) {
    result.holds = rule.kind == RuleKind::QV || rule.kind == RuleKind::Score;
    return result;
  }

  Sampler sampler(search);
  const auto qv_context = [&](json& instance) {
    if (search.budget) {
      instance["variant"] = "fixed_budget";
      instance["budget"] = *search.budget;
    } else {
      instance["variant"] = "no_budget";
      instance["alpha"] = rat_to_string(search.alpha.value_or(Rat(1)));
      instance["max_abs_vote"] = search.nfb_vote_bound;
    }
  };

  result.holds = c != Criterion::MajoritySafe;  // violation searches start optimistic
  for (int trial = 0; trial < search.trials; ++trial) {
    ++result.trials;
    json instance;
    switch (c) {
      case Criterion::MajoritySafe: {
        instance["utilities"] = matrix_to_json(sampler.utilities());
        if (rule.kind == RuleKind::QV) {
          instance["ballots"] = matrix_to_json(sampler.profile());
        }
        if (majority_witnessed(rule, instance)) {
          result.holds = true;
          result.witness = instance;
          return result;
        }
        break;
      }
      case Criterion::Consistency: {
        // Only pairs with a shared winner exercise the criterion.
        bool found_pair = false;
        for (int attempt = 0; attempt < 50 && !found_pair; ++attempt) {
          const IntMatrix a = sampler.ballots(rule);
          const IntMatrix b = sampler.ballots(rule);
          const auto wa = rule_winner(rule, a);
          const auto wb = rule_winner(rule, b);
          std::vector<Index> common;
          std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(),
                                std::back_inserter(common));
          if (common.empty()) continue;
          found_pair = true;
          instance["ballots_a"] = matrix_to_json(a);
          instance["ballots_b"] = matrix_to_json(b);
          if (consistency_violated(rule, a, b)) {
            result.holds = false;
            result.witness = instance;
            return result;
          }
        }
        break;
      }
      case Criterion::CloneIndependence: {
        if (rule.kind == RuleKind::QV) {
          instance["ballots"] = matrix_to_json(sampler.profile());
        } else {
          instance["utilities"] = matrix_to_json(sampler.utilities());
        }
        instance["clone_of"] = sampler.pick(0, search.outcomes - 1);
        if (rule.kind == RuleKind::Plurality) {
          json splits = json::array();
          for (Index i = 0; i < search.agents; ++i) splits.push_back(sampler.pick(0, 1));
          instance["plurality_splits"] = std::move(splits);
        }
        if (clone_violated(rule, instance)) {
          result.holds = false;
          result.witness = instance;
          return result;
        }
        break;
      }
      case Criterion::IIA: {
        instance["utilities"] = matrix_to_json(sampler.utilities());
        if (rule.kind == RuleKind::QV) {
          instance["ballots"] = matrix_to_json(sampler.profile());
          IntVector added(search.agents);
          for (Index i = 0; i < search.agents; ++i) {
            added(i) = sampler.pick(-search.max_abs_vote, search.max_abs_vote);
          }
          instance["added_votes"] = vector_to_json(added);
        } else {
          IntVector added(search.agents);
          for (Index i = 0; i < search.agents; ++i) {
            added(i) = sampler.pick(-search.max_abs_utility, search.max_abs_utility);
          }
          instance["added_utilities"] = vector_to_json(added);
        }
        if (iia_violated(rule, instance)) {
          result.holds = false;
          result.witness = instance;
          return result;
        }
        break;
      }
      case Criterion::NFB: {
        instance["utilities"] = matrix_to_json(sampler.utilities());
        instance["agent"] = sampler.pick(0, search.agents - 1);
        if (rule.kind == RuleKind::QV) {
          instance["ballots"] = matrix_to_json(sampler.profile());
          qv_context(instance);
        }
        const NfbOutcome outcome = nfb_check(rule, instance);
        if (outcome.violated) {
          result.holds = false;
          instance["betrayal_ballot"] = vector_to_json(outcome.betrayal);
          result.witness = instance;
          return result;
        }
        break;
      }
      case Criterion::Intensity:
        break;
    }
  }
  return result;
}

}  // namespace qv
