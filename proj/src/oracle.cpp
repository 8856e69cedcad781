#include "qv/oracle.hpp"

namespace qv {

namespace {

std::uint64_t no_budget_space(Index outcomes, Vote k) {
  std::uint64_t size = 1;
  const auto per_entry = static_cast<std::uint64_t>(2 * k + 1);
  for (Index i = 0; i < outcomes; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / per_entry) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    size *= per_entry;
  }
  return size;
}

std::uint64_t fixed_budget_space(Index outcomes, Vote budget, std::uint64_t cap) {
  if (outcomes == 0) return 1;
  std::uint64_t size = 0;
  const Vote top = floor_isqrt(budget);
  for (Vote v = -top; v <= top; ++v) {
    size += fixed_budget_space(outcomes - 1, budget - v * v, cap);
    if (size > cap) return size;
  }
  return size;
}

template <typename Fn>
void enumerate_box(IntVector& ballot, Index pos, Vote k, const Fn& visit) {
  if (pos == ballot.size()) {
    visit();
    return;
  }
  for (Vote v = -k; v <= k; ++v) {
    ballot(pos) = v;
    enumerate_box(ballot, pos + 1, k, visit);
  }
}

template <typename Fn>
void enumerate_budget(IntVector& ballot, Index pos, Vote remaining, const Fn& visit) {
  if (pos == ballot.size()) {
    visit();
    return;
  }
  const Vote top = floor_isqrt(remaining);
  for (Vote v = -top; v <= top; ++v) {
    ballot(pos) = v;
    enumerate_budget(ballot, pos + 1, remaining - v * v, visit);
  }
}

}  // namespace

std::optional<Deviation> oracle_deviate(const Election& e,
                                        const StrategyProfile& profile, Index agent,
                                        const OracleBound& bound) {
  validate_profile_shape(e, profile);
  validate_agent(e, agent);
  validate_agent_budget(e, profile, agent);

  const Rat baseline = total_utility(e, profile, agent, /*include_refund=*/false);
  StrategyProfile scratch = profile;
  std::optional<Deviation> best;

  const auto visit = [&](const IntVector& ballot) {
    scratch.row(agent) = ballot.transpose();
    Rat utility = total_utility(e, scratch, agent, /*include_refund=*/false);
    if (!best || utility > best->utility) {
      best = Deviation{ballot, std::move(utility)};
    }
  };

  IntVector ballot(e.num_outcomes());
  if (is_no_budget(e.config)) {
    const Vote k = bound.max_abs_vote;
    if (k < 0) throw ArgumentError("oracle: max_abs_vote must be non-negative");
    if (no_budget_space(e.num_outcomes(), k) > bound.ballot_ceiling) {
      throw SearchLimitError("oracle: search space exceeds the ballot ceiling");
    }
    enumerate_box(ballot, 0, k, [&] { visit(ballot); });
  } else {
    const Vote budget = as_fixed_budget(e.config).budget;
    if (fixed_budget_space(e.num_outcomes(), budget, bound.ballot_ceiling) >
        bound.ballot_ceiling) {
      throw SearchLimitError("oracle: search space exceeds the ballot ceiling");
    }
    enumerate_budget(ballot, 0, budget, [&] { visit(ballot); });
  }

  if (best && best->utility > baseline) return best;
  return std::nullopt;
}

NashReport oracle_verify_nash(const Election& e, const StrategyProfile& profile,
                              const OracleBound& bound) {
  validate_profile(e, profile);
  for (Index agent = 0; agent < e.num_agents(); ++agent) {
    if (const auto deviation = oracle_deviate(e, profile, agent, bound)) {
      const Rat current = total_utility(e, profile, agent, /*include_refund=*/false);
      return {false, NashWitness{agent, deviation->strategy,
                                 Rat(deviation->utility - current)}};
    }
  }
  return {true, std::nullopt};
}

}  // namespace qv
