#pragma once

#include <cstdint>
#include <optional>

#include "qv/equilibrium.hpp"

namespace qv {

/// Bounds for exhaustive search. max_abs_vote caps each ballot entry in the
/// no-budget variant; the fixed-budget variant enumerates exactly the ballots
/// within the configured budget. ballot_ceiling keeps runs desk-scale: going
/// past it is a hard error, never a silent truncation.
struct OracleBound {
  Vote max_abs_vote = 0;
  std::uint64_t ballot_ceiling = 10'000'000;
};

/// Exhaustive best-response search; no pruning by design. Returns the
/// maximum-utility ballot within the bound when it strictly beats the
/// current one, ties resolved toward the lexicographically smallest ballot.
std::optional<Deviation> oracle_deviate(const Election& e,
                                        const StrategyProfile& profile, Index agent,
                                        const OracleBound& bound);

/// Per-agent oracle_deviate; identical report semantics to verify_nash.
NashReport oracle_verify_nash(const Election& e, const StrategyProfile& profile,
                              const OracleBound& bound);

}  // namespace qv
