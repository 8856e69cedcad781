#pragma once

#include <optional>

#include "qv/best_response.hpp"
#include "qv/budget_dp.hpp"

namespace qv {

struct NashWitness {
  Index agent;
  IntVector strategy;
  Rat gain;  // strictly positive utility improvement, refund excluded
};

struct NashReport {
  bool is_equilibrium = false;
  std::optional<NashWitness> witness;  // present iff not an equilibrium
};

/// Runs the per-variant deviation search for every agent; the profile is a
/// pure Nash equilibrium iff none finds a strictly improving ballot. The
/// witness is the first improving agent by index.
NashReport verify_nash(const Election& e, const StrategyProfile& profile);

}  // namespace qv
