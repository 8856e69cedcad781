#include "qv/equilibrium.hpp"

namespace qv {

NashReport verify_nash(const Election& e, const StrategyProfile& profile) {
  validate_profile(e, profile);
  for (Index agent = 0; agent < e.num_agents(); ++agent) {
    const auto deviation = is_no_budget(e.config)
                               ? deviate_nobudget(e, profile, agent)
                               : deviate_fixed(e, profile, agent);
    if (deviation) {
      const Rat current = total_utility(e, profile, agent, /*include_refund=*/false);
      return {false, NashWitness{agent, deviation->strategy,
                                 Rat(deviation->utility - current)}};
    }
  }
  return {true, std::nullopt};
}

}  // namespace qv
