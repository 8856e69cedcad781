#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "qv/election.hpp"
#include "support.hpp"

using namespace qv;
using qv::testing::InstanceGen;

// Mechanics invariants on randomized profiles. The acceptance suite runs the
// same properties at full volume; these runs keep the unit suite fast.

TEST_CASE("refunds redistribute exactly what was paid") {
  InstanceGen gen(71);
  for (int trial = 0; trial < 200; ++trial) {
    const Index agents = gen.pick(2, 5);
    const Index outcomes = gen.pick(1, 4);
    const StrategyProfile profile = gen.int_matrix(agents, outcomes, -5, 5);
    const Rat alpha(gen.pick(1, 6), gen.pick(1, 6));
    Rat paid(0);
    Rat refunded(0);
    for (Index i = 0; i < agents; ++i) {
      paid += payment(profile.row(i), alpha);
      refunded += refund(profile, i, alpha);
    }
    CHECK(paid == refunded);
  }
}

TEST_CASE("winning probabilities form an exact distribution") {
  InstanceGen gen(73);
  for (int trial = 0; trial < 200; ++trial) {
    const StrategyProfile profile =
        gen.int_matrix(gen.pick(1, 4), gen.pick(1, 4), -6, 6);
    const TallyResult t = tally(profile);
    Rat sum(0);
    for (Index w = 0; w < t.totals.size(); ++w) {
      const Rat p = t.probability(w);
      CHECK((p > 0) == t.is_winner(w));
      sum += p;
    }
    CHECK(sum == Rat(1));
  }
}

TEST_CASE("tallies are linear in profiles") {
  InstanceGen gen(79);
  for (int trial = 0; trial < 200; ++trial) {
    const Index agents = gen.pick(1, 4);
    const Index outcomes = gen.pick(1, 4);
    const StrategyProfile a = gen.int_matrix(agents, outcomes, -6, 6);
    const StrategyProfile b = gen.int_matrix(agents, outcomes, -6, 6);
    CHECK(tally(a + b).totals == tally(a).totals + tally(b).totals);
  }
}

TEST_CASE("outcome permutations carry tallies along") {
  InstanceGen gen(83);
  for (int trial = 0; trial < 100; ++trial) {
    const Index agents = gen.pick(1, 4);
    const Index outcomes = gen.pick(2, 4);
    const StrategyProfile profile = gen.int_matrix(agents, outcomes, -6, 6);

    std::vector<Index> perm(static_cast<std::size_t>(outcomes));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.rng());
    StrategyProfile permuted(agents, outcomes);
    for (Index w = 0; w < outcomes; ++w) {
      permuted.col(w) = profile.col(perm[static_cast<std::size_t>(w)]);
    }

    const TallyResult base = tally(profile);
    const TallyResult moved = tally(permuted);
    for (Index w = 0; w < outcomes; ++w) {
      const Index source = perm[static_cast<std::size_t>(w)];
      CHECK(moved.totals(w) == base.totals(source));
      CHECK(moved.probability(w) == base.probability(source));
    }
  }
}

TEST_CASE("doubling alpha doubles the payment term only") {
  InstanceGen gen(89);
  for (int trial = 0; trial < 100; ++trial) {
    const Index agents = gen.pick(1, 4);
    const Index outcomes = gen.pick(1, 4);
    Election e;
    e.config = NoBudget{Rat(gen.pick(1, 4))};
    e.utilities = gen.int_matrix(agents, outcomes, -10, 10);
    const StrategyProfile profile = gen.int_matrix(agents, outcomes, -4, 4);
    const Index agent = gen.pick(0, agents - 1);

    Election doubled = e;
    doubled.config = NoBudget{as_no_budget(e.config).alpha * 2};

    const Rat expected =
        expected_outcome_utility(e.utilities.row(agent), tally(profile));
    const Rat u1 = total_utility(e, profile, agent);
    const Rat u2 = total_utility(doubled, profile, agent);
    CHECK(expected - u2 == (expected - u1) * 2);
  }
}

TEST_CASE("fixed-budget utility ignores alpha-like rescaling entirely") {
  InstanceGen gen(97);
  for (int trial = 0; trial < 100; ++trial) {
    auto [e, profile] = gen.fixed_budget_instance(3, 3, 10, 9);
    const Index agent = gen.pick(0, e.num_agents() - 1);
    const Rat u = total_utility(e, profile, agent);
    CHECK(u == expected_outcome_utility(e.utilities.row(agent), tally(profile)));
  }
}
