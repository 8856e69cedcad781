#include <algorithm>

#include "doctest.h"
#include "qv/collusion.hpp"
#include "support.hpp"

using namespace qv;
using qv::testing::InstanceGen;
using qv::testing::make_matrix;
using qv::testing::make_vector;

namespace {

Coalition everyone(const StrategyProfile& profile) {
  std::vector<Index> all;
  for (Index i = 0; i < profile.rows(); ++i) all.push_back(i);
  return Coalition{all};
}

}  // namespace

TEST_CASE("opposing-vote cancellation trace") {
  const StrategyProfile profile = make_matrix({{7}, {-9}, {5}, {-1}, {1}});
  const auto result = cancel_opposing(profile, everyone(profile), 0);
  CHECK(result.profile.col(0).transpose() == make_vector({0, 0, 2, 0, 1}).transpose());
  CHECK(result.d_trace == std::vector<Vote>{10, 3, 3, 0, 0});
}

TEST_CASE("exact cancellation and the mirrored case") {
  const StrategyProfile pair = make_matrix({{3}, {-3}});
  CHECK(cancel_opposing(pair, everyone(pair), 0).profile.col(0).isZero());

  const StrategyProfile mirrored = make_matrix({{-7}, {9}, {-5}, {1}, {-1}});
  const auto result = cancel_opposing(mirrored, everyone(mirrored), 0);
  CHECK(result.profile.col(0).transpose() == make_vector({0, 0, -2, 0, -1}).transpose());
}

TEST_CASE("cancellation requires opposing votes") {
  const StrategyProfile one_way = make_matrix({{3}, {2}});
  CHECK_THROWS_AS(cancel_opposing(one_way, everyone(one_way), 0), ArgumentError);
}

TEST_CASE("cancellation preserves sums, shrinks magnitudes, helps someone") {
  InstanceGen gen(59);
  int exercised = 0;
  while (exercised < 200) {
    const Index agents = gen.pick(2, 5);
    const Index outcomes = gen.pick(1, 3);
    const StrategyProfile profile = gen.int_matrix(agents, outcomes, -6, 6);
    const Index outcome = gen.pick(0, outcomes - 1);
    const Coalition coalition = everyone(profile);

    Vote pro = 0;
    Vote contra = 0;
    for (Index i = 0; i < agents; ++i) {
      if (profile(i, outcome) > 0) pro += profile(i, outcome);
      if (profile(i, outcome) < 0) contra -= profile(i, outcome);
    }
    if (pro == 0 || contra == 0) continue;
    ++exercised;

    const auto result = cancel_opposing(profile, coalition, outcome);
    for (Vote d : result.d_trace) CHECK(d >= 0);  // the loop invariant
    CHECK(result.profile.col(outcome).sum() == profile.col(outcome).sum());
    for (Index i = 0; i < agents; ++i) {
      CHECK(std::abs(result.profile(i, outcome)) <= std::abs(profile(i, outcome)));
      for (Index w = 0; w < outcomes; ++w) {
        if (w != outcome) CHECK(result.profile(i, w) == profile(i, w));
      }
    }
    const auto check = verify_collusion(profile, result.profile, coalition);
    CHECK(check.ok());
  }
}

TEST_CASE("claimed preference graph edges") {
  const PreferenceGraph g = build_preference_graph(make_matrix({{1, 0, 3}}));
  REQUIRE(g.edges.size() == 3);
  // phi->omega (weak), omega->psi and phi->psi (strict per the vote-gap rule)
  const auto has_edge = [&](Index from, Index to, bool strict) {
    return std::any_of(g.edges.begin(), g.edges.end(), [&](const PrefEdge& e) {
      return e.from == from && e.to == to && e.agent == 0 &&
             e.strictly_beneficial == strict;
    });
  };
  CHECK(has_edge(1, 0, false));
  CHECK(has_edge(0, 2, true));
  CHECK(has_edge(1, 2, true));

  CHECK(build_preference_graph(make_matrix({{2, 2, 2}})).edges.empty());
}

TEST_CASE("aligned ballots make an acyclic graph") {
  const StrategyProfile profile = make_matrix({{6, 5, -4}, {10, 1, -1}});
  const PreferenceGraph g = build_preference_graph(profile);
  CHECK(g.edges.size() == 6);
  for (const PrefEdge& e : g.edges) {
    CHECK(profile(e.agent, e.from) < profile(e.agent, e.to));
  }
  CHECK(!has_cycle(g));
  CHECK(!find_beneficial_cycle(g));
}

TEST_CASE("empty profile has no edges and no cycle") {
  const PreferenceGraph g = build_preference_graph(IntMatrix::Zero(3, 3));
  CHECK(g.edges.empty());
  CHECK(!find_beneficial_cycle(g));
}

TEST_CASE("the three-agent transfer cycle reproduces the worked example") {
  const StrategyProfile before = make_matrix({{1, 0, 3}, {3, 1, 0}, {0, 6, 2}});
  const auto cycle = find_beneficial_cycle(build_preference_graph(before));
  REQUIRE(cycle);
  REQUIRE(cycle->size() == 3);
  CHECK((*cycle)[0].from == 0);
  CHECK((*cycle)[0].to == 2);
  CHECK((*cycle)[0].agent == 0);
  CHECK((*cycle)[1].from == 2);
  CHECK((*cycle)[1].to == 1);
  CHECK((*cycle)[1].agent == 2);
  CHECK((*cycle)[2].from == 1);
  CHECK((*cycle)[2].to == 0);
  CHECK((*cycle)[2].agent == 1);
  CHECK(std::any_of(cycle->begin(), cycle->end(),
                    [](const PrefEdge& e) { return e.strictly_beneficial; }));

  const StrategyProfile after = apply_cycle_transfers(before, *cycle);
  CHECK(after == make_matrix({{2, 0, 2}, {2, 2, 0}, {0, 5, 3}}));

  CHECK(squared_vote_sum(before.row(0)) == 10);
  CHECK(squared_vote_sum(after.row(0)) == 8);
  CHECK(squared_vote_sum(before.row(1)) == 10);
  CHECK(squared_vote_sum(after.row(1)) == 8);
  CHECK(squared_vote_sum(before.row(2)) == 40);
  CHECK(squared_vote_sum(after.row(2)) == 34);

  CHECK(verify_collusion(before, after, everyone(before)).ok());
}

TEST_CASE("an empty cycle is the identity transfer") {
  const StrategyProfile profile = make_matrix({{1, 2}, {3, 4}});
  CHECK(apply_cycle_transfers(profile, {}) == profile);
}

TEST_CASE("collusion verification on explicit pairs") {
  SUBCASE("the acyclic worked example passes") {
    const StrategyProfile before = make_matrix({{6, 5, -4}, {10, 1, -1}});
    const StrategyProfile after = make_matrix({{7, 4, -3}, {9, 2, -2}});
    const auto check = verify_collusion(before, after, everyone(before));
    CHECK(check.ok());
    CHECK(squared_vote_sum(before.row(0)) == 77);
    CHECK(squared_vote_sum(after.row(0)) == 74);
    CHECK(squared_vote_sum(before.row(1)) == 102);
    CHECK(squared_vote_sum(after.row(1)) == 89);
  }
  SUBCASE("balanced exchange passes") {
    const StrategyProfile before = make_matrix({{1, 3}, {3, 1}});
    const StrategyProfile after = make_matrix({{2, 2}, {2, 2}});
    CHECK(verify_collusion(before, after, everyone(before)).ok());
  }
  SUBCASE("payment increases fail") {
    const StrategyProfile before = make_matrix({{3, 1}, {1, 3}});
    const StrategyProfile after = make_matrix({{4, 0}, {0, 4}});
    const auto check = verify_collusion(before, after, everyone(before));
    CHECK(check.totals_preserved);
    CHECK(!check.no_member_pays_more);
    CHECK(!check.ok());
  }
  SUBCASE("rows outside the coalition must not move") {
    const StrategyProfile before = make_matrix({{1, 3}, {3, 1}});
    const StrategyProfile after = make_matrix({{1, 3}, {1, 3}});
    CHECK_THROWS_AS(verify_collusion(before, after, Coalition{{0}}), ArgumentError);
  }
  SUBCASE("budget feasibility is asserted when given") {
    const StrategyProfile before = make_matrix({{1, 3}, {3, 1}});
    const StrategyProfile after = make_matrix({{2, 2}, {2, 2}});
    const auto check = verify_collusion(before, after, everyone(before), Vote{8});
    CHECK(check.within_budget == true);
    CHECK(check.ok());
  }
}

TEST_CASE("verification is invariant under coalition relabeling") {
  InstanceGen gen(61);
  for (int trial = 0; trial < 50; ++trial) {
    const StrategyProfile before = gen.int_matrix(3, 3, -4, 4);
    const auto cycle = find_beneficial_cycle(build_preference_graph(before));
    if (!cycle) continue;
    const StrategyProfile after = apply_cycle_transfers(before, *cycle);
    const auto base = verify_collusion(before, after, everyone(before));

    std::vector<Index> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), gen.rng());
    StrategyProfile before_p(3, 3);
    StrategyProfile after_p(3, 3);
    for (Index i = 0; i < 3; ++i) {
      before_p.row(i) = before.row(perm[static_cast<std::size_t>(i)]);
      after_p.row(i) = after.row(perm[static_cast<std::size_t>(i)]);
    }
    const auto permuted = verify_collusion(before_p, after_p, everyone(before_p));
    CHECK(permuted.ok() == base.ok());
    CHECK(permuted.totals_preserved == base.totals_preserved);
  }
}

TEST_CASE("constructed cycles always verify") {
  InstanceGen gen(67);
  int found = 0;
  for (int trial = 0; trial < 400 && found < 120; ++trial) {
    const Index agents = gen.pick(2, 4);
    const Index outcomes = gen.pick(2, 4);
    const StrategyProfile before = gen.int_matrix(agents, outcomes, 0, 6);
    const auto cycle = find_beneficial_cycle(build_preference_graph(before));
    if (!cycle) continue;
    ++found;
    std::vector<Index> members;
    for (const PrefEdge& e : *cycle) members.push_back(e.agent);
    const StrategyProfile after = apply_cycle_transfers(before, *cycle);
    CHECK(verify_collusion(before, after, make_coalition(members, agents)).ok());
    for (Index w = 0; w < outcomes; ++w) {
      CHECK(after.col(w).sum() == before.col(w).sum());
    }
  }
  CHECK(found > 0);
}
