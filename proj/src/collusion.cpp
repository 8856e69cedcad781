#include "qv/collusion.hpp"

#include <algorithm>
#include <cassert>

namespace qv {

Coalition make_coalition(std::vector<Index> members, Index num_agents) {
  if (members.empty()) throw ArgumentError("coalition must be non-empty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (Index m : members) {
    if (m < 0 || m >= num_agents) {
      throw ArgumentError("coalition member " + std::to_string(m) + " out of range");
    }
  }
  return Coalition{std::move(members)};
}

CancelResult cancel_opposing(const StrategyProfile& profile, const Coalition& coalition,
                             Index outcome) {
  if (outcome < 0 || outcome >= profile.cols()) {
    throw ArgumentError("cancel_opposing: outcome index out of range");
  }
  for (Index m : coalition.members) {
    if (m < 0 || m >= profile.rows()) {
      throw ArgumentError("cancel_opposing: coalition member out of range");
    }
  }

  Vote pro = 0;
  Vote contra = 0;
  for (Index m : coalition.members) {
    const Vote v = profile(m, outcome);
    if (v > 0) pro += v;
    if (v < 0) contra -= v;
  }
  if (pro == 0 || contra == 0) {
    throw ArgumentError(
        "cancel_opposing: the coalition needs both pro and contra votes on the outcome");
  }

  // The loop assumes the positive mass dominates; otherwise run it mirrored.
  const Vote sign = pro >= contra ? 1 : -1;
  const Vote weaker = pro >= contra ? contra : pro;

  CancelResult result{profile, {}};
  Vote d = weaker;
  for (Index m : coalition.members) {
    result.d_trace.push_back(d);
    const Vote v = sign * profile(m, outcome);
    Vote x = 0;
    if (v > 0) {
      x = std::max<Vote>(0, v - d);
      d -= v - x;
    }
    assert(d >= 0);
    result.profile(m, outcome) = sign * x;
  }
  return result;
}

PreferenceGraph build_preference_graph(const StrategyProfile& profile) {
  PreferenceGraph graph;
  graph.num_outcomes = profile.cols();
  for (Index agent = 0; agent < profile.rows(); ++agent) {
    for (Index from = 0; from < profile.cols(); ++from) {
      for (Index to = 0; to < profile.cols(); ++to) {
        if (from == to) continue;
        const Vote vf = profile(agent, from);
        const Vote vt = profile(agent, to);
        if (vf < vt) {
          graph.edges.push_back({from, to, agent, vf < vt - 1, vt});
        }
      }
    }
  }
  return graph;
}

namespace {

std::vector<std::vector<const PrefEdge*>> adjacency(const PreferenceGraph& graph) {
  std::vector<std::vector<const PrefEdge*>> adj(
      static_cast<std::size_t>(graph.num_outcomes));
  for (const PrefEdge& e : graph.edges) {
    adj[static_cast<std::size_t>(e.from)].push_back(&e);
  }
  for (auto& out : adj) {
    std::sort(out.begin(), out.end(), [](const PrefEdge* a, const PrefEdge* b) {
      if (a->head_votes != b->head_votes) return a->head_votes > b->head_votes;
      if (a->to != b->to) return a->to < b->to;
      return a->agent < b->agent;
    });
  }
  return adj;
}

bool dfs_path(const std::vector<std::vector<const PrefEdge*>>& adj, Index node,
              Index target, std::vector<bool>& visited, std::vector<PrefEdge>& path) {
  for (const PrefEdge* e : adj[static_cast<std::size_t>(node)]) {
    if (e->to == target) {
      path.push_back(*e);
      return true;
    }
    if (visited[static_cast<std::size_t>(e->to)]) continue;
    visited[static_cast<std::size_t>(e->to)] = true;
    path.push_back(*e);
    if (dfs_path(adj, e->to, target, visited, path)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

bool has_cycle(const PreferenceGraph& graph) {
  const auto n = static_cast<std::size_t>(graph.num_outcomes);
  std::vector<std::vector<Index>> next(n);
  for (const PrefEdge& e : graph.edges) {
    next[static_cast<std::size_t>(e.from)].push_back(e.to);
  }
  // 0 = unseen, 1 = on stack, 2 = done
  std::vector<int> state(n, 0);
  const auto walk = [&](auto&& self, Index u) -> bool {
    state[static_cast<std::size_t>(u)] = 1;
    for (Index v : next[static_cast<std::size_t>(u)]) {
      if (state[static_cast<std::size_t>(v)] == 1) return true;
      if (state[static_cast<std::size_t>(v)] == 0 && self(self, v)) return true;
    }
    state[static_cast<std::size_t>(u)] = 2;
    return false;
  };
  for (Index u = 0; u < graph.num_outcomes; ++u) {
    if (state[static_cast<std::size_t>(u)] == 0 && walk(walk, u)) return true;
  }
  return false;
}

std::optional<std::vector<PrefEdge>> find_beneficial_cycle(const PreferenceGraph& graph) {
  const auto adj = adjacency(graph);
  std::vector<PrefEdge> seeds;
  for (const PrefEdge& e : graph.edges) {
    if (e.strictly_beneficial) seeds.push_back(e);
  }
  std::sort(seeds.begin(), seeds.end(), [](const PrefEdge& a, const PrefEdge& b) {
    if (a.agent != b.agent) return a.agent < b.agent;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });

  for (const PrefEdge& seed : seeds) {
    if (seed.to == seed.from) continue;
    std::vector<bool> visited(static_cast<std::size_t>(graph.num_outcomes), false);
    visited[static_cast<std::size_t>(seed.to)] = true;
    std::vector<PrefEdge> path{seed};
    if (dfs_path(adj, seed.to, seed.from, visited, path)) return path;
  }
  return std::nullopt;
}

StrategyProfile apply_cycle_transfers(const StrategyProfile& profile,
                                      const std::vector<PrefEdge>& cycle) {
  StrategyProfile out = profile;
  for (const PrefEdge& e : cycle) {
    if (e.agent < 0 || e.agent >= profile.rows() || e.from < 0 ||
        e.from >= profile.cols() || e.to < 0 || e.to >= profile.cols()) {
      throw ArgumentError("apply_cycle_transfers: edge out of range");
    }
    out(e.agent, e.from) += 1;
    out(e.agent, e.to) -= 1;
  }
  return out;
}

CollusionCheck verify_collusion(const StrategyProfile& before,
                                const StrategyProfile& after, const Coalition& coalition,
                                std::optional<Vote> budget) {
  if (before.rows() != after.rows() || before.cols() != after.cols()) {
    throw ShapeError("verify_collusion: profiles differ in shape");
  }
  std::vector<bool> in_coalition(static_cast<std::size_t>(before.rows()), false);
  for (Index m : coalition.members) {
    if (m < 0 || m >= before.rows()) {
      throw ArgumentError("verify_collusion: coalition member out of range");
    }
    in_coalition[static_cast<std::size_t>(m)] = true;
  }
  for (Index i = 0; i < before.rows(); ++i) {
    if (!in_coalition[static_cast<std::size_t>(i)] && before.row(i) != after.row(i)) {
      throw ArgumentError("verify_collusion: a row outside the coalition changed");
    }
  }

  CollusionCheck check;
  check.totals_preserved = true;
  for (Index w = 0; w < before.cols(); ++w) {
    Vote sum_before = 0;
    Vote sum_after = 0;
    for (Index m : coalition.members) {
      sum_before += before(m, w);
      sum_after += after(m, w);
    }
    if (sum_before != sum_after) check.totals_preserved = false;
  }

  check.no_member_pays_more = true;
  check.some_member_pays_less = false;
  for (Index m : coalition.members) {
    const BigInt pay_before = squared_vote_sum(before.row(m));
    const BigInt pay_after = squared_vote_sum(after.row(m));
    if (pay_after > pay_before) check.no_member_pays_more = false;
    if (pay_after < pay_before) check.some_member_pays_less = true;
  }

  if (budget) {
    bool feasible = true;
    for (const bool ok : validate_budget(after, *budget)) feasible = feasible && ok;
    check.within_budget = feasible;
  }
  return check;
}

}  // namespace qv
