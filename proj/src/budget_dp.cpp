#include "qv/budget_dp.hpp"

#include <algorithm>
#include <cmath>

namespace qv {

namespace {

Vote clamped_square(Vote gap, Vote budget) {
  const unsigned __int128 g = gap < 0 ? static_cast<unsigned __int128>(-(gap + 1)) + 1
                                      : static_cast<unsigned __int128>(gap);
  const unsigned __int128 sq = g * g;
  const unsigned __int128 cap = static_cast<unsigned __int128>(budget) + 1;
  return sq > cap ? static_cast<Vote>(cap) : static_cast<Vote>(sq);
}

}  // namespace

TakeLeaveCosts take_leave_costs(const Eigen::Ref<const IntVector>& residuals,
                                Vote level, Vote budget) {
  if (budget < 0) throw ArgumentError("take_leave_costs: budget must be non-negative");
  TakeLeaveCosts costs;
  const auto n = static_cast<std::size_t>(residuals.size());
  costs.take.resize(n);
  costs.leave.resize(n);
  for (std::size_t w = 0; w < n; ++w) {
    const Vote s = residuals(static_cast<Index>(w));
    costs.take[w] = clamped_square(level + 1 - s, budget);
    costs.leave[w] = s <= level ? 0 : clamped_square(s - level, budget);
  }
  return costs;
}

DPTable::DPTable(const TakeLeaveCosts& costs,
                 const Eigen::Ref<const IntRowVector>& utilities, Vote budget)
    : n_outcomes_(static_cast<Index>(costs.take.size())),
      budget_(budget),
      costs_(costs),
      utilities_(utilities) {
  if (budget < 0) throw ArgumentError("dp: budget must be non-negative");
  if (static_cast<Index>(costs.leave.size()) != n_outcomes_ ||
      utilities_.size() != n_outcomes_) {
    throw ShapeError("dp: cost and utility lengths disagree");
  }
  const std::size_t cells = static_cast<std::size_t>(n_outcomes_ + 1) *
                            static_cast<std::size_t>(n_outcomes_ + 1) *
                            static_cast<std::size_t>(budget + 1);
  if (cells > (std::size_t{1} << 31)) {
    throw SearchLimitError("dp table would exceed the size ceiling");
  }
  data_.assign(cells, kDpNegInf);
  for (Vote b = 0; b <= budget_; ++b) data_[slot(0, 0, b)] = 0;

  for (Index n = 1; n <= n_outcomes_; ++n) {
    const Vote take = costs_.take[static_cast<std::size_t>(n - 1)];
    const Vote leave = costs_.leave[static_cast<std::size_t>(n - 1)];
    const std::int64_t gain = utilities_(n - 1);
    for (Index p = 0; p <= n; ++p) {
      for (Vote b = 0; b <= budget_; ++b) {
        std::int64_t out = kDpNegInf;
        if (leave <= b) out = data_[slot(n - 1, p, b - leave)];
        if (p > 0 && take <= b) {
          const std::int64_t sub = data_[slot(n - 1, p - 1, b - take)];
          if (sub != kDpNegInf) out = std::max(out, sub + gain);
        }
        data_[slot(n, p, b)] = out;
      }
    }
  }
}

std::size_t DPTable::slot(Index n, Index p, Vote b) const {
  return (static_cast<std::size_t>(n) * static_cast<std::size_t>(n_outcomes_ + 1) +
          static_cast<std::size_t>(p)) *
             static_cast<std::size_t>(budget_ + 1) +
         static_cast<std::size_t>(b);
}

std::int64_t DPTable::value(Index n, Index p, Vote b) const {
  if (n < 0 || n > n_outcomes_ || p < 0 || b < 0 || b > budget_) {
    throw ArgumentError("dp: index out of range");
  }
  if (p > n) return kDpNegInf;
  return data_[slot(n, p, b)];
}

std::optional<std::vector<Index>> DPTable::backtrack_taken(Index w) const {
  if (w < 0 || w > n_outcomes_) throw ArgumentError("dp: winner count out of range");
  if (value(n_outcomes_, w, budget_) == kDpNegInf) return std::nullopt;
  std::vector<Index> taken;
  Index p = w;
  Vote b = budget_;
  for (Index n = n_outcomes_; n >= 1; --n) {
    const Vote leave = costs_.leave[static_cast<std::size_t>(n - 1)];
    const Vote take = costs_.take[static_cast<std::size_t>(n - 1)];
    const std::int64_t here = data_[slot(n, p, b)];
    const bool leave_matches = leave <= b && p <= n - 1 &&
                               data_[slot(n - 1, p, b - leave)] == here;
    if (leave_matches) {
      b -= leave;
      continue;
    }
    const std::int64_t sub =
        (p > 0 && take <= b) ? data_[slot(n - 1, p - 1, b - take)] : kDpNegInf;
    if (sub == kDpNegInf || sub + utilities_(n - 1) != here) {
      throw Error("dp backtracking lost the optimum; table is inconsistent");
    }
    taken.push_back(n - 1);
    --p;
    b -= take;
  }
  std::reverse(taken.begin(), taken.end());
  return taken;
}

std::int64_t dp_value(const TakeLeaveCosts& costs,
                      const Eigen::Ref<const IntRowVector>& utilities, Index n,
                      Index p, Vote b) {
  Vote budget = b;
  for (Vote c : costs.take) budget = std::max(budget, c);
  for (Vote c : costs.leave) budget = std::max(budget, c);
  return DPTable(costs, utilities, budget).value(n, p, b);
}

Vote floor_isqrt(Vote value) {
  if (value < 0) throw ArgumentError("isqrt of a negative value");
  auto root = static_cast<Vote>(std::sqrt(static_cast<double>(value)));
  const auto sq = [](Vote k) { return static_cast<__int128>(k) * k; };
  while (root > 0 && sq(root) > value) --root;
  while (sq(root + 1) <= value) ++root;
  return root;
}

Vote ceil_isqrt(Vote value) {
  const Vote root = floor_isqrt(value);
  return root * root == value ? root : root + 1;
}

std::optional<Deviation> deviate_fixed(const Election& e,
                                       const StrategyProfile& profile, Index agent) {
  const FixedBudget& fb = as_fixed_budget(e.config);
  validate_profile_shape(e, profile);
  validate_agent(e, agent);
  validate_agent_budget(e, profile, agent);  // opponent ballots are taken as given

  const Index n = e.num_outcomes();
  const ResidualTally res(profile, agent);
  const IntRowVector utilities = e.utilities.row(agent);
  const Rat baseline = total_utility(e, profile, agent, /*include_refund=*/false);

  const Vote lambda = res.max_residual();
  const Vote level_lo = lambda - ceil_isqrt(fb.budget) - 1;
  const Vote level_hi = lambda + floor_isqrt(fb.budget);

  std::optional<Deviation> best;
  BigInt best_cost = 0;
  Vote best_level = 0;

  for (Vote level = level_lo; level <= level_hi; ++level) {
    const TakeLeaveCosts costs = take_leave_costs(res.residuals(), level, fb.budget);
    const DPTable dp(costs, utilities, fb.budget);
    for (Index w = 1; w <= n; ++w) {
      const std::int64_t sum = dp.value(n, w, fb.budget);
      if (sum == kDpNegInf) continue;
      Rat utility = Rat(BigInt(sum)) / Rat(w);
      if (utility <= baseline) continue;
      if (best && utility < best->utility) continue;

      const auto taken = dp.backtrack_taken(w);
      IntVector strategy = reconstruct_strategy(res, level, *taken);
      BigInt cost = squared_vote_sum(strategy);

      const bool better =
          !best || utility > best->utility ||
          (utility == best->utility &&
           (cost < best_cost ||
            (cost == best_cost &&
             (level < best_level ||
              (level == best_level &&
               std::lexicographical_compare(strategy.data(), strategy.data() + n,
                                            best->strategy.data(),
                                            best->strategy.data() + n))))));
      if (better) {
        best = Deviation{std::move(strategy), std::move(utility)};
        best_cost = std::move(cost);
        best_level = level;
      }
    }
  }
  return best;
}

}  // namespace qv
