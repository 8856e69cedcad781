#include "qv/best_response.hpp"

#include <algorithm>
#include <utility>

namespace qv {

ResidualTally::ResidualTally(const StrategyProfile& profile, Index agent) {
  if (profile.rows() < 1 || profile.cols() < 1) {
    throw ShapeError("cannot build residuals from an empty profile");
  }
  if (agent < 0 || agent >= profile.rows()) {
    throw ArgumentError("residuals: agent index out of range");
  }
  residuals_ = profile.colwise().sum().transpose() - profile.row(agent).transpose();
  sort_order();
}

ResidualTally::ResidualTally(IntVector residuals) : residuals_(std::move(residuals)) {
  if (residuals_.size() < 1) throw ShapeError("residual vector must be non-empty");
  sort_order();
}

void ResidualTally::sort_order() {
  order_.resize(static_cast<std::size_t>(residuals_.size()));
  for (Index i = 0; i < residuals_.size(); ++i) order_[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order_.begin(), order_.end(), [&](Index a, Index b) {
    if (residuals_(a) != residuals_(b)) return residuals_(a) > residuals_(b);
    return a < b;
  });
}

ExtRat ResidualTally::sorted_residual_ext(Index pos) const {
  if (pos <= 0) return ExtRat::pos_inf();
  if (pos > num_outcomes()) return ExtRat::neg_inf();
  return ExtRat(sorted_residual(pos));
}

std::vector<Index> rank_w_minus(const ResidualTally& res,
                                const Eigen::Ref<const IntRowVector>& utilities,
                                Index m, Index w_size, Index total_w,
                                const Rat& alpha) {
  if (w_size < 0 || m < 0 || m > res.num_outcomes()) {
    throw ArgumentError("rank_w_minus: m out of range");
  }
  if (w_size > m) throw ArgumentError("rank_w_minus: w_size exceeds m");
  if (total_w < 1) throw ArgumentError("rank_w_minus: the winner set must be non-empty");
  if (w_size == 0) return {};

  std::vector<Index> top(static_cast<std::size_t>(m));
  for (Index pos = 1; pos <= m; ++pos) {
    top[static_cast<std::size_t>(pos - 1)] = res.outcome_at(pos);
  }
  std::vector<std::pair<Rat, Index>> scored;
  scored.reserve(top.size());
  for (Index w : top) {
    Rat f = Rat(BigInt(utilities(w))) / Rat(total_w) +
            Rat(2) * alpha * Rat(BigInt(res.residual(w)));
    scored.emplace_back(std::move(f), w);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(w_size));
  for (Index k = 0; k < w_size; ++k) {
    chosen.push_back(scored[static_cast<std::size_t>(k)].second);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::optional<Rat> optimal_v(const ResidualTally& res, Index m,
                             const std::vector<Index>& w_plus, Index total_w) {
  const Index denom = m + static_cast<Index>(w_plus.size());
  if (denom == 0) return std::nullopt;
  BigInt sum = 0;
  for (Index pos = 1; pos <= m; ++pos) sum += BigInt(res.sorted_residual(pos));
  for (Index w : w_plus) sum += BigInt(res.residual(w));
  sum -= total_w;
  return Rat(sum) / Rat(denom);
}

std::vector<Vote> integer_v_candidates(const Rat& v_star, const ExtRat& v_min,
                                       const ExtRat& v_max) {
  if (v_max < v_min) return {};
  std::vector<BigInt> raw;
  if (v_min.finite()) raw.push_back(rat_ceil(v_min.value()));
  raw.push_back(rat_floor(v_star));
  raw.push_back(rat_ceil(v_star));
  if (v_max.finite()) raw.push_back(rat_floor(v_max.value()));

  std::vector<Vote> out;
  for (const BigInt& c : raw) {
    const ExtRat as_ext{Rat(c)};
    if (as_ext < v_min || as_ext > v_max) continue;
    out.push_back(to_int64(c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntersectionSet intersection_set(const ResidualTally& res,
                                 const Eigen::Ref<const IntRowVector>& utilities,
                                 Index total_w, const Rat& alpha) {
  if (total_w < 1) throw ArgumentError("intersection_set: winner set must be non-empty");
  std::vector<Rat> finite;
  const Index n = res.num_outcomes();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const Vote sa = res.residual(a);
      const Vote sb = res.residual(b);
      if (sa == sb) continue;  // parallel curves
      // u_a/T - alpha*(V+1-s_a)^2 = u_b/T - alpha*(V+1-s_b)^2, linear in V.
      const Rat du = Rat(BigInt(utilities(a)) - BigInt(utilities(b)));
      const Rat d = Rat(BigInt(sb) - BigInt(sa));
      Rat v = (du / (alpha * Rat(total_w) * d) + Rat(BigInt(sa) + BigInt(sb))) / Rat(2) -
              Rat(1);
      finite.push_back(std::move(v));
    }
  }
  std::sort(finite.begin(), finite.end());
  finite.erase(std::unique(finite.begin(), finite.end()), finite.end());

  IntersectionSet set;
  set.breakpoints.reserve(finite.size() + 2);
  set.breakpoints.push_back(ExtRat::neg_inf());
  for (Rat& v : finite) set.breakpoints.emplace_back(std::move(v));
  set.breakpoints.push_back(ExtRat::pos_inf());
  return set;
}

Rat g_value(const ResidualTally& res, const Eigen::Ref<const IntRowVector>& utilities,
            Index total_w, const Rat& alpha, Index outcome, const Rat& v) {
  const Rat gap = v + Rat(1) - Rat(BigInt(res.residual(outcome)));
  return Rat(BigInt(utilities(outcome))) / Rat(total_w) - alpha * gap * gap;
}

IntVector reconstruct_strategy(const ResidualTally& res, Vote level,
                               const std::vector<Index>& winner_set) {
  IntVector strategy = IntVector::Zero(res.num_outcomes());
  std::vector<bool> in_w(static_cast<std::size_t>(res.num_outcomes()), false);
  for (Index w : winner_set) {
    in_w[static_cast<std::size_t>(w)] = true;
    strategy(w) = level + 1 - res.residual(w);
  }
  for (Index w = 0; w < res.num_outcomes(); ++w) {
    if (!in_w[static_cast<std::size_t>(w)] && res.residual(w) > level) {
      strategy(w) = level - res.residual(w);
    }
  }
  return strategy;
}

namespace {

// A rational point inside [lo, hi] at which the interval's g-ordering holds.
Rat interval_eval_point(const ExtRat& lo, const ExtRat& hi) {
  if (lo.finite() && hi.finite()) return (lo.value() + hi.value()) / Rat(2);
  if (lo.finite()) return lo.value() + Rat(1);
  if (hi.finite()) return hi.value() - Rat(1);
  return Rat(0);
}

std::vector<Index> top_by_gain(const ResidualTally& res,
                               const Eigen::Ref<const IntRowVector>& utilities,
                               Index total_w, const Rat& alpha, Index m, Index x,
                               const Rat& eval_point) {
  std::vector<std::pair<Rat, Index>> scored;
  scored.reserve(static_cast<std::size_t>(res.num_outcomes() - m));
  for (Index pos = m + 1; pos <= res.num_outcomes(); ++pos) {
    const Index w = res.outcome_at(pos);
    scored.emplace_back(g_value(res, utilities, total_w, alpha, w, eval_point), w);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(x));
  for (Index k = 0; k < x; ++k) chosen.push_back(scored[static_cast<std::size_t>(k)].second);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

std::optional<Deviation> deviate_nobudget(const Election& e,
                                          const StrategyProfile& profile,
                                          Index agent) {
  const NoBudget& nb = as_no_budget(e.config);
  validate_profile_shape(e, profile);
  validate_agent(e, agent);

  const Index n = e.num_outcomes();
  const ResidualTally res(profile, agent);
  const IntRowVector utilities = e.utilities.row(agent);
  const Rat baseline = total_utility(e, profile, agent, /*include_refund=*/false);

  std::optional<Deviation> best;
  std::vector<Index> best_w;
  Vote best_level = 0;

  StrategyProfile scratch = profile;
  const auto consider = [&](const std::vector<Index>& w_set, Vote level) {
    IntVector strategy = reconstruct_strategy(res, level, w_set);
    scratch.row(agent) = strategy.transpose();
    Rat utility = total_utility(e, scratch, agent, /*include_refund=*/false);
    if (utility <= baseline) return;
    const bool better =
        !best || utility > best->utility ||
        (utility == best->utility &&
         (w_set < best_w || (w_set == best_w && level < best_level)));
    if (better) {
      best = Deviation{std::move(strategy), std::move(utility)};
      best_w = w_set;
      best_level = level;
    }
  };

  for (Index w_bar = 0; w_bar <= n; ++w_bar) {
    for (Index x = 0; w_bar + x <= n; ++x) {
      const Index total_w = w_bar + x;
      if (total_w == 0) continue;
      IntersectionSet gi;
      if (x > 0) {
        gi = intersection_set(res, utilities, total_w, nb.alpha);
      } else {
        gi.breakpoints = {ExtRat::neg_inf(), ExtRat::pos_inf()};
      }
      for (Index m = w_bar; m <= n - x; ++m) {
        const std::vector<Index> w_minus =
            rank_w_minus(res, utilities, m, w_bar, total_w, nb.alpha);
        for (std::size_t j = 0; j + 1 < gi.breakpoints.size(); ++j) {
          const ExtRat v_lo = max(res.sorted_residual_ext(m + 1), gi.breakpoints[j]);
          const ExtRat v_hi =
              min(res.sorted_residual_ext(m) - 1, gi.breakpoints[j + 1]);
          if (v_hi < v_lo) continue;

          std::vector<Index> w_set = w_minus;
          if (x > 0) {
            const Rat eval = interval_eval_point(v_lo, v_hi);
            std::vector<Index> w_plus =
                top_by_gain(res, utilities, total_w, nb.alpha, m, x, eval);
            w_set.insert(w_set.end(), w_plus.begin(), w_plus.end());
            std::sort(w_set.begin(), w_set.end());
            const auto v_star = optimal_v(res, m, w_plus, total_w);
            for (Vote level : integer_v_candidates(*v_star, v_lo, v_hi)) {
              consider(w_set, level);
            }
          } else {
            const auto v_star = optimal_v(res, m, {}, total_w);
            if (!v_star) continue;
            for (Vote level : integer_v_candidates(*v_star, v_lo, v_hi)) {
              consider(w_set, level);
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace qv
