#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qv/best_response.hpp"
#include "qv/budget_dp.hpp"
#include "qv/collusion.hpp"
#include "qv/election.hpp"
#include "qv/equilibrium.hpp"
#include "qv/io.hpp"
#include "qv/json_util.hpp"
#include "qv/oracle.hpp"
#include "qv/rules.hpp"

namespace {

using nlohmann::json;
using namespace qv;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // parse/validation problems
constexpr int kExitNegative = 2; // negative decisions

std::string outcome_name(const Election& e, Index w) {
  if (!e.outcome_labels.empty()) return e.outcome_labels[static_cast<std::size_t>(w)];
  return "outcome " + std::to_string(w);
}

std::string agent_name(const Election& e, Index i) {
  if (!e.agent_labels.empty()) return e.agent_labels[static_cast<std::size_t>(i)];
  return "agent " + std::to_string(i);
}

json probabilities_json(const TallyResult& t) {
  json out = json::array();
  for (Index w = 0; w < t.totals.size(); ++w) {
    out.push_back(rat_to_string(t.probability(w)));
  }
  return out;
}

/// A witness that `utility` accepts back: the election file with the profile
/// row replaced by the deviating ballot.
json replay_doc(const ElectionDoc& doc, Index agent, const IntVector& strategy) {
  ElectionDoc replay = doc;
  StrategyProfile profile = require_profile(doc);
  profile.row(agent) = strategy.transpose();
  replay.profile = profile;
  return to_json(replay);
}

struct WinnerArgs {
  std::string file;
  bool as_json = false;
};

int run_winner(const WinnerArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const TallyResult t = tally(require_profile(doc));
  if (args.as_json) {
    json out;
    out["totals"] = vector_to_json(t.totals);
    out["winners"] = t.winners;
    out["probabilities"] = probabilities_json(t);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "totals:";
  for (Index w = 0; w < t.totals.size(); ++w) std::cout << " " << t.totals(w);
  std::cout << "\nwinners:";
  for (Index w : t.winners) std::cout << " " << outcome_name(doc.election, w);
  std::cout << "\nprobabilities:";
  for (Index w = 0; w < t.totals.size(); ++w) {
    std::cout << " " << rat_to_string(t.probability(w));
  }
  std::cout << "\n";
  return kExitOk;
}

struct UtilityArgs {
  std::string file;
  Index agent = 0;
  bool with_refund = false;
  bool as_json = false;
};

int run_utility(const UtilityArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const Rat u =
      total_utility(doc.election, require_profile(doc), args.agent, args.with_refund);
  if (args.as_json) {
    json out;
    out["agent"] = args.agent;
    out["with_refund"] = args.with_refund;
    out["utility"] = rat_to_string(u);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << agent_name(doc.election, args.agent) << " utility: " << rat_to_string(u)
              << (args.with_refund ? " (refund included)" : "") << "\n";
  }
  return kExitOk;
}

struct DeviateArgs {
  std::string file;
  Index agent = 0;
  bool use_oracle = false;
  Vote max_votes = 4;
  bool as_json = false;
};

int run_deviate(const DeviateArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const StrategyProfile& profile = require_profile(doc);
  std::optional<Deviation> dev;
  if (args.use_oracle) {
    OracleBound bound;
    bound.max_abs_vote = args.max_votes;
    dev = oracle_deviate(doc.election, profile, args.agent, bound);
  } else if (is_no_budget(doc.election.config)) {
    dev = deviate_nobudget(doc.election, profile, args.agent);
  } else {
    dev = deviate_fixed(doc.election, profile, args.agent);
  }

  if (args.as_json) {
    json out;
    out["agent"] = args.agent;
    out["found"] = dev.has_value();
    if (dev) {
      const Rat current = total_utility(doc.election, profile, args.agent, false);
      out["strategy"] = vector_to_json(dev->strategy);
      out["utility"] = rat_to_string(dev->utility);
      out["gain"] = rat_to_string(Rat(dev->utility - current));
      out["replay"] = replay_doc(doc, args.agent, dev->strategy);
    }
    std::cout << out.dump(2) << "\n";
    return dev ? kExitOk : kExitNegative;
  }
  if (!dev) {
    std::cout << "no beneficial deviation for " << agent_name(doc.election, args.agent)
              << "\n";
    return kExitNegative;
  }
  std::cout << agent_name(doc.election, args.agent) << " can deviate to ballot";
  for (Index w = 0; w < dev->strategy.size(); ++w) std::cout << " " << dev->strategy(w);
  std::cout << "\nnew utility: " << rat_to_string(dev->utility) << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string file;
  bool use_oracle = false;
  Vote max_votes = 4;
  bool as_json = false;
};

int run_verify(const VerifyArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const StrategyProfile& profile = require_profile(doc);
  NashReport report;
  if (args.use_oracle) {
    OracleBound bound;
    bound.max_abs_vote = args.max_votes;
    report = oracle_verify_nash(doc.election, profile, bound);
  } else {
    report = verify_nash(doc.election, profile);
  }

  if (args.as_json) {
    json out;
    out["equilibrium"] = report.is_equilibrium;
    if (report.witness) {
      json w;
      w["agent"] = report.witness->agent;
      w["strategy"] = vector_to_json(report.witness->strategy);
      w["gain"] = rat_to_string(report.witness->gain);
      w["replay"] = replay_doc(doc, report.witness->agent, report.witness->strategy);
      out["witness"] = std::move(w);
    }
    std::cout << out.dump(2) << "\n";
  } else if (report.is_equilibrium) {
    std::cout << "the profile is a pure Nash equilibrium\n";
  } else {
    std::cout << "not an equilibrium: " << agent_name(doc.election, report.witness->agent)
              << " gains " << rat_to_string(report.witness->gain) << " with ballot";
    for (Index w = 0; w < report.witness->strategy.size(); ++w) {
      std::cout << " " << report.witness->strategy(w);
    }
    std::cout << "\n";
  }
  return report.is_equilibrium ? kExitOk : kExitNegative;
}

json collusion_check_json(const CollusionCheck& check) {
  json out;
  out["totals_preserved"] = check.totals_preserved;
  out["no_member_pays_more"] = check.no_member_pays_more;
  out["some_member_pays_less"] = check.some_member_pays_less;
  if (check.within_budget) out["within_budget"] = *check.within_budget;
  out["ok"] = check.ok();
  return out;
}

std::optional<Vote> config_budget(const Election& e) {
  if (const auto* fb = std::get_if<FixedBudget>(&e.config)) return fb->budget;
  return std::nullopt;
}

struct CancelArgs {
  std::string file;
  Index outcome = 0;
  std::vector<Index> coalition;
  bool as_json = false;
};

int run_cancel(const CancelArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const StrategyProfile& before = require_profile(doc);
  const Coalition coalition =
      make_coalition(args.coalition, doc.election.num_agents());
  const CancelResult result = cancel_opposing(before, coalition, args.outcome);
  const CollusionCheck check = verify_collusion(before, result.profile, coalition,
                                                config_budget(doc.election));

  if (args.as_json) {
    json out;
    out["outcome"] = args.outcome;
    out["coalition"] = coalition.members;
    out["before_column"] = vector_to_json(before.col(args.outcome));
    out["after_column"] = vector_to_json(result.profile.col(args.outcome));
    out["d_trace"] = result.d_trace;
    out["profile_after"] = matrix_to_json(result.profile);
    out["check"] = collusion_check_json(check);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "column before:";
  for (Index m : coalition.members) std::cout << " " << before(m, args.outcome);
  std::cout << "\ncolumn after: ";
  for (Index m : coalition.members) std::cout << " " << result.profile(m, args.outcome);
  std::cout << "\nD trace:";
  for (Vote d : result.d_trace) std::cout << " " << d;
  std::cout << "\nstrictly beneficial: " << (check.ok() ? "yes" : "no") << "\n";
  return kExitOk;
}

struct CycleArgs {
  std::string file;
  bool as_json = false;
};

int run_cycle(const CycleArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const StrategyProfile& before = require_profile(doc);
  const PreferenceGraph graph = build_preference_graph(before);
  const auto cycle = find_beneficial_cycle(graph);

  json out;
  out["found"] = cycle.has_value();
  out["graph_has_cycle"] = has_cycle(graph);
  if (!cycle) {
    if (args.as_json) {
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "no cycle with a strictly beneficial edge\n";
    }
    return kExitNegative;
  }

  std::vector<Index> members;
  for (const PrefEdge& e : *cycle) members.push_back(e.agent);
  const Coalition coalition = make_coalition(members, doc.election.num_agents());
  const StrategyProfile after = apply_cycle_transfers(before, *cycle);
  const CollusionCheck check =
      verify_collusion(before, after, coalition, config_budget(doc.election));

  if (args.as_json) {
    json edges = json::array();
    for (const PrefEdge& e : *cycle) {
      edges.push_back({{"from", e.from},
                       {"to", e.to},
                       {"agent", e.agent},
                       {"strict", e.strictly_beneficial}});
    }
    out["cycle"] = std::move(edges);
    out["coalition"] = coalition.members;
    out["profile_after"] = matrix_to_json(after);
    json pay_before = json::array();
    json pay_after = json::array();
    for (Index m : coalition.members) {
      pay_before.push_back(squared_vote_sum(before.row(m)).str());
      pay_after.push_back(squared_vote_sum(after.row(m)).str());
    }
    out["payments_before"] = std::move(pay_before);
    out["payments_after"] = std::move(pay_after);
    out["check"] = collusion_check_json(check);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  std::cout << "cycle:";
  for (const PrefEdge& e : *cycle) {
    std::cout << " [" << outcome_name(doc.election, e.from) << " -> "
              << outcome_name(doc.election, e.to) << " by "
              << agent_name(doc.election, e.agent)
              << (e.strictly_beneficial ? ", strict" : "") << "]";
  }
  std::cout << "\npayments:";
  for (Index m : coalition.members) {
    std::cout << " " << agent_name(doc.election, m) << " "
              << squared_vote_sum(before.row(m)).str() << "->"
              << squared_vote_sum(after.row(m)).str();
  }
  std::cout << "\nstrictly beneficial: " << (check.ok() ? "yes" : "no") << "\n";
  return kExitOk;
}

struct CompareArgs {
  std::string file;
  std::string rule;
  Vote score_max = 10;
  bool as_json = false;
};

int run_compare(const CompareArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const RuleId rule = rule_from_name(args.rule, args.score_max);
  if (rule.kind == RuleKind::QV) {
    throw ArgumentError("compare uses a classical rule; QV winners are always reported");
  }
  const IntMatrix ballots = sincere_ballots(rule, doc.election.utilities);
  const IntVector totals = rule_totals(rule, ballots);
  const auto winners = rule_winner(rule, ballots);

  std::optional<TallyResult> qv_result;
  if (doc.profile) qv_result = tally(*doc.profile);

  if (args.as_json) {
    json out;
    out["rule"] = rule_name(rule);
    out["ballots"] = matrix_to_json(ballots);
    out["totals"] = vector_to_json(totals);
    out["winners"] = winners;
    if (qv_result) out["qv_winners"] = qv_result->winners;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << rule_name(rule) << " totals:";
  for (Index w = 0; w < totals.size(); ++w) std::cout << " " << totals(w);
  std::cout << "\n" << rule_name(rule) << " winners:";
  for (Index w : winners) std::cout << " " << outcome_name(doc.election, w);
  std::cout << "\n";
  if (qv_result) {
    std::cout << "qv winners:";
    for (Index w : qv_result->winners) std::cout << " " << outcome_name(doc.election, w);
    std::cout << "\n";
  }
  return kExitOk;
}

struct CriteriaArgs {
  std::string file;
  std::string rule;
  std::string criterion;
  Vote score_max = 10;
  std::uint64_t seed = 0;
  int trials = 100;
  bool as_json = false;
};

int run_criteria(const CriteriaArgs& args) {
  const ElectionDoc doc = load_election_file(args.file);
  const RuleId rule = rule_from_name(args.rule, args.score_max);
  const Criterion criterion = criterion_from_name(args.criterion);

  CriterionSearch search;
  search.seed = args.seed;
  search.trials = args.trials;
  search.agents = doc.election.num_agents();
  search.outcomes = doc.election.num_outcomes();
  if (const auto* nb = std::get_if<NoBudget>(&doc.election.config)) {
    search.alpha = nb->alpha;
  } else {
    search.budget = as_fixed_budget(doc.election.config).budget;
  }

  CriterionResult result;
  if (criterion == Criterion::NFB || criterion == Criterion::MajoritySafe) {
    // The file is itself the instance; fall back to a search only if it is
    // not decisive.
    json instance;
    instance["utilities"] = matrix_to_json(doc.election.utilities);
    if (doc.profile) instance["ballots"] = matrix_to_json(*doc.profile);
    if (criterion == Criterion::NFB) {
      if (rule.kind == RuleKind::QV) {
        require_profile(doc);
        if (search.budget) {
          instance["variant"] = "fixed_budget";
          instance["budget"] = *search.budget;
        } else {
          instance["variant"] = "no_budget";
          instance["alpha"] = rat_to_string(search.alpha.value_or(Rat(1)));
          instance["max_abs_vote"] = search.nfb_vote_bound;
        }
      }
      bool decided = false;
      for (Index agent = 0; agent < doc.election.num_agents() && !decided; ++agent) {
        instance["agent"] = agent;
        result = check_criterion(criterion, rule, instance);
        decided = !result.holds;
      }
      if (!decided && args.trials > 0) result = check_criterion(criterion, rule, search);
    } else {
      result = check_criterion(criterion, rule, instance);
      if (!result.holds && args.trials > 0) {
        result = check_criterion(criterion, rule, search);
      }
    }
  } else {
    result = check_criterion(criterion, rule, search);
  }

  if (args.as_json) {
    json out;
    out["criterion"] = criterion_name(criterion);
    out["rule"] = rule_name(rule);
    out["holds"] = result.holds;
    out["seed"] = result.seed;
    out["trials"] = result.trials;
    if (result.witness) out["witness"] = *result.witness;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << criterion_name(criterion) << " for " << rule_name(rule) << ": "
              << (result.holds ? "holds" : "violated") << " (" << result.trials
              << " trials, seed " << result.seed << ")\n";
    if (result.witness && !args.as_json) {
      std::cout << "witness: " << result.witness->dump() << "\n";
    }
  }
  return result.holds ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-issue quadratic voting toolkit"};
  app.require_subcommand(1);

  WinnerArgs winner_args;
  auto* winner_cmd = app.add_subcommand("winner", "Tally a profile and report winners");
  winner_cmd->add_option("file", winner_args.file, "Election file")->required();
  winner_cmd->add_flag("--json", winner_args.as_json, "Machine-readable output");

  UtilityArgs utility_args;
  auto* utility_cmd = app.add_subcommand("utility", "Exact utility of one agent");
  utility_cmd->add_option("file", utility_args.file, "Election file")->required();
  utility_cmd->add_option("--agent", utility_args.agent, "Agent index")->required();
  utility_cmd->add_flag("--with-refund", utility_args.with_refund,
                        "Include the redistributed refund (no-budget only)");
  utility_cmd->add_flag("--json", utility_args.as_json, "Machine-readable output");

  DeviateArgs deviate_args;
  auto* deviate_cmd =
      app.add_subcommand("deviate", "Search a beneficial unilateral deviation");
  deviate_cmd->add_option("file", deviate_args.file, "Election file")->required();
  deviate_cmd->add_option("--agent", deviate_args.agent, "Agent index")->required();
  deviate_cmd->add_flag("--oracle", deviate_args.use_oracle,
                        "Exhaustive search instead of the polynomial solver");
  deviate_cmd->add_option("--max-votes", deviate_args.max_votes,
                          "Per-entry ballot bound for the no-budget oracle");
  deviate_cmd->add_flag("--json", deviate_args.as_json, "Machine-readable output");

  VerifyArgs verify_args;
  auto* verify_cmd =
      app.add_subcommand("verify-ne", "Check whether the profile is a Nash equilibrium");
  verify_cmd->add_option("file", verify_args.file, "Election file")->required();
  verify_cmd->add_flag("--oracle", verify_args.use_oracle,
                       "Exhaustive search instead of the polynomial solver");
  verify_cmd->add_option("--max-votes", verify_args.max_votes,
                         "Per-entry ballot bound for the no-budget oracle");
  verify_cmd->add_flag("--json", verify_args.as_json, "Machine-readable output");

  auto* collude_cmd = app.add_subcommand("collude", "Coalition strategies");
  collude_cmd->require_subcommand(1);

  CancelArgs cancel_args;
  auto* cancel_cmd = collude_cmd->add_subcommand(
      "cancel", "Cancel opposing coalition votes on one outcome");
  cancel_cmd->add_option("file", cancel_args.file, "Election file")->required();
  cancel_cmd->add_option("--outcome", cancel_args.outcome, "Outcome index")->required();
  cancel_cmd->add_option("--coalition", cancel_args.coalition, "Agent indices")
      ->required()
      ->delimiter(',');
  cancel_cmd->add_flag("--json", cancel_args.as_json, "Machine-readable output");

  CycleArgs cycle_args;
  auto* cycle_cmd = collude_cmd->add_subcommand(
      "cycle", "Find a preference-graph cycle and apply its vote transfers");
  cycle_cmd->add_option("file", cycle_args.file, "Election file")->required();
  cycle_cmd->add_flag("--json", cycle_args.as_json, "Machine-readable output");

  CompareArgs compare_args;
  auto* compare_cmd =
      app.add_subcommand("compare", "Run a classical rule on sincere ballots");
  compare_cmd->add_option("file", compare_args.file, "Election file")->required();
  compare_cmd->add_option("--rule", compare_args.rule, "plurality|borda|approval|score")
      ->required();
  compare_cmd->add_option("--k", compare_args.score_max, "Score ceiling for score voting");
  compare_cmd->add_flag("--json", compare_args.as_json, "Machine-readable output");

  CriteriaArgs criteria_args;
  auto* criteria_cmd = app.add_subcommand("criteria", "Check a voting-rule criterion");
  criteria_cmd->add_option("file", criteria_args.file, "Election file")->required();
  criteria_cmd
      ->add_option("--rule", criteria_args.rule, "plurality|borda|approval|score|qv")
      ->required();
  criteria_cmd
      ->add_option("--criterion", criteria_args.criterion,
                   "intensity|majority-safe|consistency|clone-independence|iia|nfb")
      ->required();
  criteria_cmd->add_option("--k", criteria_args.score_max, "Score ceiling");
  criteria_cmd->add_option("--seed", criteria_args.seed, "Search seed");
  criteria_cmd->add_option("--trials", criteria_args.trials, "Search trials");
  criteria_cmd->add_flag("--json", criteria_args.as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*winner_cmd) return run_winner(winner_args);
    if (*utility_cmd) return run_utility(utility_args);
    if (*deviate_cmd) return run_deviate(deviate_args);
    if (*verify_cmd) return run_verify(verify_args);
    if (*cancel_cmd) return run_cancel(cancel_args);
    if (*cycle_cmd) return run_cycle(cycle_args);
    if (*compare_cmd) return run_compare(compare_args);
    if (*criteria_cmd) return run_criteria(criteria_args);
  } catch (const ParseError& err) {
    std::cerr << "error";
    if (!err.field.empty()) std::cerr << " in field '" << err.field << "'";
    std::cerr << ": " << err.what() << "\n";
    return kExitUsage;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
