#include "qv/io.hpp"

#include <fstream>

#include "qv/json_util.hpp"

namespace qv {

namespace {

using nlohmann::json;

IntMatrix matrix_field(const json& doc, const std::string& field) {
  try {
    return matrix_from_json(doc.at(field), field);
  } catch (const ArgumentError& err) {
    throw ParseError(err.what(), field);
  }
}

}  // namespace

ElectionDoc parse_election(const json& doc) {
  if (!doc.is_object()) throw ParseError("election document must be a JSON object", "");

  ElectionDoc out;
  if (!doc.contains("variant") || !doc.at("variant").is_string()) {
    throw ParseError("missing or non-string field: variant", "variant");
  }
  const std::string variant = doc.at("variant").get<std::string>();
  if (variant == "no_budget") {
    if (doc.contains("budget")) {
      throw ParseError("a no_budget election must not carry a budget", "budget");
    }
    if (!doc.contains("alpha") || !doc.at("alpha").is_string()) {
      throw ParseError("a no_budget election needs a rational string alpha", "alpha");
    }
    const auto alpha = rat_from_string(doc.at("alpha").get<std::string>());
    if (!alpha || *alpha <= 0) {
      throw ParseError("alpha must be a positive rational like \"1/2\"", "alpha");
    }
    out.election.config = NoBudget{*alpha};
  } else if (variant == "fixed_budget") {
    if (doc.contains("alpha")) {
      throw ParseError("a fixed_budget election must not carry alpha", "alpha");
    }
    if (!doc.contains("budget") || !doc.at("budget").is_number_integer()) {
      throw ParseError("a fixed_budget election needs an integer budget", "budget");
    }
    const Vote budget = doc.at("budget").get<Vote>();
    if (budget < 0) throw ParseError("budget must be non-negative", "budget");
    out.election.config = FixedBudget{budget};
  } else {
    throw ParseError("variant must be \"no_budget\" or \"fixed_budget\"", "variant");
  }

  if (!doc.contains("utilities")) {
    throw ParseError("missing field: utilities", "utilities");
  }
  out.election.utilities = matrix_field(doc, "utilities");

  if (doc.contains("profile")) {
    out.profile = matrix_field(doc, "profile");
    if (out.profile->rows() != out.election.num_agents() ||
        out.profile->cols() != out.election.num_outcomes()) {
      throw ParseError("profile shape does not match utilities", "profile");
    }
  }

  const auto names = [&](const std::string& field, Index expected) {
    std::vector<std::string> labels;
    if (!doc.contains(field)) return labels;
    const auto& arr = doc.at(field);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
      throw ParseError(field + " must list one name per index", field);
    }
    for (const auto& item : arr) {
      if (!item.is_string()) throw ParseError(field + " entries must be strings", field);
      labels.push_back(item.get<std::string>());
    }
    return labels;
  };
  out.election.outcome_labels = names("outcomes", out.election.num_outcomes());
  out.election.agent_labels = names("agents", out.election.num_agents());

  try {
    validate_election(out.election);
    // Shapes only: a file may carry over-budget opponent ballots (they are
    // exogenous input to per-agent queries).
    if (out.profile) validate_profile_shape(out.election, *out.profile);
  } catch (const Error& err) {
    throw ParseError(err.what(), "utilities");
  }
  return out;
}

ElectionDoc load_election_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string(), "file");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& err) {
    throw ParseError("invalid JSON in " + path.string() + ": " + err.what(), "file");
  }
  return parse_election(doc);
}

json to_json(const ElectionDoc& doc) {
  json out;
  if (const auto* nb = std::get_if<NoBudget>(&doc.election.config)) {
    out["variant"] = "no_budget";
    out["alpha"] = rat_to_string(nb->alpha);
  } else {
    out["variant"] = "fixed_budget";
    out["budget"] = as_fixed_budget(doc.election.config).budget;
  }
  out["utilities"] = matrix_to_json(doc.election.utilities);
  if (doc.profile) out["profile"] = matrix_to_json(*doc.profile);
  if (!doc.election.outcome_labels.empty()) out["outcomes"] = doc.election.outcome_labels;
  if (!doc.election.agent_labels.empty()) out["agents"] = doc.election.agent_labels;
  return out;
}

const StrategyProfile& require_profile(const ElectionDoc& doc) {
  if (!doc.profile) {
    throw ParseError("this command needs a profile in the election file", "profile");
  }
  return *doc.profile;
}

}  // namespace qv
