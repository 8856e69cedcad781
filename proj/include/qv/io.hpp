#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qv/election.hpp"

namespace qv {

struct ParseError : Error {
  ParseError(const std::string& msg, std::string offending_field)
      : Error(msg), field(std::move(offending_field)) {}
  std::string field;
};

/// One election document: the election itself plus, optionally, the ballots
/// cast so far. On disk this is a JSON object with the keys
///   variant    "no_budget" | "fixed_budget"
///   alpha      rational string "p/q", required iff no_budget
///   budget     non-negative integer, required iff fixed_budget
///   utilities  array of integer arrays, one row per agent
///   profile    optional array of integer arrays, same shape
///   outcomes   optional outcome names
///   agents     optional agent names
/// Indices are 0-based everywhere; rationals travel as strings.
struct ElectionDoc {
  Election election;
  std::optional<StrategyProfile> profile;
};

ElectionDoc parse_election(const nlohmann::json& doc);
ElectionDoc load_election_file(const std::filesystem::path& path);
nlohmann::json to_json(const ElectionDoc& doc);

/// The profile, or a ParseError naming the missing field.
const StrategyProfile& require_profile(const ElectionDoc& doc);

}  // namespace qv
