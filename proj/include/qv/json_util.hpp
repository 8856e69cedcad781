#pragma once

#include <nlohmann/json.hpp>

#include "qv/election.hpp"

namespace qv {

nlohmann::json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json vector_to_json(const IntVector& v);
IntVector vector_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace qv
