#include "qv/json_util.hpp"

namespace qv {

nlohmann::json matrix_to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix matrix_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ArgumentError(field + ": expected a non-empty array of integer arrays");
  }
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) {
      throw ArgumentError(field + ": rows must be non-empty integer arrays");
    }
    if (cols < 0) cols = static_cast<Index>(row.size());
    if (static_cast<Index>(row.size()) != cols) {
      throw ArgumentError(field + ": rows have unequal lengths");
    }
  }
  IntMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c) {
      const auto& cell = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (!cell.is_number_integer()) {
        throw ArgumentError(field + ": entries must be integers");
      }
      m(i, c) = cell.get<Vote>();
    }
  }
  return m;
}

nlohmann::json vector_to_json(const IntVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

IntVector vector_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ArgumentError(field + ": expected a non-empty integer array");
  }
  IntVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) {
      throw ArgumentError(field + ": entries must be integers");
    }
    v(static_cast<Index>(i)) = j[i].get<Vote>();
  }
  return v;
}

}  // namespace qv
