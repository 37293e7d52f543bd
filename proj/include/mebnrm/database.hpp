#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mebnrm/schema.hpp"

namespace mebnrm {

using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

/// Rows aligned positionally with the schema's attribute list.
struct RelationInstance {
  std::string schema_name;
  std::vector<Row> rows;

  friend bool operator==(const RelationInstance&, const RelationInstance&) = default;
};

/// One instance per relation schema, in schema order.
struct RelationalDatabase {
  RelationalDatabaseSchema schema;
  std::vector<RelationInstance> instances;

  const RelationInstance* instance(std::string_view relation) const;

  friend bool operator==(const RelationalDatabase&, const RelationalDatabase&) = default;
};

/// Where a bad cell lives: relation, 0-based row and attribute index.
struct CellRef {
  std::string relation;
  std::size_t row = 0;
  std::size_t column = 0;
};

using CellLocator = std::function<std::string(const CellRef&)>;

/// Checks arity, domains, non-null and unique keys, and referential
/// integrity. Throws Error; `describe` renders a cell position for messages
/// (defaults to "Relation row N column M").
void validate_database(const RelationalDatabase& db, const CellLocator& describe = {});

}  // namespace mebnrm
