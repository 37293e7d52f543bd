#include "mebnrm/database.hpp"

#include <map>
#include <unordered_set>

#include "mebnrm/error.hpp"

namespace mebnrm {

const RelationInstance* RelationalDatabase::instance(std::string_view relation) const {
  for (const auto& inst : instances) {
    if (inst.schema_name == relation) return &inst;
  }
  return nullptr;
}

namespace {

std::string default_description(const CellRef& ref) {
  return ref.relation + " row " + std::to_string(ref.row + 1) + " column " +
         std::to_string(ref.column + 1);
}

std::string key_of(const Row& row, const std::vector<std::size_t>& key_columns) {
  std::string key;
  for (auto c : key_columns) {
    // \x1f cannot collide with a value boundary the way ',' could
    key += row[c].value_or("");
    key.push_back('\x1f');
  }
  return key;
}

}  // namespace

void validate_database(const RelationalDatabase& db, const CellLocator& describe) {
  const auto where = [&](const CellRef& ref) {
    return describe ? describe(ref) : default_description(ref);
  };
  validate_structure(db.schema);
  if (db.instances.size() != db.schema.relations.size()) {
    throw Error(ErrorKind::SchemaMismatch, "database has " + std::to_string(db.instances.size()) +
                                               " instances for " +
                                               std::to_string(db.schema.relations.size()) +
                                               " relation schemas");
  }

  // Primary-key values of single-key relations, for referential checks.
  std::map<std::string, std::unordered_set<std::string>> key_values;

  for (std::size_t r = 0; r < db.schema.relations.size(); ++r) {
    const auto& rel = db.schema.relations[r];
    const auto& inst = db.instances[r];
    if (inst.schema_name != rel.name) {
      throw Error(ErrorKind::SchemaMismatch, "instance '" + inst.schema_name +
                                                 "' is not aligned with relation '" + rel.name +
                                                 "'");
    }
    std::vector<std::size_t> key_columns;
    for (std::size_t c = 0; c < rel.attributes.size(); ++c) {
      if (rel.attributes[c].in_primary_key) key_columns.push_back(c);
    }
    std::unordered_set<std::string> seen;
    auto& single_keys = key_values[rel.name];
    for (std::size_t i = 0; i < inst.rows.size(); ++i) {
      const auto& row = inst.rows[i];
      if (row.size() != rel.attributes.size()) {
        throw Error(ErrorKind::SchemaMismatch,
                    where({rel.name, i, 0}) + ": row has " + std::to_string(row.size()) +
                        " cells, relation has " + std::to_string(rel.attributes.size()) +
                        " attributes");
      }
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& attribute = rel.attributes[c];
        if (!row[c]) {
          if (attribute.in_primary_key) {
            throw Error(ErrorKind::NullPrimaryKey,
                        where({rel.name, i, c}) + ": primary-key attribute '" + attribute.name +
                            "' is null");
          }
          continue;
        }
        if (!attribute.admits(*row[c])) {
          throw Error(ErrorKind::DomainViolation, where({rel.name, i, c}) + ": '" + *row[c] +
                                                      "' is not in Dom(" + attribute.name + ")");
        }
      }
      if (!seen.insert(key_of(row, key_columns)).second) {
        throw Error(ErrorKind::DuplicatePrimaryKey,
                    where({rel.name, i, key_columns.front()}) + ": primary key repeats an earlier row");
      }
      if (key_columns.size() == 1) single_keys.insert(*row[key_columns.front()]);
    }
  }

  for (std::size_t r = 0; r < db.schema.relations.size(); ++r) {
    const auto& rel = db.schema.relations[r];
    const auto& inst = db.instances[r];
    for (std::size_t c = 0; c < rel.attributes.size(); ++c) {
      const auto& attribute = rel.attributes[c];
      if (!attribute.references) continue;
      const auto* target = db.schema.find(*attribute.references);
      // Composite-key targets cannot be referenced by a single cell.
      if (target->primary_key().size() != 1) continue;
      const auto& known = key_values[target->name];
      for (std::size_t i = 0; i < inst.rows.size(); ++i) {
        const auto& cell = inst.rows[i][c];
        if (cell && !known.contains(*cell)) {
          throw Error(ErrorKind::ReferentialIntegrity,
                      where({rel.name, i, c}) + ": '" + *cell + "' is not a key of " +
                          target->name);
        }
      }
    }
  }
}

}  // namespace mebnrm
