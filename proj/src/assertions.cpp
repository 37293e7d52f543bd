#include "mebnrm/assertions.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "mebnrm/error.hpp"
#include "mebnrm/mapper.hpp"

namespace mebnrm {

namespace {

std::string quote_if_needed(const std::string& token) {
  const bool plain = !token.empty() && token.find_first_of(",()=\" \t\r\n") == std::string::npos;
  if (plain) return token;
  std::string out = "\"";
  for (char c : token) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct MappedRelation {
  const RelationSchema* relation;
  const RelationInstance* instance;
  std::vector<std::size_t> key_columns;
  std::vector<std::size_t> other_columns;
};

MappedRelation resolve(const RelationalDatabase& db, const MFrag& frag) {
  const auto* rel = db.schema.find(frag.name);
  const auto* inst = db.instance(frag.name);
  if (!rel || !inst) {
    throw Error(ErrorKind::SchemaMismatch,
                "MFrag '" + frag.name + "' has no relation in the database");
  }
  MappedRelation out{rel, inst, {}, {}};
  for (std::size_t c = 0; c < rel->attributes.size(); ++c) {
    (rel->attributes[c].in_primary_key ? out.key_columns : out.other_columns).push_back(c);
  }
  if (frag.context_nodes.size() != out.key_columns.size()) {
    throw Error(ErrorKind::SchemaMismatch,
                "MFrag '" + frag.name + "' has " + std::to_string(frag.context_nodes.size()) +
                    " context nodes for a " + std::to_string(out.key_columns.size()) +
                    "-attribute key");
  }
  const auto expected_residents = out.other_columns.empty() ? 1 : out.other_columns.size();
  if (frag.resident_nodes.size() != expected_residents) {
    throw Error(ErrorKind::SchemaMismatch,
                "MFrag '" + frag.name + "' does not match the attributes of relation " + rel->name);
  }
  for (const auto& node : frag.resident_nodes) {
    if (node.arguments.size() != out.key_columns.size()) {
      throw Error(ErrorKind::ArityMismatch,
                  "resident node '" + node.name + "' takes " +
                      std::to_string(node.arguments.size()) + " arguments, relation " +
                      rel->name + " has " + std::to_string(out.key_columns.size()) +
                      " key attributes");
    }
  }
  return out;
}

std::vector<std::string> key_values(const Row& row, const std::vector<std::size_t>& columns) {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (auto c : columns) out.push_back(row[c].value_or(""));
  return out;
}

}  // namespace

std::string format_assertion(const Assertion& assertion) {
  std::string out = quote_if_needed(assertion.node_name) + "(";
  for (std::size_t i = 0; i < assertion.arguments.size(); ++i) {
    if (i > 0) out += ",";
    out += quote_if_needed(assertion.arguments[i]);
  }
  out += ")=" + quote_if_needed(assertion.value);
  return out;
}

std::string format_assertions(const std::vector<Assertion>& assertions) {
  std::string out;
  for (const auto& a : assertions) {
    out += format_assertion(a);
    out += '\n';
  }
  return out;
}

std::vector<Assertion> map_instances(const RelationalDatabase& db, const MTheory& theory,
                                     const MappingConfig& config) {
  (void)config;  // prefixes are already applied to the theory's node names
  std::vector<Assertion> out;
  for (const auto& frag : theory.mfrags) {
    const auto mapped = resolve(db, frag);
    for (const auto& row : mapped.instance->rows) {
      if (row.size() != mapped.relation->attributes.size()) {
        throw Error(ErrorKind::SchemaMismatch, "row width differs from relation " + frag.name);
      }
      auto args = key_values(row, mapped.key_columns);
      if (mapped.other_columns.empty()) {
        out.push_back({frag.resident_nodes.front().name, std::move(args), "true"});
        continue;
      }
      for (std::size_t j = 0; j < mapped.other_columns.size(); ++j) {
        const auto& cell = row[mapped.other_columns[j]];
        if (!cell) continue;
        const auto& node = frag.resident_nodes[j];
        const auto& values = node.possible_values;
        if (values.form == PossibleValues::Form::Enumerated &&
            std::find(values.values.begin(), values.values.end(), *cell) == values.values.end()) {
          throw Error(ErrorKind::DomainViolation,
                      "'" + *cell + "' is not a possible value of " + node.name);
        }
        out.push_back({node.name, args, *cell});
      }
    }
  }
  return out;
}

std::vector<Assertion> enumerate_false_assertions(const RelationalDatabase& db,
                                                  const MTheory& theory,
                                                  const MappingConfig& config) {
  if (!config.closed_world) {
    throw Error(ErrorKind::OpenWorldRequested,
                "false assertions need the closed-world assumption (--emit-false)");
  }
  // Entity type -> observed instances, from the entity relations' keys.
  std::unordered_map<std::string, std::vector<std::string>> universe;
  for (std::size_t r = 0; r < db.schema.relations.size(); ++r) {
    const auto& rel = db.schema.relations[r];
    const auto key = rel.primary_key();
    if (key.size() != 1 || key.front()->is_foreign_key()) continue;
    const auto column = *rel.index_of(key.front()->name);
    auto& values = universe[map_entity(rel, config)];
    for (const auto& row : db.instances[r].rows) values.push_back(row[column].value_or(""));
  }

  std::vector<Assertion> out;
  for (const auto& frag : theory.mfrags) {
    const auto mapped = resolve(db, frag);
    // Only relationship relations without other attributes map to predicates.
    if (!mapped.other_columns.empty()) continue;

    std::vector<const std::vector<std::string>*> axes;
    for (const auto& c : frag.context_nodes) {
      const auto it = universe.find(c.variable.entity);
      if (c.kind != ContextKind::IsA || it == universe.end()) {
        throw Error(ErrorKind::UnboundedEntitySet,
                    "no entity relation supplies instances of " + c.variable.entity);
      }
      axes.push_back(&it->second);
    }
    if (std::any_of(axes.begin(), axes.end(), [](const auto* axis) { return axis->empty(); })) {
      continue;
    }
    std::set<std::vector<std::string>> present;
    for (const auto& row : mapped.instance->rows) {
      present.insert(key_values(row, mapped.key_columns));
    }

    const auto& name = frag.resident_nodes.front().name;
    // Odometer over the product, last argument varying fastest.
    std::vector<std::size_t> digits(axes.size(), 0);
    bool done = false;
    while (!done) {
      std::vector<std::string> tuple;
      tuple.reserve(axes.size());
      for (std::size_t i = 0; i < axes.size(); ++i) tuple.push_back((*axes[i])[digits[i]]);
      if (!present.contains(tuple)) out.push_back({name, std::move(tuple), "false"});
      done = true;
      for (std::size_t i = axes.size(); i-- > 0;) {
        if (++digits[i] < axes[i]->size()) {
          done = false;
          break;
        }
        digits[i] = 0;
      }
    }
  }
  return out;
}

}  // namespace mebnrm
