#include "mebnrm/schema.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mebnrm/error.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

std::string_view to_string(AttributeClass c) {
  switch (c) {
    case AttributeClass::PrimaryKeyForeign: return "PrimaryKeyForeign";
    case AttributeClass::PrimaryKeyOriginal: return "PrimaryKeyOriginal";
    case AttributeClass::NonPrimaryForeignKey: return "NonPrimaryForeignKey";
    case AttributeClass::NonForeignKeyAttribute: return "NonForeignKeyAttribute";
  }
  return "?";
}

std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::EntityRelation: return "EntityRelation";
    case RelationKind::RelationshipRelation: return "RelationshipRelation";
    case RelationKind::NonNormal: return "NonNormal";
  }
  return "?";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyName: return "EmptyName";
    case ViolationKind::DuplicateRelation: return "DuplicateRelation";
    case ViolationKind::DuplicateAttribute: return "DuplicateAttribute";
    case ViolationKind::NoPrimaryKey: return "NoPrimaryKey";
    case ViolationKind::UnresolvedReference: return "UnresolvedReference";
    case ViolationKind::KeyNotForeign: return "KeyNotForeign";
    case ViolationKind::KeyTargetNotEntity: return "KeyTargetNotEntity";
    case ViolationKind::ForeignKeyTargetNotEntity: return "ForeignKeyTargetNotEntity";
  }
  return "?";
}

bool AttributeDef::admits(std::string_view value) const {
  if (!domain) return true;
  return std::find(domain->begin(), domain->end(), value) != domain->end();
}

const AttributeDef* RelationSchema::find(std::string_view attribute) const {
  for (const auto& a : attributes) {
    if (a.name == attribute) return &a;
  }
  return nullptr;
}

std::optional<std::size_t> RelationSchema::index_of(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == attribute) return i;
  }
  return std::nullopt;
}

std::vector<const AttributeDef*> RelationSchema::primary_key() const {
  std::vector<const AttributeDef*> out;
  for (const auto& a : attributes) {
    if (a.in_primary_key) out.push_back(&a);
  }
  return out;
}

std::vector<const AttributeDef*> RelationSchema::non_key_attributes() const {
  std::vector<const AttributeDef*> out;
  for (const auto& a : attributes) {
    if (!a.in_primary_key) out.push_back(&a);
  }
  return out;
}

const RelationSchema* RelationalDatabaseSchema::find(std::string_view relation) const {
  for (const auto& r : relations) {
    if (r.name == relation) return &r;
  }
  return nullptr;
}

AttributeClass classify(const AttributeDef& attribute) {
  if (attribute.in_primary_key) {
    return attribute.is_foreign_key() ? AttributeClass::PrimaryKeyForeign
                                      : AttributeClass::PrimaryKeyOriginal;
  }
  return attribute.is_foreign_key() ? AttributeClass::NonPrimaryForeignKey
                                    : AttributeClass::NonForeignKeyAttribute;
}

namespace {

const RelationSchema& require_relation(const RelationalDatabaseSchema& schema,
                                       std::string_view relation) {
  const auto* rel = schema.find(relation);
  if (!rel) throw Error(ErrorKind::UnknownRelation, "no relation named '" + std::string(relation) + "'");
  return *rel;
}

// Entity status depends only on the relation's own key, so classifying a
// referenced relation never recurses and FK cycles cannot loop.
bool is_entity_relation(const RelationSchema& rel) {
  const auto key = rel.primary_key();
  return key.size() == 1 && !key.front()->is_foreign_key();
}

/// Relation name -> entity status, so FK checks stay O(1) per attribute.
class EntityIndex {
 public:
  explicit EntityIndex(const RelationalDatabaseSchema& schema) {
    flags_.reserve(schema.relations.size());
    for (const auto& rel : schema.relations) flags_.emplace(rel.name, is_entity_relation(rel));
  }

  bool targets_entity(const AttributeDef& attribute) const {
    if (!attribute.references) return false;
    const auto it = flags_.find(*attribute.references);
    return it != flags_.end() && it->second;
  }

 private:
  std::unordered_map<std::string_view, bool> flags_;
};

RelationKind kind_of(const EntityIndex& index, const RelationSchema& rel) {
  if (is_entity_relation(rel)) return RelationKind::EntityRelation;
  const auto key = rel.primary_key();
  if (key.empty()) return RelationKind::NonNormal;
  for (const auto* a : key) {
    if (!index.targets_entity(*a)) return RelationKind::NonNormal;
  }
  return RelationKind::RelationshipRelation;
}

std::string entity_for_attribute(const MappingConfig& config, const RelationSchema& rel,
                                 const AttributeDef& attribute) {
  if (auto it = config.entity_alias.find(rel.name + "." + attribute.name);
      it != config.entity_alias.end()) {
    return it->second;
  }
  if (auto it = config.entity_alias.find(attribute.name); it != config.entity_alias.end()) {
    return it->second;
  }
  return derive_entity_name(attribute.name);
}

}  // namespace

std::vector<Violation> structural_violations(const RelationalDatabaseSchema& schema) {
  std::vector<Violation> out;
  std::unordered_set<std::string_view> all_names;
  for (const auto& rel : schema.relations) all_names.insert(rel.name);
  std::set<std::string> relation_names;
  for (const auto& rel : schema.relations) {
    if (rel.name.empty()) {
      out.push_back({ViolationKind::EmptyName, rel.name, "", "relation name is empty"});
    }
    if (!relation_names.insert(rel.name).second) {
      out.push_back({ViolationKind::DuplicateRelation, rel.name, "",
                     "relation '" + rel.name + "' is declared more than once"});
    }
    std::set<std::string> attribute_names;
    bool has_key = false;
    for (const auto& a : rel.attributes) {
      has_key = has_key || a.in_primary_key;
      if (a.name.empty()) {
        out.push_back({ViolationKind::EmptyName, rel.name, a.name, "attribute name is empty"});
      }
      if (!attribute_names.insert(a.name).second) {
        out.push_back({ViolationKind::DuplicateAttribute, rel.name, a.name,
                       "attribute '" + a.name + "' appears more than once"});
      }
      if (a.references && !all_names.contains(*a.references)) {
        out.push_back({ViolationKind::UnresolvedReference, rel.name, a.name,
                       "references unknown relation '" + *a.references + "'"});
      }
    }
    if (!has_key) {
      out.push_back({ViolationKind::NoPrimaryKey, rel.name, "",
                     "relation '" + rel.name + "' has an empty primary key"});
    }
  }
  return out;
}

void validate_structure(const RelationalDatabaseSchema& schema) {
  const auto violations = structural_violations(schema);
  if (violations.empty()) return;
  const auto& v = violations.front();
  ErrorKind kind = ErrorKind::InvariantViolation;
  switch (v.kind) {
    case ViolationKind::DuplicateRelation:
    case ViolationKind::DuplicateAttribute: kind = ErrorKind::DuplicateName; break;
    case ViolationKind::NoPrimaryKey: kind = ErrorKind::NoPrimaryKey; break;
    case ViolationKind::UnresolvedReference: kind = ErrorKind::UnresolvedReference; break;
    default: break;
  }
  throw Error(kind, v.relation + (v.attribute.empty() ? "" : "." + v.attribute) + ": " + v.message);
}

AttributeClass classify_attribute(const RelationalDatabaseSchema& schema,
                                  std::string_view relation, std::string_view attribute) {
  const auto& rel = require_relation(schema, relation);
  const auto* a = rel.find(attribute);
  if (!a) {
    throw Error(ErrorKind::UnknownAttribute, "relation '" + rel.name + "' has no attribute '" +
                                                 std::string(attribute) + "'");
  }
  return classify(*a);
}

RelationKind classify_relation(const RelationalDatabaseSchema& schema,
                               std::string_view relation) {
  return kind_of(EntityIndex(schema), require_relation(schema, relation));
}

std::vector<Violation> check_er_normal_form(const RelationalDatabaseSchema& schema) {
  const EntityIndex index(schema);
  std::vector<Violation> out;
  for (const auto& rel : schema.relations) {
    const auto key = rel.primary_key();
    if (key.empty()) {
      out.push_back({ViolationKind::NoPrimaryKey, rel.name, "",
                     "relation has an empty primary key"});
    } else if (!is_entity_relation(rel)) {
      for (const auto* a : key) {
        if (!a->is_foreign_key()) {
          out.push_back({ViolationKind::KeyNotForeign, rel.name, a->name,
                         "primary-key member is not a foreign key to an entity relation"});
        } else if (!index.targets_entity(*a)) {
          out.push_back({ViolationKind::KeyTargetNotEntity, rel.name, a->name,
                         "primary-key member references '" + *a->references +
                             "', which is not an entity relation"});
        }
      }
    }
    for (const auto* a : rel.non_key_attributes()) {
      if (a->is_foreign_key() && !index.targets_entity(*a)) {
        out.push_back({ViolationKind::ForeignKeyTargetNotEntity, rel.name, a->name,
                       "foreign key references '" + *a->references +
                           "', which is not an entity relation"});
      }
    }
  }
  return out;
}

RelationalDatabaseSchema normalize_er(const RelationalDatabaseSchema& schema,
                                      const MappingConfig& config) {
  validate_structure(schema);
  RelationalDatabaseSchema out = schema;
  // Entity status of pre-existing relations cannot change below: rewritten
  // relations never end up with a single original key.
  std::vector<bool> was_entity;
  for (const auto& rel : schema.relations) was_entity.push_back(is_entity_relation(rel));
  const std::size_t original_count = schema.relations.size();

  auto is_entity_target = [&](const std::string& name) {
    for (std::size_t i = 0; i < out.relations.size(); ++i) {
      if (out.relations[i].name == name) return i >= original_count || was_entity[i];
    }
    return false;
  };

  for (std::size_t i = 0; i < original_count; ++i) {
    if (!was_entity[i]) {
      for (std::size_t j = 0; j < out.relations[i].attributes.size(); ++j) {
        const auto& rel = out.relations[i];
        const auto& a = rel.attributes[j];
        if (!a.in_primary_key) continue;
        if (a.references && is_entity_target(*a.references)) continue;
        const auto entity = entity_for_attribute(config, rel, a);
        if (const auto* existing = out.find(entity)) {
          if (!is_entity_target(existing->name)) {
            throw Error(ErrorKind::NameCollision,
                        "entity '" + entity + "' synthesized for " + rel.name + "." + a.name +
                            " clashes with non-entity relation '" + existing->name + "'");
          }
        } else {
          out.relations.push_back(RelationSchema{
              entity, {AttributeDef{entity + "ID", std::nullopt, true, std::nullopt, {}}}});
        }
        out.relations[i].attributes[j].references = entity;
      }
    }
    for (auto& a : out.relations[i].attributes) {
      if (!a.in_primary_key && a.references && !is_entity_target(*a.references)) {
        a.references.reset();
      }
    }
  }
  return out;
}

std::vector<RelationSchema> sort_relations(const RelationalDatabaseSchema& schema) {
  const EntityIndex index(schema);
  std::vector<RelationSchema> entities;
  std::vector<RelationSchema> relationships;
  for (const auto& rel : schema.relations) {
    switch (kind_of(index, rel)) {
      case RelationKind::EntityRelation: entities.push_back(rel); break;
      case RelationKind::RelationshipRelation: relationships.push_back(rel); break;
      case RelationKind::NonNormal:
        throw Error(ErrorKind::NotNormalized,
                    "relation '" + rel.name + "' is not in entity-relationship normal form");
    }
  }
  entities.insert(entities.end(), relationships.begin(), relationships.end());
  return entities;
}

}  // namespace mebnrm
