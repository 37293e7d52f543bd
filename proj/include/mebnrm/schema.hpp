#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mebnrm/config.hpp"

namespace mebnrm {

struct AttributeDef {
  std::string name;
  /// Dom(A); absent means open, inferred from data.
  std::optional<std::vector<std::string>> domain;
  bool in_primary_key = false;
  /// Home relation when the attribute is a foreign key.
  std::optional<std::string> references;
  /// Column type from DDL input. Informational only, not part of equality.
  std::string sql_type;

  bool is_foreign_key() const { return references.has_value(); }
  bool admits(std::string_view value) const;

  friend bool operator==(const AttributeDef& a, const AttributeDef& b) {
    return a.name == b.name && a.domain == b.domain && a.in_primary_key == b.in_primary_key &&
           a.references == b.references;
  }
};

enum class AttributeClass {
  PrimaryKeyForeign,
  PrimaryKeyOriginal,
  NonPrimaryForeignKey,
  NonForeignKeyAttribute,
};

enum class RelationKind { EntityRelation, RelationshipRelation, NonNormal };

std::string_view to_string(AttributeClass c);
std::string_view to_string(RelationKind k);

struct RelationSchema {
  std::string name;
  std::vector<AttributeDef> attributes;

  const AttributeDef* find(std::string_view attribute) const;
  std::optional<std::size_t> index_of(std::string_view attribute) const;
  /// Primary-key members in declaration order.
  std::vector<const AttributeDef*> primary_key() const;
  /// The NF and NK attributes (everything outside the key), in order.
  std::vector<const AttributeDef*> non_key_attributes() const;

  friend bool operator==(const RelationSchema&, const RelationSchema&) = default;
};

AttributeClass classify(const AttributeDef& attribute);

struct RelationalDatabaseSchema {
  std::string name;
  std::vector<RelationSchema> relations;

  const RelationSchema* find(std::string_view relation) const;

  friend bool operator==(const RelationalDatabaseSchema&,
                         const RelationalDatabaseSchema&) = default;
};

enum class ViolationKind {
  // structural
  EmptyName,
  DuplicateRelation,
  DuplicateAttribute,
  NoPrimaryKey,
  UnresolvedReference,
  // entity-relationship normal form
  KeyNotForeign,
  KeyTargetNotEntity,
  ForeignKeyTargetNotEntity,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string relation;
  std::string attribute;  // empty for relation-level violations
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Names, uniqueness, non-empty keys, resolvable references.
std::vector<Violation> structural_violations(const RelationalDatabaseSchema& schema);
/// Throws the first structural violation as an Error.
void validate_structure(const RelationalDatabaseSchema& schema);

AttributeClass classify_attribute(const RelationalDatabaseSchema& schema,
                                  std::string_view relation, std::string_view attribute);

RelationKind classify_relation(const RelationalDatabaseSchema& schema,
                               std::string_view relation);

/// Entity-Relationship Normal Form: every relation is an entity relation or a
/// relationship relation, and every foreign key lands on an entity relation.
std::vector<Violation> check_er_normal_form(const RelationalDatabaseSchema& schema);

/// Rewrites non-normal relations so that check_er_normal_form passes.
///
/// Each key member that is not a foreign key to an entity relation gets an
/// entity relation of its own (named by `entity_alias` or derive_entity_name)
/// and becomes a foreign key to it. Non-key foreign keys that land on a
/// non-entity relation lose the reference and become plain attributes.
/// Synthesized relations are appended after the existing ones; an existing
/// entity relation of the same name is reused. Idempotent.
RelationalDatabaseSchema normalize_er(const RelationalDatabaseSchema& schema,
                                      const MappingConfig& config = {});

/// Entity relations first, then relationship relations, stable within each group.
std::vector<RelationSchema> sort_relations(const RelationalDatabaseSchema& schema);

}  // namespace mebnrm
