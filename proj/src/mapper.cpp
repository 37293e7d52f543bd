#include "mebnrm/mapper.hpp"

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "mebnrm/error.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

namespace {

bool is_entity_relation(const RelationSchema& rel) {
  const auto key = rel.primary_key();
  return key.size() == 1 && !key.front()->is_foreign_key();
}

/// Name -> relation lookup. Single operations scan the schema; the
/// whole-schema mapping builds a hash index so the pass stays linear.
class RelationLookup {
 public:
  explicit RelationLookup(const RelationalDatabaseSchema& schema, bool indexed = false)
      : schema_(schema) {
    if (!indexed) return;
    index_.reserve(schema.relations.size());
    for (const auto& rel : schema.relations) index_.emplace(rel.name, &rel);
  }

  const RelationSchema* find(std::string_view name) const {
    if (index_.empty()) return schema_.find(name);
    const auto it = index_.find(name);
    return it == index_.end() ? nullptr : it->second;
  }

  const RelationSchema& target_of(const RelationSchema& relation,
                                  const AttributeDef& attribute) const {
    const auto* target = find(*attribute.references);
    if (!target) {
      throw Error(ErrorKind::UnresolvedReference, relation.name + "." + attribute.name +
                                                      " references unknown relation '" +
                                                      *attribute.references + "'");
    }
    return *target;
  }

  bool is_relationship_relation(const RelationSchema& rel) const {
    const auto key = rel.primary_key();
    if (key.empty() || is_entity_relation(rel)) return false;
    for (const auto* a : key) {
      if (!a->references) return false;
      const auto* target = find(*a->references);
      if (!target || !is_entity_relation(*target)) return false;
    }
    return true;
  }

 private:
  const RelationalDatabaseSchema& schema_;
  std::unordered_map<std::string_view, const RelationSchema*> index_;
};

OrdinaryVariable ordinary_variable(const RelationSchema& relation, const AttributeDef& attribute,
                                   const RelationLookup& lookup, const MappingConfig& config) {
  OrdinaryVariable ov;
  if (auto it = config.ov_alias.find(relation.name + "." + attribute.name);
      it != config.ov_alias.end()) {
    ov.name = it->second;
  } else {
    ov.name = to_lower(attribute.name);
  }
  ov.entity = map_entity(attribute.references ? lookup.target_of(relation, attribute) : relation,
                         config);
  return ov;
}

std::vector<std::string> key_variables(const RelationSchema& relation,
                                       const RelationLookup& lookup,
                                       const MappingConfig& config) {
  std::vector<std::string> out;
  for (const auto* a : relation.primary_key()) {
    out.push_back(ordinary_variable(relation, *a, lookup, config).name);
  }
  return out;
}

ResidentNode predicate_resident(const RelationSchema& relation, std::vector<std::string> args) {
  ResidentNode node;
  node.name = relation.name;
  node.arguments = std::move(args);
  node.kind = NodeKind::Predicate;
  node.possible_values = PossibleValues::boolean();
  return node;
}

ResidentNode function_resident(const RelationSchema& relation, const AttributeDef& attribute,
                               std::vector<std::string> args, const RelationLookup& lookup,
                               const MappingConfig& config) {
  ResidentNode node;
  node.name = attribute.name;
  node.arguments = std::move(args);
  node.kind = NodeKind::Function;
  if (attribute.references) {
    node.possible_values.form = PossibleValues::Form::EntityValued;
    node.possible_values.entity = map_entity(lookup.target_of(relation, attribute), config);
  } else if (attribute.domain) {
    node.possible_values.form = PossibleValues::Form::Enumerated;
    node.possible_values.values = *attribute.domain;
  }
  return node;
}

std::optional<MFrag> build_mfrag(const RelationSchema& relation, const RelationLookup& lookup,
                                 const MappingConfig& config) {
  const bool entity = is_entity_relation(relation);
  if (!entity && !lookup.is_relationship_relation(relation)) {
    throw Error(ErrorKind::NotNormalized,
                "'" + relation.name + "' is neither an entity nor a relationship relation");
  }
  const auto others = relation.non_key_attributes();
  if (entity && others.empty()) return std::nullopt;

  MFrag frag;
  frag.name = relation.name;
  std::vector<std::string> variables;
  for (const auto* a : relation.primary_key()) {
    auto ov = ordinary_variable(relation, *a, lookup, config);
    variables.push_back(ov.name);
    frag.context_nodes.push_back(ContextNode::is_a(std::move(ov.name), std::move(ov.entity)));
  }
  if (others.empty()) {
    frag.resident_nodes.push_back(predicate_resident(relation, std::move(variables)));
  } else {
    for (const auto* a : others) {
      frag.resident_nodes.push_back(function_resident(relation, *a, variables, lookup, config));
    }
  }
  return frag;
}

std::string describe(const TheoryViolation& v) {
  return std::string(to_string(v.kind)) + " in MFrag " + v.mfrag +
         (v.node.empty() ? "" : " (" + v.node + ")") + ": " + v.message;
}

}  // namespace

std::string map_entity(const RelationSchema& relation, const MappingConfig& config) {
  if (!is_entity_relation(relation)) {
    throw Error(ErrorKind::NotEntityRelation,
                "'" + relation.name + "' does not have a single original primary key");
  }
  if (auto it = config.entity_names.find(relation.name); it != config.entity_names.end()) {
    if (it->second != to_upper(it->second)) {
      throw Error(ErrorKind::InvalidConfig,
                  "entity name '" + it->second + "' for " + relation.name + " must be uppercase");
    }
    return it->second;
  }
  return to_upper(relation.name);
}

OrdinaryVariable derive_ordinary_variable(const RelationSchema& relation,
                                          const AttributeDef& attribute,
                                          const RelationalDatabaseSchema& schema,
                                          const MappingConfig& config) {
  return ordinary_variable(relation, attribute, RelationLookup(schema), config);
}

ResidentNode map_predicate_resident(const RelationSchema& relation,
                                    const RelationalDatabaseSchema& schema,
                                    const MappingConfig& config) {
  const RelationLookup lookup(schema);
  if (!lookup.is_relationship_relation(relation)) {
    throw Error(ErrorKind::NotRelationshipRelation,
                "'" + relation.name + "' is not a relationship relation");
  }
  if (!relation.non_key_attributes().empty()) {
    throw Error(ErrorKind::HasNonKeyAttributes,
                "'" + relation.name + "' has attributes outside its key; it maps to functions");
  }
  return predicate_resident(relation, key_variables(relation, lookup, config));
}

ResidentNode map_function_resident(const RelationSchema& relation,
                                   const AttributeDef& attribute,
                                   const RelationalDatabaseSchema& schema,
                                   const MappingConfig& config) {
  if (attribute.in_primary_key) {
    throw Error(ErrorKind::AttributeIsKey,
                relation.name + "." + attribute.name + " is part of the primary key");
  }
  const RelationLookup lookup(schema);
  return function_resident(relation, attribute, key_variables(relation, lookup, config), lookup,
                           config);
}

std::optional<MFrag> map_rs_to_mfrag(const RelationSchema& relation,
                                     const RelationalDatabaseSchema& schema,
                                     const MappingConfig& config) {
  return build_mfrag(relation, RelationLookup(schema), config);
}

MTheory map_rdbs_to_mtheory(const RelationalDatabaseSchema& schema, const MappingConfig& config) {
  validate_structure(schema);
  if (const auto violations = check_er_normal_form(schema); !violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorKind::NotNormalized,
                v.relation + (v.attribute.empty() ? "" : "." + v.attribute) + ": " + v.message +
                    " (run with --normalize)");
  }

  const RelationLookup lookup(schema, /*indexed=*/true);
  MTheory theory;
  theory.name = schema.name;
  std::unordered_set<std::string> seen_entities;
  for (const auto& rel : sort_relations(schema)) {
    if (is_entity_relation(rel)) {
      auto name = map_entity(rel, config);
      if (!seen_entities.insert(name).second) {
        throw Error(ErrorKind::InvariantViolation,
                    "two entity relations map to entity type " + name);
      }
      theory.entities.push_back(std::move(name));
    }
    if (auto frag = build_mfrag(rel, lookup, config)) theory.mfrags.push_back(std::move(*frag));
  }

  if (config.prefix_policy == PrefixPolicy::None) {
    for (const auto& v : validate_mtheory(theory)) {
      if (v.kind == TheoryViolationKind::UniqueHomeViolation) {
        throw Error(ErrorKind::UniqueHomeViolation,
                    "resident node '" + v.node + "' is defined in more than one MFrag (" +
                        v.message + "); use --prefix=auto or an explicit prefix map");
      }
    }
  }
  theory = apply_prefix_policy(std::move(theory), config);
  // Anything left besides a clash is the mapper's own fault.
  for (const auto& v : validate_mtheory(theory)) {
    if (v.kind != TheoryViolationKind::UniqueHomeViolation) {
      throw Error(ErrorKind::InvariantViolation, describe(v));
    }
  }
  return theory;
}

std::vector<std::string> auto_prefixes(const std::vector<std::string>& mfrag_names) {
  std::vector<std::string> out;
  std::unordered_set<std::string> used;
  for (const auto& name : mfrag_names) {
    const auto base = name_initials(name);
    auto candidate = base;
    for (int suffix = 2; used.contains(candidate); ++suffix) {
      candidate = base + std::to_string(suffix);
    }
    used.insert(candidate);
    out.push_back(std::move(candidate));
  }
  return out;
}

MTheory apply_prefix_policy(MTheory theory, const MappingConfig& config) {
  std::vector<std::optional<std::string>> prefixes(theory.mfrags.size());
  switch (config.prefix_policy) {
    case PrefixPolicy::None:
      break;
    case PrefixPolicy::Auto: {
      std::vector<std::string> names;
      for (const auto& frag : theory.mfrags) names.push_back(frag.name);
      const auto generated = auto_prefixes(names);
      for (std::size_t i = 0; i < generated.size(); ++i) prefixes[i] = generated[i];
      break;
    }
    case PrefixPolicy::Explicit: {
      std::map<std::string, std::string> owner;
      for (const auto& [frag, prefix] : config.prefixes) {
        if (!is_identifier(prefix)) {
          throw Error(ErrorKind::InvalidConfig, "prefix '" + prefix + "' is not an identifier");
        }
        if (auto [it, inserted] = owner.emplace(prefix, frag); !inserted) {
          throw Error(ErrorKind::PrefixCollision, "prefix '" + prefix + "' is given to both " +
                                                      it->second + " and " + frag);
        }
      }
      for (std::size_t i = 0; i < theory.mfrags.size(); ++i) {
        if (auto it = config.prefixes.find(theory.mfrags[i].name); it != config.prefixes.end()) {
          prefixes[i] = it->second;
        }
      }
      break;
    }
  }

  for (std::size_t i = 0; i < theory.mfrags.size(); ++i) {
    if (!prefixes[i]) continue;
    for (auto& node : theory.mfrags[i].resident_nodes) {
      node.name = *prefixes[i] + "_" + node.name;
    }
  }

  for (const auto& v : validate_mtheory(theory)) {
    if (v.kind == TheoryViolationKind::UniqueHomeViolation) {
      if (config.prefix_policy == PrefixPolicy::None) continue;
      throw Error(ErrorKind::UniqueHomeViolation,
                  "resident node '" + v.node + "' still clashes after prefixing: " + v.message);
    }
  }
  return theory;
}

}  // namespace mebnrm
