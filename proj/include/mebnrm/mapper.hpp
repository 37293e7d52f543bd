#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mebnrm/config.hpp"
#include "mebnrm/mebn.hpp"
#include "mebnrm/schema.hpp"

namespace mebnrm {

/// Entity relation -> entity type: the uppercased relation name, or
/// `config.entity_names[relation]`.
std::string map_entity(const RelationSchema& relation, const MappingConfig& config = {});

/// Ordinary variable for a primary-key member of a normalized relation:
/// lowercased attribute name (or `ov_alias["Relation.Attribute"]`) typed by
/// the owning entity relation, or by the referenced one for foreign keys.
OrdinaryVariable derive_ordinary_variable(const RelationSchema& relation,
                                          const AttributeDef& attribute,
                                          const RelationalDatabaseSchema& schema,
                                          const MappingConfig& config = {});

/// A relationship relation with no attributes outside its key becomes the
/// predicate `Relation(ov1, ..., ovn)` with values {true, false}.
ResidentNode map_predicate_resident(const RelationSchema& relation,
                                    const RelationalDatabaseSchema& schema,
                                    const MappingConfig& config = {});

/// A non-key attribute A becomes the function `A(ov1, ..., ovn)` over the key
/// variables. Values: Dom(A) when declared, the referenced entity for
/// foreign keys, else open.
ResidentNode map_function_resident(const RelationSchema& relation,
                                   const AttributeDef& attribute,
                                   const RelationalDatabaseSchema& schema,
                                   const MappingConfig& config = {});

/// Partial MFrag for one relation. An entity relation with no non-key
/// attributes contributes only its entity and yields no MFrag.
std::optional<MFrag> map_rs_to_mfrag(const RelationSchema& relation,
                                     const RelationalDatabaseSchema& schema,
                                     const MappingConfig& config = {});

/// The full mapping: sort relations (entities first), collect entities, build
/// MFrags, then apply the prefix policy. Requires ER normal form.
MTheory map_rdbs_to_mtheory(const RelationalDatabaseSchema& schema,
                            const MappingConfig& config = {});

/// Prefix per MFrag under `auto`: initials of the MFrag name's words,
/// made distinct by appending 2, 3, ... in MFrag order.
std::vector<std::string> auto_prefixes(const std::vector<std::string>& mfrag_names);

/// Renames resident nodes to `<PREFIX>_<name>` per the configured policy.
MTheory apply_prefix_policy(MTheory theory, const MappingConfig& config);

}  // namespace mebnrm
