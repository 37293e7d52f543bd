#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace mebnrm {

enum class PrefixPolicy { None, Auto, Explicit };

/// Naming and data options the mapping leaves open.
///
/// Config files are INI-style:
///
///     [mapping]
///     prefix = none | auto | explicit
///     closed_world = false
///     [prefix]           ; MFrag name = resident-node prefix
///     MTI_Report = MR
///     [ov_alias]         ; Relation.Attribute = ordinary variable
///     MTI_Report.TimeID = t
///     [entity_alias]     ; [Relation.]Attribute = synthesized entity relation
///     PatrolDriver = Soldier
///     [entity_name]      ; entity relation = entity type
///     Vehicle = VEHICLE
///
/// A non-empty [prefix] section implies `prefix = explicit` unless the
/// policy is stated.
struct MappingConfig {
  PrefixPolicy prefix_policy = PrefixPolicy::None;
  std::map<std::string, std::string> prefixes;
  std::map<std::string, std::string> ov_alias;
  std::map<std::string, std::string> entity_alias;
  std::map<std::string, std::string> entity_names;
  bool closed_world = false;

  friend bool operator==(const MappingConfig&, const MappingConfig&) = default;
};

MappingConfig parse_config(std::string_view text);
MappingConfig load_config(const std::filesystem::path& path);

/// Reads a prefix map (`MFrag = PREFIX` lines, optionally under [prefix]).
std::map<std::string, std::string> parse_prefix_map(std::string_view text);

std::optional<PrefixPolicy> parse_prefix_policy(std::string_view word);

}  // namespace mebnrm
