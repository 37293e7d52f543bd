#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mebnrm {

/// True for `[A-Za-z_][A-Za-z0-9_]*`.
bool is_identifier(std::string_view text);

std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);

/// Splits a name into words at underscores and CamelCase boundaries.
/// Acronym runs stay together: "MTI_Report" -> {MTI, Report},
/// "LocatingTimeID" -> {Locating, Time, ID}, "heater_item" -> {heater, item}.
std::vector<std::string> split_name_tokens(std::string_view name);

/// Uppercased first letters of each word of `name` ("TargetTemporalProperty" -> "TTP").
/// Falls back to "F" when the name has no word characters.
std::string name_initials(std::string_view name);

/// Entity name implied by a key attribute: drop a trailing ID/Id/_id and keep
/// the last word ("LocatingTimeID" -> "Time").
std::string derive_entity_name(std::string_view attribute);

}  // namespace mebnrm
