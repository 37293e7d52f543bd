#include "mebnrm/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

#include "mebnrm/error.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

namespace pt = boost::property_tree;

namespace {

pt::ptree read_ini_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfig, e.message(),
                SourceLocation{static_cast<std::size_t>(e.line()), 1});
  }
  return tree;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void require_identifier(const std::string& value, const std::string& where) {
  if (!is_identifier(value)) {
    throw Error(ErrorKind::InvalidConfig, where + ": '" + value + "' is not an identifier");
  }
}

std::map<std::string, std::string> read_section(const pt::ptree& section,
                                                const std::string& section_name) {
  std::map<std::string, std::string> out;
  for (const auto& [key, child] : section) {
    if (!child.empty()) {
      throw Error(ErrorKind::InvalidConfig, "nested key '" + key + "' in [" + section_name + "]");
    }
    out[trimmed(key)] = trimmed(child.data());
  }
  return out;
}

bool parse_bool(const std::string& value) {
  const auto v = to_lower(value);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw Error(ErrorKind::InvalidConfig, "expected a boolean, got '" + value + "'");
}

}  // namespace

std::optional<PrefixPolicy> parse_prefix_policy(std::string_view word) {
  if (word == "none") return PrefixPolicy::None;
  if (word == "auto") return PrefixPolicy::Auto;
  if (word == "explicit") return PrefixPolicy::Explicit;
  return std::nullopt;
}

MappingConfig parse_config(std::string_view text) {
  const auto tree = read_ini_text(text);
  MappingConfig config;
  std::optional<PrefixPolicy> stated_policy;

  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      throw Error(ErrorKind::InvalidConfig, "key '" + name + "' outside of a section");
    }
    auto entries = read_section(section, name);
    if (name == "mapping") {
      for (const auto& [key, value] : entries) {
        if (key == "prefix") {
          stated_policy = parse_prefix_policy(value);
          if (!stated_policy) {
            throw Error(ErrorKind::InvalidConfig, "unknown prefix policy '" + value + "'");
          }
        } else if (key == "closed_world") {
          config.closed_world = parse_bool(value);
        } else {
          throw Error(ErrorKind::InvalidConfig, "unknown key '" + key + "' in [mapping]");
        }
      }
    } else if (name == "prefix") {
      for (const auto& [key, value] : entries) require_identifier(value, "[prefix] " + key);
      config.prefixes = std::move(entries);
    } else if (name == "ov_alias") {
      for (const auto& [key, value] : entries) {
        if (key.find('.') == std::string::npos) {
          throw Error(ErrorKind::InvalidConfig,
                      "[ov_alias] key '" + key + "' must be Relation.Attribute");
        }
        require_identifier(value, "[ov_alias] " + key);
      }
      config.ov_alias = std::move(entries);
    } else if (name == "entity_alias") {
      for (const auto& [key, value] : entries) require_identifier(value, "[entity_alias] " + key);
      config.entity_alias = std::move(entries);
    } else if (name == "entity_name") {
      for (const auto& [key, value] : entries) {
        require_identifier(value, "[entity_name] " + key);
      }
      config.entity_names = std::move(entries);
    } else {
      throw Error(ErrorKind::InvalidConfig, "unknown section [" + name + "]");
    }
  }

  if (stated_policy) {
    config.prefix_policy = *stated_policy;
  } else if (!config.prefixes.empty()) {
    config.prefix_policy = PrefixPolicy::Explicit;
  }
  return config;
}

MappingConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::map<std::string, std::string> parse_prefix_map(std::string_view text) {
  const auto tree = read_ini_text(text);
  std::map<std::string, std::string> out;
  for (const auto& [name, child] : tree) {
    if (child.empty()) {
      out[trimmed(name)] = trimmed(child.data());
    } else if (name == "prefix") {
      for (auto& [key, value] : read_section(child, name)) out[key] = value;
    } else {
      throw Error(ErrorKind::InvalidConfig, "unexpected section [" + name + "] in prefix map");
    }
  }
  for (const auto& [key, value] : out) require_identifier(value, "prefix for " + key);
  return out;
}

}  // namespace mebnrm
