// Helpers shared by the unit tests and the acceptance binary. Everything here
// is written against the raw schema structures, not the library's own
// classification, so it can serve as an independent oracle.
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mebnrm/schema.hpp"

namespace support {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MEBNRM_FIXTURES) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }

/// Identifier runs and single punctuation characters; whitespace dropped.
inline std::vector<std::string> script_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (word(c)) {
      std::size_t j = i;
      while (j < text.size() && word(text[j])) ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

/// Token lists of each top-level `[F: Name ...]` block, keyed by name.
inline std::map<std::string, std::vector<std::string>> mfrag_blocks(const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  const auto tokens = script_tokens(text);
  int depth = 0;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    current.push_back(t);
    if (t == "[") ++depth;
    if (t == "]" && --depth == 0) {
      if (current.size() > 3) out[current[3]] = current;
      current.clear();
    }
  }
  return out;
}

struct CliResult {
  int status = -1;
  std::string output;
};

/// Runs the CLI through the shell; stderr is merged when asked.
inline CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string command = std::string("\"") + MEBNRM_CLI + "\" " + args +
                              (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.output.append(buffer.data(), n);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random normalized schema: ERS `Ent<i>` and RRS `Rel<i>` interleaved in
/// random order, key width 1..max_key_width, non-key attribute names drawn
/// from a small shared pool so unique-home clashes are common.
inline mebnrm::RelationalDatabaseSchema random_normalized_schema(std::mt19937_64& rng,
                                                                 std::size_t max_relations,
                                                                 std::size_t max_key_width) {
  mebnrm::RelationalDatabaseSchema schema;
  schema.name = "Random";
  const auto n = pick(rng, 0, max_relations);
  if (n == 0) return schema;
  const auto entities = pick(rng, 1, n);
  std::vector<bool> is_entity(n, false);
  for (std::size_t i = 0; i < entities; ++i) is_entity[i] = true;
  std::shuffle(is_entity.begin(), is_entity.end(), rng);
  std::vector<std::string> entity_names;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_entity[i]) entity_names.push_back("Ent" + std::to_string(i));
  }
  auto any_entity = [&] { return entity_names[pick(rng, 0, entity_names.size() - 1)]; };
  for (std::size_t i = 0; i < n; ++i) {
    mebnrm::RelationSchema rel;
    if (is_entity[i]) {
      rel.name = "Ent" + std::to_string(i);
      rel.attributes.push_back({rel.name + "Key", std::nullopt, true, std::nullopt, {}});
    } else {
      rel.name = "Rel" + std::to_string(i);
      const auto width = pick(rng, 1, max_key_width);
      for (std::size_t k = 0; k < width; ++k) {
        rel.attributes.push_back({"K" + std::to_string(k), std::nullopt, true, any_entity(), {}});
      }
    }
    const auto others = pick(rng, 0, 4);
    const auto offset = pick(rng, 0, 7);
    for (std::size_t j = 0; j < others; ++j) {
      mebnrm::AttributeDef a{"Attr" + std::to_string((offset + j) % 8), std::nullopt, false,
                             std::nullopt, {}};
      if (pick(rng, 0, 3) == 0) a.references = any_entity();
      rel.attributes.push_back(a);
    }
    schema.relations.push_back(std::move(rel));
  }
  return schema;
}

/// Random structurally valid schema that is usually not normalized: keys of
/// any width, arbitrary FK targets (including self and non-entity targets).
inline mebnrm::RelationalDatabaseSchema random_schema(std::mt19937_64& rng,
                                                      std::size_t max_relations) {
  mebnrm::RelationalDatabaseSchema schema;
  schema.name = "Any";
  const auto n = pick(rng, 0, max_relations);
  auto target = [&] { return "T" + std::to_string(pick(rng, 0, n - 1)); };
  for (std::size_t i = 0; i < n; ++i) {
    mebnrm::RelationSchema rel;
    rel.name = "T" + std::to_string(i);
    const auto key = pick(rng, 1, 3);
    const auto others = pick(rng, 0, 3);
    for (std::size_t k = 0; k < key + others; ++k) {
      mebnrm::AttributeDef a{"a" + std::to_string(k) + (pick(rng, 0, 1) ? "ID" : "_Code"),
                             std::nullopt, k < key, std::nullopt, {}};
      if (pick(rng, 0, 2) == 0) a.references = target();
      rel.attributes.push_back(a);
    }
    schema.relations.push_back(std::move(rel));
  }
  return schema;
}

/// Definitions re-derived directly: an entity relation has exactly one key
/// attribute and it has no reference; a relationship relation's key members
/// all reference entity relations.
inline bool oracle_is_entity(const mebnrm::RelationSchema& rel) {
  std::size_t key = 0;
  bool foreign = false;
  for (const auto& a : rel.attributes) {
    if (a.in_primary_key) {
      ++key;
      foreign = foreign || a.references.has_value();
    }
  }
  return key == 1 && !foreign;
}

inline const mebnrm::RelationSchema* oracle_find(const mebnrm::RelationalDatabaseSchema& s,
                                                 const std::string& name) {
  for (const auto& r : s.relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

inline bool oracle_is_relationship(const mebnrm::RelationalDatabaseSchema& s,
                                   const mebnrm::RelationSchema& rel) {
  if (oracle_is_entity(rel)) return false;
  bool any = false;
  for (const auto& a : rel.attributes) {
    if (!a.in_primary_key) continue;
    any = true;
    if (!a.references) return false;
    const auto* t = oracle_find(s, *a.references);
    if (!t || !oracle_is_entity(*t)) return false;
  }
  return any;
}

inline bool oracle_normal(const mebnrm::RelationalDatabaseSchema& s) {
  for (const auto& rel : s.relations) {
    if (!oracle_is_entity(rel) && !oracle_is_relationship(s, rel)) return false;
    for (const auto& a : rel.attributes) {
      if (a.in_primary_key || !a.references) continue;
      const auto* t = oracle_find(s, *a.references);
      if (!t || !oracle_is_entity(*t)) return false;
    }
  }
  return true;
}

/// Expected mapping counts, straight from the relation shapes.
struct Counts {
  std::size_t entities = 0;
  std::size_t mfrags = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_mfrag;  // context, resident
};

inline Counts counting_oracle(const mebnrm::RelationalDatabaseSchema& s) {
  Counts c;
  for (const auto& rel : s.relations) {
    std::size_t key = 0, others = 0;
    for (const auto& a : rel.attributes) (a.in_primary_key ? key : others)++;
    const bool entity = oracle_is_entity(rel);
    if (entity) ++c.entities;
    if (entity && others == 0) continue;
    ++c.mfrags;
    c.per_mfrag[rel.name] = {key, others == 0 ? 1 : others};
  }
  return c;
}

}  // namespace support
