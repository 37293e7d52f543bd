#include "mebnrm/names.hpp"

#include <cctype>

namespace mebnrm {

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  if (!(is_alpha(text.front()) || text.front() == '_')) return false;
  for (char c : text) {
    if (!(is_alpha(c) || is_digit(c) || c == '_')) return false;
  }
  return true;
}

std::string to_upper(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_name_tokens(std::string_view name) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (!current.empty() && is_upper(c)) {
      const char prev = current.back();
      const bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
      // aB -> a|B, 1B -> 1|B, ABc -> A|Bc
      if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) flush();
    }
    current.push_back(c);
  }
  flush();
  return tokens;
}

std::string name_initials(std::string_view name) {
  std::string out;
  for (const auto& token : split_name_tokens(name)) {
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(token.front()))));
  }
  if (out.empty()) out = "F";
  return out;
}

std::string derive_entity_name(std::string_view attribute) {
  std::string_view stem = attribute;
  for (std::string_view suffix : {"_id", "ID", "Id"}) {
    if (ends_with(stem, suffix) && stem.size() > suffix.size()) {
      stem.remove_suffix(suffix.size());
      break;
    }
  }
  auto tokens = split_name_tokens(stem);
  if (tokens.empty()) return std::string(attribute);
  // "x_2" would yield "2", which cannot name a relation
  if (!is_identifier(tokens.back())) return std::string(stem);
  return tokens.back();
}

}  // namespace mebnrm
