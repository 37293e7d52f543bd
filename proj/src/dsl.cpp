#include <cctype>
#include <map>
#include <set>

#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

namespace {

bool is_bare_value_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '+' ||
         c == '-';
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

struct PendingReference {
  std::size_t relation;
  std::size_t attribute;
  SourceLocation where;
};

class DslParser {
 public:
  explicit DslParser(std::string_view text) : text_(text) {}

  RelationalDatabaseSchema parse() {
    RelationalDatabaseSchema schema;
    skip_space();
    schema.name = identifier("schema name");
    expect('[', "'[' after schema name");
    skip_space();
    if (peek() != ']') {
      parse_relation(schema);
      while (accept(',')) parse_relation(schema);
    }
    expect(']', "',' or ']' closing the schema");
    skip_space();
    if (!at_end()) fail("end of input");
    resolve_references(schema);
    return schema;
  }

 private:
  void parse_relation(RelationalDatabaseSchema& schema) {
    skip_space();
    const auto where = here();
    RelationSchema rel;
    rel.name = identifier("relation name");
    for (const auto& existing : schema.relations) {
      if (existing.name == rel.name) {
        throw Error(ErrorKind::DuplicateName, "relation '" + rel.name + "' declared twice", where);
      }
    }
    expect('[', "'[' after relation name");
    const auto index = schema.relations.size();
    parse_attribute(rel, index);
    while (accept(',')) parse_attribute(rel, index);
    expect(']', "',' or ']' closing relation " + rel.name);
    if (rel.primary_key().empty()) {
      throw Error(ErrorKind::NoPrimaryKey,
                  "relation '" + rel.name + "' has no attribute marked '*'", where);
    }
    schema.relations.push_back(std::move(rel));
  }

  void parse_attribute(RelationSchema& rel, std::size_t relation_index) {
    skip_space();
    const auto where = here();
    AttributeDef attribute;
    attribute.name = identifier("attribute name");
    if (rel.find(attribute.name)) {
      throw Error(ErrorKind::DuplicateName,
                  "attribute '" + attribute.name + "' repeated in " + rel.name, where);
    }
    attribute.in_primary_key = accept('*');
    if (accept('/')) {
      skip_space();
      references_.push_back({relation_index, rel.attributes.size(), here()});
      attribute.references = identifier("referenced relation name");
    }
    if (accept(':')) {
      expect('{', "'{' opening a domain");
      std::vector<std::string> values;
      do {
        skip_space();
        const auto value_at = here();
        auto value = domain_value();
        for (const auto& v : values) {
          if (v == value) {
            throw Error(ErrorKind::DuplicateName, "domain value '" + value + "' repeated",
                        value_at);
          }
        }
        values.push_back(std::move(value));
      } while (accept(','));
      expect('}', "',' or '}' closing the domain");
      attribute.domain = std::move(values);
    }
    rel.attributes.push_back(std::move(attribute));
  }

  void resolve_references(const RelationalDatabaseSchema& schema) {
    for (const auto& ref : references_) {
      const auto& target = *schema.relations[ref.relation].attributes[ref.attribute].references;
      if (!schema.find(target)) {
        throw Error(ErrorKind::UnresolvedReference, "no relation named '" + target + "'",
                    ref.where);
      }
    }
  }

  std::string identifier(const std::string& what) {
    skip_space();
    if (at_end() || !is_ident_start(peek())) fail(what);
    std::string out;
    while (!at_end() && is_ident_char(peek())) out.push_back(advance());
    return out;
  }

  std::string domain_value() {
    if (at_end()) fail("a domain value");
    if (peek() == '"') {
      advance();
      std::string out;
      while (true) {
        if (at_end()) fail("closing '\"'");
        const char c = advance();
        if (c == '"') {
          if (!at_end() && peek() == '"') {
            out.push_back(advance());
            continue;
          }
          return out;
        }
        out.push_back(c);
      }
    }
    if (!is_bare_value_char(peek())) fail("a domain value");
    std::string out;
    while (!at_end() && is_bare_value_char(peek())) out.push_back(advance());
    return out;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!accept(c)) fail(what);
  }

  [[noreturn]] void fail(const std::string& expected) {
    std::string found = "end of input";
    if (!at_end()) {
      const auto c = static_cast<unsigned char>(peek());
      found = std::isprint(c) ? "'" + std::string(1, peek()) + "'"
                              : "byte 0x" + hex(c);
    }
    throw Error(ErrorKind::SyntaxError, "expected " + expected + ", found " + found, here());
  }

  static std::string hex(unsigned char c) {
    static constexpr char digits[] = "0123456789abcdef";
    return {digits[c >> 4], digits[c & 15]};
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  SourceLocation here() const { return {line_, column_}; }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::vector<PendingReference> references_;
};

std::string render_value(const std::string& value) {
  bool bare = !value.empty();
  for (char c : value) bare = bare && is_bare_value_char(c);
  if (bare) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

RelationalDatabaseSchema parse_schema_dsl(std::string_view text) {
  return DslParser(text).parse();
}

std::string render_schema_dsl(const RelationalDatabaseSchema& schema) {
  std::string out = schema.name + "[";
  if (schema.relations.empty()) return out + "]\n";
  out += "\n";
  for (std::size_t r = 0; r < schema.relations.size(); ++r) {
    const auto& rel = schema.relations[r];
    out += "  " + rel.name + "[";
    for (std::size_t i = 0; i < rel.attributes.size(); ++i) {
      const auto& a = rel.attributes[i];
      if (i > 0) out += ", ";
      out += a.name;
      if (a.in_primary_key) out += "*";
      if (a.references) out += "/" + *a.references;
      if (a.domain) {
        out += ":{";
        for (std::size_t v = 0; v < a.domain->size(); ++v) {
          if (v > 0) out += ", ";
          out += render_value((*a.domain)[v]);
        }
        out += "}";
      }
    }
    out += "]";
    if (r + 1 < schema.relations.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

}  // namespace mebnrm
