#include <cctype>
#include <optional>

#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

namespace {

enum class TokenType { Word, QuotedName, String, Number, Punct, End };

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  SourceLocation where;
};

class SqlLexer {
 public:
  explicit SqlLexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token token;
      token.where = {line_, column_};
      if (at_end()) {
        out.push_back(std::move(token));
        return out;
      }
      const char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        token.type = TokenType::Word;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                             peek() == '$')) {
          token.text.push_back(advance());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        token.type = TokenType::Number;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
          token.text.push_back(advance());
        }
      } else if (c == '`' || c == '"') {
        token.type = TokenType::QuotedName;
        token.text = quoted(c, token.where);
      } else if (c == '\'') {
        token.type = TokenType::String;
        token.text = quoted(c, token.where);
      } else if (std::string_view("(),;.=<>+-*/%!|&").find(c) != std::string_view::npos) {
        token.type = TokenType::Punct;
        token.text.push_back(advance());
      } else {
        const auto byte = static_cast<unsigned char>(c);
        throw Error(ErrorKind::SyntaxError,
                    std::isprint(byte) ? "unexpected character '" + std::string(1, c) + "'"
                                       : "unexpected byte " + std::to_string(byte),
                    token.where);
      }
      out.push_back(std::move(token));
    }
  }

 private:
  std::string quoted(char quote, SourceLocation where) {
    advance();
    std::string out;
    while (true) {
      if (at_end()) {
        throw Error(ErrorKind::SyntaxError, std::string("unterminated ") + quote + " quote", where);
      }
      const char c = advance();
      if (c == quote) {
        if (!at_end() && peek() == quote) {
          out.push_back(advance());
          continue;
        }
        return out;
      }
      out.push_back(c);
    }
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (starts_with("--")) {
        while (!at_end() && peek() != '\n') advance();
      } else if (starts_with("/*")) {
        const SourceLocation where{line_, column_};
        advance();
        advance();
        while (!starts_with("*/")) {
          if (at_end()) throw Error(ErrorKind::SyntaxError, "unterminated comment", where);
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }
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

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

struct PendingForeignKey {
  std::size_t relation;
  std::size_t attribute;
  std::string target;
  std::optional<std::string> target_column;
  SourceLocation where;
};

class DdlParser {
 public:
  DdlParser(std::string_view text, std::string schema_name)
      : tokens_(SqlLexer(text).run()), schema_name_(std::move(schema_name)) {}

  RelationalDatabaseSchema parse() {
    RelationalDatabaseSchema schema;
    schema.name = schema_name_;
    while (current().type != TokenType::End) {
      if (accept_punct(";")) continue;
      parse_statement(schema);
    }
    resolve(schema);
    return schema;
  }

 private:
  void parse_statement(RelationalDatabaseSchema& schema) {
    const auto start = current();
    if (!accept_keyword("CREATE")) unsupported(start);
    if (!accept_keyword("TABLE")) unsupported(start);
    if (accept_keyword("IF")) {
      expect_keyword("NOT");
      expect_keyword("EXISTS");
    }
    const auto name_token = current();
    RelationSchema rel;
    rel.name = name("table name");
    if (current().type == TokenType::Punct && current().text == ".") {
      throw Error(ErrorKind::UnsupportedStatement, "qualified table names are not supported",
                  current().where);
    }
    if (schema.find(rel.name)) {
      throw Error(ErrorKind::DuplicateName, "table '" + rel.name + "' created twice",
                  name_token.where);
    }
    const auto relation_index = schema.relations.size();
    primary_key_seen_ = false;
    expect_punct("(");
    do {
      parse_element(rel, relation_index);
    } while (accept_punct(","));
    expect_punct(")");
    if (current().type != TokenType::End && !(current().type == TokenType::Punct &&
                                              current().text == ";")) {
      throw Error(ErrorKind::UnsupportedStatement,
                  "table options after the column list are not supported", current().where);
    }
    if (rel.primary_key().empty()) {
      throw Error(ErrorKind::NoPrimaryKey, "table '" + rel.name + "' declares no primary key",
                  name_token.where);
    }
    schema.relations.push_back(std::move(rel));
  }

  void parse_element(RelationSchema& rel, std::size_t relation_index) {
    const auto start = current();
    if (accept_keyword("CONSTRAINT")) {
      name("constraint name");
      parse_table_constraint(rel, relation_index, start);
      return;
    }
    if (is_keyword("PRIMARY") || is_keyword("FOREIGN")) {
      parse_table_constraint(rel, relation_index, start);
      return;
    }
    if (is_keyword("UNIQUE") || is_keyword("CHECK") || is_keyword("INDEX") || is_keyword("KEY")) {
      unsupported(start);
    }
    parse_column(rel, relation_index);
  }

  void parse_table_constraint(RelationSchema& rel, std::size_t relation_index,
                              const Token& start) {
    if (accept_keyword("PRIMARY")) {
      expect_keyword("KEY");
      expect_punct("(");
      std::vector<std::pair<std::string, SourceLocation>> columns;
      do {
        const auto where = current().where;
        columns.emplace_back(name("column name"), where);
      } while (accept_punct(","));
      expect_punct(")");
      mark_primary_key(rel, start.where);
      for (const auto& [column, where] : columns) {
        auto* attribute = find_column(rel, column, where);
        if (attribute->in_primary_key) {
          throw Error(ErrorKind::DuplicateName, "column '" + column + "' listed twice in key",
                      where);
        }
        attribute->in_primary_key = true;
      }
      return;
    }
    if (accept_keyword("FOREIGN")) {
      expect_keyword("KEY");
      expect_punct("(");
      const auto where = current().where;
      const auto column = name("column name");
      if (current().type == TokenType::Punct && current().text == ",") {
        throw Error(ErrorKind::UnsupportedStatement,
                    "multi-column foreign keys cannot be expressed as a single reference",
                    current().where);
      }
      expect_punct(")");
      auto* attribute = find_column(rel, column, where);
      parse_references(rel, relation_index, *attribute, where);
      return;
    }
    unsupported(start);
  }

  void parse_column(RelationSchema& rel, std::size_t relation_index) {
    const auto where = current().where;
    AttributeDef attribute;
    attribute.name = name("column name");
    if (rel.find(attribute.name)) {
      throw Error(ErrorKind::DuplicateName, "column '" + attribute.name + "' declared twice",
                  where);
    }
    parse_type(attribute);
    rel.attributes.push_back(std::move(attribute));
    const auto index = rel.attributes.size() - 1;
    while (true) {
      const auto token = current();
      if (accept_keyword("NOT")) {
        expect_keyword("NULL");
      } else if (accept_keyword("NULL")) {
      } else if (accept_keyword("PRIMARY")) {
        expect_keyword("KEY");
        mark_primary_key(rel, token.where);
        rel.attributes[index].in_primary_key = true;
      } else if (is_keyword("REFERENCES")) {
        parse_references(rel, relation_index, rel.attributes[index], token.where, index);
      } else if (token.type == TokenType::Punct &&
                 (token.text == "," || token.text == ")")) {
        return;
      } else {
        throw Error(ErrorKind::UnsupportedStatement,
                    "unsupported column clause '" + token.text + "'", token.where);
      }
    }
  }

  void parse_type(AttributeDef& attribute) {
    const auto token = current();
    if (token.type != TokenType::Word) {
      throw Error(ErrorKind::SyntaxError, "expected a column type", token.where);
    }
    advance();
    const auto type = to_upper(token.text);
    attribute.sql_type = type;
    if (!accept_punct("(")) return;
    std::vector<std::string> arguments;
    do {
      const auto arg = current();
      if (arg.type != TokenType::Number && arg.type != TokenType::String) {
        throw Error(ErrorKind::SyntaxError, "expected a type argument", arg.where);
      }
      advance();
      arguments.push_back(arg.text);
      if (type == "ENUM") {
        if (arg.type != TokenType::String) {
          throw Error(ErrorKind::SyntaxError, "ENUM members must be quoted strings", arg.where);
        }
        if (!attribute.domain) attribute.domain.emplace();
        for (const auto& v : *attribute.domain) {
          if (v == arg.text) {
            throw Error(ErrorKind::DuplicateName, "ENUM member '" + v + "' repeated", arg.where);
          }
        }
        attribute.domain->push_back(arg.text);
      }
    } while (accept_punct(","));
    expect_punct(")");
    attribute.sql_type += "(";
    for (std::size_t i = 0; i < arguments.size(); ++i) {
      if (i > 0) attribute.sql_type += ",";
      attribute.sql_type += arguments[i];
    }
    attribute.sql_type += ")";
  }

  void parse_references(RelationSchema& rel, std::size_t relation_index,
                        AttributeDef& attribute, SourceLocation where,
                        std::optional<std::size_t> index = std::nullopt) {
    expect_keyword("REFERENCES");
    if (attribute.references) {
      throw Error(ErrorKind::DuplicateName,
                  "column '" + attribute.name + "' already has a foreign key", where);
    }
    const auto target_where = current().where;
    PendingForeignKey fk;
    fk.relation = relation_index;
    fk.attribute = index ? *index : static_cast<std::size_t>(&attribute - rel.attributes.data());
    fk.target = name("referenced table");
    fk.where = target_where;
    if (accept_punct("(")) {
      fk.target_column = name("referenced column");
      if (current().type == TokenType::Punct && current().text == ",") {
        throw Error(ErrorKind::UnsupportedStatement,
                    "multi-column foreign keys cannot be expressed as a single reference",
                    current().where);
      }
      expect_punct(")");
    }
    if (is_keyword("ON") || is_keyword("MATCH")) {
      throw Error(ErrorKind::UnsupportedStatement, "referential actions are not supported",
                  current().where);
    }
    attribute.references = fk.target;
    pending_.push_back(std::move(fk));
  }

  void resolve(const RelationalDatabaseSchema& schema) {
    for (const auto& fk : pending_) {
      const auto* target = schema.find(fk.target);
      if (!target) {
        throw Error(ErrorKind::DanglingReference, "no table named '" + fk.target + "'", fk.where);
      }
      const auto key = target->primary_key();
      if (key.size() != 1) {
        throw Error(ErrorKind::DanglingReference,
                    "'" + fk.target + "' has a composite primary key; a single column cannot "
                    "reference it",
                    fk.where);
      }
      if (fk.target_column && *fk.target_column != key.front()->name) {
        throw Error(ErrorKind::DanglingReference,
                    "'" + fk.target + "." + *fk.target_column + "' is not the primary key of " +
                        fk.target,
                    fk.where);
      }
    }
  }

  void mark_primary_key(const RelationSchema& rel, SourceLocation where) {
    if (primary_key_seen_) {
      throw Error(ErrorKind::SyntaxError, "table '" + rel.name + "' declares two primary keys",
                  where);
    }
    primary_key_seen_ = true;
  }

  AttributeDef* find_column(RelationSchema& rel, const std::string& column,
                            SourceLocation where) {
    for (auto& a : rel.attributes) {
      if (a.name == column) return &a;
    }
    throw Error(ErrorKind::UnknownAttribute,
                "table '" + rel.name + "' has no column '" + column + "'", where);
  }

  std::string name(const std::string& what) {
    const auto token = current();
    if (token.type != TokenType::Word && token.type != TokenType::QuotedName) {
      throw Error(ErrorKind::SyntaxError,
                  "expected " + what + ", found " + describe(token), token.where);
    }
    if (!is_identifier(token.text)) {
      throw Error(ErrorKind::SyntaxError, "'" + token.text + "' is not a valid identifier",
                  token.where);
    }
    advance();
    return token.text;
  }

  [[noreturn]] void unsupported(const Token& token) {
    throw Error(ErrorKind::UnsupportedStatement,
                "only CREATE TABLE statements with keys are supported, found " + describe(token),
                token.where);
  }

  static std::string describe(const Token& token) {
    if (token.type == TokenType::End) return "end of input";
    return "'" + token.text + "'";
  }

  bool is_keyword(std::string_view keyword) const {
    return current().type == TokenType::Word && to_upper(current().text) == keyword;
  }
  bool accept_keyword(std::string_view keyword) {
    if (!is_keyword(keyword)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view keyword) {
    if (!accept_keyword(keyword)) {
      throw Error(ErrorKind::SyntaxError,
                  "expected " + std::string(keyword) + ", found " + describe(current()),
                  current().where);
    }
  }
  bool accept_punct(std::string_view p) {
    if (current().type == TokenType::Punct && current().text == p) {
      advance();
      return true;
    }
    return false;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) {
      throw Error(ErrorKind::SyntaxError,
                  "expected '" + std::string(p) + "', found " + describe(current()),
                  current().where);
    }
  }

  const Token& current() const { return tokens_[pos_]; }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string schema_name_;
  std::vector<PendingForeignKey> pending_;
  bool primary_key_seen_ = false;
};

}  // namespace

RelationalDatabaseSchema parse_sql_ddl(std::string_view text, std::string schema_name) {
  return DdlParser(text, std::move(schema_name)).parse();
}

}  // namespace mebnrm
