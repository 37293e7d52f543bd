#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mebnrm/database.hpp"
#include "mebnrm/schema.hpp"

namespace mebnrm {

enum class SchemaFormat { Dsl, Ddl };

struct SchemaSource {
  SchemaFormat format = SchemaFormat::Dsl;
  std::string text;
  std::string origin;  // file path or "<stdin>"
};

/// `.rdbs` -> DSL, `.sql` -> DDL; anything else is unknown.
std::optional<SchemaFormat> format_from_extension(const std::filesystem::path& path);
std::optional<SchemaFormat> parse_format_name(std::string_view name);

/// Reads a schema file ("-" reads stdin). The format comes from `format` when
/// given, else from the extension; content is never sniffed.
SchemaSource read_schema_source(const std::filesystem::path& path,
                                std::optional<SchemaFormat> format = std::nullopt);

/// Parses either format. DDL schemas are named after the file stem.
RelationalDatabaseSchema parse_schema(const SchemaSource& source);

/// Compact bracket notation:
///
///     Schema ::= Name "[" (Relation ("," Relation)*)? "]"
///     Relation ::= Name "[" Attr ("," Attr)* "]"
///     Attr ::= Name "*"? ("/" Name)? (":" "{" Value ("," Value)* "}")?
///
/// `*` marks primary-key members, `/Target` a foreign key. Values are bare
/// runs of `[A-Za-z0-9_.+-]` or double-quoted strings with `""` escapes.
/// All errors carry a line/column.
RelationalDatabaseSchema parse_schema_dsl(std::string_view text);

/// Canonical DSL text; parse_schema_dsl(render_schema_dsl(s)) == s.
std::string render_schema_dsl(const RelationalDatabaseSchema& schema);

/// CREATE TABLE statements with column definitions, column- or table-level
/// PRIMARY KEY, and single-column FOREIGN KEY ... REFERENCES. ENUM('a', ...)
/// column types become attribute domains. Any other statement or clause is
/// rejected with UnsupportedStatement.
RelationalDatabaseSchema parse_sql_ddl(std::string_view text, std::string schema_name = "schema");

/// One parsed CSV record and the 1-based line it starts on.
struct CsvRecord {
  std::size_t line = 1;
  std::vector<std::string> fields;
  std::vector<bool> quoted;
};

/// Comma-separated, `"` quoting with `""` escapes, LF or CRLF endings.
/// Blank lines are skipped.
std::vector<CsvRecord> parse_csv(std::string_view text);

/// Loads `<relation>.csv` for every relation in `directory`. The header must
/// list the attributes in schema order; an unquoted empty cell or `null` is a
/// null. Missing files give empty instances and a warning.
RelationalDatabase load_instances(const std::filesystem::path& directory,
                                  const RelationalDatabaseSchema& schema,
                                  std::vector<std::string>* warnings = nullptr);

}  // namespace mebnrm
