#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "mebnrm/error.hpp"
#include "mebnrm/ingest.hpp"

namespace mebnrm {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::optional<SchemaFormat> format_from_extension(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".rdbs") return SchemaFormat::Dsl;
  if (ext == ".sql") return SchemaFormat::Ddl;
  return std::nullopt;
}

std::optional<SchemaFormat> parse_format_name(std::string_view name) {
  if (name == "dsl") return SchemaFormat::Dsl;
  if (name == "ddl") return SchemaFormat::Ddl;
  return std::nullopt;
}

SchemaSource read_schema_source(const fs::path& path, std::optional<SchemaFormat> format) {
  SchemaSource source;
  if (path == "-") {
    if (!format) throw Error(ErrorKind::Io, "reading a schema from stdin requires --format");
    source.format = *format;
    source.text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    source.origin = "<stdin>";
    return source;
  }
  if (!format) format = format_from_extension(path);
  if (!format) {
    throw Error(ErrorKind::Io, "cannot tell the format of " + path.string() +
                                   " (use .rdbs, .sql or --format)");
  }
  source.format = *format;
  source.text = read_file(path);
  source.origin = path.string();
  return source;
}

RelationalDatabaseSchema parse_schema(const SchemaSource& source) {
  if (source.format == SchemaFormat::Dsl) return parse_schema_dsl(source.text);
  auto name = source.origin == "<stdin>" ? std::string("schema") : fs::path(source.origin).stem().string();
  return parse_sql_ddl(source.text, std::move(name));
}

std::vector<CsvRecord> parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    CsvRecord record;
    record.line = line;
    std::string field;
    bool quoted = false;
    bool any_content = false;
    bool done = false;
    while (!done) {
      if (pos >= text.size()) {
        done = true;
        break;
      }
      const char c = text[pos];
      if (c == '"' && field.empty() && !quoted) {
        quoted = true;
        any_content = true;
        ++pos;
        // quoted field: read to the closing quote
        while (true) {
          if (pos >= text.size()) {
            throw Error(ErrorKind::SyntaxError, "unterminated quoted field",
                        SourceLocation{record.line, 1});
          }
          const char q = text[pos++];
          if (q == '\n') ++line;
          if (q == '"') {
            if (pos < text.size() && text[pos] == '"') {
              field.push_back('"');
              ++pos;
              continue;
            }
            break;
          }
          field.push_back(q);
        }
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          throw Error(ErrorKind::SyntaxError, "text after closing quote",
                      SourceLocation{line, 1});
        }
        continue;
      }
      if (c == ',') {
        record.fields.push_back(std::move(field));
        record.quoted.push_back(quoted);
        field.clear();
        quoted = false;
        any_content = true;
        ++pos;
        continue;
      }
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
        ++pos;
        continue;
      }
      if (c == '\n') {
        ++pos;
        ++line;
        done = true;
        break;
      }
      field.push_back(c);
      any_content = true;
      ++pos;
    }
    if (!any_content && field.empty()) continue;
    record.fields.push_back(std::move(field));
    record.quoted.push_back(quoted);
    records.push_back(std::move(record));
  }
  return records;
}

RelationalDatabase load_instances(const fs::path& directory,
                                  const RelationalDatabaseSchema& schema,
                                  std::vector<std::string>* warnings) {
  validate_structure(schema);
  if (!fs::is_directory(directory)) {
    throw Error(ErrorKind::Io, directory.string() + " is not a directory");
  }
  RelationalDatabase db;
  db.schema = schema;
  // Source line of every loaded row, for error messages.
  std::vector<std::vector<std::size_t>> lines;
  std::vector<std::string> files;

  for (const auto& rel : schema.relations) {
    RelationInstance inst{rel.name, {}};
    const auto path = directory / (rel.name + ".csv");
    files.push_back(path.string());
    lines.emplace_back();
    if (!fs::exists(path)) {
      if (warnings) warnings->push_back("no data file " + path.string() + "; " + rel.name + " is empty");
      db.instances.push_back(std::move(inst));
      continue;
    }
    std::vector<CsvRecord> records;
    try {
      records = parse_csv(read_file(path));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SyntaxError) throw;
      const auto at = e.location().value_or(SourceLocation{});
      throw Error(ErrorKind::SyntaxError,
                  path.string() + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) +
                      ": " + e.detail(),
                  e.location());
    }
    if (records.empty()) {
      throw Error(ErrorKind::HeaderMismatch, path.string() + ": missing header row");
    }
    const auto& header = records.front();
    bool header_ok = header.fields.size() == rel.attributes.size();
    for (std::size_t i = 0; header_ok && i < header.fields.size(); ++i) {
      header_ok = header.fields[i] == rel.attributes[i].name;
    }
    if (!header_ok) {
      std::string expected;
      for (const auto& a : rel.attributes) expected += (expected.empty() ? "" : ",") + a.name;
      throw Error(ErrorKind::HeaderMismatch,
                  path.string() + ": header must be '" + expected + "'", SourceLocation{1, 1});
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
      const auto& record = records[r];
      if (record.fields.size() != rel.attributes.size()) {
        throw Error(ErrorKind::HeaderMismatch,
                    path.string() + ":" + std::to_string(record.line) + ": expected " +
                        std::to_string(rel.attributes.size()) + " fields, found " +
                        std::to_string(record.fields.size()),
                    SourceLocation{record.line, 1});
      }
      Row row;
      for (std::size_t c = 0; c < record.fields.size(); ++c) {
        const auto& field = record.fields[c];
        if (!record.quoted[c] && (field.empty() || field == "null")) {
          row.emplace_back(std::nullopt);
        } else {
          row.emplace_back(field);
        }
      }
      inst.rows.push_back(std::move(row));
      lines.back().push_back(record.line);
    }
    db.instances.push_back(std::move(inst));
  }

  validate_database(db, [&](const CellRef& ref) {
    for (std::size_t r = 0; r < schema.relations.size(); ++r) {
      if (schema.relations[r].name != ref.relation) continue;
      const auto line = ref.row < lines[r].size() ? lines[r][ref.row] : 0;
      return files[r] + ":" + std::to_string(line) + ": column " +
             schema.relations[r].attributes[ref.column].name;
    }
    return ref.relation;
  });
  return db;
}

}  // namespace mebnrm
