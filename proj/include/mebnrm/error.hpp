#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mebnrm {

enum class ErrorKind {
  // schema model
  UnknownRelation,
  UnknownAttribute,
  NameCollision,
  NotNormalized,
  // ingestion
  SyntaxError,
  DuplicateName,
  UnresolvedReference,
  NoPrimaryKey,
  UnsupportedStatement,
  DanglingReference,
  HeaderMismatch,
  DomainViolation,
  NullPrimaryKey,
  DuplicatePrimaryKey,
  ReferentialIntegrity,
  // mebn model / mapper
  InvariantViolation,
  NotEntityRelation,
  NotRelationshipRelation,
  HasNonKeyAttributes,
  AttributeIsKey,
  UniqueHomeViolation,
  PrefixCollision,
  // instance mapper
  ArityMismatch,
  SchemaMismatch,
  OpenWorldRequested,
  UnboundedEntitySet,
  // plumbing
  InvalidConfig,
  InvalidSpec,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// 1-based position inside a text input.
struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

/// The single exception type thrown by the library. `kind` identifies the
/// failure; parsers always attach a location.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message,
        std::optional<SourceLocation> location = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceLocation>& location() const noexcept { return location_; }
  /// Message without the kind/location decoration.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::optional<SourceLocation> location_;
  std::string detail_;
};

}  // namespace mebnrm
