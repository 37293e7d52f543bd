#include "mebnrm/error.hpp"

namespace mebnrm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownRelation: return "UnknownRelation";
    case ErrorKind::UnknownAttribute: return "UnknownAttribute";
    case ErrorKind::NameCollision: return "NameCollision";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::NoPrimaryKey: return "NoPrimaryKey";
    case ErrorKind::UnsupportedStatement: return "UnsupportedStatement";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::HeaderMismatch: return "HeaderMismatch";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NullPrimaryKey: return "NullPrimaryKey";
    case ErrorKind::DuplicatePrimaryKey: return "DuplicatePrimaryKey";
    case ErrorKind::ReferentialIntegrity: return "ReferentialIntegrity";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NotEntityRelation: return "NotEntityRelation";
    case ErrorKind::NotRelationshipRelation: return "NotRelationshipRelation";
    case ErrorKind::HasNonKeyAttributes: return "HasNonKeyAttributes";
    case ErrorKind::AttributeIsKey: return "AttributeIsKey";
    case ErrorKind::UniqueHomeViolation: return "UniqueHomeViolation";
    case ErrorKind::PrefixCollision: return "PrefixCollision";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::OpenWorldRequested: return "OpenWorldRequested";
    case ErrorKind::UnboundedEntitySet: return "UnboundedEntitySet";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     const std::optional<SourceLocation>& location) {
  std::string out(to_string(kind));
  if (location) {
    out += " at " + std::to_string(location->line) + ":" + std::to_string(location->column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message, std::optional<SourceLocation> location)
    : std::runtime_error(decorate(kind, message, location)),
      kind_(kind),
      location_(location),
      detail_(std::move(message)) {}

}  // namespace mebnrm
