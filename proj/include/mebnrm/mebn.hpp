#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mebnrm {

struct OrdinaryVariable {
  std::string name;
  std::string entity;

  friend bool operator==(const OrdinaryVariable&, const OrdinaryVariable&) = default;
};

enum class ContextKind {
  IsA,
  /// Any other context formula, kept as whitespace-normalized text
  /// (e.g. `rgn = Location(obj)`). Never produced by mapping.
  Expression,
};

struct ContextNode {
  ContextKind kind = ContextKind::IsA;
  OrdinaryVariable variable;  // IsA only
  std::string expression;     // Expression only

  static ContextNode is_a(std::string variable, std::string entity) {
    return {ContextKind::IsA, {std::move(variable), std::move(entity)}, {}};
  }

  friend bool operator==(const ContextNode&, const ContextNode&) = default;
};

enum class NodeKind {
  Predicate,
  Function,
  /// Read back from a script, which does not record the node kind.
  Unspecified,
};

/// Possible values of a resident node.
struct PossibleValues {
  enum class Form {
    Boolean,      // {true, false}
    Enumerated,   // Dom(A)
    EntityValued, // instances of `entity`
    Open,         // no declared domain
  };
  Form form = Form::Open;
  std::vector<std::string> values;
  std::string entity;

  static PossibleValues boolean() { return {Form::Boolean, {"true", "false"}, {}}; }

  friend bool operator==(const PossibleValues&, const PossibleValues&) = default;
};

/// Reference to a random variable: `Name(arg, ...)`.
struct NodeRef {
  std::string name;
  std::vector<std::string> arguments;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct ResidentNode {
  std::string name;
  std::vector<std::string> arguments;
  NodeKind kind = NodeKind::Unspecified;
  PossibleValues possible_values;
  std::vector<NodeRef> input_parents;     // [IP: ...]
  std::vector<NodeRef> resident_parents;  // [RP: ...]
  std::optional<std::string> local_distribution;  // opaque [L: ...] payload

  friend bool operator==(const ResidentNode&, const ResidentNode&) = default;
};

struct MFrag {
  std::string name;
  std::vector<ContextNode> context_nodes;
  std::vector<ResidentNode> resident_nodes;
  /// Fragment-level IP/RP/L nodes. Mapping leaves these empty.
  std::vector<NodeRef> input_refs;
  std::vector<NodeRef> parent_refs;
  std::vector<std::string> local_distributions;

  friend bool operator==(const MFrag&, const MFrag&) = default;
};

struct MTheory {
  std::string name;
  std::vector<std::string> entities;  // insertion order, no duplicates
  std::vector<MFrag> mfrags;

  friend bool operator==(const MTheory&, const MTheory&) = default;
};

/// Equality of everything a script can carry: MFrag structure and names,
/// with node kinds and possible values ignored, and the entity set
/// restricted to entities named by IsA nodes.
bool script_equivalent(const MTheory& a, const MTheory& b);

/// Entities appearing in IsA context nodes, in first-use order.
std::vector<std::string> referenced_entities(const MTheory& theory);

enum class TheoryViolationKind {
  UniqueHomeViolation,
  DuplicateResident,
  DuplicateVariable,
  UndeclaredVariable,
  NonUppercaseEntity,
  UnknownEntity,
  ArityMismatch,
  PredicateValues,
  InvalidName,
};

std::string_view to_string(TheoryViolationKind kind);

struct TheoryViolation {
  TheoryViolationKind kind;
  std::string mfrag;
  std::string node;
  std::string message;

  friend bool operator==(const TheoryViolation&, const TheoryViolation&) = default;
};

/// Unique home MFrags, declared ordinary variables, uppercase entities,
/// consistent arities. The acyclicity and bounded-recursion conditions hold
/// vacuously for mapped theories (no parent edges) and are not checked.
std::vector<TheoryViolation> validate_mtheory(const MTheory& theory);

/// Canonical script: 4-space indentation, one node per line, `]` closing
/// each MFrag at column 0. Throws InvariantViolation for invalid theories.
std::string emit_script(const MTheory& theory);

/// Reads F/C/R/IP/RP/L scripts. Entities are recovered from IsA nodes.
/// Errors are SyntaxError with line/column.
MTheory parse_script(std::string_view text, std::string theory_name = {});

}  // namespace mebnrm
