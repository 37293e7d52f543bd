#pragma once

#include <string>
#include <vector>

#include "mebnrm/config.hpp"
#include "mebnrm/database.hpp"
#include "mebnrm/mebn.hpp"

namespace mebnrm {

/// A ground random-variable statement `Name(a1,...,an)=value`.
struct Assertion {
  std::string node_name;
  std::vector<std::string> arguments;
  std::string value;

  friend bool operator==(const Assertion&, const Assertion&) = default;
  friend auto operator<=>(const Assertion&, const Assertion&) = default;
};

/// `Name(a1,a2)=value`. Tokens containing separators, quotes or whitespace
/// are double-quoted with `""` escapes.
std::string format_assertion(const Assertion& assertion);

/// One assertion per line, LF-terminated.
std::string format_assertions(const std::vector<Assertion>& assertions);

/// Tuples of predicate relations assert `true`; each non-null NF/NK cell
/// asserts `Attr(key values) = cell`. Order: theory MFrag order, then row
/// order, then attribute order. `theory` must come from `db.schema` and
/// `config`.
std::vector<Assertion> map_instances(const RelationalDatabase& db, const MTheory& theory,
                                     const MappingConfig& config);

/// Closed-world complement for every predicate: each tuple of observed
/// entity instances (per argument type) that is absent from the relation
/// asserts `false`. Requires `config.closed_world`.
std::vector<Assertion> enumerate_false_assertions(const RelationalDatabase& db,
                                                  const MTheory& theory,
                                                  const MappingConfig& config);

}  // namespace mebnrm
