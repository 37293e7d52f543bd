#include "mebnrm/mebn.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "mebnrm/error.hpp"
#include "mebnrm/names.hpp"

namespace mebnrm {

std::string_view to_string(TheoryViolationKind kind) {
  switch (kind) {
    case TheoryViolationKind::UniqueHomeViolation: return "UniqueHomeViolation";
    case TheoryViolationKind::DuplicateResident: return "DuplicateResident";
    case TheoryViolationKind::DuplicateVariable: return "DuplicateVariable";
    case TheoryViolationKind::UndeclaredVariable: return "UndeclaredVariable";
    case TheoryViolationKind::NonUppercaseEntity: return "NonUppercaseEntity";
    case TheoryViolationKind::UnknownEntity: return "UnknownEntity";
    case TheoryViolationKind::ArityMismatch: return "ArityMismatch";
    case TheoryViolationKind::PredicateValues: return "PredicateValues";
    case TheoryViolationKind::InvalidName: return "InvalidName";
  }
  return "?";
}

std::vector<std::string> referenced_entities(const MTheory& theory) {
  std::vector<std::string> out;
  for (const auto& frag : theory.mfrags) {
    for (const auto& c : frag.context_nodes) {
      if (c.kind != ContextKind::IsA) continue;
      if (std::find(out.begin(), out.end(), c.variable.entity) == out.end()) {
        out.push_back(c.variable.entity);
      }
    }
  }
  return out;
}

namespace {

ResidentNode script_view(ResidentNode node) {
  node.kind = NodeKind::Unspecified;
  node.possible_values = {};
  return node;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

bool script_equivalent(const MTheory& a, const MTheory& b) {
  if (a.name != b.name || a.mfrags.size() != b.mfrags.size()) return false;
  if (as_set(referenced_entities(a)) != as_set(referenced_entities(b))) return false;
  for (std::size_t i = 0; i < a.mfrags.size(); ++i) {
    const auto& fa = a.mfrags[i];
    const auto& fb = b.mfrags[i];
    if (fa.name != fb.name || fa.context_nodes != fb.context_nodes ||
        fa.input_refs != fb.input_refs || fa.parent_refs != fb.parent_refs ||
        fa.local_distributions != fb.local_distributions ||
        fa.resident_nodes.size() != fb.resident_nodes.size()) {
      return false;
    }
    for (std::size_t r = 0; r < fa.resident_nodes.size(); ++r) {
      if (script_view(fa.resident_nodes[r]) != script_view(fb.resident_nodes[r])) return false;
    }
  }
  return true;
}

std::vector<TheoryViolation> validate_mtheory(const MTheory& theory) {
  std::vector<TheoryViolation> out;
  auto report = [&](TheoryViolationKind kind, const std::string& frag, const std::string& node,
                    std::string message) {
    out.push_back({kind, frag, node, std::move(message)});
  };

  const std::set<std::string> declared_entities(theory.entities.begin(), theory.entities.end());
  for (const auto& entity : theory.entities) {
    if (!is_identifier(entity)) {
      report(TheoryViolationKind::InvalidName, "", entity, "entity name is not an identifier");
    } else if (entity != to_upper(entity)) {
      report(TheoryViolationKind::NonUppercaseEntity, "", entity, "entity names are uppercase");
    }
  }

  std::map<std::string, std::string> home;           // resident name -> MFrag
  std::map<std::string, std::size_t> arity;          // any node name -> first arity seen
  auto check_arity = [&](const std::string& frag, const NodeRef& ref) {
    auto [it, inserted] = arity.emplace(ref.name, ref.arguments.size());
    if (!inserted && it->second != ref.arguments.size()) {
      report(TheoryViolationKind::ArityMismatch, frag, ref.name,
             "used with " + std::to_string(ref.arguments.size()) + " arguments, elsewhere with " +
                 std::to_string(it->second));
    }
  };

  for (const auto& frag : theory.mfrags) {
    if (!is_identifier(frag.name)) {
      report(TheoryViolationKind::InvalidName, frag.name, "", "MFrag name is not an identifier");
    }
    std::set<std::string> variables;
    for (const auto& c : frag.context_nodes) {
      if (c.kind != ContextKind::IsA) continue;
      const auto& v = c.variable;
      if (!is_identifier(v.name)) {
        report(TheoryViolationKind::InvalidName, frag.name, v.name,
               "ordinary variable name is not an identifier");
      }
      if (!variables.insert(v.name).second) {
        report(TheoryViolationKind::DuplicateVariable, frag.name, v.name,
               "ordinary variable typed by more than one IsA node");
      }
      if (!is_identifier(v.entity)) {
        report(TheoryViolationKind::InvalidName, frag.name, v.entity, "entity name is not an identifier");
      } else if (v.entity != to_upper(v.entity)) {
        report(TheoryViolationKind::NonUppercaseEntity, frag.name, v.entity,
               "entity names are uppercase");
      } else if (!declared_entities.contains(v.entity)) {
        report(TheoryViolationKind::UnknownEntity, frag.name, v.entity,
               "entity is not declared by the theory");
      }
    }

    auto check_args = [&](const std::string& node, const std::vector<std::string>& args) {
      for (const auto& arg : args) {
        if (!variables.contains(arg)) {
          report(TheoryViolationKind::UndeclaredVariable, frag.name, node,
                 "argument '" + arg + "' has no IsA context node");
        }
      }
    };

    std::set<std::string> local;
    for (const auto& r : frag.resident_nodes) {
      if (!is_identifier(r.name)) {
        report(TheoryViolationKind::InvalidName, frag.name, r.name, "node name is not an identifier");
      }
      if (!local.insert(r.name).second) {
        report(TheoryViolationKind::DuplicateResident, frag.name, r.name,
               "resident node defined twice in the same MFrag");
      } else if (auto [it, inserted] = home.emplace(r.name, frag.name); !inserted) {
        report(TheoryViolationKind::UniqueHomeViolation, frag.name, r.name,
               "resident node already has home MFrag '" + it->second + "'");
      }
      if (r.kind == NodeKind::Predicate && r.possible_values != PossibleValues::boolean()) {
        report(TheoryViolationKind::PredicateValues, frag.name, r.name,
               "predicates take exactly the values {true, false}");
      }
      check_args(r.name, r.arguments);
      check_arity(frag.name, NodeRef{r.name, r.arguments});
      for (const auto& p : r.input_parents) {
        check_args(p.name, p.arguments);
        check_arity(frag.name, p);
      }
      for (const auto& p : r.resident_parents) {
        check_args(p.name, p.arguments);
        check_arity(frag.name, p);
      }
    }
    for (const auto& p : frag.input_refs) {
      check_args(p.name, p.arguments);
      check_arity(frag.name, p);
    }
    for (const auto& p : frag.parent_refs) {
      check_args(p.name, p.arguments);
      check_arity(frag.name, p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// emitter

namespace {

std::string ref_text(const std::string& name, const std::vector<std::string>& args) {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i];
  }
  return out + ")";
}

bool balanced(std::string_view text) {
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']' && --depth < 0) return false;
  }
  return depth == 0;
}

void check_payload(std::string_view what, std::string_view text) {
  if (!balanced(text)) {
    throw Error(ErrorKind::InvariantViolation,
                std::string(what) + " '" + std::string(text) + "' has unbalanced brackets");
  }
}

}  // namespace

std::string emit_script(const MTheory& theory) {
  if (const auto violations = validate_mtheory(theory); !violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorKind::InvariantViolation,
                std::string(to_string(v.kind)) + " in " + v.mfrag + ": " + v.node + ": " +
                    v.message);
  }
  std::string out;
  const std::string indent = "    ";
  for (const auto& frag : theory.mfrags) {
    out += "[F: " + frag.name + "\n";
    for (const auto& c : frag.context_nodes) {
      if (c.kind == ContextKind::IsA) {
        out += indent + "[C: IsA(" + c.variable.name + ", " + c.variable.entity + ")]\n";
      } else {
        check_payload("context expression", c.expression);
        out += indent + "[C: " + c.expression + "]\n";
      }
    }
    for (const auto& r : frag.resident_nodes) {
      out += indent + "[R: " + ref_text(r.name, r.arguments);
      const bool has_children =
          !r.input_parents.empty() || !r.resident_parents.empty() || r.local_distribution;
      if (!has_children) {
        out += "]\n";
        continue;
      }
      out += "\n";
      for (const auto& p : r.input_parents) {
        out += indent + indent + "[IP: " + ref_text(p.name, p.arguments) + "]\n";
      }
      for (const auto& p : r.resident_parents) {
        out += indent + indent + "[RP: " + ref_text(p.name, p.arguments) + "]\n";
      }
      if (r.local_distribution) {
        check_payload("local distribution", *r.local_distribution);
        out += indent + indent + "[L: " + *r.local_distribution + "]\n";
      }
      out += indent + "]\n";
    }
    for (const auto& p : frag.input_refs) out += indent + "[IP: " + ref_text(p.name, p.arguments) + "]\n";
    for (const auto& p : frag.parent_refs) out += indent + "[RP: " + ref_text(p.name, p.arguments) + "]\n";
    for (const auto& l : frag.local_distributions) {
      check_payload("local distribution", l);
      out += indent + "[L: " + l + "]\n";
    }
    out += "]\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

class ScriptParser {
 public:
  ScriptParser(std::string_view text, std::string name) : text_(text) {
    theory_.name = std::move(name);
  }

  MTheory parse() {
    skip_space();
    while (!at_end()) {
      const auto where = here();
      const auto tag = open_node();
      if (tag != "F") {
        throw Error(ErrorKind::SyntaxError, "expected an [F: ...] block, found [" + tag + ":",
                    where);
      }
      parse_mfrag();
      skip_space();
    }
    theory_.entities = referenced_entities(theory_);
    return std::move(theory_);
  }

 private:
  void parse_mfrag() {
    MFrag frag;
    frag.name = identifier("MFrag name");
    while (true) {
      skip_space();
      if (at_end()) fail("']' closing MFrag " + frag.name);
      if (peek() == ']') {
        advance();
        break;
      }
      const auto where = here();
      const auto tag = open_node();
      if (tag == "C") {
        frag.context_nodes.push_back(parse_context());
      } else if (tag == "R") {
        frag.resident_nodes.push_back(parse_resident());
      } else if (tag == "IP") {
        frag.input_refs.push_back(parse_ref_node());
      } else if (tag == "RP") {
        frag.parent_refs.push_back(parse_ref_node());
      } else if (tag == "L") {
        frag.local_distributions.push_back(opaque_text());
      } else {
        throw Error(ErrorKind::SyntaxError, "[" + tag + ":] cannot appear inside an MFrag", where);
      }
    }
    theory_.mfrags.push_back(std::move(frag));
  }

  ContextNode parse_context() {
    skip_space();
    const auto where = here();
    const auto start = pos_;
    if (starts_with_word("IsA")) {
      identifier("IsA");
      skip_space();
      if (!at_end() && peek() == '(') {
        advance();
        ContextNode node;
        node.kind = ContextKind::IsA;
        node.variable.name = identifier("ordinary variable");
        expect(',', "',' between the IsA arguments");
        node.variable.entity = identifier("entity type");
        expect(')', "')' closing IsA (IsA takes two arguments)");
        expect(']', "']' closing the context node");
        return node;
      }
      // Not an IsA call after all; rewind and read it as an expression.
      rewind(start, where);
    }
    ContextNode node;
    node.kind = ContextKind::Expression;
    node.expression = collapse_whitespace(opaque_text());
    if (node.expression.empty()) {
      throw Error(ErrorKind::SyntaxError, "empty context node", where);
    }
    return node;
  }

  ResidentNode parse_resident() {
    ResidentNode node;
    auto ref = rv_expression();
    node.name = std::move(ref.name);
    node.arguments = std::move(ref.arguments);
    while (true) {
      skip_space();
      if (at_end()) fail("']' closing resident node " + node.name);
      if (peek() == ']') {
        advance();
        return node;
      }
      const auto where = here();
      const auto tag = open_node();
      if (tag == "IP") {
        node.input_parents.push_back(parse_ref_node());
      } else if (tag == "RP") {
        node.resident_parents.push_back(parse_ref_node());
      } else if (tag == "L") {
        if (node.local_distribution) {
          throw Error(ErrorKind::SyntaxError, "resident node has two [L:] nodes", where);
        }
        node.local_distribution = opaque_text();
      } else {
        throw Error(ErrorKind::SyntaxError,
                    "[" + tag + ":] cannot appear inside a resident node", where);
      }
    }
  }

  NodeRef parse_ref_node() {
    auto ref = rv_expression();
    expect(']', "']' closing the node");
    return ref;
  }

  NodeRef rv_expression() {
    NodeRef ref;
    ref.name = identifier("node name");
    expect('(', "'(' after node name");
    skip_space();
    if (!at_end() && peek() == ')') {
      advance();
      return ref;
    }
    do {
      ref.arguments.push_back(identifier("ordinary variable"));
    } while (accept(','));
    expect(')', "',' or ')' in the argument list");
    return ref;
  }

  // Reads `[TAG:` and returns TAG.
  std::string open_node() {
    skip_space();
    if (at_end() || peek() != '[') fail("'['");
    advance();
    skip_space();
    const auto where = here();
    std::string tag;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) tag.push_back(advance());
    if (tag != "F" && tag != "C" && tag != "R" && tag != "IP" && tag != "RP" && tag != "L") {
      throw Error(ErrorKind::SyntaxError, "expected one of F, C, R, IP, RP, L", where);
    }
    expect(':', "':' after [" + tag);
    return tag;
  }

  // Text up to the ']' matching an already consumed '['; consumes that ']'.
  std::string opaque_text() {
    const auto where = here();
    const auto start = pos_;
    int depth = 0;
    while (true) {
      if (at_end()) throw Error(ErrorKind::SyntaxError, "unterminated node", where);
      const char c = peek();
      if (c == '[') ++depth;
      if (c == ']') {
        if (depth == 0) break;
        --depth;
      }
      advance();
    }
    auto text = trim(text_.substr(start, pos_ - start));
    advance();
    return text;
  }

  std::string identifier(const std::string& what) {
    skip_space();
    if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) fail(what);
    std::string out;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      out.push_back(advance());
    }
    return out;
  }

  bool starts_with_word(std::string_view word) const {
    if (!text_.substr(pos_).starts_with(word)) return false;
    const auto next = pos_ + word.size();
    return next >= text_.size() ||
           !(std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_');
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
      found = std::isprint(c) ? "'" + std::string(1, peek()) + "'" : "byte " + std::to_string(c);
    }
    throw Error(ErrorKind::SyntaxError, "expected " + expected + ", found " + found, here());
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void rewind(std::size_t pos, SourceLocation where) {
    pos_ = pos;
    line_ = where.line;
    column_ = where.column;
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
  MTheory theory_;
};

}  // namespace

MTheory parse_script(std::string_view text, std::string theory_name) {
  return ScriptParser(text, std::move(theory_name)).parse();
}

}  // namespace mebnrm
