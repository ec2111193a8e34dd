#pragma once

#include <string_view>

#include "rill/logic/formula.hpp"

// Rule DSL
//
//   rule     := quant | iff
//   quant    := ("forall" | "exists") IDENT ("," IDENT)* ":" rule
//   iff      := implies ("<->" iff)?
//   implies  := or ("->" implies)?
//   or       := and ("|" and)*
//   and      := unary ("&" unary)*
//   unary    := "!" unary | "(" rule ")" | quant | atom
//   atom     := IDENT ("(" IDENT ("," IDENT)* ")")?
//
// Identifiers are [A-Za-z0-9_]+. An argument is a variable when an
// enclosing quantifier binds it and a constant otherwise. A quantifier body
// extends as far right as possible.
namespace rill::logic {

/// Parses one rule. Throws SyntaxError (with line/column) or ArityError.
Formula parse_rule(std::string_view text);

/// Parses one rule, checking and extending `signature`.
Formula parse_rule(std::string_view text, Signature& signature, std::size_t line = 1);

/// Parses a KB file: one rule per line, `#` starts a comment, blank lines
/// are skipped. Rules must be closed.
KnowledgeBase parse_kb(std::string_view text);
KnowledgeBase load_kb(const std::string& path);

}  // namespace rill::logic
