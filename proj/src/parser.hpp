#pragma once

// Text format for knowledge bases.
//
//   program      ::= (rule | ontology)*
//   rule         ::= atomlist (":-" litlist)? "."
//   atomlist     ::= atom (";" atom)*
//   litlist      ::= lit ("," lit)*
//   lit          ::= atom | "not" atom
//   ontology     ::= "#ontology" (formula ".")* "#end"
//   formula      ::= iff
//   iff          ::= impl ("<->" impl)*          (left-assoc)
//   impl         ::= disj ("->" impl)?           (right-assoc)
//   disj         ::= conj ("|" conj)*
//   conj         ::= unary ("&" unary)*
//   unary        ::= "~" unary | "(" formula ")" | atom
//   atom         ::= IDENT ("(" IDENT ("," IDENT)* ")")?
//
// "%" starts a comment running to end of line. Atom arguments are part of the
// opaque atom name; "f( x , y )" and "f(x,y)" intern the same atom. "_bot" and
// "not" are reserved and rejected as atom names. Ontology formulas are turned
// into clauses by distribution (no auxiliary atoms), gated per formula;
// tautological clauses are dropped with a warning, duplicate literals collapse.

#include <cstddef>
#include <string>
#include <string_view>

#include "kb.hpp"

namespace hmknf {

// Largest clause count a single ontology formula may expand to.
inline constexpr std::size_t kMaxClausesPerFormula = 4096;

KnowledgeBase parse_kb(std::string_view text,
                       std::size_t max_clauses_per_formula = kMaxClausesPerFormula);

KnowledgeBase parse_kb_file(const std::string& path,
                            std::size_t max_clauses_per_formula = kMaxClausesPerFormula);

}  // namespace hmknf
