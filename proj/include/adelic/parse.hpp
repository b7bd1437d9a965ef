// Text syntax for formulas.
//
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" imp)?
//   or      := and ("\/" and)*
//   and     := unary ("/\" unary)*
//   unary   := "~" unary | ("forall"|"exists") vars [":" sort] "." formula
//            | "true" | "false" | "(" formula ")" | atom
//   atom    := term ("=" | "!=" | "<=" | "<") term
//            | PRED ["[" ints "]"] "(" terms ")"
//
// Unicode aliases: ∀ ∃ ¬ ∧ ∨ → ↔ ≤ ≠ ⊤ ⊥ · −.
// Ring terms use + * unary - and binary - (sugar for + -), x^k for a
// product chain, and numerals (k >= 2 denotes 1+...+1). Boolean terms use
// /\ \/ ~ for meet/join/complement; at the top of an atom these must be
// parenthesised, e.g. "(x /\ y) = 0", but not inside predicate arguments.
// Implication, bi-implication, != and < are eliminated while parsing.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adelic/formula.hpp"

namespace adelic {

Formula parse_formula(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

struct RenderOptions {
  bool annotate_sorts = false;
};

std::string render(const Formula& f, RenderOptions opts = {});
std::string render(const Term& t);

struct FormulaLine {
  std::size_t line = 0;
  std::string text;
  Formula formula;
};

// One formula per line; blank lines and text after '#' are ignored.
std::vector<FormulaLine> parse_formula_lines(std::string_view text, const Signature& sig);
std::vector<FormulaLine> read_formula_file(const std::string& path, const Signature& sig);

}  // namespace adelic
