// Many-sorted first-order syntax: signatures, terms and formulas.
//
// Terms and formulas are immutable trees held by shared pointers, so copies
// are cheap and subtrees are shared freely between transformed formulas.
// Indexed predicate families (C[j], Res[n,r], ...) carry their integer
// indices inside the atom, never as term arguments.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace adelic {

struct FunctionDecl {
  std::vector<std::string> arg_sorts;
  std::string result_sort;
};

struct PredicateDecl {
  std::vector<std::string> arg_sorts;
  std::size_t index_count = 0;  // > 0 for indexed families such as C[j]
};

class Signature {
 public:
  Signature() = default;

  void add_sort(const std::string& name);
  void add_function(const std::string& name, FunctionDecl decl);
  void add_predicate(const std::string& name, PredicateDecl decl);
  void add_constant(const std::string& name, const std::string& sort);

  const std::vector<std::string>& sorts() const noexcept { return sorts_; }
  bool has_sort(const std::string& s) const;
  bool single_sorted() const noexcept { return sorts_.size() == 1; }
  const std::string& default_sort() const;

  const FunctionDecl* function(const std::string& name) const;
  const PredicateDecl* predicate(const std::string& name) const;
  std::optional<std::string> constant_sort(const std::string& name) const;

  const std::map<std::string, FunctionDecl>& functions() const noexcept { return functions_; }
  const std::map<std::string, PredicateDecl>& predicates() const noexcept { return predicates_; }
  const std::map<std::string, std::string>& constants() const noexcept { return constants_; }

  // {+, *, - (unary), 0, 1}; integer numerals are accepted as k*1.
  bool is_ring() const;
  // {meet, join, compl, 0, 1, le, Fin, C[j], Res[n,r]}
  bool is_boolean() const;

  std::string name;

 private:
  void require_sort(const std::string& s) const;
  void require_fresh(const std::string& name) const;

  std::vector<std::string> sorts_;
  std::map<std::string, FunctionDecl> functions_;
  std::map<std::string, PredicateDecl> predicates_;
  std::map<std::string, std::string> constants_;
};

const Signature& ring_signature();
const Signature& boolean_signature();

struct Variable {
  std::string name;
  std::string sort;

  friend bool operator==(const Variable&, const Variable&) = default;
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

enum class TermKind : std::uint8_t { Var, Const, Num, App };

class Term;
struct TermNode;

class Term {
 public:
  static Term var(Variable v);
  static Term constant(std::string name, std::string sort);
  static Term numeral(std::int64_t value, std::string sort);
  static Term app(std::string fn, std::vector<Term> args, std::string sort);

  TermKind kind() const;
  const std::string& name() const;  // variable, constant or function name
  const std::string& sort() const;
  std::int64_t value() const;  // numerals only
  const std::vector<Term>& args() const;
  Variable variable() const;

  void collect_vars(std::set<Variable>& out) const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  std::string sort;
  std::int64_t value = 0;
  std::vector<Term> args;
};

enum class FormulaKind : std::uint8_t { True, False, Eq, Pred, Not, And, Or, Forall, Exists };

struct FormulaNode;

class Formula {
 public:
  Formula();  // True

  static Formula truth();
  static Formula falsity();
  static Formula eq(Term lhs, Term rhs);
  static Formula pred(std::string name, std::vector<std::int64_t> indices, std::vector<Term> args);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);  // desugars to ~a \/ b
  static Formula iff(Formula a, Formula b);
  static Formula forall(Variable v, Formula body);
  static Formula exists(Variable v, Formula body);

  // Balanced folds; empty conjunction is True, empty disjunction False.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  FormulaKind kind() const;
  bool is_atom() const { return kind() == FormulaKind::Eq || kind() == FormulaKind::Pred; }
  bool is_quantifier() const { return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists; }

  const std::string& pred_name() const;
  const std::vector<std::int64_t>& indices() const;
  const std::vector<Term>& terms() const;
  const Formula& child(std::size_t i = 0) const;
  std::size_t child_count() const;
  const Variable& bound() const;

  std::set<Variable> free_vars() const;
  std::size_t quantifier_depth() const;
  bool is_quantifier_free() const { return quantifier_depth() == 0; }
  bool is_sentence() const { return free_vars().empty(); }
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  std::string pred;
  std::vector<std::int64_t> indices;
  std::vector<Term> terms;
  std::vector<Formula> children;
  Variable var;
};

// Capture-avoiding substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<Variable, Term>& sub);
Term substitute(const Term& t, const std::map<Variable, Term>& sub);

// A name not in `taken`, derived from `base` by appending primes/digits.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);
std::set<std::string> all_var_names(const Formula& f);

}  // namespace adelic
