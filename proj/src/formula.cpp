#include "adelic/formula.hpp"

#include <algorithm>
#include <functional>

#include "adelic/error.hpp"

namespace adelic {

namespace {

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

// ---- Signature -------------------------------------------------------------

void Signature::require_sort(const std::string& s) const {
  if (!has_sort(s)) throw SortError("undeclared sort '" + s + "'");
}

void Signature::require_fresh(const std::string& n) const {
  if (functions_.count(n) || predicates_.count(n) || constants_.count(n))
    throw Error("symbol '" + n + "' declared twice");
}

void Signature::add_sort(const std::string& s) {
  if (has_sort(s)) throw Error("sort '" + s + "' declared twice");
  sorts_.push_back(s);
}

void Signature::add_function(const std::string& n, FunctionDecl decl) {
  require_fresh(n);
  for (const auto& s : decl.arg_sorts) require_sort(s);
  require_sort(decl.result_sort);
  functions_.emplace(n, std::move(decl));
}

void Signature::add_predicate(const std::string& n, PredicateDecl decl) {
  require_fresh(n);
  for (const auto& s : decl.arg_sorts) require_sort(s);
  predicates_.emplace(n, std::move(decl));
}

void Signature::add_constant(const std::string& n, const std::string& sort) {
  require_fresh(n);
  require_sort(sort);
  constants_.emplace(n, sort);
}

bool Signature::has_sort(const std::string& s) const {
  return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
}

const std::string& Signature::default_sort() const {
  if (!single_sorted()) throw SortError("signature is not single-sorted; annotate variables");
  return sorts_.front();
}

const FunctionDecl* Signature::function(const std::string& n) const {
  auto it = functions_.find(n);
  return it == functions_.end() ? nullptr : &it->second;
}

const PredicateDecl* Signature::predicate(const std::string& n) const {
  auto it = predicates_.find(n);
  return it == predicates_.end() ? nullptr : &it->second;
}

std::optional<std::string> Signature::constant_sort(const std::string& n) const {
  auto it = constants_.find(n);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

bool Signature::is_ring() const {
  return single_sorted() && function("+") && function("*") && function("-") &&
         constants_.count("0") && constants_.count("1");
}

bool Signature::is_boolean() const {
  return single_sorted() && function("meet") && function("join") && function("compl") &&
         predicate("Fin") && predicate("C") && predicate("Res");
}

const Signature& ring_signature() {
  static const Signature sig = [] {
    Signature s;
    s.name = "RING";
    s.add_sort("ring");
    s.add_function("+", {{"ring", "ring"}, "ring"});
    s.add_function("*", {{"ring", "ring"}, "ring"});
    s.add_function("-", {{"ring"}, "ring"});
    s.add_constant("0", "ring");
    s.add_constant("1", "ring");
    return s;
  }();
  return sig;
}

const Signature& boolean_signature() {
  static const Signature sig = [] {
    Signature s;
    s.name = "BOOLEAN_ENRICHED";
    s.add_sort("bool");
    s.add_function("meet", {{"bool", "bool"}, "bool"});
    s.add_function("join", {{"bool", "bool"}, "bool"});
    s.add_function("compl", {{"bool"}, "bool"});
    s.add_constant("0", "bool");
    s.add_constant("1", "bool");
    s.add_predicate("le", {{"bool", "bool"}, 0});
    s.add_predicate("Fin", {{"bool"}, 0});
    s.add_predicate("C", {{"bool"}, 1});
    s.add_predicate("Res", {{"bool"}, 2});
    return s;
  }();
  return sig;
}

// ---- Term ------------------------------------------------------------------

Term Term::var(Variable v) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Var, std::move(v.name), std::move(v.sort), 0, {}}));
}

Term Term::constant(std::string name, std::string sort) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Const, std::move(name), std::move(sort), 0, {}}));
}

Term Term::numeral(std::int64_t value, std::string sort) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Num, std::to_string(value), std::move(sort), value, {}}));
}

Term Term::app(std::string fn, std::vector<Term> args, std::string sort) {
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::App, std::move(fn), std::move(sort), 0, std::move(args)}));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::sort() const { return node_->sort; }
std::int64_t Term::value() const { return node_->value; }
const std::vector<Term>& Term::args() const { return node_->args; }
Variable Term::variable() const { return Variable{node_->name, node_->sort}; }

void Term::collect_vars(std::set<Variable>& out) const {
  if (kind() == TermKind::Var) {
    out.insert(variable());
    return;
  }
  for (const auto& a : args()) a.collect_vars(out);
}

std::size_t Term::hash() const {
  std::size_t h = static_cast<std::size_t>(kind());
  hash_combine(h, std::hash<std::string>{}(name()));
  for (const auto& a : args()) hash_combine(h, a.hash());
  return h;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.sort() != b.sort() ||
      a.value() != b.value() || a.args().size() != b.args().size())
    return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

// ---- Formula ---------------------------------------------------------------

Formula::Formula() : node_(std::make_shared<const FormulaNode>()) {}

Formula Formula::truth() { return Formula(); }

Formula Formula::falsity() {
  FormulaNode n;
  n.kind = FormulaKind::False;
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::eq(Term lhs, Term rhs) {
  if (lhs.sort() != rhs.sort())
    throw SortError("equation between sorts '" + lhs.sort() + "' and '" + rhs.sort() + "'");
  FormulaNode n;
  n.kind = FormulaKind::Eq;
  n.terms = {std::move(lhs), std::move(rhs)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::pred(std::string name, std::vector<std::int64_t> indices, std::vector<Term> args) {
  FormulaNode n;
  n.kind = FormulaKind::Pred;
  n.pred = std::move(name);
  n.indices = std::move(indices);
  n.terms = std::move(args);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::negation(Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Not;
  n.children = {std::move(f)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) {
  FormulaNode n;
  n.kind = FormulaKind::And;
  n.children = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::disj(Formula a, Formula b) {
  FormulaNode n;
  n.kind = FormulaKind::Or;
  n.children = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::implies(Formula a, Formula b) { return disj(negation(std::move(a)), std::move(b)); }

Formula Formula::iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }

Formula Formula::forall(Variable v, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Forall;
  n.var = std::move(v);
  n.children = {std::move(body)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::exists(Variable v, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Exists;
  n.var = std::move(v);
  n.children = {std::move(body)};
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

namespace {

template <class Combine>
Formula fold(const std::vector<Formula>& fs, std::size_t lo, std::size_t hi, Combine combine) {
  if (hi - lo == 1) return fs[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return combine(fold(fs, lo, mid, combine), fold(fs, mid, hi, combine));
}

}  // namespace

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  return fold(fs, 0, fs.size(), [](Formula a, Formula b) { return conj(a, b); });
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  return fold(fs, 0, fs.size(), [](Formula a, Formula b) { return disj(a, b); });
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::pred_name() const { return node_->pred; }
const std::vector<std::int64_t>& Formula::indices() const { return node_->indices; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::child(std::size_t i) const { return node_->children.at(i); }
std::size_t Formula::child_count() const { return node_->children.size(); }
const Variable& Formula::bound() const { return node_->var; }

namespace {

void free_vars_rec(const Formula& f, std::set<Variable>& bound, std::set<Variable>& out) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return;
    case FormulaKind::Eq:
    case FormulaKind::Pred: {
      std::set<Variable> vs;
      for (const auto& t : f.terms()) t.collect_vars(vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
      for (std::size_t i = 0; i < f.child_count(); ++i) free_vars_rec(f.child(i), bound, out);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool fresh = bound.insert(f.bound()).second;
      free_vars_rec(f.child(), bound, out);
      if (fresh) bound.erase(f.bound());
      return;
    }
  }
}

}  // namespace

std::set<Variable> Formula::free_vars() const {
  std::set<Variable> bound, out;
  free_vars_rec(*this, bound, out);
  return out;
}

std::size_t Formula::quantifier_depth() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < child_count(); ++i) d = std::max(d, child(i).quantifier_depth());
  return is_quantifier() ? d + 1 : d;
}

std::size_t Formula::hash() const {
  std::size_t h = static_cast<std::size_t>(kind());
  hash_combine(h, std::hash<std::string>{}(pred_name()));
  for (auto i : indices()) hash_combine(h, std::hash<std::int64_t>{}(i));
  for (const auto& t : terms()) hash_combine(h, t.hash());
  for (std::size_t i = 0; i < child_count(); ++i) hash_combine(h, child(i).hash());
  if (is_quantifier()) hash_combine(h, std::hash<std::string>{}(bound().name));
  return h;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.pred == y.pred && x.indices == y.indices && x.terms == y.terms &&
         x.var == y.var && x.children == y.children;
}

// ---- substitution ----------------------------------------------------------

Term substitute(const Term& t, const std::map<Variable, Term>& sub) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = sub.find(t.variable());
      return it == sub.end() ? t : it->second;
    }
    case TermKind::Const:
    case TermKind::Num:
      return t;
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, sub));
      return Term::app(t.name(), std::move(args), t.sort());
    }
  }
  return t;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

namespace {

void names_rec(const Formula& f, std::set<std::string>& out) {
  if (f.is_quantifier()) out.insert(f.bound().name);
  std::set<Variable> vs;
  for (const auto& t : f.terms()) t.collect_vars(vs);
  for (const auto& v : vs) out.insert(v.name);
  for (std::size_t i = 0; i < f.child_count(); ++i) names_rec(f.child(i), out);
}

}  // namespace

std::set<std::string> all_var_names(const Formula& f) {
  std::set<std::string> out;
  names_rec(f, out);
  return out;
}

Formula substitute(const Formula& f, const std::map<Variable, Term>& sub) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
      return Formula::eq(substitute(f.terms()[0], sub), substitute(f.terms()[1], sub));
    case FormulaKind::Pred: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substitute(t, sub));
      return Formula::pred(f.pred_name(), f.indices(), std::move(args));
    }
    case FormulaKind::Not:
      return Formula::negation(substitute(f.child(), sub));
    case FormulaKind::And:
      return Formula::conj(substitute(f.child(0), sub), substitute(f.child(1), sub));
    case FormulaKind::Or:
      return Formula::disj(substitute(f.child(0), sub), substitute(f.child(1), sub));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      std::map<Variable, Term> inner = sub;
      inner.erase(f.bound());
      if (inner.empty()) return f;
      // Rename the binder if it would capture a variable of a substituted term.
      std::set<Variable> incoming;
      std::set<Variable> body_free = f.child().free_vars();
      for (const auto& [v, t] : inner)
        if (body_free.count(v)) t.collect_vars(incoming);
      Variable bv = f.bound();
      Formula body = f.child();
      if (incoming.count(bv)) {
        std::set<std::string> taken = all_var_names(f);
        for (const auto& v : incoming) taken.insert(v.name);
        for (const auto& [v, t] : inner) taken.insert(v.name);
        Variable renamed{fresh_name(bv.name, taken), bv.sort};
        body = substitute(body, {{bv, Term::var(renamed)}});
        bv = renamed;
      }
      Formula nb = substitute(body, inner);
      return f.kind() == FormulaKind::Forall ? Formula::forall(bv, nb) : Formula::exists(bv, nb);
    }
  }
  return f;
}

}  // namespace adelic
