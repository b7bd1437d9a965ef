#include "adelic/transform.hpp"

#include <map>
#include <set>
#include <vector>

#include "adelic/error.hpp"

namespace adelic {

namespace {

Formula nnf(const Formula& f, bool negate) {
  switch (f.kind()) {
    case FormulaKind::True:
      return negate ? Formula::falsity() : f;
    case FormulaKind::False:
      return negate ? Formula::truth() : f;
    case FormulaKind::Eq:
    case FormulaKind::Pred:
      return negate ? Formula::negation(f) : f;
    case FormulaKind::Not:
      return nnf(f.child(), !negate);
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula a = nnf(f.child(0), negate), b = nnf(f.child(1), negate);
      bool conj = (f.kind() == FormulaKind::And) != negate;
      return conj ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      Formula body = nnf(f.child(), negate);
      bool universal = (f.kind() == FormulaKind::Forall) != negate;
      return universal ? Formula::forall(f.bound(), body) : Formula::exists(f.bound(), body);
    }
  }
  return f;
}

Term rename_term(const Term& t, const std::map<Variable, Variable>& env) {
  if (env.empty()) return t;
  std::map<Variable, Term> sub;
  std::set<Variable> vs;
  t.collect_vars(vs);
  for (const auto& v : vs)
    if (auto it = env.find(v); it != env.end()) sub.emplace(v, Term::var(it->second));
  return sub.empty() ? t : substitute(t, sub);
}

Formula rename_rec(const Formula& f, std::map<Variable, Variable>& env, std::set<std::string>& used) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
      return Formula::eq(rename_term(f.terms()[0], env), rename_term(f.terms()[1], env));
    case FormulaKind::Pred: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(rename_term(t, env));
      return Formula::pred(f.pred_name(), f.indices(), std::move(args));
    }
    case FormulaKind::Not:
      return Formula::negation(rename_rec(f.child(), env, used));
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula a = rename_rec(f.child(0), env, used);
      Formula b = rename_rec(f.child(1), env, used);
      return f.kind() == FormulaKind::And ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      const Variable& v = f.bound();
      Variable nv = v;
      if (used.count(v.name)) nv.name = fresh_name(v.name, used);
      used.insert(nv.name);
      std::optional<Variable> prev;
      if (auto it = env.find(v); it != env.end()) prev = it->second;
      if (nv == v) env.erase(v);
      else env[v] = nv;
      Formula body = rename_rec(f.child(), env, used);
      if (prev) env[v] = *prev;
      else env.erase(v);
      return f.kind() == FormulaKind::Forall ? Formula::forall(nv, body) : Formula::exists(nv, body);
    }
  }
  return f;
}

struct Prefix {
  bool universal;
  Variable v;
};

// Requires bound variables to be distinct from each other and from free ones.
Formula prenex_rec(const Formula& f, std::vector<Prefix>& prefix) {
  switch (f.kind()) {
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      prefix.push_back({f.kind() == FormulaKind::Forall, f.bound()});
      return prenex_rec(f.child(), prefix);
    case FormulaKind::Not: {
      std::vector<Prefix> inner;
      Formula m = prenex_rec(f.child(), inner);
      for (auto& q : inner) q.universal = !q.universal;
      prefix.insert(prefix.end(), inner.begin(), inner.end());
      return Formula::negation(m);
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula a = prenex_rec(f.child(0), prefix);
      Formula b = prenex_rec(f.child(1), prefix);
      return f.kind() == FormulaKind::And ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    default:
      return f;
  }
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula rename_apart(const Formula& f) {
  std::set<std::string> used;
  for (const auto& v : f.free_vars()) used.insert(v.name);
  std::map<Variable, Variable> env;
  return rename_rec(f, env, used);
}

Formula to_prenex(const Formula& f) {
  std::vector<Prefix> prefix;
  Formula m = prenex_rec(rename_apart(f), prefix);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    m = it->universal ? Formula::forall(it->v, m) : Formula::exists(it->v, m);
  return m;
}

namespace {

Term relativize_term(const Term& t, const Term& y, const std::set<Variable>& free) {
  switch (t.kind()) {
    case TermKind::Var:
      return free.count(t.variable()) ? Term::app("*", {y, t}, t.sort()) : t;
    case TermKind::Const:
      return t.name() == "1" ? y : t;
    case TermKind::Num:
      return Term::app("*", {t, y}, t.sort());
    case TermKind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(relativize_term(a, y, free));
      return Term::app(t.name(), std::move(args), t.sort());
    }
  }
  return t;
}

Formula relativize_rec(const Formula& f, const Term& y, const std::set<Variable>& free) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return f;
    case FormulaKind::Eq:
      return Formula::eq(relativize_term(f.terms()[0], y, free), relativize_term(f.terms()[1], y, free));
    case FormulaKind::Pred: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(relativize_term(t, y, free));
      return Formula::pred(f.pred_name(), f.indices(), std::move(args));
    }
    case FormulaKind::Not:
      return Formula::negation(relativize_rec(f.child(), y, free));
    case FormulaKind::And:
      return Formula::conj(relativize_rec(f.child(0), y, free), relativize_rec(f.child(1), y, free));
    case FormulaKind::Or:
      return Formula::disj(relativize_rec(f.child(0), y, free), relativize_rec(f.child(1), y, free));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      // A binder shadows any free variable of the same name.
      std::set<Variable> inner = free;
      inner.erase(f.bound());
      Term z = Term::var(f.bound());
      Formula guard = Formula::eq(z, Term::app("*", {y, z}, z.sort()));
      Formula body = relativize_rec(f.child(), y, inner);
      if (f.kind() == FormulaKind::Exists) return Formula::exists(f.bound(), Formula::conj(guard, body));
      return Formula::forall(f.bound(), Formula::disj(Formula::negation(guard), body));
    }
  }
  return f;
}

}  // namespace

Relativized relativize_to_idempotent(const Formula& f, const std::string& preferred) {
  std::set<Variable> free = f.free_vars();
  std::set<std::string> taken = all_var_names(f);
  std::string sort;
  if (!free.empty()) sort = free.begin()->sort;
  else if (f.is_quantifier()) sort = f.bound().sort;
  else sort = ring_signature().default_sort();
  Relativized r;
  r.y = Variable{fresh_name(preferred, taken), sort};
  r.renamed = r.y.name != preferred;
  r.formula = relativize_rec(f, Term::var(r.y), free);
  return r;
}

}  // namespace adelic
