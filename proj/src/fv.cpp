#include <cmath>
#include <mutex>

#include "adelic/error.hpp"
#include "fv_internal.hpp"

namespace adelic {

namespace {

bool mentions(const Formula& f, const Variable& v) { return f.free_vars().count(v) > 0; }

Formula negate(const Formula& f) {
  if (f.kind() == FormulaKind::True) return Formula::falsity();
  if (f.kind() == FormulaKind::False) return Formula::truth();
  if (f.kind() == FormulaKind::Not) return f.child();
  return Formula::negation(f);
}

// Constant folding, vacuous quantifiers dropped (carriers are nonempty),
// forall rewritten as ~exists~.
Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Pred:
      return f;
    case FormulaKind::Eq:
      return f.terms()[0] == f.terms()[1] ? Formula::truth() : f;
    case FormulaKind::Not:
      return negate(simplify(f.child()));
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool conj = f.kind() == FormulaKind::And;
      Formula a = simplify(f.child(0)), b = simplify(f.child(1));
      const FormulaKind absorbing = conj ? FormulaKind::False : FormulaKind::True;
      const FormulaKind unit = conj ? FormulaKind::True : FormulaKind::False;
      if (a.kind() == absorbing || b.kind() == absorbing) return a.kind() == absorbing ? a : b;
      if (a.kind() == unit) return b;
      if (b.kind() == unit) return a;
      return conj ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      Formula body = simplify(f.child());
      if (!mentions(body, f.bound())) return body;
      if (f.kind() == FormulaKind::Exists) return Formula::exists(f.bound(), body);
      return Formula::negation(Formula::exists(f.bound(), negate(body)));
    }
  }
  return f;
}

void set_count(FvNode& n) {
  switch (n.kind) {
    case FvNode::Kind::Const:
    case FvNode::Kind::Atom:
      n.log2m = 0;
      n.m = 1;
      break;
    case FvNode::Kind::Not:
      n.log2m = n.a->log2m;
      n.m = n.a->m;
      break;
    case FvNode::Kind::And:
    case FvNode::Kind::Or: {
      n.m = (n.a->m && n.b->m && n.a->m + n.b->m >= n.a->m) ? n.a->m + n.b->m : 0;
      double hi = std::max(n.a->log2m, n.b->log2m), lo = std::min(n.a->log2m, n.b->log2m);
      n.log2m = hi + std::log2(1 + std::exp2(lo - hi));
      break;
    }
    case FvNode::Kind::Exists: {
      // 2^{m_child} patterns, twice that under a restriction.
      double mc = n.a->m ? static_cast<double>(n.a->m) : std::exp2(n.a->log2m);
      n.log2m = mc + (n.restricted ? 1 : 0);
      n.m = (n.a->m && n.log2m < 63) ? std::uint64_t{1} << static_cast<unsigned>(n.log2m) : 0;
      break;
    }
  }
}

std::shared_ptr<const FvNode> build(const Formula& f, bool restricted) {
  auto n = std::make_shared<FvNode>();
  n->formula = f;
  auto fv = f.free_vars();
  n->free.assign(fv.begin(), fv.end());
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      n->kind = FvNode::Kind::Const;
      n->value = f.kind() == FormulaKind::True;
      break;
    case FormulaKind::Eq:
    case FormulaKind::Pred:
      n->kind = FvNode::Kind::Atom;
      break;
    case FormulaKind::Not:
      n->kind = FvNode::Kind::Not;
      n->a = build(f.child(), restricted);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      n->kind = f.kind() == FormulaKind::And ? FvNode::Kind::And : FvNode::Kind::Or;
      n->a = build(f.child(0), restricted);
      n->b = build(f.child(1), restricted);
      break;
    case FormulaKind::Exists:
      n->kind = FvNode::Kind::Exists;
      n->bound = f.bound();
      n->restricted = restricted;
      n->a = build(f.child(), restricted);
      break;
    case FormulaKind::Forall:
      throw Error("internal: forall survived simplification");
  }
  if (n->a) n->depth = n->a->depth;
  if (n->b) n->depth = std::max(n->depth, n->b->depth);
  if (n->kind == FvNode::Kind::Exists) ++n->depth;
  set_count(*n);
  return n;
}

void check_sorts(const Formula& f, const Signature& sig) {
  for (const auto& v : f.free_vars())
    if (!sig.has_sort(v.sort)) throw SortError("variable '" + v.name + "' has unknown sort '" + v.sort + "'");
  if (f.is_quantifier()) {
    if (!sig.has_sort(f.bound().sort))
      throw SortError("variable '" + f.bound().name + "' has unknown sort '" + f.bound().sort + "'");
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) check_sorts(f.child(i), sig);
}

Formula restrict_to(const Formula& phi, const Variable& x) {
  const Variable v = *phi.free_vars().begin();
  return substitute(phi, {{v, Term::var(x)}});
}

void collect_locals(const FvNode& n, const std::optional<Formula>& restriction, std::vector<Formula>& out) {
  switch (n.kind) {
    case FvNode::Kind::Const:
      out.push_back(n.value ? Formula::truth() : Formula::falsity());
      return;
    case FvNode::Kind::Atom:
      out.push_back(n.formula);
      return;
    case FvNode::Kind::Not:
      collect_locals(*n.a, restriction, out);
      return;
    case FvNode::Kind::And:
    case FvNode::Kind::Or:
      collect_locals(*n.a, restriction, out);
      collect_locals(*n.b, restriction, out);
      return;
    case FvNode::Kind::Exists: {
      std::vector<Formula> child;
      collect_locals(*n.a, restriction, child);
      const std::size_t mc = child.size();
      std::vector<Formula> minterms;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << mc); ++s) {
        std::vector<Formula> lits;
        for (std::size_t j = 0; j < mc; ++j) lits.push_back((s >> j) & 1 ? child[j] : Formula::negation(child[j]));
        minterms.push_back(Formula::conj_all(lits));
      }
      for (const auto& chi : minterms) out.push_back(Formula::exists(n.bound, chi));
      if (n.restricted)
        for (const auto& chi : minterms)
          out.push_back(Formula::exists(n.bound, Formula::conj(chi, restrict_to(*restriction, n.bound))));
      return;
    }
  }
}

Term bool_one() { return Term::constant("1", "bool"); }

Term minterm(const std::vector<Term>& z, std::uint64_t s) {
  std::optional<Term> acc;
  for (std::size_t j = 0; j < z.size(); ++j) {
    Term lit = (s >> j) & 1 ? z[j] : Term::app("compl", {z[j]}, "bool");
    acc = acc ? Term::app("meet", {*acc, lit}, "bool") : lit;
  }
  return *acc;
}

Formula theta(const FvNode& n, const std::vector<Term>& x, std::size_t& counter) {
  switch (n.kind) {
    case FvNode::Kind::Const: {
      Formula valid = Formula::pred("le", {}, {x[0], bool_one()});
      return n.value ? valid : Formula::negation(valid);
    }
    case FvNode::Kind::Atom:
      return Formula::eq(x[0], bool_one());
    case FvNode::Kind::Not:
      return Formula::negation(theta(*n.a, x, counter));
    case FvNode::Kind::And:
    case FvNode::Kind::Or: {
      const std::size_t ma = n.a->m;
      std::vector<Term> xa(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(ma));
      std::vector<Term> xb(x.begin() + static_cast<std::ptrdiff_t>(ma), x.end());
      Formula ta = theta(*n.a, xa, counter), tb = theta(*n.b, xb, counter);
      return n.kind == FvNode::Kind::And ? Formula::conj(ta, tb) : Formula::disj(ta, tb);
    }
    case FvNode::Kind::Exists: {
      const std::size_t mc = n.a->m;
      std::vector<Variable> zs;
      std::vector<Term> z;
      for (std::size_t j = 0; j < mc; ++j) {
        zs.push_back({"Z" + std::to_string(++counter), "bool"});
        z.push_back(Term::var(zs.back()));
      }
      std::vector<Formula> parts{theta(*n.a, z, counter)};
      const std::uint64_t cells = std::uint64_t{1} << mc;
      for (std::uint64_t s = 0; s < cells; ++s)
        parts.push_back(Formula::pred("le", {}, {minterm(z, s), x[static_cast<std::size_t>(s)]}));
      if (n.restricted) {
        std::optional<Term> bad;
        for (std::uint64_t s = 0; s < cells; ++s) {
          Term cell = Term::app("meet", {minterm(z, s), Term::app("compl", {x[static_cast<std::size_t>(cells + s)]}, "bool")},
                                "bool");
          bad = bad ? Term::app("join", {*bad, cell}, "bool") : cell;
        }
        parts.push_back(Formula::pred("Fin", {}, {*bad}));
      }
      Formula body = Formula::conj_all(parts);
      for (std::size_t j = zs.size(); j-- > 0;) body = Formula::exists(zs[j], body);
      return body;
    }
  }
  return Formula::falsity();
}

std::uint64_t max_exists_width(const FvNode& n) {
  std::uint64_t w = n.kind == FvNode::Kind::Exists ? n.a->m : 0;
  if (n.a) w = std::max(w, max_exists_width(*n.a));
  if (n.b) w = std::max(w, max_exists_width(*n.b));
  return w;
}

}  // namespace

double FvTranslation::log2_local_count() const { return root->log2m; }

std::optional<std::uint64_t> FvTranslation::local_count() const {
  if (root->m == 0) return std::nullopt;
  return root->m;
}

std::size_t FvTranslation::quantifier_depth() const { return root->depth; }

std::vector<Formula> FvTranslation::local_formulas(std::uint64_t limit) const {
  if (root->m == 0 || root->m > limit)
    throw BudgetExceeded("translation has 2^" + std::to_string(root->log2m) + " local formulas");
  std::vector<Formula> out;
  collect_locals(*root, restriction, out);
  return out;
}

std::vector<Variable> FvTranslation::boolean_variables(std::uint64_t limit) const {
  if (root->m == 0 || root->m > limit)
    throw BudgetExceeded("translation has 2^" + std::to_string(root->log2m) + " local formulas");
  std::vector<Variable> xs;
  for (std::uint64_t j = 1; j <= root->m; ++j) xs.push_back({"X" + std::to_string(j), "bool"});
  return xs;
}

Formula FvTranslation::boolean_formula(std::uint64_t limit) const {
  std::vector<Variable> xs = boolean_variables(limit);
  if (max_exists_width(*root) > 16 || (std::uint64_t{1} << max_exists_width(*root)) > limit)
    throw BudgetExceeded("Theta needs too many minterm conjuncts");
  std::vector<Term> x;
  for (const auto& v : xs) x.push_back(Term::var(v));
  std::size_t counter = 0;
  return theta(*root, x, counter);
}

FvTranslation translate(const Formula& f, const Signature& sig, const std::optional<Formula>& restriction) {
  check_sorts(f, sig);
  if (restriction) {
    check_sorts(*restriction, sig);
    if (restriction->free_vars().size() != 1)
      throw Error("a restriction formula needs exactly one free variable");
  }
  FvTranslation t;
  t.input = simplify(f);
  auto fv = f.free_vars();
  t.free.assign(fv.begin(), fv.end());
  t.restriction = restriction;
  t.root = build(t.input, restriction.has_value());
  return t;
}

FvTranslation translate_cached(const Formula& f, const Signature& sig, const std::optional<Formula>& restriction) {
  static std::mutex mu;
  static std::unordered_map<std::size_t, std::vector<std::pair<Formula, FvTranslation>>> cache;
  const std::size_t key = f.hash() ^ (restriction ? restriction->hash() * 31 : 0) ^ std::hash<std::string>{}(sig.name);
  {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& [g, t] : cache[key])
      if (g == f && t.restriction.has_value() == restriction.has_value() &&
          (!restriction || *t.restriction == *restriction))
        return t;
  }
  FvTranslation t = translate(f, sig, restriction);
  std::lock_guard<std::mutex> lock(mu);
  cache[key].emplace_back(f, t);
  return t;
}

}  // namespace adelic
