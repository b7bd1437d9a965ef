// The enriched Boolean semantics in the eventually periodic model, and a
// witness search that shares no code with the elimination engine.

#include <algorithm>
#include <functional>
#include <map>
#include <limits>
#include <numeric>
#include <set>

#include "adelic/boolean_qe.hpp"
#include "adelic/error.hpp"
#include "adelic/parse.hpp"

namespace adelic {

namespace {

using u64 = std::uint64_t;
constexpr u64 kInf = std::numeric_limits<u64>::max();

u64 add_sat(u64 a, u64 b) { return (a == kInf || b == kInf) ? kInf : a + b; }

std::int64_t mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

void check_indices(const Formula& atom) {
  const auto& ix = atom.indices();
  if (atom.pred_name() == "C" && ix[0] < 1) throw Error("C[j] needs j >= 1");
  if (atom.pred_name() == "Res" && ix[0] < 1) throw Error("Res[n,r] needs n >= 1");
}

}  // namespace

bool CellSpec::admits(std::uint64_t n) const {
  switch (kind) {
    case Kind::Exact:
      return n == k;
    case Kind::AtLeast:
      return n >= k && (q <= 1 || n % q == r);
    case Kind::Infinite:
      return false;
  }
  return false;
}

std::string CellSpec::str() const {
  switch (kind) {
    case Kind::Exact:
      return "=" + std::to_string(k);
    case Kind::AtLeast:
      return ">=" + std::to_string(k) + (q > 1 ? " (" + std::to_string(r) + " mod " + std::to_string(q) + ")" : "");
    case Kind::Infinite:
      return "inf";
  }
  return "?";
}

bool split_feasible(const CellSpec& parent, const CellSpec& left, const CellSpec& right) {
  using K = CellSpec::Kind;
  if (parent.kind == K::Infinite) return left.kind == K::Infinite || right.kind == K::Infinite;
  if (left.kind == K::Infinite || right.kind == K::Infinite) return false;
  // Any solution can be shifted down by the common period until a or b is
  // below its start plus the period plus the parent's start.
  auto period = [](const CellSpec& s) -> u64 { return s.kind == K::AtLeast ? std::max<u64>(s.q, 1) : 1; };
  const u64 m = std::lcm(period(parent), std::lcm(period(left), period(right)));
  const u64 bound_a = left.k + parent.k + m + 1, bound_b = right.k + parent.k + m + 1;
  for (u64 a = 0; a <= bound_a; ++a) {
    if (!left.admits(a)) continue;
    for (u64 b = 0; b <= bound_b; ++b)
      if (right.admits(b) && parent.admits(a + b)) return true;
  }
  return false;
}

BooleanElement eval_term(const Term& t, const BoolAssignment& asg) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = asg.find(t.variable());
      if (it == asg.end()) throw Error("no value for variable '" + t.name() + "'");
      return it->second;
    }
    case TermKind::Const:
      if (t.name() == "0") return BooleanElement::empty();
      if (t.name() == "1") return BooleanElement::all();
      throw UnknownSymbol("constant '" + t.name() + "'");
    case TermKind::Num:
      throw SortError("numeral in a Boolean term");
    case TermKind::App:
      if (t.name() == "meet") return eval_term(t.args()[0], asg).meet(eval_term(t.args()[1], asg));
      if (t.name() == "join") return eval_term(t.args()[0], asg).join(eval_term(t.args()[1], asg));
      if (t.name() == "compl") return eval_term(t.args()[0], asg).complement();
      throw UnknownSymbol("function '" + t.name() + "' in a Boolean term");
  }
  throw Error("bad term");
}

bool eval_enriched_atom(const Formula& atom, const BoolAssignment& asg) {
  if (atom.kind() == FormulaKind::Eq) return eval_term(atom.terms()[0], asg) == eval_term(atom.terms()[1], asg);
  if (atom.kind() != FormulaKind::Pred) throw Error("not an atom");
  check_indices(atom);
  const std::string& p = atom.pred_name();
  const BooleanElement x = eval_term(atom.terms()[0], asg);
  if (p == "le") return x.le(eval_term(atom.terms()[1], asg));
  if (p == "Fin") return x.is_finite();
  auto n = x.count();
  if (p == "C") return !n || *n >= static_cast<u64>(atom.indices()[0]);
  if (p == "Res") {
    const std::int64_t m = atom.indices()[0];
    return n && static_cast<std::int64_t>(*n % static_cast<u64>(m)) == mod(atom.indices()[1], m);
  }
  throw UnknownSymbol("predicate '" + p + "'");
}

bool eval_quantifier_free(const Formula& f, const BoolAssignment& asg) {
  switch (f.kind()) {
    case FormulaKind::True:
      return true;
    case FormulaKind::False:
      return false;
    case FormulaKind::Eq:
    case FormulaKind::Pred:
      return eval_enriched_atom(f, asg);
    case FormulaKind::Not:
      return !eval_quantifier_free(f.child(), asg);
    case FormulaKind::And:
      return eval_quantifier_free(f.child(0), asg) && eval_quantifier_free(f.child(1), asg);
    case FormulaKind::Or:
      return eval_quantifier_free(f.child(0), asg) || eval_quantifier_free(f.child(1), asg);
    default:
      throw Error("eval_quantifier_free on a quantified formula");
  }
}

namespace {

// Largest C index and lcm of Res moduli occurring in f.
void indices(const Formula& f, u64& max_c, u64& q) {
  if (f.kind() == FormulaKind::Pred) {
    check_indices(f);
    if (f.pred_name() == "C") max_c = std::max(max_c, static_cast<u64>(f.indices()[0]));
    if (f.pred_name() == "Res") q = std::lcm(q, static_cast<u64>(f.indices()[0]));
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) indices(f.child(i), max_c, q);
}

// Cardinality sensitivity of f: its truth depends on each cell count only
// through the count itself below threshold(f) and through the count mod q
// (the lcm of the moduli in f) above it. A quantifier over a body with
// threshold T can split a count into two of which one is at most T + q - 1
// without loss, giving threshold 2T + 2q - 2 for the quantified formula.
u64 threshold(const Formula& f) {
  if (f.is_quantifier()) {
    u64 c = 1, q = 1;
    indices(f.child(), c, q);
    const u64 t = threshold(f.child());
    return std::max(t, 2 * t + 2 * q - 2);
  }
  u64 t = 1, q = 1;
  if (f.kind() == FormulaKind::Pred) indices(f, t, q);
  for (std::size_t i = 0; i < f.child_count(); ++i) t = std::max(t, threshold(f.child(i)));
  return t;
}

// Largest split size a quantifier node needs to consider.
u64 quantifier_need(const Formula& f) {
  u64 c = 1, q = 1;
  indices(f.child(), c, q);
  return threshold(f.child()) + q - 1;
}

// Negation normal form with quantifiers pushed inward as far as they go.
// Smaller quantifier bodies mean fewer cells to split and lower thresholds.
Formula miniscope(const Formula& f, bool neg);

Formula quantify(bool exists, const Variable& x, const Formula& body) {
  if (!body.free_vars().count(x)) return body;
  const FormulaKind spread = exists ? FormulaKind::Or : FormulaKind::And;
  const FormulaKind pull = exists ? FormulaKind::And : FormulaKind::Or;
  if (body.kind() == spread)
  {
    Formula a = quantify(exists, x, body.child(0)), b = quantify(exists, x, body.child(1));
    return exists ? Formula::disj(a, b) : Formula::conj(a, b);
  }
  if (body.kind() == pull) {
    std::vector<Formula> parts, with, without;
    std::function<void(const Formula&)> flat = [&](const Formula& g) {
      if (g.kind() == pull) {
        flat(g.child(0));
        flat(g.child(1));
      } else {
        parts.push_back(g);
      }
    };
    flat(body);
    for (const auto& g : parts) (g.free_vars().count(x) ? with : without).push_back(g);
    auto join = [&](const std::vector<Formula>& fs) { return exists ? Formula::conj_all(fs) : Formula::disj_all(fs); };
    if (!without.empty()) {
      Formula inner = quantify(exists, x, join(with));
      without.push_back(inner);
      return join(without);
    }
  }
  return exists ? Formula::exists(x, body) : Formula::forall(x, body);
}

Formula miniscope(const Formula& f, bool neg) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False:
      return (f.kind() == FormulaKind::True) != neg ? Formula::truth() : Formula::falsity();
    case FormulaKind::Eq:
    case FormulaKind::Pred:
      return neg ? Formula::negation(f) : f;
    case FormulaKind::Not:
      return miniscope(f.child(), !neg);
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula a = miniscope(f.child(0), neg), b = miniscope(f.child(1), neg);
      return (f.kind() == FormulaKind::And) != neg ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return quantify((f.kind() == FormulaKind::Exists) != neg, f.bound(), miniscope(f.child(), neg));
  }
  return f;
}

class WitnessSearch {
 public:
  using Profile = std::vector<u64>;
  explicit WitnessSearch(u64 fuel) : fuel_(fuel) {}

  static u64 cell_mask(const Term& t, const std::vector<Variable>& vars) {
    const std::size_t k = vars.size(), cells = std::size_t{1} << k;
    u64 full = cells == 64 ? ~u64{0} : (u64{1} << cells) - 1;
    switch (t.kind()) {
      case TermKind::Var: {
        std::size_t i = 0;
        while (i < k && !(vars[i] == t.variable())) ++i;
        if (i == k) throw Error("unbound variable '" + t.name() + "'");
        u64 m = 0;
        for (std::size_t c = 0; c < cells; ++c)
          if ((c >> (k - 1 - i)) & 1) m |= u64{1} << c;
        return m;
      }
      case TermKind::Const:
        return t.name() == "1" ? full : 0;
      case TermKind::App:
        if (t.name() == "meet") return cell_mask(t.args()[0], vars) & cell_mask(t.args()[1], vars);
        if (t.name() == "join") return cell_mask(t.args()[0], vars) | cell_mask(t.args()[1], vars);
        return full & ~cell_mask(t.args()[0], vars);
      default:
        throw SortError("numeral in a Boolean term");
    }
  }

  static u64 total(u64 mask, const Profile& p) {
    u64 s = 0;
    for (std::size_t c = 0; c < p.size(); ++c)
      if ((mask >> c) & 1) s = add_sat(s, p[c]);
    return s;
  }

  bool eval(const Formula& f, const std::vector<Variable>& vars, const Profile& p) {
    switch (f.kind()) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Eq:
        return total(cell_mask(f.terms()[0], vars) ^ cell_mask(f.terms()[1], vars), p) == 0;
      case FormulaKind::Pred: {
        const std::string& name = f.pred_name();
        const u64 m = cell_mask(f.terms()[0], vars);
        if (name == "le") return total(m & ~cell_mask(f.terms()[1], vars), p) == 0;
        const u64 n = total(m, p);
        if (name == "Fin") return n != kInf;
        if (name == "C") return n >= static_cast<u64>(f.indices()[0]);
        if (name == "Res") {
          const std::int64_t md = f.indices()[0];
          return n != kInf && static_cast<std::int64_t>(n % static_cast<u64>(md)) == mod(f.indices()[1], md);
        }
        throw UnknownSymbol("predicate '" + name + "'");
      }
      case FormulaKind::Not:
        return !eval(f.child(), vars, p);
      case FormulaKind::And:
        return eval(f.child(0), vars, p) && eval(f.child(1), vars, p);
      case FormulaKind::Or:
        return eval(f.child(0), vars, p) || eval(f.child(1), vars, p);
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        return quantifier(f, vars, p);
    }
    return false;
  }

  // The cells of the free variables of q's body other than the bound one.
  static std::pair<std::vector<Variable>, Profile> coarsen(const Formula& q, const std::vector<Variable>& vars,
                                                           const Profile& p) {
    const auto body_free = q.child().free_vars();
    std::vector<Variable> rel;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (body_free.count(vars[i]) && !(vars[i] == q.bound())) {
        rel.push_back(vars[i]);
        keep.push_back(i);
      }
    if (rel.size() >= 6) throw BudgetExceeded("more than 6 Boolean variables in scope");
    Profile coarse(std::size_t{1} << rel.size(), 0);
    for (std::size_t c = 0; c < p.size(); ++c) {
      std::size_t d = 0;
      for (std::size_t i : keep) d = (d << 1) | ((c >> (vars.size() - 1 - i)) & 1);
      coarse[d] = add_sat(coarse[d], p[c]);
    }
    return {rel, coarse};
  }

  // Calls visit(child_vars, child_profile) on each split of the coarse
  // cells; stops when visit returns true.
  bool splits(const Formula& q, const std::vector<Variable>& rel, const Profile& coarse,
              const std::function<bool(const std::vector<Variable>&, const Profile&)>& visit) {
    std::vector<Variable> child_vars = rel;
    child_vars.push_back(q.bound());
    Profile child(coarse.size() * 2);
    const u64 need = std::min(fuel_, quantifier_need(q));
    std::function<bool(std::size_t)> go = [&](std::size_t c) -> bool {
      if (c == coarse.size()) return visit(child_vars, child);
      const u64 n = coarse[c];
      auto put = [&](u64 in, u64 out) {
        child[2 * c + 1] = in;
        child[2 * c] = out;
        return go(c + 1);
      };
      if (n != kInf) {
        for (u64 a = 0; a <= n; ++a)
          if (put(a, n - a)) return true;
        return false;
      }
      if (put(kInf, kInf)) return true;
      for (u64 j = 0; j <= need; ++j)
        if (put(j, kInf) || put(kInf, j)) return true;
      return false;
    };
    return go(0);
  }

  bool quantifier(const Formula& q, const std::vector<Variable>& vars, const Profile& p) {
    auto [rel, coarse] = coarsen(q, vars, p);
    // The universe is nonempty, so a vacuous quantifier changes nothing.
    if (!q.child().free_vars().count(q.bound())) return eval(q.child(), rel, coarse);
    auto key = std::make_tuple(&q, rel, coarse);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool want = q.kind() == FormulaKind::Exists;
    const bool found = q.child().is_quantifier_free()
                           ? qf_search(q, rel, coarse, want)
                           : splits(q, rel, coarse, [&](const std::vector<Variable>& cv, const Profile& cp) {
                               return eval(q.child(), cv, cp) == want;
                             });
    const bool value = want ? found : !found;
    memo_.emplace(std::move(key), value);
    return value;
  }

 private:
  // Quantifier-free body: its atoms only see sums of child cells over a few
  // masks, so the splits are folded cell by cell into the set of reachable
  // sum vectors instead of being enumerated jointly. Sums are exact up to
  // max C + q and kept mod q above that, which every atom of the body
  // reads the same way.
  bool qf_search(const Formula& q, const std::vector<Variable>& rel, const Profile& coarse, bool want) {
    std::vector<Variable> cv = rel;
    cv.push_back(q.bound());
    std::vector<u64> masks;
    collect_masks(q.child(), cv, masks);
    u64 cap = 1, mod = 1;
    indices(q.child(), cap, mod);
    auto reduce = [&](u64 v) { return v == kInf || v < cap + mod ? v : cap + (v - cap) % mod; };
    const u64 need = std::min(fuel_, quantifier_need(q));

    std::set<std::vector<u64>> states{std::vector<u64>(masks.size(), 0)};
    for (std::size_t c = 0; c < coarse.size(); ++c) {
      std::vector<std::pair<u64, u64>> options;  // (inside, outside)
      if (coarse[c] != kInf) {
        for (u64 a = 0; a <= coarse[c]; ++a) options.emplace_back(a, coarse[c] - a);
      } else {
        options.emplace_back(kInf, kInf);
        for (u64 j = 0; j <= need; ++j) {
          options.emplace_back(j, kInf);
          options.emplace_back(kInf, j);
        }
      }
      std::set<std::vector<u64>> next;
      for (const auto& st : states)
        for (auto [in, out] : options) {
          std::vector<u64> s2 = st;
          for (std::size_t i = 0; i < masks.size(); ++i) {
            if ((masks[i] >> (2 * c + 1)) & 1) s2[i] = add_sat(s2[i], in);
            if ((masks[i] >> (2 * c)) & 1) s2[i] = add_sat(s2[i], out);
            s2[i] = reduce(s2[i]);
          }
          next.insert(std::move(s2));
        }
      states = std::move(next);
    }
    for (const auto& st : states)
      if (eval_sums(q.child(), cv, masks, st) == want) return true;
    return false;
  }

  static std::vector<u64> atom_masks(const Formula& f, const std::vector<Variable>& vars) {
    if (f.kind() == FormulaKind::Eq) return {cell_mask(f.terms()[0], vars) ^ cell_mask(f.terms()[1], vars)};
    const u64 m = cell_mask(f.terms()[0], vars);
    if (f.pred_name() == "le") return {m & ~cell_mask(f.terms()[1], vars)};
    return {m};
  }

  static void collect_masks(const Formula& f, const std::vector<Variable>& vars, std::vector<u64>& out) {
    if (f.kind() == FormulaKind::Eq || f.kind() == FormulaKind::Pred) {
      for (u64 m : atom_masks(f, vars))
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
      return;
    }
    for (std::size_t i = 0; i < f.child_count(); ++i) collect_masks(f.child(i), vars, out);
  }

  static bool eval_sums(const Formula& f, const std::vector<Variable>& vars, const std::vector<u64>& masks,
                        const std::vector<u64>& sums) {
    switch (f.kind()) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Eq:
      case FormulaKind::Pred: {
        const u64 m = atom_masks(f, vars)[0];
        const u64 n = sums[static_cast<std::size_t>(std::find(masks.begin(), masks.end(), m) - masks.begin())];
        if (f.kind() == FormulaKind::Eq) return n == 0;
        const std::string& name = f.pred_name();
        if (name == "le") return n == 0;
        if (name == "Fin") return n != kInf;
        if (name == "C") return n >= static_cast<u64>(f.indices()[0]);
        if (name == "Res") {
          const std::int64_t md = f.indices()[0];
          return n != kInf && static_cast<std::int64_t>(n % static_cast<u64>(md)) == mod(f.indices()[1], md);
        }
        throw UnknownSymbol("predicate '" + name + "'");
      }
      case FormulaKind::Not:
        return !eval_sums(f.child(), vars, masks, sums);
      case FormulaKind::And:
        return eval_sums(f.child(0), vars, masks, sums) && eval_sums(f.child(1), vars, masks, sums);
      case FormulaKind::Or:
        return eval_sums(f.child(0), vars, masks, sums) || eval_sums(f.child(1), vars, masks, sums);
      default:
        throw Error("quantifier in a quantifier-free body");
    }
  }

  u64 fuel_;
  std::map<std::tuple<const Formula*, std::vector<Variable>, Profile>, bool> memo_;
};

u64 max_need(const Formula& f) {
  u64 m = f.is_quantifier() ? quantifier_need(f) : 0;
  for (std::size_t i = 0; i < f.child_count(); ++i) m = std::max(m, max_need(f.child(i)));
  return m;
}

}  // namespace

std::uint64_t sufficient_fuel(const Formula& f) { return max_need(miniscope(f, false)); }

WitnessResult bounded_witness_evaluate(const Formula& f, const BoolAssignment& asg, std::uint64_t fuel) {
  const auto fv = f.free_vars();
  std::vector<Variable> vars(fv.begin(), fv.end());
  if (vars.size() > 6) throw BudgetExceeded("more than 6 free Boolean variables");
  const std::size_t k = vars.size();
  WitnessSearch::Profile p(std::size_t{1} << k);
  for (std::size_t c = 0; c < p.size(); ++c) {
    BooleanElement cell = BooleanElement::all();
    for (std::size_t i = 0; i < k; ++i) {
      auto it = asg.find(vars[i]);
      if (it == asg.end()) throw Error("no value for variable '" + vars[i].name + "'");
      cell = cell.meet((c >> (k - 1 - i)) & 1 ? it->second : it->second.complement());
    }
    p[c] = cell.count().value_or(kInf);
  }
  WitnessResult r;
  r.fuel = fuel;
  r.sufficient_fuel = sufficient_fuel(f);
  r.sound_only = fuel < r.sufficient_fuel;
  Formula root = miniscope(f, false);
  WitnessSearch search(fuel);
  r.value = search.eval(root, vars, p);
  return r;
}

std::optional<BooleanElement> sentence_witness(const Formula& f) {
  if (!f.is_sentence() || !f.is_quantifier()) return std::nullopt;
  const bool want = f.kind() == FormulaKind::Exists;
  const Variable x = f.bound();
  const Formula body = miniscope(f.child(), false);
  Formula root = want ? Formula::exists(x, body) : Formula::forall(x, body);
  WitnessSearch search(sufficient_fuel(root));
  std::optional<BooleanElement> out;
  search.splits(root, {}, {kInf}, [&](const std::vector<Variable>& cv, const WitnessSearch::Profile& cp) {
    if (search.eval(root.child(), cv, cp) != want) return false;
    // cp[1] is the part inside x, cp[0] the part outside.
    const BooleanElement all = BooleanElement::all();
    BooleanElement cand = cp[1] != kInf ? all.first(cp[1])
                          : cp[0] != kInf ? all.first(cp[0]).complement()
                                          : all.alternate();
    const BoolAssignment asg{{x, cand}};
    if (bounded_witness_evaluate(root.child(), asg, sufficient_fuel(root.child())).value != want) return false;
    out = cand;
    return true;
  });
  return out;
}

std::vector<std::pair<std::string, Formula>> boolean_axioms(int max_n) {
  if (max_n < 1) throw Error("boolean_axioms needs max_n >= 1");
  std::vector<std::pair<std::string, Formula>> out;
  auto add = [&](std::string name, const std::string& text) {
    out.emplace_back(std::move(name), parse_formula(text, boolean_signature()));
  };
  auto s = [](auto v) { return std::to_string(v); };
  // x has exactly m elements.
  auto card = [&](int m, const std::string& x) {
    return m == 0 ? "(" + x + " = 0)" : "(C[" + s(m) + "](" + x + ") /\\ ~C[" + s(m + 1) + "](" + x + "))";
  };

  add("meet-commutative", "forall x y. (x /\\ y) = (y /\\ x)");
  add("join-commutative", "forall x y. (x \\/ y) = (y \\/ x)");
  add("meet-associative", "forall x y z. (x /\\ (y /\\ z)) = ((x /\\ y) /\\ z)");
  add("join-associative", "forall x y z. (x \\/ (y \\/ z)) = ((x \\/ y) \\/ z)");
  add("absorption-meet", "forall x y. (x /\\ (x \\/ y)) = x");
  add("absorption-join", "forall x y. (x \\/ (x /\\ y)) = x");
  add("distributive", "forall x y z. (x /\\ (y \\/ z)) = ((x /\\ y) \\/ (x /\\ z))");
  add("complement-meet", "forall x. (x /\\ ~x) = 0");
  add("complement-join", "forall x. (x \\/ ~x) = 1");
  add("nontrivial", "0 != 1");
  add("order", "forall x y. x <= y <-> (x /\\ y) = x");
  add("atomic", "forall x. x != 0 -> exists y. y <= x /\\ y != 0 /\\ forall z. z <= y -> z = 0 \\/ z = y");
  add("atom-count-1", "forall x. C[1](x) <-> x != 0");
  for (int n = 1; n < max_n; ++n)
    add("atom-count-" + s(n + 1), "forall x. C[" + s(n + 1) + "](x) <-> exists y. y <= x /\\ y != 0 /\\ "
                                  "(forall z. z <= y -> z = 0 \\/ z = y) /\\ C[" + s(n) + "](x /\\ ~y)");
  for (int n = 1; n <= max_n; ++n) add("infinite-" + s(n), "C[" + s(n) + "](1)");
  add("fin-zero", "Fin(0)");
  add("fin-proper", "~Fin(1)");
  add("fin-downward", "forall x y. Fin(x) /\\ y <= x -> Fin(y)");
  add("fin-join", "forall x y. Fin(x) /\\ Fin(y) -> Fin(x \\/ y)");
  add("splitting", "forall x. ~Fin(x) -> exists y. y < x /\\ ~Fin(y) /\\ ~Fin(x /\\ ~y)");
  for (int n = 0; n <= max_n; ++n) add("bounded-is-finite-" + s(n), "forall x. ~C[" + s(n + 1) + "](x) -> Fin(x)");

  for (int n = 1; n <= max_n; ++n) {
    const std::string N = s(n);
    auto res = [&](int r, const std::string& x) { return "Res[" + N + "," + s(r) + "](" + x + ")"; };
    for (int r = 0; r < n; ++r) add("res-finite n=" + N + " r=" + s(r), "forall x. " + res(r, "x") + " -> Fin(x)");
    for (int m = 0; m <= max_n + 1; ++m)
      add("res-of-count n=" + N + " m=" + s(m), "forall x. Fin(x) /\\ " + card(m, "x") + " -> " + res(m % n, "x"));
    for (int r = 0; r < n; ++r) {
      add("res-congruent n=" + N + " r=" + s(r), "forall x. " + res(r, "x") + " -> " + res(r + n, "x"));
      for (int t = 0; t < n; ++t)
        if (t != r) add("res-exclusive n=" + N + " r=" + s(r) + " s=" + s(t), "forall x. " + res(r, "x") + " -> ~" + res(t, "x"));
    }
    for (int m = 2 * n; m <= max_n; m += n)
      for (int r = 0; r < m; ++r)
        add("res-divisor m=" + s(m) + " n=" + N + " r=" + s(r),
            "forall x. Res[" + s(m) + "," + s(r) + "](x) -> " + res(r % n, "x"));
    std::string some;
    for (int r = 0; r < n; ++r) some += (r ? " \\/ " : "") + res(r, "x");
    add("res-total n=" + N, "forall x. Fin(x) -> " + some);
    for (int r = 0; r < n; ++r)
      for (int t = 0; t < n; ++t)
        add("res-additive n=" + N + " r=" + s(r) + " s=" + s(t),
            "forall x y. (x /\\ y) = 0 /\\ " + res(r, "x") + " /\\ " + res(t, "y") + " -> " + res((r + t) % n, "x \\/ y"));
    for (int r = 0; r < n; ++r) {
      std::string parts;
      for (int a = 0; a < n; ++a) parts += (a ? " \\/ " : "") + ("(" + res(a, "x") + " /\\ " + res(mod(r - a, n), "y") + ")");
      add("res-split n=" + N + " r=" + s(r),
          "forall x y. (x /\\ y) = 0 /\\ " + res(r, "x \\/ y") + " -> " + parts);
    }
  }
  return out;
}

}  // namespace adelic
