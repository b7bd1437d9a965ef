#include "adelic/boolean_qe.hpp"

#include <climits>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "adelic/error.hpp"
#include "adelic/transform.hpp"

namespace adelic {

namespace {

using u64 = std::uint64_t;

struct Domain {
  u64 T = 1, q = 1;
  std::size_t size() const { return static_cast<std::size_t>(T + q + 1); }
  std::size_t inf() const { return static_cast<std::size_t>(T + q); }
  bool exact(std::size_t d) const { return d < T; }
  // Least cardinality of class d (finite d).
  u64 least(std::size_t d) const { return exact(d) ? d : T + ((d - T) + q - T % q) % q; }
};

struct VecHash {
  std::size_t operator()(const std::pair<int, std::vector<int>>& k) const {
    std::size_t h = std::hash<int>{}(k.first);
    for (int x : k.second) h = h * 1000003u ^ std::hash<int>{}(x);
    return h;
  }
};

struct PairHash {
  std::size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<long long>{}((static_cast<long long>(p.first) << 32) ^ p.second);
  }
};

// Reduced multi-valued decision diagrams; level = cell index.
class Mdd {
 public:
  static constexpr int kFalse = 0, kTrue = 1;

  Mdd() {
    nodes_.push_back({INT_MAX, {}});
    nodes_.push_back({INT_MAX, {}});
  }

  int make(int level, std::vector<int> kids) {
    if (std::all_of(kids.begin(), kids.end(), [&](int k) { return k == kids[0]; })) return kids[0];
    auto key = std::make_pair(level, std::move(kids));
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    nodes_.push_back({level, key.second});
    int id = static_cast<int>(nodes_.size() - 1);
    unique_.emplace(std::move(key), id);
    return id;
  }

  int level(int n) const { return nodes_[static_cast<std::size_t>(n)].level; }
  // Child of n for value d at `lvl`; nodes below lvl do not depend on it.
  int child(int n, int lvl, std::size_t d) const {
    const auto& node = nodes_[static_cast<std::size_t>(n)];
    return node.level == lvl ? node.kids[d] : n;
  }
  std::size_t width(int n) const { return nodes_[static_cast<std::size_t>(n)].kids.size(); }

  int apply(bool conj, int a, int b) {
    if (a == b) return a;
    if (conj) {
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue) return a;
    } else {
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
    }
    if (a > b) std::swap(a, b);
    auto& memo = conj ? and_memo_ : or_memo_;
    if (auto it = memo.find({a, b}); it != memo.end()) return it->second;
    const int lvl = std::min(level(a), level(b));
    const std::size_t w = level(a) == lvl ? width(a) : width(b);
    std::vector<int> kids(w);
    for (std::size_t d = 0; d < w; ++d) kids[d] = apply(conj, child(a, lvl, d), child(b, lvl, d));
    int r = make(lvl, std::move(kids));
    memo.emplace(std::make_pair(a, b), r);
    return r;
  }

  int negate(int a) {
    if (a <= kTrue) return 1 - a;
    if (auto it = not_memo_.find(a); it != not_memo_.end()) return it->second;
    std::vector<int> kids;
    for (int k : nodes_[static_cast<std::size_t>(a)].kids) kids.push_back(negate(k));
    int r = make(level(a), std::move(kids));
    not_memo_.emplace(a, r);
    return r;
  }

  // Re-express over D(to.T, q) a diagram over D(from.T, q), to.T >= from.T.
  int refine(int a, Domain from, Domain to, std::unordered_map<int, int>& memo) {
    if (a <= kTrue || from.T == to.T) return a;
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    std::vector<int> kids(to.size());
    for (std::size_t d = 0; d < to.size(); ++d) {
      std::size_t c;
      if (d == to.inf()) c = from.inf();
      else if (d < from.T) c = d;
      else if (d < to.T) c = static_cast<std::size_t>(from.T + d % from.q);
      else c = static_cast<std::size_t>(from.T + (d - to.T));
      kids[d] = refine(nodes_[static_cast<std::size_t>(a)].kids[c], from, to, memo);
    }
    int r = make(level(a), std::move(kids));
    memo.emplace(a, r);
    return r;
  }

  std::size_t reachable(int root) const {
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{root};
    std::size_t n = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(x)]) continue;
      seen[static_cast<std::size_t>(x)] = 1;
      ++n;
      for (int k : nodes_[static_cast<std::size_t>(x)].kids) stack.push_back(k);
    }
    return n;
  }

  const std::vector<int>& kids(int n) const { return nodes_[static_cast<std::size_t>(n)].kids; }

 private:
  struct Node {
    int level;
    std::vector<int> kids;
  };
  std::vector<Node> nodes_;
  std::unordered_map<std::pair<int, std::vector<int>>, int, VecHash> unique_;
  std::unordered_map<std::pair<int, int>, int, PairHash> and_memo_, or_memo_;
  std::unordered_map<int, int> not_memo_;
};

struct Diagram {
  int node;
  Domain dom;
};

class Engine {
 public:
  Engine(u64 t0, u64 q) : t0_(t0), q_(q) {}

  Diagram qe(const Formula& f, std::vector<Variable>& vars) {
    const std::size_t k = vars.size();
    const Domain base{t0_, q_};
    switch (f.kind()) {
      case FormulaKind::True:
        return {Mdd::kTrue, base};
      case FormulaKind::False:
        return {Mdd::kFalse, base};
      case FormulaKind::Eq: {
        u64 m = term_cells(f.terms()[0], vars) ^ term_cells(f.terms()[1], vars);
        return {atom(k, m, base, AtomKind::Zero, 0, 0), base};
      }
      case FormulaKind::Pred: {
        const std::string& p = f.pred_name();
        u64 m = term_cells(f.terms()[0], vars);
        if (p == "le") return {atom(k, m & ~term_cells(f.terms()[1], vars), base, AtomKind::Zero, 0, 0), base};
        if (p == "Fin") return {atom(k, m, base, AtomKind::Fin, 0, 0), base};
        if (p == "C") return {atom(k, m, base, AtomKind::Count, static_cast<u64>(f.indices()[0]), 0), base};
        if (p == "Res") {
          u64 n = static_cast<u64>(f.indices()[0]);
          u64 r = static_cast<u64>(((f.indices()[1] % f.indices()[0]) + f.indices()[0]) % f.indices()[0]);
          return {atom(k, m, base, AtomKind::Res, n, r), base};
        }
        throw UnknownSymbol("predicate '" + p + "' in an enriched Boolean formula");
      }
      case FormulaKind::Not: {
        Diagram d = qe(f.child(), vars);
        return {mdd.negate(d.node), d.dom};
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        Diagram a = qe(f.child(0), vars), b = qe(f.child(1), vars);
        Domain dom = a.dom.T >= b.dom.T ? a.dom : b.dom;
        int na = lift(a, dom), nb = lift(b, dom);
        return {mdd.apply(f.kind() == FormulaKind::And, na, nb), dom};
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        if (vars.size() >= kMaxVars) throw BudgetExceeded("more than 6 Boolean variables in scope");
        vars.push_back(f.bound());
        Diagram body = qe(f.child(), vars);
        vars.pop_back();
        const bool all = f.kind() == FormulaKind::Forall;
        if (all) body.node = mdd.negate(body.node);
        Diagram r = project(body);
        if (all) r.node = mdd.negate(r.node);
        return r;
      }
    }
    return {Mdd::kFalse, base};
  }

  int lift(const Diagram& d, Domain to) {
    std::unordered_map<int, int> memo;
    return mdd.refine(d.node, d.dom, to, memo);
  }

  // Profiles in which every cell is finite cannot occur: the top is infinite.
  int all_finite(std::size_t k, Domain dom) { return atom(k, ~u64{0} >> (64 - (u64{1} << k)), dom, AtomKind::Fin, 0, 0); }

  Formula to_formula(int n, const std::vector<Variable>& vars, Domain dom) {
    if (n == Mdd::kTrue) return Formula::truth();
    if (n == Mdd::kFalse) return Formula::falsity();
    const int c = mdd.level(n);
    const auto& kids = mdd.kids(n);
    std::vector<int> order;
    for (int kid : kids)
      if (kid != Mdd::kFalse && std::find(order.begin(), order.end(), kid) == order.end()) order.push_back(kid);
    std::vector<Formula> alts;
    const Term cell = cell_term(static_cast<u64>(c), vars);
    for (int kid : order) {
      std::vector<bool> group(kids.size());
      for (std::size_t d = 0; d < kids.size(); ++d) group[d] = kids[d] == kid;
      Formula rest = to_formula(kid, vars, dom);
      Formula here = constraint(cell, group, dom);
      alts.push_back(rest.kind() == FormulaKind::True ? here : Formula::conj(here, rest));
    }
    return Formula::disj_all(alts);
  }

  Mdd mdd;
  static constexpr std::size_t kMaxVars = 6;

 private:
  enum class AtomKind { Zero, Fin, Count, Res };

  static u64 all_cells(std::size_t k) { return k >= 6 ? ~u64{0} : (u64{1} << (u64{1} << k)) - 1; }

  static u64 term_cells(const Term& t, const std::vector<Variable>& vars) {
    const std::size_t k = vars.size();
    const u64 full = all_cells(k);
    switch (t.kind()) {
      case TermKind::Var: {
        auto it = std::find(vars.begin(), vars.end(), t.variable());
        if (it == vars.end()) throw Error("unbound variable '" + t.name() + "'");
        const std::size_t bit = k - 1 - static_cast<std::size_t>(it - vars.begin());
        u64 m = 0;
        for (u64 c = 0; c < (u64{1} << k); ++c)
          if ((c >> bit) & 1) m |= u64{1} << c;
        return m;
      }
      case TermKind::Const:
        if (t.name() == "0") return 0;
        if (t.name() == "1") return full;
        throw UnknownSymbol("constant '" + t.name() + "'");
      case TermKind::Num:
        throw SortError("numeral in a Boolean term");
      case TermKind::App: {
        const std::string& fn = t.name();
        if (fn == "meet") return term_cells(t.args()[0], vars) & term_cells(t.args()[1], vars);
        if (fn == "join") return term_cells(t.args()[0], vars) | term_cells(t.args()[1], vars);
        if (fn == "compl") return full & ~term_cells(t.args()[0], vars);
        throw UnknownSymbol("function '" + fn + "' in a Boolean term");
      }
    }
    return 0;
  }

  // Diagram of one atom by a left-to-right pass over the cells in `mask`
  // with a small accumulator.
  int atom(std::size_t k, u64 mask, Domain dom, AtomKind kind, u64 n, u64 r) {
    const int cells = 1 << k;
    std::map<std::pair<int, u64>, int> memo;
    std::function<int(int, u64)> build = [&](int from, u64 state) -> int {
      int c = from;
      while (c < cells && !((mask >> c) & 1)) ++c;
      if (c == cells) {
        switch (kind) {
          case AtomKind::Count:
            return state >= n ? Mdd::kTrue : Mdd::kFalse;
          case AtomKind::Res:
            return state == r ? Mdd::kTrue : Mdd::kFalse;
          default:
            return Mdd::kTrue;
        }
      }
      if (auto it = memo.find({c, state}); it != memo.end()) return it->second;
      std::vector<int> kids(dom.size());
      for (std::size_t d = 0; d < dom.size(); ++d) {
        const bool inf = d == dom.inf();
        std::optional<u64> next;
        switch (kind) {
          case AtomKind::Zero:
            if (d == 0) next = 0;
            break;
          case AtomKind::Fin:
            if (!inf) next = 0;
            break;
          case AtomKind::Count:
            // (>= T, r) and infinite contribute at least T >= n.
            next = (inf || !dom.exact(d)) ? n : std::min(n, state + d);
            break;
          case AtomKind::Res:
            if (!inf) next = (state + (dom.exact(d) ? d : d - dom.T)) % n;
            break;
        }
        kids[d] = next ? build(c + 1, *next) : Mdd::kFalse;
      }
      int res = mdd.make(c, std::move(kids));
      memo.emplace(std::make_pair(c, state), res);
      return res;
    };
    return build(0, 0);
  }

  Diagram project(const Diagram& body) {
    const Domain in = body.dom;
    const Domain out{2 * in.T + 2 * in.q - 2 > in.T ? 2 * in.T + 2 * in.q - 2 : in.T, in.q};
    // pairs[P]: abstract splits (l, r) feasible for parent class P.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(out.size());
    for (std::size_t l = 0; l < in.size(); ++l)
      for (std::size_t r = 0; r < in.size(); ++r) {
        if (l == in.inf() || r == in.inf()) {
          pairs[out.inf()].emplace_back(l, r);
          continue;
        }
        const u64 s0 = in.least(l) + in.least(r);
        const bool ap = !in.exact(l) || !in.exact(r);
        for (std::size_t p = 0; p < out.T; ++p)
          if (ap ? (p >= s0 && (p - s0) % in.q == 0) : p == s0) pairs[p].emplace_back(l, r);
        if (ap) pairs[static_cast<std::size_t>(out.T + (s0 + out.q * out.T - out.T) % out.q)].emplace_back(l, r);
      }
    std::unordered_map<int, int> memo;
    std::function<int(int)> proj = [&](int n) -> int {
      if (n <= Mdd::kTrue) return n;
      if (auto it = memo.find(n); it != memo.end()) return it->second;
      const int c = mdd.level(n) / 2;
      std::vector<std::vector<int>> g(in.size(), std::vector<int>(in.size(), -1));
      std::vector<int> kids(out.size());
      for (std::size_t p = 0; p < out.size(); ++p) {
        int acc = Mdd::kFalse;
        for (auto [l, r] : pairs[p]) {
          int& gr = g[l][r];
          if (gr < 0) gr = proj(mdd.child(mdd.child(n, 2 * c, l), 2 * c + 1, r));
          acc = mdd.apply(false, acc, gr);
          if (acc == Mdd::kTrue) break;
        }
        kids[p] = acc;
      }
      int res = mdd.make(c, std::move(kids));
      memo.emplace(n, res);
      return res;
    };
    return {proj(body.node), out};
  }

  static Term cell_term(u64 c, const std::vector<Variable>& vars) {
    const std::size_t k = vars.size();
    if (k == 0) return Term::constant("1", "bool");
    std::optional<Term> acc;
    for (std::size_t i = 0; i < k; ++i) {
      Term v = Term::var(vars[i]);
      Term lit = (c >> (k - 1 - i)) & 1 ? v : Term::app("compl", {v}, "bool");
      acc = acc ? Term::app("meet", {*acc, lit}, "bool") : lit;
    }
    return *acc;
  }

  // The disjunction of "cell has cardinality class d" over d in group.
  static Formula constraint(const Term& cell, const std::vector<bool>& group, Domain dom) {
    auto C = [&](u64 j) { return Formula::pred("C", {static_cast<std::int64_t>(j)}, {cell}); };
    const Formula fin = Formula::pred("Fin", {}, {cell});
    const bool inf = group[dom.inf()];
    bool all_res = true, any_res = false;
    for (u64 r = 0; r < dom.q; ++r) {
      all_res = all_res && group[static_cast<std::size_t>(dom.T + r)];
      any_res = any_res || group[static_cast<std::size_t>(dom.T + r)];
    }
    // A group holding every finite class from s on becomes one C_s literal.
    u64 s = dom.T;
    if (all_res)
      while (s > 0 && group[static_cast<std::size_t>(s - 1)]) --s;
    std::vector<Formula> parts;
    if (all_res) parts.push_back(inf ? (s == 0 ? Formula::truth() : C(s)) : s == 0 ? fin : Formula::conj(C(s), fin));
    for (u64 d = 0; d < s;) {
      if (!group[d]) {
        ++d;
        continue;
      }
      u64 e = d;
      while (e + 1 < s && group[e + 1]) ++e;
      if (e == 0) {
        parts.push_back(Formula::eq(cell, Term::constant("0", "bool")));
      } else {
        Formula below = Formula::negation(C(e + 1));
        parts.push_back(d == 0 ? below : Formula::conj(C(d), below));
      }
      d = e + 1;
    }
    if (!all_res && any_res) {
      for (u64 r = 0; r < dom.q; ++r)
        if (group[static_cast<std::size_t>(dom.T + r)])
          parts.push_back(dom.q == 1 ? Formula::conj(C(dom.T), fin)
                                     : Formula::conj(C(dom.T), Formula::pred("Res", {static_cast<std::int64_t>(dom.q),
                                                                                     static_cast<std::int64_t>(r)}, {cell})));
    }
    if (inf && !all_res) parts.push_back(Formula::negation(fin));
    return Formula::disj_all(parts);
  }

  u64 t0_, q_;
};

void scan_indices(const Formula& f, u64& max_c, u64& q) {
  if (f.kind() == FormulaKind::Pred) {
    if (f.pred_name() == "C") {
      if (f.indices()[0] < 1) throw Error("C[j] needs j >= 1");
      max_c = std::max(max_c, static_cast<u64>(f.indices()[0]));
    }
    if (f.pred_name() == "Res") {
      if (f.indices()[0] < 1) throw Error("Res[n,r] needs n >= 1");
      q = std::lcm(q, static_cast<u64>(f.indices()[0]));
      if (q > 720720) throw BudgetExceeded("lcm of Res moduli too large");
    }
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) scan_indices(f.child(i), max_c, q);
}

void check_boolean(const Formula& f) {
  for (const auto& v : f.free_vars())
    if (v.sort != "bool") throw SortError("variable '" + v.name + "' is not of Boolean sort");
  if (f.is_quantifier() && f.bound().sort != "bool") throw SortError("quantified variable is not of Boolean sort");
  if (f.kind() == FormulaKind::Pred) {
    const std::string& p = f.pred_name();
    if (p != "le" && p != "Fin" && p != "C" && p != "Res") throw SortError("predicate '" + p + "' is not enriched Boolean");
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) check_boolean(f.child(i));
}

struct Prepared {
  Formula f;
  std::vector<Variable> vars;
  u64 t0 = 1, q = 1;
};

Prepared prepare(const Formula& f) {
  check_boolean(f);
  Prepared p;
  p.f = rename_apart(f);
  auto fv = f.free_vars();
  p.vars.assign(fv.begin(), fv.end());
  if (p.vars.size() > Engine::kMaxVars) throw BudgetExceeded("more than 6 free Boolean variables");
  u64 max_c = 1;
  scan_indices(f, max_c, p.q);
  p.t0 = max_c;
  return p;
}

}  // namespace

Formula eliminate_quantifiers(const Formula& f, QeStats* stats) {
  Prepared p = prepare(f);
  Engine eng(p.t0, p.q);
  std::vector<Variable> vars = p.vars;
  Diagram d = eng.qe(p.f, vars);
  const std::size_t k = p.vars.size();
  int fin = eng.all_finite(k, d.dom);
  int valid = eng.mdd.negate(fin);
  int lo = eng.mdd.apply(true, d.node, valid), hi = eng.mdd.apply(false, d.node, fin);
  int pick = lo;
  if (lo == valid) pick = Mdd::kTrue;
  else if (lo == Mdd::kFalse) pick = Mdd::kFalse;
  else if (eng.mdd.reachable(hi) < eng.mdd.reachable(lo)) pick = hi;
  if (stats) {
    stats->threshold = d.dom.T;
    stats->modulus = d.dom.q;
    stats->mdd_nodes = eng.mdd.reachable(pick);
  }
  return eng.to_formula(pick, p.vars, d.dom);
}

bool decide_sentence(const Formula& f) {
  if (!f.is_sentence()) throw Error("decide_sentence expects a sentence");
  Prepared p = prepare(f);
  Engine eng(p.t0, p.q);
  std::vector<Variable> vars;
  Diagram d = eng.qe(p.f, vars);
  // The single cell is the top element, which is infinite.
  return eng.mdd.child(d.node, 0, d.dom.inf()) == Mdd::kTrue;
}

bool qf_equivalent(const Formula& a, const Formula& b) {
  if (!a.is_quantifier_free() || !b.is_quantifier_free()) throw Error("qf_equivalent expects quantifier-free formulas");
  Formula both = Formula::conj(a, b);
  Prepared p = prepare(both);
  Engine eng(p.t0, p.q);
  std::vector<Variable> vars = p.vars;
  Diagram da = eng.qe(a, vars), db = eng.qe(b, vars);
  int valid = eng.mdd.negate(eng.all_finite(vars.size(), da.dom));
  return eng.mdd.apply(true, da.node, valid) == eng.mdd.apply(true, db.node, valid);
}

}  // namespace adelic
