#include <algorithm>
#include <cmath>

#include "adelic/error.hpp"
#include "adelic/parse.hpp"
#include "fv_internal.hpp"

namespace adelic {

FactorTyper::FactorTyper(const FiniteStructure& m, const std::optional<Formula>& restriction)
    : m_(&m), restriction_(restriction) {}

FactorTyper::NodeData& FactorTyper::data(const FvNode& n) { return data_[&n]; }

const std::pair<int, int>& FactorTyper::parts(const FvNode& n, int id) const {
  return data_.at(&n).pairs[static_cast<std::size_t>(id)];
}

const std::vector<int>& FactorTyper::realized(const FvNode& n, int id) const {
  return data_.at(&n).sets[static_cast<std::size_t>(id)];
}

std::size_t FactorTyper::max_realized(const FvNode& n) const {
  auto it = data_.find(&n);
  std::size_t r = 0;
  if (it != data_.end())
    for (const auto& s : it->second.sets) r = std::max(r, s.size());
  return r;
}

int FactorTyper::type(const FvNode& n, std::map<Variable, Value>& env) {
  auto values = [&] {
    std::vector<Value> v;
    for (const auto& x : n.free) v.push_back(env.at(x));
    return v;
  };
  switch (n.kind) {
    case FvNode::Kind::Const:
      return n.value ? 1 : 0;
    case FvNode::Kind::Atom: {
      NodeData& d = data(n);
      if (!d.atom) d.atom = std::make_unique<PreparedFormula>(*m_, n.formula, n.free);
      return (*d.atom)(values()) ? 1 : 0;
    }
    case FvNode::Kind::Not:
      return type(*n.a, env);
    case FvNode::Kind::And:
    case FvNode::Kind::Or: {
      std::vector<int> key{type(*n.a, env), type(*n.b, env)};
      NodeData& d = data(n);
      auto [it, fresh] = d.intern.try_emplace(key, static_cast<int>(d.pairs.size()));
      if (fresh) d.pairs.emplace_back(key[0], key[1]);
      return it->second;
    }
    case FvNode::Kind::Exists: {
      std::vector<Value> vals = values();
      {
        NodeData& d = data(n);
        if (auto it = d.memo.find(vals); it != d.memo.end()) return it->second;
        if (n.restricted && !d.phi)
          d.phi = std::make_unique<PreparedFormula>(*m_, *restriction_,
                                                    std::vector<Variable>{*restriction_->free_vars().begin()});
      }
      std::optional<Value> saved;
      if (auto it = env.find(n.bound); it != env.end()) saved = it->second;
      std::vector<int> all, good;
      const Value size = static_cast<Value>(m_->size(n.bound.sort));
      for (Value b = 0; b < size; ++b) {
        env[n.bound] = b;
        int c = type(*n.a, env);
        all.push_back(c);
        if (n.restricted && (*data(n).phi)(std::vector<Value>{b})) good.push_back(c);
      }
      if (saved) env[n.bound] = *saved;
      else env.erase(n.bound);
      auto norm = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      norm(all);
      norm(good);
      std::vector<int> key = all;
      key.push_back(-1);
      key.insert(key.end(), good.begin(), good.end());
      NodeData& d = data(n);
      auto [it, fresh] = d.intern.try_emplace(key, static_cast<int>(d.sets.size()));
      if (fresh) d.sets.push_back(all);
      d.memo.emplace(std::move(vals), it->second);
      return it->second;
    }
  }
  return 0;
}

bool TypeEvaluator::eval(const FvNode& n, const std::vector<int>& types) {
  auto& ts = typers_;
  const std::size_t s = types.size();
  switch (n.kind) {
    case FvNode::Kind::Const:
      return n.value;
    case FvNode::Kind::Atom:
      return std::all_of(types.begin(), types.end(), [](int t) { return t == 1; });
    case FvNode::Kind::Not:
      return !eval(*n.a, types);
    case FvNode::Kind::And:
    case FvNode::Kind::Or: {
      std::vector<int> ta(s), tb(s);
      for (std::size_t i = 0; i < s; ++i) std::tie(ta[i], tb[i]) = ts[i]->parts(n, types[i]);
      bool left = eval(*n.a, ta);
      if (n.kind == FvNode::Kind::And ? !left : left) return left;
      return eval(*n.b, tb);
    }
    case FvNode::Kind::Exists: {
      auto& memo = memo_[&n];
      if (auto it = memo.find(types); it != memo.end()) return it->second;
      // One realized child type per index: the index's minterm cell of Z.
      std::vector<const std::vector<int>*> sets(s);
      for (std::size_t i = 0; i < s; ++i) sets[i] = &ts[i]->realized(n, types[i]);
      std::vector<std::size_t> pos(s, 0);
      std::vector<int> child(s);
      bool found = false;
      while (!found) {
        for (std::size_t i = 0; i < s; ++i) child[i] = (*sets[i])[pos[i]];
        found = eval(*n.a, child);
        std::size_t i = 0;
        while (i < s && ++pos[i] == sets[i]->size()) pos[i++] = 0;
        if (i == s) break;
      }
      memo_[&n].emplace(types, found);
      return found;
    }
  }
  return false;
}

namespace {

std::map<Variable, Value> factor_env(const TupleAssignment& asg, std::size_t i) {
  std::map<Variable, Value> env;
  for (const auto& [v, t] : asg) env[v] = t.at(i);
  return env;
}

void check_assignment(const FvTranslation& t, const ProductStructure& p, const TupleAssignment& asg) {
  for (const auto& v : t.free)
    if (!asg.count(v)) throw Error("unassigned free variable '" + v.name + "'");
  for (const auto& [v, tup] : asg)
    if (tup.size() != p.index_count()) throw SortError("assignment to '" + v.name + "' has the wrong length");
}

}  // namespace

bool evaluate_translation(const FvTranslation& t, const ProductStructure& p, const TupleAssignment& asg) {
  check_assignment(t, p, asg);
  std::vector<FactorTyper> typers;
  for (const auto& f : p.factors) typers.emplace_back(f, t.restriction);
  std::vector<int> types(p.index_count());
  for (std::size_t i = 0; i < types.size(); ++i) {
    auto env = factor_env(asg, i);
    types[i] = typers[i].type(*t.root, env);
  }
  TypeEvaluator ev(typers);
  return ev.eval(*t.root, types);
}

bool evaluate_translation_materialized(const FvTranslation& t, const ProductStructure& p,
                                       const TupleAssignment& asg) {
  check_assignment(t, p, asg);
  std::vector<Formula> locals = t.local_formulas();
  Formula th = t.boolean_formula();
  std::vector<Variable> xs = t.boolean_variables();
  FiniteStructure pa = FiniteStructure::powerset_algebra(static_cast<unsigned>(p.index_count()));
  Assignment a;
  for (std::size_t j = 0; j < locals.size(); ++j) a[xs[j]] = static_cast<Value>(boolean_value(p, locals[j], asg));
  return satisfies(pa, th, a);
}

FiniteIndexTranslation translate_finite_index(const Formula& sentence, std::size_t s, std::uint64_t max_assignments) {
  if (s == 0) throw Error("the index set must be nonempty");
  if (s > 20) throw Error("at most 20 indices");
  if (!sentence.is_sentence()) throw Error("translate_finite_index expects a sentence");
  FvTranslation t = translate(sentence, ring_signature());
  FiniteIndexTranslation out;
  out.s = s;
  out.tuple = t.local_formulas();
  Formula th = t.boolean_formula();
  std::vector<Variable> xs = t.boolean_variables();
  const std::size_t m = xs.size();
  if (static_cast<double>(s) * static_cast<double>(m) > std::log2(static_cast<double>(max_assignments)))
    throw BudgetExceeded("(2^" + std::to_string(s) + ")^" + std::to_string(m) + " Boolean-value sequences");
  FiniteStructure pa = FiniteStructure::powerset_algebra(static_cast<unsigned>(s));
  PreparedFormula pf(pa, th, xs);
  const Value top = Value{1} << s;
  std::vector<Value> x(m, 0);
  while (true) {
    if (pf(x)) out.accepted.emplace_back(x.begin(), x.end());
    std::size_t i = 0;
    while (i < m && ++x[i] == top) x[i++] = 0;
    if (i == m) break;
  }
  return out;
}

std::size_t Rectangle::cardinality() const {
  std::size_t n = 1;
  for (const auto& side : sides) n *= side.size();
  return n;
}

std::vector<Rectangle> rectangles(const Formula& f, const std::vector<Variable>& vars,
                                  const std::vector<FiniteStructure>& factors) {
  if (factors.empty()) throw Error("rectangles need at least one factor");
  for (const auto& v : f.free_vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw Error("free variable '" + v.name + "' is not a coordinate");
  FvTranslation t = translate(f, factors[0].signature());
  const std::size_t s = factors.size(), k = vars.size();
  std::vector<FactorTyper> typers;
  for (const auto& m : factors) typers.emplace_back(m, std::nullopt);
  // Per factor: type id -> the k-tuples of that type.
  std::vector<std::map<int, std::vector<std::vector<Value>>>> groups(s);

  for (const auto& m : factors)
    if (std::pow(static_cast<double>(m.size()), static_cast<double>(k)) > double(1 << 22))
      throw BudgetExceeded("too many tuples in factor " + m.label);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < s; ++i) {
    const Value n = static_cast<Value>(factors[i].size());
    std::vector<Value> a(k, 0);
    std::map<Variable, Value> env;
    while (true) {
      for (std::size_t j = 0; j < k; ++j) env[vars[j]] = a[j];
      groups[i][typers[i].type(*t.root, env)].push_back(a);
      std::size_t j = k;
      while (j > 0 && ++a[j - 1] == n) a[--j] = 0;
      if (j == 0) break;
    }
  }

  std::vector<Rectangle> out;
  TypeEvaluator ev(typers);
  std::vector<std::map<int, std::vector<std::vector<Value>>>::const_iterator> pos(s);
  for (std::size_t i = 0; i < s; ++i) pos[i] = groups[i].begin();
  std::vector<int> types(s);
  while (true) {
    for (std::size_t i = 0; i < s; ++i) types[i] = pos[i]->first;
    if (ev.eval(*t.root, types)) {
      Rectangle r;
      for (std::size_t i = 0; i < s; ++i) r.sides.push_back(pos[i]->second);
      out.push_back(std::move(r));
    }
    std::size_t i = 0;
    for (; i < s && ++pos[i] == groups[i].end(); ++i) pos[i] = groups[i].begin();
    if (i == s) break;
  }
  return out;
}

}  // namespace adelic
