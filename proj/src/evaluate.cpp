#include "adelic/evaluate.hpp"

#include <algorithm>
#include <cmath>

namespace adelic {

// ---- TableModel ------------------------------------------------------------

TableModel::TableModel(const FiniteStructure& s) : m(&s) {
  if (s.is_ring()) {
    tables = s.ring_tables();
    add_t = tables.add.data();
    mul_t = tables.mul.data();
    neg_t = tables.neg.data();
    n0 = tables.n;
  }
}

int TableModel::function_id(const std::string& f) {
  if (!m->signature().function(f)) throw UnknownSymbol("function '" + f + "'");
  fn_names.push_back(f);
  return static_cast<int>(fn_names.size() - 1);
}

Value TableModel::apply(int id, const Value* args) const {
  const std::string& f = fn_names[static_cast<std::size_t>(id)];
  std::size_t ar = m->signature().function(f)->arg_sorts.size();
  return m->apply(f, std::vector<Value>(args, args + ar));
}

int TableModel::predicate_id(const std::string& p) {
  if (!m->signature().predicate(p)) throw UnknownSymbol("predicate '" + p + "'");
  pred_names.push_back(p);
  return static_cast<int>(pred_names.size() - 1);
}

bool TableModel::pred(int id, const std::vector<std::int64_t>& idx, const Value* args) const {
  const std::string& p = pred_names[static_cast<std::size_t>(id)];
  std::size_t ar = m->signature().predicate(p)->arg_sorts.size();
  return m->holds(p, idx, std::vector<Value>(args, args + ar));
}

// ---- ProductModel ----------------------------------------------------------

ProductModel::ProductModel(const std::vector<const FiniteStructure*>& factors) {
  k = factors.size();
  if (k == 0 || k > 8) throw Error("ring products take 1..8 factors");
  std::size_t total = 1;
  for (const auto* f : factors) {
    if (!f->is_ring()) throw Error("ring products need ring factors");
    if (f->size() > 256) throw Error("product factors are limited to 256 elements");
    sizes.push_back(f->size());
    tables.push_back(f->ring_tables());
    total *= f->size();
    if (total > (std::size_t{1} << 26)) throw BudgetExceeded("product carrier too large to enumerate");
  }
  elements.reserve(total);
  std::vector<Value> digits(k, 0);
  for (std::size_t c = 0; c < total; ++c) {
    elements.push_back(pack(digits));
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < static_cast<Value>(sizes[i])) break;
      digits[i] = 0;
    }
  }
  std::vector<Value> ones;
  for (const auto& t : tables) ones.push_back(t.one);
  one_ = pack(ones);
}

Value ProductModel::pack(const std::vector<Value>& comps) const {
  Value r = 0;
  for (std::size_t i = 0; i < k; ++i) r |= comps[i] << (8 * i);
  return r;
}

std::vector<Value> ProductModel::unpack(Value a) const {
  std::vector<Value> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = digit(a, i);
  return out;
}

Value ProductModel::constant(const std::string& c) const {
  if (c == "0") {
    std::vector<Value> z;
    for (const auto& t : tables) z.push_back(t.zero);
    return pack(z);
  }
  if (c == "1") return one_;
  throw UnknownSymbol("constant '" + c + "' in a ring product");
}

Value ProductModel::numeral(std::int64_t v) const {
  Value acc = constant("0"), base = one_;
  std::int64_t m = v < 0 ? -v : v;
  while (m) {
    if (m & 1) acc = add(acc, base);
    base = add(base, base);
    m >>= 1;
  }
  return v < 0 ? neg(acc) : acc;
}

// ---- convenience API -------------------------------------------------------

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  return {n / g, d / g};
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

namespace {

template <class Model>
bool run_satisfies(Model& model, const Formula& f, const Assignment& asg, long double budget) {
  std::vector<Variable> order;
  for (const auto& v : f.free_vars()) {
    if (!asg.count(v)) throw Error("assignment misses free variable '" + v.name + "'");
    order.push_back(v);
  }
  CompiledFormula<Model> c(f, model, order);
  if (c.cost() > budget) throw BudgetExceeded("evaluation cost exceeds budget");
  std::vector<Value> env(std::max<std::size_t>(c.slots(), 1));
  for (std::size_t i = 0; i < order.size(); ++i) env[i] = asg.at(order[i]);
  return c.eval(env.data());
}

template <class Model>
std::vector<std::vector<Value>> run_definable(Model& model, const FiniteStructure& m, const Formula& f,
                                              const std::vector<Variable>& vars, long double budget) {
  CompiledFormula<Model> c(f, model, vars);
  long double tuples = 1;
  for (const auto& v : vars) tuples *= static_cast<long double>(m.size(v.sort));
  if (c.cost() * tuples > budget) throw BudgetExceeded("definable-set enumeration exceeds budget");
  std::vector<Value> env(std::max<std::size_t>(c.slots(), 1), 0);
  std::vector<std::vector<Value>> out;
  const std::size_t k = vars.size();
  std::vector<std::size_t> sizes;
  for (const auto& v : vars) sizes.push_back(m.size(v.sort));
  std::vector<Value> cur(k, 0);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) env[i] = cur[i];
    if (c.eval(env.data())) out.push_back(cur);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++cur[i] < static_cast<Value>(sizes[i])) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (k == 0) return out;
  }
}

}  // namespace

bool satisfies(const FiniteStructure& m, const Formula& f, const Assignment& asg, long double budget) {
  if (m.modulus()) {
    ZModModel z(m.modulus());
    return run_satisfies(z, f, asg, budget);
  }
  if (m.powerset_width()) {
    PowersetModel p(m.powerset_width());
    return run_satisfies(p, f, asg, budget);
  }
  TableModel t(m);
  return run_satisfies(t, f, asg, budget);
}

std::vector<std::vector<Value>> definable_set(const FiniteStructure& m, const Formula& f, std::vector<Variable> vars,
                                              long double budget) {
  std::set<Variable> fv = f.free_vars();
  if (vars.empty()) vars.assign(fv.begin(), fv.end());
  for (const auto& v : fv)
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw Error("free variable '" + v.name + "' missing from the tuple order");
  if (m.modulus()) {
    ZModModel z(m.modulus());
    return run_definable(z, m, f, vars, budget);
  }
  if (m.powerset_width()) {
    PowersetModel p(m.powerset_width());
    return run_definable(p, m, f, vars, budget);
  }
  TableModel t(m);
  return run_definable(t, m, f, vars, budget);
}

Rational counting_measure(const FiniteStructure& m, const Formula& f, long double budget) {
  std::set<Variable> fv = f.free_vars();
  if (fv.empty()) throw Error("counting measure needs at least one free variable");
  std::int64_t total = 1;
  for (const auto& v : fv) total *= static_cast<std::int64_t>(m.size(v.sort));
  auto set = definable_set(m, f, {}, budget);
  return Rational::make(static_cast<std::int64_t>(set.size()), total);
}

long double evaluation_cost(const Formula& f, std::size_t carrier) {
  switch (f.kind()) {
    case FormulaKind::Not:
      return evaluation_cost(f.child(), carrier);
    case FormulaKind::And:
    case FormulaKind::Or:
      return evaluation_cost(f.child(0), carrier) + evaluation_cost(f.child(1), carrier);
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return static_cast<long double>(carrier) * evaluation_cost(f.child(), carrier);
    default:
      return 1;
  }
}

}  // namespace adelic

namespace adelic {

struct PreparedFormula::Impl {
  virtual ~Impl() = default;
  virtual bool eval(const Value* values) const = 0;
  virtual long double cost() const = 0;
};

namespace {

template <class Model>
struct PreparedImpl final : PreparedFormula::Impl {
  template <class... Args>
  PreparedImpl(const Formula& f, const std::vector<Variable>& vars, Args&&... args)
      : model(std::forward<Args>(args)...), compiled(f, model, vars), k(vars.size()),
        env(std::max<std::size_t>(compiled.slots(), 1)) {}
  bool eval(const Value* values) const override {
    std::copy(values, values + k, env.begin());
    return compiled.eval(env.data());
  }
  long double cost() const override { return compiled.cost(); }
  Model model;
  CompiledFormula<Model> compiled;
  std::size_t k;
  mutable std::vector<Value> env;
};

}  // namespace

PreparedFormula::PreparedFormula(const FiniteStructure& m, const Formula& f, const std::vector<Variable>& vars) {
  for (const auto& v : f.free_vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw Error("free variable '" + v.name + "' missing from the tuple order");
  if (m.modulus()) impl_ = std::make_unique<PreparedImpl<ZModModel>>(f, vars, m.modulus());
  else if (m.powerset_width()) impl_ = std::make_unique<PreparedImpl<PowersetModel>>(f, vars, m.powerset_width());
  else impl_ = std::make_unique<PreparedImpl<TableModel>>(f, vars, m);
}

PreparedFormula::~PreparedFormula() = default;
PreparedFormula::PreparedFormula(PreparedFormula&&) noexcept = default;
PreparedFormula& PreparedFormula::operator=(PreparedFormula&&) noexcept = default;

bool PreparedFormula::operator()(const std::vector<Value>& values) const { return impl_->eval(values.data()); }
bool PreparedFormula::operator()(const Value* values) const { return impl_->eval(values); }
long double PreparedFormula::cost() const { return impl_->cost(); }

}  // namespace adelic
