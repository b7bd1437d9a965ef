#include "adelic/finite_structure.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "adelic/error.hpp"

namespace adelic {

FiniteStructure::FiniteStructure(Signature sig, std::vector<std::size_t> sort_sizes)
    : sig_(std::make_shared<const Signature>(std::move(sig))), sizes_(std::move(sort_sizes)) {
  if (sizes_.size() != sig_->sorts().size()) throw Error("one carrier size per sort is required");
  for (auto s : sizes_)
    if (s == 0) throw Error("carriers must be nonempty");
}

FiniteStructure FiniteStructure::ring_mod(std::int64_t n) {
  if (n < 2) throw Error("ring_mod needs n >= 2, got " + std::to_string(n));
  FiniteStructure m(ring_signature(), {static_cast<std::size_t>(n)});
  m.modulus_ = n;
  m.ring_ = true;
  m.ring_verified_ = true;  // standard arithmetic
  m.label = "Z/" + std::to_string(n);
  return m;
}

FiniteStructure FiniteStructure::ring_from_tables(std::size_t n, std::vector<std::int32_t> add,
                                                  std::vector<std::int32_t> mul, Value zero, Value one,
                                                  std::size_t verify_limit) {
  if (add.size() != n * n || mul.size() != n * n) throw Error("ring tables must be n x n");
  FiniteStructure m(ring_signature(), {n});
  std::vector<std::int32_t> neg(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (add[a * n + b] == zero) neg[a] = static_cast<std::int32_t>(b);
  for (auto v : neg)
    if (v < 0) throw Error("additive inverses missing from ring tables");
  m.set_function("+", std::move(add));
  m.set_function("*", std::move(mul));
  m.set_function("-", std::move(neg));
  m.set_constant("0", zero);
  m.set_constant("1", one);
  m.ring_ = true;
  if (n <= verify_limit) m.verify_ring();
  return m;
}

void FiniteStructure::verify_ring() {
  const std::size_t n = size();
  for (std::size_t v = 0; v < n; ++v) {
    Value a = static_cast<Value>(v);
    if (add(a, zero()) != a || mul(a, one()) != a) throw Error("ring tables: identity law fails");
    if (add(a, neg(a)) != zero()) throw Error("ring tables: additive inverse fails");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Value x = static_cast<Value>(a), y = static_cast<Value>(b);
      if (add(x, y) != add(y, x)) throw Error("ring tables: + not commutative");
      if (mul(x, y) != mul(y, x)) throw Error("ring tables: * not commutative");
      for (std::size_t c = 0; c < n; ++c) {
        Value z = static_cast<Value>(c);
        if (add(add(x, y), z) != add(x, add(y, z))) throw Error("ring tables: + not associative");
        if (mul(mul(x, y), z) != mul(x, mul(y, z))) throw Error("ring tables: * not associative");
        if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z))) throw Error("ring tables: not distributive");
      }
    }
  ring_verified_ = true;
}

FiniteStructure FiniteStructure::powerset_algebra(unsigned s) {
  if (s == 0 || s > 20) throw Error("powerset algebra width must be in 1..20");
  const std::size_t n = std::size_t{1} << s;
  FiniteStructure m(boolean_signature(), {n});
  const std::int32_t full = static_cast<std::int32_t>(n - 1);
  // Tables would be 4^s entries; compute meet/join/compl on demand instead.
  m.powerset_width_ = s;
  m.set_constant("0", 0);
  m.set_constant("1", full);
  m.set_indexed_predicate("Fin", [](const std::vector<std::int64_t>&, const Value*) { return true; });
  m.set_indexed_predicate("C", [](const std::vector<std::int64_t>& idx, const Value* a) {
    return std::popcount(static_cast<std::uint64_t>(a[0])) >= idx[0];
  });
  m.set_indexed_predicate("Res", [](const std::vector<std::int64_t>& idx, const Value* a) {
    std::int64_t n = idx[0], r = ((idx[1] % n) + n) % n;
    return std::popcount(static_cast<std::uint64_t>(a[0])) % n == r;
  });
  m.set_indexed_predicate("le", [](const std::vector<std::int64_t>&, const Value* a) { return (a[0] & ~a[1]) == 0; });
  m.label = "P(" + std::to_string(s) + ")";
  return m;
}

void FiniteStructure::set_function(const std::string& name, std::vector<std::int32_t> table) {
  const FunctionDecl* d = sig_->function(name);
  if (!d) throw UnknownSymbol("function '" + name + "'");
  std::size_t cells = 1;
  for (const auto& s : d->arg_sorts) cells *= size(s);
  if (table.size() != cells) throw Error("table for '" + name + "' has wrong size");
  std::size_t range = size(d->result_sort);
  for (auto v : table)
    if (v < 0 || static_cast<std::size_t>(v) >= range) throw Error("table for '" + name + "' leaves the carrier");
  functions_[name] = std::move(table);
}

void FiniteStructure::set_constant(const std::string& name, Value v) {
  auto s = sig_->constant_sort(name);
  if (!s) throw UnknownSymbol("constant '" + name + "'");
  if (v < 0 || static_cast<std::size_t>(v) >= size(*s)) throw Error("constant '" + name + "' outside carrier");
  constants_[name] = v;
}

void FiniteStructure::set_predicate(const std::string& name, std::vector<char> table) {
  const PredicateDecl* d = sig_->predicate(name);
  if (!d) throw UnknownSymbol("predicate '" + name + "'");
  std::size_t cells = 1;
  for (const auto& s : d->arg_sorts) cells *= size(s);
  if (table.size() != cells) throw Error("table for '" + name + "' has wrong size");
  predicates_[name] = std::move(table);
}

void FiniteStructure::set_indexed_predicate(const std::string& name, IndexedPredicate p) {
  if (!sig_->predicate(name)) throw UnknownSymbol("predicate '" + name + "'");
  indexed_[name] = std::move(p);
}

std::size_t FiniteStructure::size() const {
  if (sizes_.size() != 1) throw SortError("structure is many-sorted");
  return sizes_[0];
}

std::size_t FiniteStructure::sort_index(const std::string& sort) const {
  const auto& ss = sig_->sorts();
  auto it = std::find(ss.begin(), ss.end(), sort);
  if (it == ss.end()) throw SortError("unknown sort '" + sort + "'");
  return static_cast<std::size_t>(it - ss.begin());
}

std::size_t FiniteStructure::size(const std::string& sort) const { return sizes_[sort_index(sort)]; }

std::size_t FiniteStructure::table_offset(const FunctionDecl& d, const std::vector<Value>& args) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::size_t n = size(d.arg_sorts[i]);
    if (args[i] < 0 || static_cast<std::size_t>(args[i]) >= n) throw Error("argument outside carrier");
    off = off * n + static_cast<std::size_t>(args[i]);
  }
  return off;
}

Value FiniteStructure::apply(const std::string& fn, const std::vector<Value>& args) const {
  if (modulus_) {
    if (fn == "+") return add(args.at(0), args.at(1));
    if (fn == "*") return mul(args.at(0), args.at(1));
    if (fn == "-") return neg(args.at(0));
  }
  if (powerset_width_) {
    const Value full = (Value{1} << powerset_width_) - 1;
    if (fn == "meet") return args.at(0) & args.at(1);
    if (fn == "join") return args.at(0) | args.at(1);
    if (fn == "compl") return full & ~args.at(0);
  }
  const FunctionDecl* d = sig_->function(fn);
  if (!d) throw UnknownSymbol("function '" + fn + "'");
  if (args.size() != d->arg_sorts.size()) throw Error("wrong arity for '" + fn + "'");
  auto it = functions_.find(fn);
  if (it == functions_.end()) throw Error("function '" + fn + "' has no interpretation");
  return it->second[table_offset(*d, args)];
}

Value FiniteStructure::constant(const std::string& name) const {
  if (modulus_) {
    if (name == "0") return 0;
    if (name == "1") return 1 % modulus_;
  }
  auto it = constants_.find(name);
  if (it == constants_.end()) throw UnknownSymbol("constant '" + name + "' has no interpretation");
  return it->second;
}

bool FiniteStructure::holds(const std::string& pred, const std::vector<std::int64_t>& indices,
                            const std::vector<Value>& args) const {
  if (auto it = indexed_.find(pred); it != indexed_.end()) return it->second(indices, args.data());
  const PredicateDecl* d = sig_->predicate(pred);
  if (!d) throw UnknownSymbol("predicate '" + pred + "'");
  auto it = predicates_.find(pred);
  if (it == predicates_.end()) throw Error("predicate '" + pred + "' has no interpretation");
  std::size_t off = 0;
  for (std::size_t i = 0; i < args.size(); ++i) off = off * size(d->arg_sorts[i]) + static_cast<std::size_t>(args[i]);
  return it->second[off] != 0;
}

Value FiniteStructure::add(Value a, Value b) const {
  if (modulus_) return (a + b) % modulus_;
  return functions_.at("+")[static_cast<std::size_t>(a) * sizes_[0] + static_cast<std::size_t>(b)];
}

Value FiniteStructure::mul(Value a, Value b) const {
  if (modulus_) return (a * b) % modulus_;
  return functions_.at("*")[static_cast<std::size_t>(a) * sizes_[0] + static_cast<std::size_t>(b)];
}

Value FiniteStructure::neg(Value a) const {
  if (modulus_) return (modulus_ - a) % modulus_;
  return functions_.at("-")[static_cast<std::size_t>(a)];
}

Value FiniteStructure::zero() const { return constant("0"); }
Value FiniteStructure::one() const { return constant("1"); }

Value FiniteStructure::numeral(std::int64_t k) const {
  if (modulus_) return ((k % modulus_) + modulus_) % modulus_;
  // Double-and-add keeps this logarithmic in k.
  Value acc = zero(), base = one();
  std::int64_t m = k < 0 ? -k : k;
  while (m) {
    if (m & 1) acc = add(acc, base);
    base = add(base, base);
    m >>= 1;
  }
  return k < 0 ? neg(acc) : acc;
}

FiniteStructure::RingTables FiniteStructure::ring_tables() const {
  if (!ring_) throw Error("not a ring");
  RingTables t;
  t.n = size();
  t.zero = zero();
  t.one = one();
  if (!modulus_) {
    t.add = functions_.at("+");
    t.mul = functions_.at("*");
    t.neg = functions_.at("-");
    return t;
  }
  const std::size_t n = t.n;
  t.add.resize(n * n);
  t.mul.resize(n * n);
  t.neg.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    t.neg[a] = static_cast<std::int32_t>(neg(static_cast<Value>(a)));
    for (std::size_t b = 0; b < n; ++b) {
      t.add[a * n + b] = static_cast<std::int32_t>((a + b) % n);
      t.mul[a * n + b] = static_cast<std::int32_t>((a * b) % n);
    }
  }
  return t;
}

// ---- isomorphism -----------------------------------------------------------

bool is_ring_isomorphism(const FiniteStructure& a, const FiniteStructure& b, const std::vector<Value>& map) {
  const std::size_t n = a.size();
  if (b.size() != n || map.size() != n) return false;
  std::vector<char> hit(n, 0);
  for (auto v : map) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = 1;
  }
  if (map[static_cast<std::size_t>(a.one())] != b.one()) return false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Value X = static_cast<Value>(x), Y = static_cast<Value>(y);
      if (map[static_cast<std::size_t>(a.add(X, Y))] != b.add(map[x], map[y])) return false;
      if (map[static_cast<std::size_t>(a.mul(X, Y))] != b.mul(map[x], map[y])) return false;
    }
  return true;
}

namespace {

struct RingInvariants {
  std::size_t size = 0, characteristic = 0, idempotents = 0, units = 0, nilpotents = 0;
  friend bool operator==(const RingInvariants&, const RingInvariants&) = default;
};

RingInvariants invariants(const FiniteStructure& r) {
  RingInvariants inv;
  const std::size_t n = r.size();
  inv.size = n;
  Value acc = r.one();
  std::size_t c = 1;
  while (acc != r.zero()) {
    acc = r.add(acc, r.one());
    ++c;
  }
  inv.characteristic = c;
  for (std::size_t v = 0; v < n; ++v) {
    Value x = static_cast<Value>(v);
    if (r.mul(x, x) == x) ++inv.idempotents;
    Value p = x;
    for (std::size_t k = 0; k < 64 && p != r.zero(); ++k) p = r.mul(p, x);
    if (p == r.zero()) ++inv.nilpotents;
    for (std::size_t w = 0; w < n; ++w)
      if (r.mul(x, static_cast<Value>(w)) == r.one()) {
        ++inv.units;
        break;
      }
  }
  return inv;
}

// Additive-order-aware bijection search: an isomorphism must send 1 to 1, so
// it is determined on the additive subgroup generated by 1; the remaining
// elements are assigned by backtracking with partial homomorphism checks.
bool extend(const FiniteStructure& a, const FiniteStructure& b, std::vector<Value>& map, std::vector<char>& used,
            std::size_t x) {
  const std::size_t n = a.size();
  while (x < n && map[x] >= 0) ++x;
  if (x == n) return is_ring_isomorphism(a, b, map);
  for (std::size_t y = 0; y < n; ++y) {
    if (used[y]) continue;
    map[x] = static_cast<Value>(y);
    used[y] = 1;
    bool ok = true;
    for (std::size_t z = 0; z < n && ok; ++z) {
      if (map[z] < 0) continue;
      Value s = a.add(static_cast<Value>(x), static_cast<Value>(z));
      Value p = a.mul(static_cast<Value>(x), static_cast<Value>(z));
      if (map[static_cast<std::size_t>(s)] >= 0 && map[static_cast<std::size_t>(s)] != b.add(map[x], map[z])) ok = false;
      if (map[static_cast<std::size_t>(p)] >= 0 && map[static_cast<std::size_t>(p)] != b.mul(map[x], map[z])) ok = false;
    }
    if (ok && extend(a, b, map, used, x + 1)) return true;
    used[y] = 0;
    map[x] = -1;
  }
  return false;
}

}  // namespace

IsoResult ring_isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
  IsoResult r;
  if (!a.is_ring() || !b.is_ring()) throw Error("ring isomorphism needs rings");
  if (a.size() != b.size()) return r;
  if (a.size() > 12) {
    r.isomorphic = invariants(a) == invariants(b);
    return r;
  }
  const std::size_t n = a.size();
  std::vector<Value> map(n, -1);
  std::vector<char> used(n, 0);
  // Multiples of 1 are forced.
  Value xa = a.zero(), xb = b.zero();
  for (std::size_t k = 0; k < n; ++k) {
    if (map[static_cast<std::size_t>(xa)] >= 0) {
      if (map[static_cast<std::size_t>(xa)] != xb) return r;
      break;
    }
    if (used[static_cast<std::size_t>(xb)]) return r;
    map[static_cast<std::size_t>(xa)] = xb;
    used[static_cast<std::size_t>(xb)] = 1;
    xa = a.add(xa, a.one());
    xb = b.add(xb, b.one());
  }
  r.by_bijection = true;
  if (extend(a, b, map, used, 0)) {
    r.isomorphic = true;
    r.map = std::move(map);
  }
  return r;
}

}  // namespace adelic
