#include <numeric>
#include <set>

#include "adelic/error.hpp"
#include "adelic/evaluate.hpp"
#include "adelic/parse.hpp"
#include "adelic/ring_calculus.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adelic;
using testutil::factor;
using testutil::pair_ring;

namespace {

Formula P(const char* s) { return parse_formula(s, ring_signature()); }
const Variable X{"x", "ring"};

std::vector<Value> column(const std::vector<std::vector<Value>>& rows) {
  std::vector<Value> out;
  for (const auto& r : rows) out.push_back(r.at(0));
  return out;
}

std::int64_t ipow(std::int64_t p, int k) {
  std::int64_t r = 1;
  while (k--) r *= p;
  return r;
}

}  // namespace

TEST_CASE("ring_mod") {
  FiniteStructure z2 = FiniteStructure::ring_mod(2);
  CHECK(z2.size() == 2);
  CHECK(z2.mul(1, 1) == 1);
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  CHECK(z6.add(1, 5) == 0);
  CHECK(z6.mul(4, 4) == 4);
  FiniteStructure z9 = FiniteStructure::ring_mod(9);
  CHECK(z9.mul(3, 3) == 0);
  CHECK_THROWS_AS(FiniteStructure::ring_mod(1), Error);
  CHECK(z9.numeral(-1) == 8);
}

TEST_CASE("ring_from_tables rejects non-rings") {
  // x*y = 1 everywhere violates the identity law.
  std::vector<std::int32_t> add = {0, 1, 1, 0}, mul = {1, 1, 1, 1};
  CHECK_THROWS_AS(FiniteStructure::ring_from_tables(2, add, mul, 0, 1), Error);
}

TEST_CASE("satisfies") {
  Formula nontrivial = P("exists x. x*x = x /\\ x != 0 /\\ x != 1");
  CHECK_FALSE(satisfies(FiniteStructure::ring_mod(4), nontrivial));
  CHECK(satisfies(FiniteStructure::ring_mod(6), nontrivial));
  CHECK(satisfies(FiniteStructure::ring_mod(7), P("forall x. x = x")));
  CHECK(satisfies(pair_ring(2, 3), P("forall x. x = x")));
  CHECK_THROWS_AS(satisfies(FiniteStructure::ring_mod(4), P("x = 0")), Error);
  CHECK_THROWS_AS(satisfies(FiniteStructure::ring_mod(50), P("forall x y z w v. x = y"), {}, 1e6), BudgetExceeded);
}

TEST_CASE("definable_set") {
  CHECK(column(definable_set(FiniteStructure::ring_mod(6), P("x*x = x"))) == std::vector<Value>{0, 1, 3, 4});
  std::vector<Value> units;
  for (Value a = 0; a < 9; ++a)
    if (std::gcd(a, Value{9}) == 1) units.push_back(a);
  CHECK(column(definable_set(FiniteStructure::ring_mod(9), P("exists y. x*y = 1"))) == units);
  CHECK(definable_set(FiniteStructure::ring_mod(9), P("x != x")).empty());
}

TEST_CASE("counting_measure") {
  CHECK(counting_measure(FiniteStructure::ring_mod(9), P("exists y. x = y+y+y")) == Rational{1, 3});
  CHECK(counting_measure(FiniteStructure::ring_mod(5), P("x = x")) == Rational{1, 1});
  CHECK(counting_measure(FiniteStructure::ring_mod(6), P("x*x = x")) == Rational{2, 3});
}

TEST_CASE("counting measure of a rectangle is the product of the factors' measures") {
  const char* phis[] = {"x*x = x", "exists z. z*z = x", "x + x = 0", "exists z. x*z = 1"};
  const char* psis[] = {"y*y*y = y", "exists z. z*y = 1", "y = 0 \\/ y = 1"};
  for (int n : {6, 8, 9, 12, 15}) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    for (const char* a : phis)
      for (const char* b : psis) {
        Formula fa = P(a), fb = P(b);
        Rational ma = counting_measure(m, fa), mb = counting_measure(m, fb);
        CHECK(counting_measure(m, Formula::conj(fa, fb)) == Rational::make(ma.num * mb.num, ma.den * mb.den));
      }
  }
}

TEST_CASE("idempotent lattice") {
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  IdempotentLattice l6 = idempotent_lattice(z6);
  CHECK(l6.idempotents == std::vector<Value>{0, 1, 3, 4});
  CHECK(l6.atoms == std::vector<Value>{3, 4});
  FiniteStructure z4 = FiniteStructure::ring_mod(4);
  IdempotentLattice l4 = idempotent_lattice(z4);
  CHECK(l4.idempotents == std::vector<Value>{0, 1});
  CHECK(l4.atoms == std::vector<Value>{1});
  CHECK(l4.connected());
  FiniteStructure z30 = FiniteStructure::ring_mod(30);
  IdempotentLattice l30 = idempotent_lattice(z30);
  CHECK(l30.idempotents.size() == 8);
  CHECK(l30.atoms.size() == 3);
}

TEST_CASE("lattice operations satisfy the Boolean-algebra identities, n <= 200") {
  for (int n = 2; n <= 200; ++n) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    IdempotentLattice l = idempotent_lattice(m);
    CHECK(l.idempotents.size() == (std::size_t{1} << factor(n).size()));
    for (Value a : l.idempotents) {
      CHECK(l.is_idempotent(l.complement(a)));
      CHECK(l.meet(a, l.complement(a)) == 0);
      CHECK(l.join(a, l.complement(a)) == m.one());
      CHECK(l.complement(l.complement(a)) == a);
      for (Value b : l.idempotents) {
        CHECK(l.is_idempotent(l.meet(a, b)));
        CHECK(l.is_idempotent(l.join(a, b)));
        CHECK(l.meet(a, b) == l.meet(b, a));
        CHECK(l.join(a, b) == l.join(b, a));
        CHECK(l.meet(a, l.join(a, b)) == a);  // absorption
        CHECK(l.join(a, l.meet(a, b)) == a);
        CHECK(l.complement(l.meet(a, b)) == l.join(l.complement(a), l.complement(b)));
        CHECK(l.le(a, b) == (l.meet(a, b) == a));
        for (Value c : l.idempotents) CHECK(l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c)));
      }
    }
  }
}

TEST_CASE("stalks") {
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  Stalk s3 = stalk(z6, 3);
  CHECK(s3.ring.embedding == std::vector<Value>{0, 3});
  CHECK(s3.ring.embedding[static_cast<std::size_t>(s3.ring.one())] == 3);
  CHECK(ring_isomorphic(s3.ring, FiniteStructure::ring_mod(2)).isomorphic);
  Stalk s4 = stalk(z6, 4);
  CHECK(s4.ring.embedding == std::vector<Value>{0, 2, 4});
  CHECK(s4.ring.embedding[static_cast<std::size_t>(s4.ring.one())] == 4);
  CHECK(ring_isomorphic(s4.ring, FiniteStructure::ring_mod(3)).isomorphic);
  Stalk s1 = stalk(z6, 1);
  CHECK(ring_isomorphic(s1.ring, z6).isomorphic);
  CHECK_THROWS_AS(stalk(z6, 2), Error);
}

TEST_CASE("isomorphism search distinguishes Z/4 from Z/2 x Z/2") {
  CHECK_FALSE(ring_isomorphic(FiniteStructure::ring_mod(4), pair_ring(2, 2)).isomorphic);
  IsoResult r = ring_isomorphic(FiniteStructure::ring_mod(6), pair_ring(2, 3));
  CHECK(r.isomorphic);
  CHECK(r.by_bijection);
  CHECK(is_ring_isomorphism(FiniteStructure::ring_mod(6), pair_ring(2, 3), r.map));
  CHECK_FALSE(ring_isomorphic(FiniteStructure::ring_mod(8), pair_ring(2, 4)).isomorphic);
}

TEST_CASE("CRT: stalks of Z/n at atoms are Z/p^k through x -> x mod p^k, n <= 200") {
  for (int n = 2; n <= 200; ++n) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    IdempotentLattice l = idempotent_lattice(m);
    auto fs = factor(n);
    REQUIRE(l.atoms.size() == fs.size());
    std::multiset<std::int64_t> want, got;
    for (auto [p, k] : fs) want.insert(ipow(p, k));
    for (Value e : l.atoms) {
      Stalk s = stalk(m, e);
      const std::int64_t q = static_cast<std::int64_t>(s.ring.size());
      got.insert(q);
      // e*a corresponds to a mod q; this map must be a ring isomorphism.
      std::vector<Value> map(static_cast<std::size_t>(q));
      for (std::size_t i = 0; i < map.size(); ++i) map[i] = s.ring.embedding[i] % q;
      FiniteStructure zq = FiniteStructure::ring_mod(q);
      CHECK_MESSAGE(is_ring_isomorphism(s.ring, zq, map), "n=" << n << " e=" << e);
    }
    CHECK(got == want);
  }
}

TEST_CASE("von Neumann regularity") {
  FiniteStructure z4 = FiniteStructure::ring_mod(4), z6 = FiniteStructure::ring_mod(6);
  CHECK_FALSE(is_von_neumann_regular(z4, 2));
  CHECK(is_von_neumann_regular(z6, 2));
  CHECK(z6.mul(z6.mul(2, 2), 2) == 2);
  for (Value u : {1, 3, 5, 7}) CHECK(is_von_neumann_regular(FiniteStructure::ring_mod(8), u));
}

TEST_CASE("regularity characterizations agree on every element, n <= 200") {
  for (int n = 2; n <= 200; ++n) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    for (Value a = 0; a < n; ++a) CHECK(vnr_by_equation(m, a) == vnr_by_idempotent_ideal(m, a));
  }
  FiniteStructure p = pair_ring(4, 6);
  for (Value a = 0; a < 24; ++a) CHECK(vnr_by_equation(p, a) == vnr_by_idempotent_ideal(p, a));
}

TEST_CASE("Fin-defining formula") {
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  CHECK(fin_formula_holds(z6, 1));
  CHECK_FALSE(fin_formula_holds(z6, 2));  // not idempotent
  // Products of fields: exactly the idempotents.
  for (const FiniteStructure& m : {FiniteStructure::ring_mod(6), FiniteStructure::ring_mod(30), pair_ring(2, 3),
                                   pair_ring(5, 7), FiniteStructure::ring_mod(2)}) {
    IdempotentLattice l = idempotent_lattice(m);
    for (Value x = 0; x < static_cast<Value>(m.size()); ++x)
      CHECK_MESSAGE(fin_formula_holds(m, x) == l.is_idempotent(x), m.label << " x=" << x);
  }
}

TEST_CASE("Fin-defining formula on non-reduced stalks") {
  // Over Z/2 x Z/4 the idempotent (0,1) carves out Z/4, where 2 is not
  // regular, so the formula rejects it; (1,0) carves out the field Z/2.
  FiniteStructure m = pair_ring(2, 4);
  const Value e01 = 0 * 4 + 1, e10 = 1 * 4 + 0;
  CHECK_FALSE(fin_formula_holds(m, e01));
  CHECK(fin_formula_holds(m, e10));
  CHECK(fin_formula_holds(m, 0));
  // In general it holds exactly for idempotents e with eR regular.
  for (const FiniteStructure& r : {pair_ring(2, 4), FiniteStructure::ring_mod(12), pair_ring(3, 9)}) {
    IdempotentLattice l = idempotent_lattice(r);
    for (Value x = 0; x < static_cast<Value>(r.size()); ++x) {
      bool want = l.is_idempotent(x);
      for (Value a = 0; want && a < static_cast<Value>(r.size()); ++a) want = vnr_by_equation(r, r.mul(a, x));
      CHECK(fin_formula_holds(r, x) == want);
    }
  }
}

TEST_CASE("internal and external Boolean values agree") {
  const char* corpus[] = {"x = 0", "x*x = x", "exists z. z*x = 1", "exists z. z*z = x", "x + x = 0"};
  for (int n : {6, 12, 30, 60, 36}) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    IdempotentLattice l = idempotent_lattice(m);
    std::vector<Stalk> st = atom_stalks(m, l);
    for (const char* c : corpus) {
      Formula f = P(c);
      for (Value a = 0; a < n; ++a) {
        Value internal = boolean_value_by_relativization(m, l, f, {X}, {a});
        Value by_atoms = boolean_value_by_atoms(l, st, f, {X}, {a});
        // External: the CRT idempotent of {i : Z/q_i |= f(a mod q_i)}.
        Value external = 0;
        for (std::size_t i = 0; i < l.atoms.size(); ++i) {
          const std::int64_t q = static_cast<std::int64_t>(st[i].ring.size());
          if (satisfies(FiniteStructure::ring_mod(q), f, {{X, a % q}})) external = l.join(external, l.atoms[i]);
        }
        CHECK(internal == external);
        CHECK(by_atoms == external);
      }
    }
  }
}

TEST_CASE("axiom checker") {
  Formula phi = P("x = x");
  AxiomReport r6 = check_restricted_product_axioms(FiniteStructure::ring_mod(6), phi);
  CHECK(r6.all_pass());
  CHECK(r6.atoms == std::vector<Value>{3, 4});
  AxiomReport r4 = check_restricted_product_axioms(FiniteStructure::ring_mod(4), phi);
  CHECK(r4.all_pass());
  CHECK(r4.connected);
  CHECK(r4.idempotent_count == 2);
  CHECK(r4.results[0].status == AxiomResult::Status::Pass);
  // Axiom 3 on Theta := (x = 0) at f = 0.
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  IdempotentLattice l = idempotent_lattice(z6);
  CHECK(boolean_value_by_atoms(l, atom_stalks(z6, l), P("x = 0"), {X}, {0}) == 1);
  CHECK(satisfies(z6, P("x = 0"), {{X, 0}}));
  AxiomReport rp = check_restricted_product_axioms(pair_ring(2, 4), P("exists y. x*y = 1 \\/ x = 0"));
  CHECK(rp.all_pass());
  CHECK_FALSE(rp.connected);
}

TEST_CASE("Fin-defining formula: reduced evaluation matches verbatim") {
  for (std::int64_t n = 2; n <= 24; ++n) {
    FiniteStructure m = FiniteStructure::ring_mod(n);
    IdempotentLattice l = idempotent_lattice(m);
    for (Value x = 0; x < static_cast<Value>(n); ++x)
      CHECK_MESSAGE(fin_formula_holds(m, l, x) == fin_formula_holds(m, x), "n=" << n << " x=" << x);
  }
  for (const FiniteStructure& r : {pair_ring(2, 4), pair_ring(3, 9)}) {
    IdempotentLattice l = idempotent_lattice(r);
    for (Value x = 0; x < static_cast<Value>(r.size()); ++x) CHECK(fin_formula_holds(r, l, x) == fin_formula_holds(r, x));
  }
}
