#include <random>

#include "adelic/error.hpp"
#include "adelic/parse.hpp"
#include "adelic/product.hpp"
#include "adelic/ring_calculus.hpp"
#include "doctest.h"

using namespace adelic;

namespace {

Formula P(const char* s) { return parse_formula(s, ring_signature()); }
const Variable X{"x", "ring"}, Y{"y", "ring"};

ProductStructure zmods(std::initializer_list<std::int64_t> ns) {
  std::vector<FiniteStructure> fs;
  for (auto n : ns) fs.push_back(FiniteStructure::ring_mod(n));
  return ProductStructure(std::move(fs));
}

}  // namespace

TEST_CASE("boolean_value") {
  ProductStructure p = zmods({2, 3});
  CHECK(boolean_value(p, P("x*x = x"), {{X, {1, 2}}}) == 0b01);
  CHECK(boolean_value(p, P("x = x"), {{X, {1, 2}}}) == 0b11);
  CHECK(boolean_value(p, Formula::falsity()) == 0);
  CHECK_THROWS_AS(boolean_value(p, P("x = 0")), Error);
  CHECK_THROWS_AS(boolean_value(p, P("x = 0"), {{X, {1}}}), SortError);
}

TEST_CASE("Boolean values are a homomorphism on the formula algebra") {
  const char* fs[] = {"x*x = x", "exists z. z*z = x", "x*y = 0", "x + y = 1", "exists z. x*z = y"};
  for (auto p : {zmods({2, 3, 4}), zmods({4, 9}), zmods({5, 6, 8})}) {
    for (const char* a : fs)
      for (const char* b : fs) {
        Formula fa = P(a), fb = P(b);
        for (std::size_t r = 0; r < p.size(); r += 7)
          for (std::size_t q = 0; q < p.size(); q += 5) {
            TupleAssignment asg{{X, p.element(r)}, {Y, p.element(q)}};
            IndexSet va = boolean_value(p, fa, asg), vb = boolean_value(p, fb, asg);
            CHECK(boolean_value(p, Formula::conj(fa, fb), asg) == (va & vb));
            CHECK(boolean_value(p, Formula::disj(fa, fb), asg) == (va | vb));
            CHECK(boolean_value(p, Formula::negation(fa), asg) == (p.full() & ~va));
          }
      }
  }
}

TEST_CASE("support and idempotents of index sets") {
  ProductStructure p = zmods({2, 3});
  CHECK(support(p, {0, 2}) == 0b10);
  ProductStructure q = zmods({2, 3, 5});
  for (IndexSet x = 0; x < 8; ++x) {
    CHECK(support(q, idempotent_of_set(q, x)) == x);
    for (IndexSet y = 0; y < 8; ++y) CHECK(q.mul(idempotent_of_set(q, x), idempotent_of_set(q, y)) == idempotent_of_set(q, x & y));
  }
}

TEST_CASE("eval_direct") {
  Formula idem = P("exists x. x*x = x /\\ x != 0 /\\ x != 1");
  CHECK(eval_direct(zmods({2, 2}), idem));
  CHECK_FALSE(eval_direct(zmods({4}), idem));
  CHECK(eval_direct(zmods({7, 8, 9}), P("forall x. x = x")));
  CHECK_THROWS_AS(eval_direct(zmods({9, 9, 9, 9}), P("forall x y z w. x*y = z*w"), 1e6), BudgetExceeded);
  CHECK_THROWS_AS(eval_direct(zmods({4}), P("x = 0")), Error);
  // Agrees with the table ring of the product.
  for (auto p : {zmods({2, 3}), zmods({2, 4}), zmods({3, 3, 2})}) {
    FiniteStructure r = product_ring(p);
    for (const char* s : {"forall x. exists y. x*y*x = x", "exists x. x*x = 0 /\\ x != 0",
                          "forall x. x*x*x = x", "exists x y. x*y = 0 /\\ x != 0 /\\ y != 0"})
      CHECK(eval_direct(p, P(s)) == satisfies(r, P(s)));
  }
}

TEST_CASE("product_ring is isomorphic to Z/n under CRT") {
  CHECK(ring_isomorphic(product_ring(zmods({2, 3})), FiniteStructure::ring_mod(6)).isomorphic);
  CHECK(ring_isomorphic(product_ring(zmods({4, 3})), FiniteStructure::ring_mod(12)).isomorphic);
  CHECK_FALSE(ring_isomorphic(product_ring(zmods({2, 2})), FiniteStructure::ring_mod(4)).isomorphic);
}

TEST_CASE("stalks at atoms") {
  ProductStructure p23 = zmods({2, 3});
  StalkAtAtom s = stalk_at_atom(p23, 0);
  CHECK(s.factor->size() == 2);
  CHECK(s.verified);
  CHECK(stalk_at_atom(zmods({7}), 0).verified);
  for (auto p : {zmods({2, 3, 5}), zmods({4, 3, 2}), zmods({2, 2, 2}), zmods({9, 4, 5}), zmods({8, 3, 7})})
    for (std::size_t i = 0; i < p.index_count(); ++i) CHECK(stalk_at_atom(p, i).verified);
}

TEST_CASE("internal and external Boolean values agree on products of local rings") {
  const char* fs[] = {"x = 0", "exists z. x*z = 1", "x*x = x", "exists z. z*z = x", "x*x = 0"};
  for (auto p : {zmods({2, 3}), zmods({4, 3}), zmods({2, 9, 5}), zmods({8, 7})}) {
    FiniteStructure r = product_ring(p);
    IdempotentLattice lat = idempotent_lattice(r);
    REQUIRE(lat.atoms.size() == p.index_count());
    for (const char* c : fs) {
      Formula f = P(c);
      for (std::size_t a = 0; a < p.size(); ++a) {
        Value internal = boolean_value_by_relativization(r, lat, f, {X}, {static_cast<Value>(a)});
        IndexSet external = boolean_value(p, f, {{X, p.element(a)}});
        CHECK(p.element(static_cast<std::size_t>(internal)) == idempotent_of_set(p, external));
      }
    }
  }
}

TEST_CASE("product specs") {
  ProductStructure p = parse_product_spec("zmod:4,zmod:9");
  CHECK(p.index_count() == 2);
  CHECK(p.labels == std::vector<std::string>{"p=2,k=2", "p=3,k=2"});
  CHECK(parse_product_spec("a=zmod:6 zmod:7").labels == std::vector<std::string>{"a", "p=7,k=1"});
  CHECK(zmod_label(12) == "Z/12");
  CHECK_THROWS_AS(parse_product_spec("zmod:1"), Error);
  CHECK_THROWS_AS(parse_product_spec("foo:3"), Error);
  CHECK_THROWS_AS(parse_product_spec(""), Error);
}

TEST_CASE("structure spec files") {
  CHECK(parse_structure_text("ring mod 12\n").size() == 12);
  CHECK(parse_structure_text("# comment\nzmod:5").size() == 5);
  // The field with four elements: addition is xor, a^2 = a + 1.
  const std::string f4 =
      "ring tables 4\nzero 0\none 1\n"
      "add\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n"
      "mul\n0 0 0 0\n0 1 2 3\n0 2 3 1\n0 3 1 2\n";
  FiniteStructure f = parse_structure_text(f4);
  CHECK(f.size() == 4);
  CHECK(satisfies(f, parse_formula("forall x. x = 0 \\/ exists y. x*y = 1", ring_signature())));
  CHECK(satisfies(f, parse_formula("1 + 1 = 0", ring_signature())));
  CHECK_FALSE(satisfies(FiniteStructure::ring_mod(4), parse_formula("forall x. x = 0 \\/ exists y. x*y = 1",
                                                                    ring_signature())));
  CHECK_THROWS_AS(parse_structure_text("ring tables 2\nzero 0\none 1\nadd\n0 1\n1 0\nmul\n0 0\n"), Error);
  CHECK_THROWS_AS(parse_structure_text("ring mod 1"), Error);
  CHECK_THROWS_AS(parse_structure_text("group mod 3"), Error);
  CHECK_THROWS_AS(parse_structure_text("zmod:2\nzmod:3\n"), Error);
  CHECK_THROWS_AS(parse_structure_text("ring mod 4 5"), Error);
  // Non-associative addition is rejected.
  CHECK_THROWS(parse_structure_text("ring tables 3\nzero 0\none 1\nadd\n0 1 2\n1 0 0\n2 0 0\n"
                                    "mul\n0 0 0\n0 1 2\n0 2 1\n"));
}
