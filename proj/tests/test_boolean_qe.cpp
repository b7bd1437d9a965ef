#include <random>

#include "adelic/boolean_qe.hpp"
#include "adelic/error.hpp"
#include "adelic/fv.hpp"
#include "adelic/parse.hpp"
#include "adelic/random_formulas.hpp"
#include "doctest.h"

using namespace adelic;
using Nat = BooleanElement::Nat;

namespace {

Formula B(const std::string& s) { return parse_formula(s, boolean_signature()); }
const Variable A{"a", "bool"}, Bv{"b", "bool"}, X{"x", "bool"};

BooleanElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<Nat> mod(1, 4), small(0, 11), coin(0, 2);
  const Nat n = mod(rng);
  std::vector<bool> res(n);
  for (Nat i = 0; i < n; ++i) res[i] = coin(rng) == 0;
  std::set<Nat> add, rem;
  for (int i = 0; i < 3; ++i) {
    if (coin(rng) == 0) add.insert(small(rng));
    if (coin(rng) == 0) rem.insert(small(rng));
  }
  return BooleanElement::make(n, res, add, rem);
}

std::set<Nat> sample(const BooleanElement& e, Nat upto) {
  std::set<Nat> s;
  for (Nat k = 0; k < upto; ++k)
    if (e.contains(k)) s.insert(k);
  return s;
}

}  // namespace

TEST_CASE("canonical form") {
  CHECK(BooleanElement::make(4, {true, false, true, false}) == BooleanElement::residue_class(2, 0));
  CHECK(BooleanElement::make(2, {true, false}, {0, 1}, {}) == BooleanElement::make(1, {false}, {0, 1}).join(
                                                                 BooleanElement::residue_class(2, 0)));
  CHECK(BooleanElement::make(1, {true}, {}, {0, 1, 2}) == BooleanElement::finite({0, 1, 2}).complement());
  // Equal denotations give equal forms.
  std::mt19937_64 rng(1);
  for (int i = 0; i < 400; ++i) {
    BooleanElement x = random_element(rng), y = random_element(rng);
    BooleanElement lhs = x.meet(y).complement(), rhs = x.complement().join(y.complement());
    CHECK(lhs == rhs);
    const Nat upto = 10 * 12 + 20;
    CHECK((sample(x, upto) == sample(y, upto)) == (x == y));
    CHECK(x.complement().complement() == x);
    CHECK(x.join(x.complement()) == BooleanElement::all());
    CHECK(sample(x.meet(y), upto) == [&] {
      std::set<Nat> s;
      for (Nat k : sample(x, upto))
        if (y.contains(k)) s.insert(k);
      return s;
    }());
  }
}

TEST_CASE("meet of residue classes") {
  BooleanElement evens = BooleanElement::residue_class(2, 0);
  CHECK(evens.meet(BooleanElement::residue_class(3, 0)) == BooleanElement::residue_class(6, 0));
  CHECK(evens.str() == "{k : k mod 2 in {0}}");
  CHECK(BooleanElement::finite({2, 5, 9}).str() == "{2,5,9}");
}

TEST_CASE("first and alternate") {
  BooleanElement odds = BooleanElement::residue_class(2, 1);
  CHECK(odds.first(3) == BooleanElement::finite({1, 3, 5}));
  BooleanElement alt = odds.join(BooleanElement::finite({0, 2})).alternate();
  CHECK(sample(alt, 12) == std::set<Nat>{0, 2, 5, 9});
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    BooleanElement x = random_element(rng);
    if (x.is_finite()) continue;
    BooleanElement h = x.alternate();
    CHECK(h.le(x));
    CHECK_FALSE(h.is_finite());
    CHECK_FALSE(x.meet(h.complement()).is_finite());
  }
}

TEST_CASE("enriched atoms") {
  BoolAssignment asg{{X, BooleanElement::finite({2, 5, 9})}, {A, BooleanElement::residue_class(2, 0)}};
  CHECK(eval_enriched_atom(B("Fin(x)"), asg));
  CHECK_FALSE(eval_enriched_atom(B("Fin(a)"), asg));
  CHECK(eval_enriched_atom(B("C[3](x)"), asg));
  CHECK_FALSE(eval_enriched_atom(B("C[4](x)"), asg));
  CHECK(eval_enriched_atom(B("C[4](a)"), asg));
  CHECK(eval_enriched_atom(B("Res[2,1](x)"), asg));
  CHECK_FALSE(eval_enriched_atom(B("Res[2,1](a)"), asg));
  CHECK(eval_enriched_atom(B("Res[2,0](x /\\ ~a)"), asg));
  CHECK(eval_enriched_atom(B("Res[3,1](x /\\ a)"), asg));
  CHECK_FALSE(eval_enriched_atom(B("Res[3,0](x /\\ ~a)"), asg));
}

TEST_CASE("split feasibility") {
  using C = CellSpec;
  CHECK(split_feasible(C::infinite(), C::infinite(), C::infinite()));
  CHECK(split_feasible(C::infinite(), C::exact(3), C::infinite()));
  CHECK_FALSE(split_feasible(C::infinite(), C::exact(3), C::at_least(5)));
  CHECK_FALSE(split_feasible(C::exact(4), C::infinite(), C::exact(0)));
  CHECK(split_feasible(C::exact(5), C::exact(2), C::exact(3)));
  CHECK_FALSE(split_feasible(C::exact(5), C::exact(2), C::exact(2)));
  CHECK(split_feasible(C::at_least(4, 2, 1), C::at_least(2, 2, 0), C::at_least(2, 2, 1)));
  CHECK_FALSE(split_feasible(C::at_least(4, 2, 1), C::at_least(2, 2, 0), C::at_least(2, 2, 0)));
  CHECK(split_feasible(C::exact(7), C::at_least(4, 3, 1), C::at_least(0)));
  CHECK_FALSE(split_feasible(C::exact(3), C::at_least(4), C::at_least(0)));
  CHECK(split_feasible(C::at_least(6, 4, 2), C::at_least(2, 3, 2), C::at_least(0, 2, 1)));
}

TEST_CASE("split feasibility agrees with explicit sets") {
  // Independent check on explicit counts up to 30.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> kind(0, 2), small(0, 6), q(1, 4);
  auto rnd = [&] {
    int kd = kind(rng);
    if (kd == 0) return CellSpec::exact(small(rng));
    if (kd == 1) {
      int m = q(rng);
      return CellSpec::at_least(small(rng), m, small(rng) % m);
    }
    return CellSpec::infinite();
  };
  for (int i = 0; i < 3000; ++i) {
    CellSpec p = rnd(), l = rnd(), r = rnd();
    bool want;
    if (p.kind == CellSpec::Kind::Infinite) {
      want = l.kind == CellSpec::Kind::Infinite || r.kind == CellSpec::Kind::Infinite;
    } else {
      want = false;
      for (Nat a = 0; a < 40 && !want; ++a)
        for (Nat b = 0; b < 40 && !want; ++b) want = l.admits(a) && r.admits(b) && p.admits(a + b);
    }
    CHECK_MESSAGE(split_feasible(p, l, r) == want, p.str() << " = " << l.str() << " + " << r.str());
  }
}

TEST_CASE("quantifier elimination examples") {
  Formula e = eliminate_quantifiers(B("exists y. y <= x /\\ C[2](y)"));
  CHECK(e.is_quantifier_free());
  CHECK(qf_equivalent(e, B("C[2](x)")));
  CHECK(eliminate_quantifiers(B("exists x. ~Fin(x) /\\ ~Fin(~x)")) == Formula::truth());
  CHECK(eliminate_quantifiers(B("exists x. Fin(x) /\\ ~Fin(x)")) == Formula::falsity());
  Formula qf = B("Fin(a /\\ b) /\\ ~C[2](a)");
  CHECK(qf_equivalent(eliminate_quantifiers(qf), qf));
  QeStats st;
  eliminate_quantifiers(B("exists y. Res[2,1](y) /\\ y <= a"), &st);
  CHECK(st.threshold == 4);
  CHECK(st.modulus == 2);
  // a has an odd finite subset iff it is nonempty.
  CHECK(qf_equivalent(eliminate_quantifiers(B("exists y. Res[2,1](y) /\\ y <= a")), B("a != 0")));
  // A finite part of a of even size at least 2 with a remainder of size 1.
  CHECK(qf_equivalent(eliminate_quantifiers(B("exists y. y <= a /\\ Res[2,0](y) /\\ C[2](y) /\\ C[1](a /\\ ~y) /\\ ~C[2](a /\\ ~y)")),
                      B("Fin(a) /\\ C[3](a) /\\ Res[2,1](a)")));
}

TEST_CASE("decide_sentence") {
  CHECK(decide_sentence(B("Fin(0)")));
  CHECK_FALSE(decide_sentence(B("exists x. Fin(x) /\\ ~Fin(x)")));
  CHECK(decide_sentence(B("forall x. exists y. y <= x /\\ Res[3,0](y) /\\ C[3](x /\\ ~y) -> C[3](x)")));
  CHECK_FALSE(decide_sentence(B("forall x. Fin(x) \\/ Fin(~x)")));
  CHECK_THROWS_AS(decide_sentence(B("Fin(a)")), Error);
  CHECK_THROWS_AS(eliminate_quantifiers(parse_formula("x = 0", ring_signature())), SortError);
}

TEST_CASE("axioms of both theories decide true") {
  auto axioms = boolean_axioms(4);
  CHECK(axioms.size() > 100);
  for (const auto& [name, f] : axioms) {
    CHECK(f.is_sentence());
    CHECK_MESSAGE(decide_sentence(f), name);
  }
  // A non-theorem of the same shape.
  CHECK_FALSE(decide_sentence(B("forall x y. (x /\\ y) = 0 /\\ Res[2,1](x) /\\ Res[2,1](y) -> Res[2,1](x \\/ y)")));
}

TEST_CASE("bounded witness examples") {
  BoolAssignment asg{{X, BooleanElement::finite({2, 5, 9})}};
  WitnessResult r = bounded_witness_evaluate(B("exists y. y <= x /\\ C[2](y)"), asg, 9);
  CHECK(r.value);
  CHECK_FALSE(r.sound_only);
  for (Nat fuel : {0, 1, 5})
    CHECK(bounded_witness_evaluate(B("forall y. y <= 0 -> y = 0"), {}, fuel).value);
  // Needs a finite witness of size 3 inside an infinite cell.
  Formula f = B("exists y. Fin(y) /\\ C[3](y)");
  CHECK(sufficient_fuel(f) >= 3);
  CHECK(bounded_witness_evaluate(f, {}, sufficient_fuel(f)).value);
  WitnessResult low = bounded_witness_evaluate(f, {}, 1);
  CHECK(low.sound_only);
  CHECK_FALSE(low.value);
}

TEST_CASE("sentence witnesses") {
  auto w = sentence_witness(B("exists x. ~Fin(x) /\\ ~Fin(~x)"));
  REQUIRE(w);
  CHECK_FALSE(w->is_finite());
  CHECK_FALSE(w->complement().is_finite());
  auto c = sentence_witness(B("forall x. Fin(x) \\/ ~C[2](~x)"));
  REQUIRE(c);
  CHECK_FALSE(c->is_finite());
  CHECK(c->complement().count().value_or(2) >= 2);
  CHECK_FALSE(sentence_witness(B("exists x. Fin(x) /\\ ~Fin(x)")));
  auto r = sentence_witness(B("exists x. Res[4,3](x)"));
  REQUIRE(r);
  CHECK(r->count() == 3u);
}

TEST_CASE("elimination agrees with the witness search on random formulas") {
  BoolFormulaGen gen(21, {.max_depth = 2});
  std::mt19937_64 rng(22);
  for (int i = 0; i < 150; ++i) {
    Formula f = gen.formula();
    Formula qf = eliminate_quantifiers(f);
    REQUIRE(qf.is_quantifier_free());
    for (int j = 0; j < 3; ++j) {
      BoolAssignment asg{{A, random_element(rng)}, {Bv, random_element(rng)}};
      WitnessResult w = bounded_witness_evaluate(f, asg, sufficient_fuel(f));
      CHECK_MESSAGE(eval_quantifier_free(qf, asg) == w.value, render(f) << "  ~>  " << render(qf));
    }
  }
}

TEST_CASE("elimination is idempotent") {
  BoolFormulaGen gen(31, {.max_depth = 2});
  for (int i = 0; i < 60; ++i) {
    Formula qf = eliminate_quantifiers(gen.formula());
    CHECK(qf_equivalent(eliminate_quantifiers(qf), qf));
  }
}

TEST_CASE("Fin is an ideal in the model") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    BooleanElement x = random_element(rng), y = random_element(rng);
    if (x.is_finite() && y.is_finite()) CHECK(x.join(y).is_finite());
    if (x.is_finite()) CHECK(x.meet(y).is_finite());
  }
  CHECK_FALSE(BooleanElement::all().is_finite());
}

TEST_CASE("Boolean side of a Feferman-Vaught translation") {
  Formula ring = parse_formula("exists x. x*x = x /\\ x != 0", ring_signature());
  FvTranslation t = translate(ring, ring_signature());
  Formula theta = t.boolean_formula();
  REQUIRE(theta.free_vars().size() <= 6);
  Formula qf = eliminate_quantifiers(theta);
  CHECK(qf.is_quantifier_free());
  // Values from a small subalgebra keep most of the 16 cells empty, which
  // keeps the witness search small.
  const std::vector<BooleanElement> pool{BooleanElement::empty(), BooleanElement::all(),
                                         BooleanElement::residue_class(2, 0), BooleanElement::residue_class(2, 1),
                                         BooleanElement::finite({0, 1, 2})};
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 40; ++i) {
    BoolAssignment asg;
    for (const auto& v : theta.free_vars()) asg.emplace(v, pool[pick(rng)]);
    CHECK(eval_quantifier_free(qf, asg) == bounded_witness_evaluate(theta, asg, sufficient_fuel(theta)).value);
  }
}
