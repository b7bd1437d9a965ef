#include <random>
#include <set>

#include "adelic/error.hpp"
#include "adelic/fv.hpp"
#include "adelic/parse.hpp"
#include "adelic/random_formulas.hpp"
#include "adelic/ring_calculus.hpp"
#include "doctest.h"

using namespace adelic;

namespace {

Formula P(const char* s) { return parse_formula(s, ring_signature()); }
const Variable X{"x", "ring"}, Y{"y", "ring"};
const char* kIdem = "exists x. x*x = x /\\ x != 0 /\\ x != 1";

ProductStructure zmods(std::vector<std::int64_t> ns) {
  std::vector<FiniteStructure> fs;
  for (auto n : ns) fs.push_back(FiniteStructure::ring_mod(n));
  return ProductStructure(std::move(fs));
}

ProductStructure random_product(std::mt19937_64& rng, int lo, int hi, int max_n) {
  std::uniform_int_distribution<int> count(lo, hi), mod(2, max_n);
  std::vector<std::int64_t> ns;
  for (int i = count(rng); i > 0; --i) ns.push_back(mod(rng));
  return zmods(ns);
}

}  // namespace

TEST_CASE("atomic and negation clauses") {
  FvTranslation t = translate(P("x = y"), ring_signature());
  CHECK(t.local_formulas() == std::vector<Formula>{P("x = y")});
  CHECK(render(t.boolean_formula()) == "X1 = 1");
  CHECK(t.local_count() == 1u);

  Formula g = P("x*y = 0 /\\ exists z. z*x = y");
  FvTranslation tg = translate(g, ring_signature());
  FvTranslation tn = translate(Formula::negation(g), ring_signature());
  CHECK(tn.local_formulas() == tg.local_formulas());
  CHECK(tn.boolean_formula() == Formula::negation(tg.boolean_formula()));
}

TEST_CASE("exists clause") {
  FvTranslation t = translate(P(kIdem), ring_signature());
  // Three atoms below the quantifier give 2^3 minterm patterns.
  CHECK(t.local_count() == 8u);
  CHECK(t.quantifier_depth() == 1);
  std::vector<Formula> locals = t.local_formulas();
  // Pattern bit j is child local j; the child locals are the three atoms.
  CHECK(locals[1] == Formula::exists(X, Formula::conj_all({P("x*x = x"), P("x != 0"), P("x != 1")})));
  CHECK(locals[7] == Formula::exists(X, Formula::conj_all({P("x*x = x"), P("x = 0"), P("x = 1")})));
  Formula th = t.boolean_formula();
  CHECK(th.free_vars().size() == 8);
  for (const auto& v : th.free_vars()) CHECK(v.sort == "bool");
}

TEST_CASE("nontrivial idempotent across two factors") {
  Formula f = P(kIdem);
  FvTranslation t = translate(f, ring_signature());
  ProductStructure p = zmods({2, 2});
  CHECK(eval_direct(p, f));
  CHECK(evaluate_translation(t, p));
  CHECK(evaluate_translation_materialized(t, p));
  // No factor has a witness on its own.
  CHECK_FALSE(satisfies(FiniteStructure::ring_mod(2), f));
  CHECK_FALSE(evaluate_translation(t, zmods({4})));
  CHECK_FALSE(evaluate_translation_materialized(t, zmods({4})));
}

TEST_CASE("one-factor products reduce to the factor") {
  RingFormulaGen gen(11, {.max_depth = 2});
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.sentence();
    for (int n : {2, 4, 6, 9}) CHECK(evaluate_translation(translate(f, ring_signature()), zmods({n})) ==
                                     satisfies(FiniteStructure::ring_mod(n), f));
  }
}

TEST_CASE("translation agrees with direct evaluation on random sentences and products") {
  std::mt19937_64 rng(2024);
  RingFormulaGen gen(7, {.max_depth = 3, .max_connectives = 3});
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.sentence();
    ProductStructure p = random_product(rng, 2, 4, 9);
    while (direct_cost(p, f) > 5e7) p = random_product(rng, 2, 3, 5);
    bool direct = eval_direct(p, f);
    CHECK_MESSAGE(evaluate_translation(translate_cached(f, ring_signature()), p) == direct,
                  render(f) << " on " << p.describe());
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("typed and materialized evaluation agree") {
  RingFormulaGen gen(5, {.max_depth = 1, .max_connectives = 2});
  std::mt19937_64 rng(9);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.sentence();
    FvTranslation t = translate(f, ring_signature());
    if (!t.local_count() || *t.local_count() > 16) continue;
    ProductStructure p = random_product(rng, 1, 3, 6);
    bool typed = evaluate_translation(t, p);
    CHECK(typed == evaluate_translation_materialized(t, p));
    CHECK(typed == eval_direct(p, f));
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("formulas with free variables") {
  RingFormulaGen gen(3, {.max_depth = 2});
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.formula({X, Y}, 2);
    ProductStructure p = random_product(rng, 2, 3, 5);
    FvTranslation t = translate(f, ring_signature());
    FiniteStructure r = product_ring(p);
    for (std::size_t a = 0; a < p.size(); a += 3)
      for (std::size_t b = 0; b < p.size(); b += 2) {
        TupleAssignment asg{{X, p.element(a)}, {Y, p.element(b)}};
        bool direct = satisfies(r, f, {{X, static_cast<Value>(a)}, {Y, static_cast<Value>(b)}});
        CHECK(evaluate_translation(t, p, asg) == direct);
      }
  }
}

TEST_CASE("restricted translation at finite index") {
  Formula phi = P("x*x = x");
  FvTranslation t = translate(P(kIdem), ring_signature(), phi);
  CHECK(t.local_count() == 16u);
  Formula th = t.boolean_formula();
  CHECK(render(th).find("Fin(") != std::string::npos);
  for (auto p : {zmods({2, 2}), zmods({4}), zmods({3, 5, 4})}) {
    CHECK(evaluate_translation(t, p) == eval_direct(p, P(kIdem)));
    CHECK(evaluate_translation_materialized(t, p) == eval_direct(p, P(kIdem)));
  }
  CHECK_THROWS_AS(translate(P(kIdem), ring_signature(), P("x = y")), Error);
}

TEST_CASE("local-formula counts") {
  FvTranslation t = translate(P("forall x. exists y. x*y = y*x /\\ x + y = 0"), ring_signature());
  CHECK(t.quantifier_depth() == 2);
  // Inner exists over 2 atoms: 4 patterns; outer over those: 2^4.
  CHECK(t.local_count() == 16u);
  FvTranslation big = translate(P("forall x y z. exists w. x*w = y \\/ z*w = x \\/ w*w = z \\/ x = y"),
                                ring_signature());
  CHECK_FALSE(big.local_count().has_value());
  CHECK(big.log2_local_count() > 64);
  CHECK_THROWS_AS(big.local_formulas(), BudgetExceeded);
}

TEST_CASE("translate_finite_index") {
  FiniteIndexTranslation all = translate_finite_index(P("forall x. x = x"), 2);
  CHECK(all.tuple.size() == 1);
  CHECK(all.accepted.size() == 4);

  FiniteIndexTranslation atom = translate_finite_index(P("1 + 1 = 0"), 3);
  CHECK(atom.accepted == std::vector<std::vector<IndexSet>>{{0b111}});

  CHECK_THROWS_AS(translate_finite_index(P("x = 0"), 2), Error);
  CHECK_THROWS_AS(translate_finite_index(P("0 = 0"), 0), Error);

  // Every 2-factor product of the corpus: truth iff its sequence is accepted.
  FiniteIndexTranslation idem = translate_finite_index(P(kIdem), 2);
  std::set<std::vector<IndexSet>> accepted(idem.accepted.begin(), idem.accepted.end());
  bool cross_witness = false;
  for (int a = 2; a <= 9; ++a)
    for (int b = 2; b <= 9; ++b) {
      ProductStructure p = zmods({a, b});
      std::vector<IndexSet> seq;
      for (const auto& psi : idem.tuple) seq.push_back(boolean_value(p, psi));
      bool truth = eval_direct(p, P(kIdem));
      CHECK(accepted.count(seq) == (truth ? 1u : 0u));
      // The top pattern (a factor-local nontrivial idempotent) holds nowhere,
      // yet the product has one.
      if (truth && seq[1] == 0) cross_witness = true;
    }
  CHECK(cross_witness);
}

TEST_CASE("rectangles") {
  std::vector<FiniteStructure> f23{FiniteStructure::ring_mod(2), FiniteStructure::ring_mod(3)};
  auto full = rectangles(P("x = x"), {X}, f23);
  REQUIRE(full.size() == 1);
  CHECK(full[0].cardinality() == 6);

  auto idem = rectangles(P("x*x = x"), {X}, f23);
  REQUIRE(idem.size() == 1);
  CHECK(idem[0].sides[0] == std::vector<std::vector<Value>>{{0}, {1}});
  CHECK(idem[0].sides[1] == std::vector<std::vector<Value>>{{0}, {1}});
}

TEST_CASE("rectangle unions equal definable sets") {
  std::mt19937_64 rng(77);
  RingFormulaGen gen(78, {.max_depth = 2});
  for (int i = 0; i < 60; ++i) {
    const bool two = i % 2 == 0;
    Formula f = two ? gen.formula({X, Y}, 1) : gen.formula({X}, 2);
    std::vector<Variable> vars = two ? std::vector<Variable>{X, Y} : std::vector<Variable>{X};
    ProductStructure p = random_product(rng, 2, 3, two ? 4 : 6);
    auto rects = rectangles(f, vars, p.factors);
    FiniteStructure r = product_ring(p);
    std::set<std::vector<Value>> want, got;
    for (const auto& row : definable_set(r, f, vars)) want.insert(row);
    std::size_t total = 0;
    for (const auto& rect : rects) {
      total += rect.cardinality();
      // Expand: one k-tuple per factor -> k product elements (as ranks).
      std::vector<std::size_t> pos(rect.sides.size(), 0);
      while (true) {
        std::vector<Value> row(vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) {
          Tuple t;
          for (std::size_t k = 0; k < rect.sides.size(); ++k) t.push_back(rect.sides[k][pos[k]][j]);
          row[j] = static_cast<Value>(tuple_rank(p, t));
        }
        got.insert(row);
        std::size_t k = 0;
        for (; k < pos.size() && ++pos[k] == rect.sides[k].size(); ++k) pos[k] = 0;
        if (k == pos.size()) break;
      }
    }
    CHECK(got == want);
    CHECK(total == want.size());  // disjoint
  }
}
