#include <set>

#include "adelic/error.hpp"
#include "adelic/evaluate.hpp"
#include "adelic/parse.hpp"
#include "adelic/random_formulas.hpp"
#include "adelic/ring_calculus.hpp"
#include "adelic/transform.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adelic;

namespace {

const Signature& R = ring_signature();
const Signature& B = boolean_signature();

Formula P(const char* s) { return parse_formula(s, R); }
Formula PB(const char* s) { return parse_formula(s, B); }

using testutil::pair_ring;

// Truth of f under every assignment of its free variables.
std::vector<bool> truth_table(const FiniteStructure& m, const Formula& f, const std::vector<Variable>& vars) {
  std::vector<bool> out;
  PreparedFormula pf(m, f, vars);
  const std::size_t n = m.size();
  std::vector<Value> cur(vars.size(), 0);
  for (;;) {
    out.push_back(pf(cur));
    std::size_t i = 0;
    while (i < cur.size() && ++cur[i] == static_cast<Value>(n)) cur[i++] = 0;
    if (i == cur.size()) break;
  }
  return out;
}

}  // namespace

TEST_CASE("parse: spec examples") {
  Formula f = P("forall x. exists y. x*y = x");
  CHECK(f.kind() == FormulaKind::Forall);
  CHECK(f.child().kind() == FormulaKind::Exists);
  CHECK(f.bound().sort == "ring");
  CHECK(f.is_sentence());

  Formula g = PB("Fin(x /\\ ~y)");
  REQUIRE(g.kind() == FormulaKind::Pred);
  CHECK(g.pred_name() == "Fin");
  CHECK(g.terms()[0].name() == "meet");
  CHECK(g.terms()[0].args()[1].name() == "compl");

  Formula h = PB("C[2](x) -> Res[2,0](x)");
  REQUIRE(h.kind() == FormulaKind::Or);  // implication is eliminated
  CHECK(h.child(0).kind() == FormulaKind::Not);
  CHECK(h.child(0).child().indices() == std::vector<std::int64_t>{2});
  CHECK(h.child(1).indices() == std::vector<std::int64_t>{2, 0});
}

TEST_CASE("parse/render round trip") {
  const char* ring_cases[] = {
      "forall x. exists y. x*y = x",
      "~~(x = 0)",
      "~(~(x = 0) /\\ y = 1)",
      "exists x. x^3 = x /\\ ~(x = 0)",
      "x - y = 2*x + -(y*y)",
      "(x = 0 \\/ y = 0) /\\ (forall z. z*x = z*y)",
      "x = y <-> y = x",
      "forall x y: ring. x*y = y*x",
      "x*(y*z) = (x*y)*z",
      "-(-x) = x",
      "x != 1",
      "∀x. ∃y. x·y = 1 ∨ x = 0",
  };
  for (const char* c : ring_cases) {
    Formula f = P(c);
    std::string r = render(f);
    CHECK_MESSAGE(P(r.c_str()) == f, c << " => " << r);
    CHECK(P(render(f, {true}).c_str()) == f);
  }
  const char* bool_cases[] = {
      "Fin(x /\\ ~y)", "C[3](x \\/ y /\\ z)", "(x /\\ y) = 0", "x <= y", "x < y",
      "exists u. u <= x /\\ C[2](u)", "~Res[3,1](~x)", "(~x) = 1", "Res[2,-1](x)",
  };
  for (const char* c : bool_cases) {
    Formula f = PB(c);
    CHECK_MESSAGE(PB(render(f).c_str()) == f, c << " => " << render(f));
  }
  CHECK(render(PB("C[3](x)")) == "C[3](x)");
  CHECK(render(P("~~(x = 0)")) == "~~(x = 0)");
}

TEST_CASE("round trip on random formulas") {
  RingFormulaGen gen(7, {3, 3, 2});
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.sentence();
    CHECK(P(render(f).c_str()) == f);
  }
  BoolFormulaGen bgen(8);
  for (int i = 0; i < 300; ++i) {
    Formula f = bgen.formula();
    CHECK(PB(render(f).c_str()) == f);
  }
}

TEST_CASE("parse errors") {
  try {
    P("forall x.\n  x * = 1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 7);
  }
  CHECK_THROWS_AS(P("Q(x)"), UnknownSymbol);
  CHECK_THROWS_AS(P("f(x) = 0"), UnknownSymbol);
  CHECK_THROWS_AS(PB("C(x)"), ParseError);
  CHECK_THROWS_AS(PB("C[0](x)"), ParseError);
  CHECK_THROWS_AS(PB("x = 2"), ParseError);
  CHECK_THROWS_AS(P("x <= y"), ParseError);
  CHECK_THROWS_AS(P("forall x: bool. x = x"), SortError);
  CHECK_THROWS_AS(P("exists x. (x = 0"), ParseError);
}

TEST_CASE("formula files") {
  auto lines = parse_formula_lines("# header\n\nx = 0   # trailing\n  forall y. y = y\n", R);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].line == 3);
  CHECK(lines[1].formula.is_sentence());
  CHECK_THROWS_AS(parse_formula_lines("x = 0\nx = = 1\n", R), ParseError);
}

TEST_CASE("attributes") {
  Formula f = P("exists y. x*y = z /\\ forall x. x = y");
  std::set<Variable> fv = f.free_vars();
  CHECK(fv == std::set<Variable>{{"x", "ring"}, {"z", "ring"}});
  CHECK(f.quantifier_depth() == 2);
}

TEST_CASE("nnf") {
  CHECK(to_nnf(P("~(x = 0 /\\ y = 0)")) == P("~(x = 0) \\/ ~(y = 0)"));
  CHECK(to_nnf(P("~forall x. x = 0")) == P("exists x. ~(x = 0)"));
  Formula already = P("exists x. ~(x = 0) \\/ (y = 1 /\\ forall z. z = z)");
  CHECK(to_nnf(already) == already);
  CHECK(to_nnf(P("~~(x = 0)")) == P("x = 0"));
}

TEST_CASE("prenex") {
  Formula f = P("(exists x. x*x = x) /\\ x = 1");
  Formula p = to_prenex(f);
  REQUIRE(p.kind() == FormulaKind::Exists);
  CHECK(p.bound().name != "x");  // renamed apart from the free x
  CHECK(p.child().is_quantifier_free());
  CHECK(p.free_vars() == f.free_vars());

  Formula q = P("forall x. exists y. forall z. x*y = z");
  CHECK(to_prenex(q) == q);

  Formula r = P("~(exists x. x = 0) \\/ forall x. x = 1");
  Formula pr = to_prenex(r);
  CHECK(pr.kind() == FormulaKind::Forall);
  CHECK(pr.child().kind() == FormulaKind::Forall);
  CHECK(pr.bound().name != pr.child().bound().name);
}

TEST_CASE("nnf and prenex preserve truth on Z/6 (100 random depth<=2 formulas)") {
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  RingFormulaGen gen(11, {2, 3, 2});
  std::vector<Variable> free = {{"x", "ring"}, {"y", "ring"}};
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.formula(free, 2);
    auto want = truth_table(z6, f, free);
    CHECK(truth_table(z6, to_nnf(f), free) == want);
    CHECK(truth_table(z6, to_prenex(f), free) == want);
  }
}

TEST_CASE("nnf and prenex preserve truth on structures of size <= 9, depth <= 3") {
  std::vector<FiniteStructure> ms;
  for (int n = 2; n <= 9; ++n) ms.push_back(FiniteStructure::ring_mod(n));
  ms.push_back(pair_ring(2, 4));
  ms.push_back(pair_ring(3, 3));
  ms.push_back(pair_ring(2, 2));
  RingFormulaGen gen(12, {3, 3, 2});
  std::vector<Variable> free = {{"x", "ring"}};
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.formula(free, 3);
    for (const auto& m : ms) {
      auto want = truth_table(m, f, free);
      CHECK(truth_table(m, to_nnf(f), free) == want);
      CHECK(truth_table(m, to_prenex(f), free) == want);
    }
  }
  // Boolean-signature formulas on a powerset algebra.
  FiniteStructure p3 = FiniteStructure::powerset_algebra(3);
  BoolFormulaGen bgen(13, {2, 3, 2, 3, {"a"}, {"u", "v"}});
  std::vector<Variable> bfree = {{"a", "bool"}};
  for (int i = 0; i < 100; ++i) {
    Formula f = bgen.formula();
    auto want = truth_table(p3, f, bfree);
    CHECK(truth_table(p3, to_nnf(f), bfree) == want);
    CHECK(truth_table(p3, to_prenex(f), bfree) == want);
  }
}

TEST_CASE("relativization: atomic case and naming") {
  Relativized r = relativize_to_idempotent(P("x = 0"));
  CHECK(r.formula == P("y*x = 0"));
  CHECK_FALSE(r.renamed);
  Relativized s = relativize_to_idempotent(P("x = y"));
  CHECK(s.renamed);
  CHECK(s.y.name != "y");
  std::set<Variable> fv = s.formula.free_vars();
  CHECK(fv.size() == 3);
}

namespace {

// Stalk-equivalence contract, checked by brute force on both sides.
void check_relativization(const FiniteStructure& ring, const Formula& f) {
  IdempotentLattice lat = idempotent_lattice(ring);
  Relativized rel = relativize_to_idempotent(f);
  std::set<Variable> fvs = f.free_vars();
  std::vector<Variable> free(fvs.begin(), fvs.end());
  REQUIRE(free.size() <= 1);
  std::vector<Variable> order = free;
  order.push_back(rel.y);
  PreparedFormula global(ring, rel.formula, order);
  for (Value e : lat.idempotents) {
    if (e == ring.zero()) continue;
    Stalk st = stalk(ring, e);
    PreparedFormula local(st.ring, f, free);
    const Value n = free.empty() ? 1 : static_cast<Value>(ring.size());
    for (Value a = 0; a < n; ++a) {
      std::vector<Value> lv, gv;
      if (!free.empty()) {
        lv.push_back(st.project(a));
        gv.push_back(a);
      }
      gv.push_back(e);
      CHECK_MESSAGE(local(lv) == global(gv), render(f) << " e=" << e << " a=" << a);
    }
  }
}

}  // namespace

TEST_CASE("relativization: Z/6, e = 4, a = 2") {
  FiniteStructure z6 = FiniteStructure::ring_mod(6);
  Formula f = P("exists z. z*x = 1");
  Relativized rel = relativize_to_idempotent(f);
  Stalk st = stalk(z6, 4);
  bool local = satisfies(st.ring, f, {{{"x", "ring"}, st.project(2)}});
  bool global = satisfies(z6, rel.formula, {{{"x", "ring"}, 2}, {rel.y, 4}});
  CHECK(local == global);
  CHECK(local);  // 4*2 = 2 is a unit in the stalk {0,2,4} with unit 4
}

TEST_CASE("relativization: all idempotents of Z/30 over a 20-formula corpus") {
  const char* corpus[] = {
      "x = 0", "x = 1", "x*x = x", "exists z. z*x = 1", "exists z. z*z = x", "forall z. z*x = x",
      "exists z. z + z = x", "exists z. z*z*z = x", "forall z. z*z = z -> z*x = z", "x + x = 0",
      "x*x*x = x", "exists z. ~(z = 0) /\\ z*x = 0", "forall z. exists w. z = w*w \\/ z = -w*w",
      "exists z. z*z = -1", "forall z. z*z = 0 -> z = 0", "exists z. z*z = z /\\ ~(z = 0) /\\ ~(z = 1)",
      "forall z. z = 0 \\/ exists w. z*w = 1", "2*x = 1", "exists z. 3*z = x", "x = 2 \\/ x = -1",
  };
  FiniteStructure z30 = FiniteStructure::ring_mod(30);
  for (const char* c : corpus) check_relativization(z30, P(c));
  FiniteStructure z12 = FiniteStructure::ring_mod(12);
  for (const char* c : corpus) check_relativization(z12, P(c));
}
