#include <numeric>

#include "adelic/evaluate.hpp"
#include "adelic/kernels.hpp"
#include "adelic/parse.hpp"
#include "adelic/random_formulas.hpp"
#include "adelic/zmod.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adelic;

namespace {

Formula R(const std::string& s) { return parse_formula(s, ring_signature()); }

const char* kComm = "forall x. forall y. x*y = y*x";
const char* kIdem = "exists x. x*x = x /\\ x != 0 /\\ x != 1";
const char* kCube = "forall x. x*x*x = x";
const char* kSqrtM1 = "exists x. x*x = -1";
const char* kTwoTorsion = "forall x. x + x = 0 -> x = 0";
// Holds in every prime-power ring; first fails at 15.
const char* kFifteen = "(exists x. x + x = 0 /\\ x != 0) \\/ ~(exists x. x*x = x /\\ x != 0 /\\ x != 1)";

// Closed forms from elementary number theory, independent of any evaluator.
bool sqrt_minus_one(std::int64_t m) {
  for (auto [p, k] : testutil::factor(m)) {
    if (p == 2 && k >= 2) return false;
    if (p % 4 == 3) return false;
  }
  return true;
}
bool nontrivial_idempotent(std::int64_t m) { return testutil::factor(m).size() >= 2; }
bool cube_identity(std::int64_t m) { return 6 % m == 0; }
bool fifteen(std::int64_t m) { return m % 2 == 0 || testutil::factor(m).size() < 2; }

}  // namespace

TEST_CASE("crt_decompose") {
  CHECK(crt_decompose(12) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(crt_decompose(7) == std::vector<PrimePower>{{7, 1}});
  CHECK(crt_decompose(360) == std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}});
  for (std::int64_t m = 2; m <= 3000; ++m) {
    auto d = crt_decompose(m);
    auto f = testutil::factor(m);
    REQUIRE(d.size() == f.size());
    std::int64_t prod = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i].p == f[i].first);
      CHECK(d[i].k == f[i].second);
      prod *= d[i].value();
    }
    CHECK(prod == m);
    CHECK(is_prime(m) == (f.size() == 1 && f[0].second == 1));
  }
}

TEST_CASE("decide_up_to examples") {
  auto comm = decide_up_to(R(kComm), 100);
  CHECK(comm.status == Verdict::Status::HoldsForAllChecked);
  CHECK(comm.skipped.empty());
  CHECK(comm.disagreements.empty());

  auto idem = decide_up_to(R(kIdem), 100);
  CHECK(idem.status == Verdict::Status::Fails);
  CHECK(idem.counterexample == 2);

  auto cube = decide_up_to(R(kCube), 10);
  CHECK(cube.status == Verdict::Status::Fails);
  CHECK(cube.counterexample == 4);
}

TEST_CASE("decide_up_to agrees with closed forms") {
  struct Case {
    const char* text;
    bool (*truth)(std::int64_t);
  };
  for (auto c : {Case{kSqrtM1, sqrt_minus_one}, Case{kIdem, nontrivial_idempotent}, Case{kCube, cube_identity},
                 Case{kFifteen, fifteen}}) {
    CAPTURE(c.text);
    auto v = decide_up_to(R(c.text), 120);
    CHECK(v.disagreements.empty());
    CHECK(v.skipped.empty());
    for (const auto& r : v.results) {
      CAPTURE(r.m);
      REQUIRE(r.direct.has_value());
      CHECK(*r.direct == c.truth(r.m));
      if (r.via_crt) CHECK(*r.via_crt == *r.direct);
    }
  }
}

TEST_CASE("classify_stalks examples") {
  auto sq = classify_stalks(R(kSqrtM1), 7, 3);
  CHECK(sq.at(5, 1)->truth == true);
  CHECK(sq.at(3, 1)->truth == false);
  CHECK(sq.at(2, 2)->truth == false);

  auto tt = classify_stalks(R(kTwoTorsion), 7, 4);
  CHECK(tt.at(2, 1)->truth == false);
  for (int k = 1; k <= 4; ++k) CHECK(tt.at(3, k)->truth == true);

  auto triv = classify_stalks(R("0 = 0"), 11, 3);
  CHECK(triv.class_count == 1);
  for (const auto& e : triv.table) CHECK(e.truth == true);

  // Table entries agree with brute force in Z/p^k.
  for (const auto& e : sq.table) {
    std::int64_t q = 1;
    for (int i = 0; i < e.k; ++i) q *= e.p;
    CHECK(e.truth == satisfies(FiniteStructure::ring_mod(q), R(kSqrtM1)));
  }
}

TEST_CASE("classify_stalks stability labels") {
  // x+x=0 -> x=0 is false only at p = 2, so it is stable in p from 3 for each k.
  auto tt = classify_stalks(R(kTwoTorsion), 13, 4);
  const Stability* s = nullptr;
  for (const auto& st : tt.stability)
    if (st.subject == "sentence") s = &st;
  REQUIRE(s);
  for (int k = 1; k <= 4; ++k) CHECK(s->stable_in_p.at(k) == std::optional<std::int64_t>(3));
  for (auto& [p, k] : s->stable_in_k) CHECK(k == std::optional<int>(1));
}

TEST_CASE("decide_all examples") {
  auto comm = decide_all(R(kComm), 13, 3);
  CHECK(comm.status == Verdict::Status::HoldsAssumingStabilization);
  REQUIRE(comm.certificate);
  CHECK(comm.certificate->uniform);

  auto idem = decide_all(R(kIdem), 13, 3);
  CHECK(idem.status == Verdict::Status::Fails);
  CHECK(idem.counterexample == 2);

  auto cube = decide_all(R(kCube), 13, 3);
  CHECK(cube.status == Verdict::Status::Fails);
  CHECK(cube.counterexample == 4);
  CHECK(cube.counterexample_stalks == std::vector<PrimePower>{{2, 2}});

  // Needs two stalks of the same class.
  auto f = decide_all(R(kFifteen), 13, 3);
  CHECK(f.status == Verdict::Status::Fails);
  REQUIRE(f.counterexample);
  CHECK(!fifteen(*f.counterexample));
}

TEST_CASE("fails verdicts are rechecked directly") {
  RingFormulaGen gen(404, {.max_depth = 1, .max_connectives = 2});
  int fails = 0;
  for (int i = 0; i < 25; ++i) {
    Formula s = gen.sentence();
    CAPTURE(render(s));
    auto all = decide_all(s, 7, 2);
    auto upto = decide_up_to(s, 60);
    CHECK(upto.disagreements.empty());
    if (all.status == Verdict::Status::Fails) {
      ++fails;
      REQUIRE(all.counterexample);
      CHECK(!satisfies(FiniteStructure::ring_mod(*all.counterexample), s));
    }
    if (upto.status == Verdict::Status::Fails) CHECK(!satisfies(FiniteStructure::ring_mod(*upto.counterexample), s));
    if (all.status == Verdict::Status::HoldsAssumingStabilization) CHECK(upto.status != Verdict::Status::Fails);
    // Monotone reporting: larger bounds keep a failure.
    if (all.status == Verdict::Status::Fails) CHECK(decide_all(s, 11, 3).status == Verdict::Status::Fails);
  }
  CHECK(fails > 0);
}

TEST_CASE("zmod_sweep parallel matches serial") {
  RingFormulaGen gen(77, {.max_depth = 2, .max_connectives = 2});
  for (int i = 0; i < 6; ++i) {
    Formula s = gen.sentence();
    CAPTURE(render(s));
    auto a = zmod_sweep(s, 60, {}, false);
    auto b = zmod_sweep(s, 60, {2e8L, 4}, true);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].m == b[j].m);
      CHECK(a[j].direct == b[j].direct);
      CHECK(a[j].via_crt == b[j].via_crt);
    }
  }
}
