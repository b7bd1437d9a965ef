#include <cmath>

#include "adelic/error.hpp"
#include "adelic/hilbert.hpp"
#include "adelic/kernels.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adelic;

namespace {

const Place inf = Place::infinity();

bool squarefree(std::int64_t n) {
  for (auto [p, k] : testutil::factor(std::llabs(n)))
    if (k > 1) return false;
  return true;
}

std::vector<std::int64_t> squarefree_grid(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = -n; a <= n; ++a)
    if (a != 0 && squarefree(a)) out.push_back(a);
  return out;
}

// Primitive solution of a x^2 + b y^2 = z^2 modulo q, by exhaustion.
bool primitive_solution_mod(std::int64_t a, std::int64_t b, std::int64_t p, std::int64_t q) {
  for (std::int64_t x = 0; x < q; ++x)
    for (std::int64_t y = 0; y < q; ++y)
      for (std::int64_t z = 0; z < q; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        std::int64_t f = (a * x * x + b * y * y - z * z) % q;
        if (f == 0) return true;
      }
  return false;
}

// Nontrivial integer solution with |x| <= X, |y| <= Y.
bool small_global_solution(std::int64_t a, std::int64_t b, std::int64_t X, std::int64_t Y) {
  for (std::int64_t x = 0; x <= X; ++x)
    for (std::int64_t y = 0; y <= Y; ++y) {
      if (x == 0 && y == 0) continue;
      const std::int64_t s = a * x * x + b * y * y;
      if (s < 0) continue;
      const auto z = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(s))));
      if (z * z == s) return true;
    }
  return false;
}

std::vector<Place> small_places() {
  std::vector<Place> out{inf};
  for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}) out.push_back(Place::prime(p));
  return out;
}

}  // namespace

TEST_CASE("symbol examples") {
  const RationalNZ two(2), three(3), one(1), m1(-1);
  CHECK(hilbert_symbol(two, three, Place::prime(2)) == -1);
  CHECK(hilbert_symbol(two, three, Place::prime(3)) == -1);
  for (std::int64_t p : {5, 7, 11, 13, 101}) CHECK(hilbert_symbol(two, three, Place::prime(p)) == 1);
  CHECK(hilbert_symbol(two, three, inf) == 1);

  for (std::int64_t b = -30; b <= 30; ++b)
    if (b != 0)
      for (Place v : small_places()) CHECK(hilbert_symbol(one, RationalNZ(b), v) == 1);

  CHECK(hilbert_symbol(m1, m1, inf) == -1);
  CHECK(hilbert_symbol(m1, m1, Place::prime(2)) == -1);
  for (std::int64_t p : {3, 5, 7, 11}) CHECK(hilbert_symbol(m1, m1, Place::prime(p)) == 1);

  auto r = hilbert_report(two, three, Place::prime(2));
  CHECK(r.modulus_exponent == 5);
  CHECK(r.oracle == r.closed);
}

TEST_CASE("rational arguments and square classes") {
  CHECK(RationalNZ(6, -4) == RationalNZ(-3, 2));
  CHECK(RationalNZ::parse("-3/2") == RationalNZ(-3, 2));
  CHECK_THROWS_AS(RationalNZ(0), Error);
  CHECK_THROWS_AS(RationalNZ::parse("2/x"), Error);
  CHECK(squarefree_part(RationalNZ(2, 9)) == 2);
  CHECK(squarefree_part(RationalNZ(-12)) == -3);
  CHECK(squarefree_part(RationalNZ(3, 8)) == 6);
  for (Place v : small_places()) {
    CHECK(hilbert_symbol(RationalNZ(2, 9), RationalNZ(3), v) == hilbert_symbol(RationalNZ(2), RationalNZ(3), v));
    CHECK(hilbert_symbol(RationalNZ(-1, 3), RationalNZ(5, 2), v) ==
          hilbert_symbol(RationalNZ(-3), RationalNZ(10), v));
  }
  CHECK_THROWS_AS(Place::prime(15), Error);
}

TEST_CASE("closed formula against exhaustive search mod 2^5 and 3^3") {
  const auto g = squarefree_grid(30);
  for (std::int64_t a : g)
    for (std::int64_t b : g) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK((hilbert_closed(RationalNZ(a), RationalNZ(b), Place::prime(2)) == 1) ==
            primitive_solution_mod(a, b, 2, 32));
      CHECK((hilbert_closed(RationalNZ(a), RationalNZ(b), Place::prime(3)) == 1) ==
            primitive_solution_mod(a, b, 3, 27));
    }
}

TEST_CASE("local symbols against global solvability") {
  // Coprime squarefree a, b: by Holzer's bound a solution exists iff one
  // exists with |x| <= sqrt|b|, |y| <= sqrt|a|; by Hasse-Minkowski that
  // happens iff every local symbol is 1.
  const auto g = squarefree_grid(30);
  int solvable = 0, checked = 0;
  for (std::int64_t a : g)
    for (std::int64_t b : g) {
      const RationalNZ ra(a), rb(b);
      bool all_one = true;
      for (Place v : relevant_places(ra, rb)) all_one = all_one && hilbert_symbol(ra, rb, v) == 1;
      if (std::gcd(a, b) == 1) {
        const auto X = static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::llabs(b)))),
                   Y = static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::llabs(a))));
        CHECK(all_one == small_global_solution(a, b, X, Y));
        ++checked;
      } else if (small_global_solution(a, b, 60, 60)) {
        CHECK(all_one);
      }
      solvable += all_one;
    }
  CHECK(checked > 500);
  CHECK(solvable > 0);
}

TEST_CASE("bimultiplicativity, symmetry and Steinberg identities") {
  const auto places = small_places();
  for (std::int64_t a = -30; a <= 30; ++a) {
    if (a == 0) continue;
    const RationalNZ ra(a);
    for (Place v : places) {
      CHECK(hilbert_closed(ra, RationalNZ(-a), v) == 1);
      if (a != 1) CHECK(hilbert_closed(ra, RationalNZ(1 - a), v) == 1);
    }
    for (std::int64_t b = -30; b <= 30; ++b) {
      if (b == 0) continue;
      const RationalNZ rb(b);
      for (Place v : places) CHECK(hilbert_closed(ra, rb, v) == hilbert_closed(rb, ra, v));
      for (std::int64_t c = -30; c <= 30; c += 7) {
        if (c == 0) continue;
        for (Place v : places)
          CHECK(hilbert_closed(RationalNZ(a * c), rb, v) ==
                hilbert_closed(ra, rb, v) * hilbert_closed(RationalNZ(c), rb, v));
      }
    }
  }
}

TEST_CASE("product formula and adelic kernel") {
  auto r = product_formula_check(RationalNZ(2), RationalNZ(3));
  CHECK(r.product == 1);
  REQUIRE(r.symbols.size() == 3);  // inf, 2, 3

  auto k = adelic_kernel_check(RationalNZ(2), RationalNZ(3));
  CHECK(k.failing == std::vector<Place>{Place::prime(2), Place::prime(3)});
  CHECK(k.even);
  CHECK(k.res20);
  CHECK(k.failing_set == BooleanElement::finite({1, 2}));

  auto one = adelic_kernel_check(RationalNZ(1), RationalNZ(1));
  CHECK(one.failing.empty());
  CHECK(one.res20);

  auto mm = adelic_kernel_check(RationalNZ(-1), RationalNZ(-1));
  CHECK(mm.failing == std::vector<Place>{inf, Place::prime(2)});
  CHECK(mm.res20);

  for (std::uint64_t i = 0; i < 40; ++i) CHECK(place_atom(atom_place(i)) == i);
  CHECK(atom_place(3) == Place::prime(5));
}

TEST_CASE("sweep over the +-30 grid, parallel and serial") {
  auto par = hilbert_sweep(30, true, 4);
  auto ser = hilbert_sweep(30, false);
  REQUIRE(par.size() == 3600);
  REQUIRE(ser.size() == 3600);
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].product_is_one);
    CHECK(par[i].a == ser[i].a);
    CHECK(par[i].b == ser[i].b);
    CHECK(par[i].infinite == ser[i].infinite);
    CHECK(par[i].finite == ser[i].finite);
  }
}

TEST_CASE("large primes fall back to the closed formula") {
  const RationalNZ a(1009), b(3);
  auto r = hilbert_report(a, b, Place::prime(1009));
  CHECK(r.oracle == 0);
  CHECK(r.modulus_exponent == -1);
  // 3 is a square mod 1009 iff 1009 is a square mod 3 (1009 = 1 mod 4).
  CHECK(r.closed == 1);
  CHECK(hilbert_closed(a, RationalNZ(11), Place::prime(1009)) == -1);  // 1009 = 8 mod 11
}
