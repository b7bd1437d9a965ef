// Hilbert symbols (a,b)_v for rational a, b at a prime or the real place.
//
// (a,b)_v = 1 iff a x^2 + b y^2 = z^2 has a nonzero solution over Q_v.
// Every symbol is computed twice: by the closed formulas (valuations,
// Legendre symbols, and the eps/omega invariants at 2) and by a search for a
// primitive solution modulo p^N that passes Hensel's lifting test. The two
// must agree; a disagreement throws OracleMismatch.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adelic/boolean_element.hpp"

namespace adelic {

struct Place {
  std::int64_t p = 0;  // 0 is the real place

  static Place infinity() { return {0}; }
  static Place prime(std::int64_t p);  // throws unless p is prime
  bool is_infinite() const { return p == 0; }
  std::string str() const;
  friend auto operator<=>(const Place&, const Place&) = default;
};

// Nonzero rational in lowest terms with positive denominator.
class RationalNZ {
 public:
  RationalNZ(std::int64_t num, std::int64_t den = 1);
  static RationalNZ parse(const std::string& text);  // "a" or "a/b"

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  int sign() const { return num_ < 0 ? -1 : 1; }
  std::string str() const;
  friend bool operator==(const RationalNZ&, const RationalNZ&) = default;

 private:
  std::int64_t num_, den_;
};

// Square class representative: the squarefree integer a' with a / a' a
// rational square.
std::int64_t squarefree_part(const RationalNZ& a);
int valuation(std::int64_t n, std::int64_t p);

struct SymbolReport {
  Place place;
  int closed = 1;
  int oracle = 1;            // 0 when the search was skipped (p too large)
  int modulus_exponent = 0;  // N of the p^N search; 0 at infinity, -1 if skipped
};

int hilbert_closed(const RationalNZ& a, const RationalNZ& b, Place v);
int hilbert_oracle(const RationalNZ& a, const RationalNZ& b, Place v, int* modulus_exponent = nullptr);
SymbolReport hilbert_report(const RationalNZ& a, const RationalNZ& b, Place v);
int hilbert_symbol(const RationalNZ& a, const RationalNZ& b, Place v);

// Places where a symbol can differ from 1: infinity, 2 and the primes of
// the numerators and denominators. Everywhere else both arguments are
// p-units at odd p and the symbol is 1.
std::vector<Place> relevant_places(const RationalNZ& a, const RationalNZ& b);

struct ProductReport {
  std::vector<SymbolReport> symbols;  // at relevant_places
  int product = 1;
};

// Throws OracleMismatch if the product is not 1.
ProductReport product_formula_check(const RationalNZ& a, const RationalNZ& b);

// Places are numbered as atoms of the Boolean algebra: infinity is 0, the
// i-th prime (2 is the first) is i.
BooleanElement::Nat place_atom(Place v);
Place atom_place(BooleanElement::Nat i);

struct KernelReport {
  std::vector<Place> failing;  // (a,b)_v = -1
  BooleanElement failing_set = BooleanElement::empty();
  bool even = true;
  bool res20 = true;  // Res(2,0) of failing_set, evaluated by the Boolean engine
};

// Throws OracleMismatch on odd parity or if Res(2,0) disagrees with the count.
KernelReport adelic_kernel_check(const RationalNZ& a, const RationalNZ& b);

}  // namespace adelic
