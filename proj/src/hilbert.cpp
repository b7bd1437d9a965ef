#include "adelic/hilbert.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <set>

#include "adelic/boolean_qe.hpp"
#include "adelic/error.hpp"
#include "adelic/parse.hpp"
#include "adelic/zmod.hpp"

namespace adelic {

namespace {

using i128 = __int128;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in square class computation");
  return r;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  std::uint64_t m = n < 0 ? -static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  for (std::uint64_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      out.push_back(static_cast<std::int64_t>(p));
      while (m % p == 0) m /= p;
    }
  if (m > 1) out.push_back(static_cast<std::int64_t>(m));
  return out;
}

std::int64_t squarefree_int(std::int64_t n) {
  std::int64_t out = n < 0 ? -1 : 1;
  std::uint64_t m = n < 0 ? -static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    if (k % 2) out *= static_cast<std::int64_t>(p);
  }
  return checked_mul(out, static_cast<std::int64_t>(m));
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  i128 r = 1, x = ((b % m) + m) % m;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
  }
  return static_cast<std::int64_t>(r);
}

int legendre(std::int64_t u, std::int64_t p) { return powmod(u, (p - 1) / 2, p) == 1 ? 1 : -1; }

int closed_squarefree(std::int64_t A, std::int64_t B, Place v) {
  if (v.is_infinite()) return A < 0 && B < 0 ? -1 : 1;
  const std::int64_t p = v.p;
  const int alpha = valuation(A, p), beta = valuation(B, p);
  const std::int64_t u = alpha ? A / p : A, w = beta ? B / p : B;
  if (p != 2) {
    int s = (alpha * beta * ((p - 1) / 2)) % 2 ? -1 : 1;
    if (beta) s *= legendre(u, p);
    if (alpha) s *= legendre(w, p);
    return s;
  }
  auto mod8 = [](std::int64_t x) { return static_cast<int>(((x % 8) + 8) % 8); };
  auto eps = [&](std::int64_t x) { return mod8(x) % 4 == 3 ? 1 : 0; };
  auto omega = [&](std::int64_t x) { return mod8(x) == 3 || mod8(x) == 5 ? 1 : 0; };
  const int e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
  return e % 2 ? -1 : 1;
}

// v_p(x) for x mod P = p^cap, capped at cap (x = 0 gives cap).
int capped_valuation(i128 x, std::int64_t p, int cap) {
  if (x < 0) x = -x;
  int v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Depth-first search for a primitive vector with A x^2 + B y^2 - z^2 = 0
// mod p^j that Hensel's test lifts to a Q_p root: some coordinate whose
// partial derivative has valuation e with v(F) > 2e.
class SolutionSearch {
 public:
  SolutionSearch(std::int64_t A, std::int64_t B, std::int64_t p, int N) : p_(p), N_(N) {
    P_ = 1;
    for (int i = 0; i <= N; ++i) P_ *= p;
    A_ = ((A % P_) + P_) % P_;
    B_ = ((B % P_) + P_) % P_;
  }

  bool run() {
    // Projective normal forms: the first unit coordinate is 1, earlier
    // coordinates are divisible by p.
    for (int lead = 0; lead < 3; ++lead) {
      std::array<i128, 3> v{0, 0, 0};
      v[lead] = 1;
      if (descend(v, lead, lead + 1)) return true;
    }
    return false;
  }

 private:
  // Fill coordinates after `lead` with residues mod p, then search.
  bool descend(std::array<i128, 3>& v, int lead, int pos) {
    if (pos == 3) return search(v, lead, 1, p_);
    for (std::int64_t s = 0; s < p_; ++s) {
      v[pos] = s;
      if (descend(v, lead, pos + 1)) return true;
    }
    return false;
  }

  i128 F(const std::array<i128, 3>& v) const {
    i128 x2 = v[0] * v[0] % P_, y2 = v[1] * v[1] % P_, z2 = v[2] * v[2] % P_;
    return ((A_ * x2 + B_ * y2 - z2) % P_ + P_) % P_;
  }

  bool hensel(const std::array<i128, 3>& v) const {
    const int vf = capped_valuation(F(v), p_, N_ + 1);
    const std::array<i128, 3> d{2 * A_ * v[0] % P_, 2 * B_ * v[1] % P_, 2 * v[2] % P_};
    for (const i128 di : d) {
      const int e = capped_valuation(di, p_, N_ + 1);
      if (e <= N_ && vf > 2 * e) return true;
    }
    return false;
  }

  // v is defined mod pj = p^j and solves F = 0 there.
  bool search(std::array<i128, 3>& v, int lead, int j, i128 pj) {
    if (F(v) % pj != 0) return false;
    if (hensel(v)) return true;
    if (j == N_) return false;
    return lift(v, lead, j, pj, lead == 0 ? 1 : 0);
  }

  bool lift(std::array<i128, 3>& v, int lead, int j, i128 pj, int pos) {
    if (pos == 3) return search(v, lead, j + 1, pj * p_);
    if (pos == lead) return lift(v, lead, j, pj, pos + 1);
    const i128 base = v[pos];
    for (std::int64_t s = 0; s < p_; ++s) {
      v[pos] = base + s * pj;
      if (lift(v, lead, j, pj, pos + 1)) return true;
    }
    v[pos] = base;
    return false;
  }

  std::int64_t p_;
  int N_;
  i128 P_, A_, B_;
};

// Primes above this are left to the closed formula alone.
constexpr std::int64_t kOracleMaxPrime = 1000;

}  // namespace

Place Place::prime(std::int64_t p) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not a prime");
  return {p};
}

std::string Place::str() const { return is_infinite() ? "inf" : std::to_string(p); }

RationalNZ::RationalNZ(std::int64_t num, std::int64_t den) {
  if (num == 0) throw Error("rational argument must be nonzero");
  if (den == 0) throw Error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

RationalNZ RationalNZ::parse(const std::string& text) {
  auto to_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("bad rational: " + text);
    return v;
  };
  std::string_view sv(text);
  const auto slash = sv.find('/');
  if (slash == std::string_view::npos) return RationalNZ(to_int(sv));
  return RationalNZ(to_int(sv.substr(0, slash)), to_int(sv.substr(slash + 1)));
}

std::string RationalNZ::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t squarefree_part(const RationalNZ& a) {
  // n/d and n*d differ by the square d^2; n and d are coprime.
  return checked_mul(squarefree_int(a.num()), squarefree_int(a.den()));
}

int valuation(std::int64_t n, std::int64_t p) {
  if (n == 0) throw Error("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int hilbert_closed(const RationalNZ& a, const RationalNZ& b, Place v) {
  return closed_squarefree(squarefree_part(a), squarefree_part(b), v);
}

int hilbert_oracle(const RationalNZ& a, const RationalNZ& b, Place v, int* modulus_exponent) {
  const std::int64_t A = squarefree_part(a), B = squarefree_part(b);
  if (v.is_infinite()) {
    if (modulus_exponent) *modulus_exponent = 0;
    // A nonnegative value of A x^2 + B y^2 at a nonzero (x, y) is a square z^2.
    for (auto [x, y] : {std::pair{1, 0}, {0, 1}, {1, 1}})
      if (static_cast<i128>(A) * x * x + static_cast<i128>(B) * y * y >= 0) return 1;
    return -1;
  }
  if (v.p > kOracleMaxPrime)
    throw BudgetExceeded("solution search at p = " + std::to_string(v.p) + " is too large");
  const int N = 3 + 2 * std::max({valuation(A, v.p), valuation(B, v.p), 1});
  if (modulus_exponent) *modulus_exponent = N;
  return SolutionSearch(A, B, v.p, N).run() ? 1 : -1;
}

SymbolReport hilbert_report(const RationalNZ& a, const RationalNZ& b, Place v) {
  SymbolReport r;
  r.place = v;
  r.closed = hilbert_closed(a, b, v);
  try {
    r.oracle = hilbert_oracle(a, b, v, &r.modulus_exponent);
  } catch (const BudgetExceeded&) {
    r.oracle = 0;
    r.modulus_exponent = -1;
    return r;
  }
  if (r.closed != r.oracle)
    throw OracleMismatch("Hilbert symbol (" + a.str() + "," + b.str() + ")_" + v.str() + ": closed formula gives " +
                         std::to_string(r.closed) + ", solution search gives " + std::to_string(r.oracle));
  return r;
}

int hilbert_symbol(const RationalNZ& a, const RationalNZ& b, Place v) { return hilbert_report(a, b, v).closed; }

std::vector<Place> relevant_places(const RationalNZ& a, const RationalNZ& b) {
  std::vector<std::int64_t> ps{2};
  for (std::int64_t n : {a.num(), a.den(), b.num(), b.den()})
    for (std::int64_t p : prime_divisors(n)) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::vector<Place> out{Place::infinity()};
  for (std::int64_t p : ps) out.push_back(Place{p});
  return out;
}

ProductReport product_formula_check(const RationalNZ& a, const RationalNZ& b) {
  ProductReport r;
  for (Place v : relevant_places(a, b)) {
    r.symbols.push_back(hilbert_report(a, b, v));
    r.product *= r.symbols.back().closed;
  }
  if (r.product != 1) throw OracleMismatch("product formula fails for (" + a.str() + "," + b.str() + ")");
  return r;
}

BooleanElement::Nat place_atom(Place v) {
  if (v.is_infinite()) return 0;
  BooleanElement::Nat i = 0;
  for (std::int64_t q = 2; q <= v.p; ++q)
    if (is_prime(q)) ++i;
  return i;
}

Place atom_place(BooleanElement::Nat i) {
  if (i == 0) return Place::infinity();
  std::int64_t q = 1;
  while (i > 0)
    if (is_prime(++q)) --i;
  return Place{q};
}

KernelReport adelic_kernel_check(const RationalNZ& a, const RationalNZ& b) {
  KernelReport r;
  std::set<BooleanElement::Nat> atoms;
  for (const auto& s : product_formula_check(a, b).symbols)
    if (s.closed == -1) {
      r.failing.push_back(s.place);
      atoms.insert(place_atom(s.place));
    }
  r.failing_set = BooleanElement::finite(atoms);
  r.even = r.failing.size() % 2 == 0;
  static const Formula res20 = parse_formula("Res[2,0](x)", boolean_signature());
  r.res20 = eval_quantifier_free(res20, {{Variable{"x", "bool"}, r.failing_set}});
  if (!r.even) throw OracleMismatch("odd number of failing places for (" + a.str() + "," + b.str() + ")");
  if (r.res20 != r.even) throw OracleMismatch("Res(2,0) disagrees with the parity of the failing places");
  return r;
}

}  // namespace adelic
