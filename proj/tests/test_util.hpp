// Helpers shared by the unit tests. Everything here is deliberately
// independent of the library code it is used to check.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "adelic/finite_structure.hpp"

namespace testutil {

// Z/a x Z/b from hand-written tables; element i stands for (i / b, i % b).
inline adelic::FiniteStructure pair_ring(int a, int b) {
  const int n = a * b;
  std::vector<std::int32_t> add(n * n), mul(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int i1 = i / b, i2 = i % b, j1 = j / b, j2 = j % b;
      add[i * n + j] = ((i1 + j1) % a) * b + (i2 + j2) % b;
      mul[i * n + j] = ((i1 * j1) % a) * b + (i2 * j2) % b;
    }
  auto r = adelic::FiniteStructure::ring_from_tables(n, add, mul, 0, (1 % a) * b + 1 % b);
  r.label = "Z/" + std::to_string(a) + "xZ/" + std::to_string(b);
  return r;
}

// Trial-division factorization into (p, k) pairs.
inline std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) out.push_back({p, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

}  // namespace testutil
