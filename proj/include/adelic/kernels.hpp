// Data-parallel kernels. Each takes `parallel`; false runs the plain serial
// loop, which is the reference the parallel run must reproduce exactly.

#pragma once

#include <cstdint>
#include <vector>

#include "adelic/formula.hpp"
#include "adelic/product.hpp"
#include "adelic/zmod.hpp"

namespace adelic {

// Direct truth in Z/m for 2 <= m <= max_m, plus the CRT route for
// composite m.
std::vector<ModulusResult> zmod_sweep(const Formula& sentence, std::int64_t max_m, const ZmodOptions& opts,
                                      bool parallel);

// Truth of one sentence in each product, by brute force and by the FV
// translation.
struct ProductVerdict {
  bool direct = false;
  bool translated = false;
};
std::vector<ProductVerdict> batch_product_eval(const Formula& sentence, const std::vector<ProductStructure>& products,
                                               bool parallel, int jobs = 0);

// Hilbert symbols on the grid a, b in {-n..-1, 1..n}: the value at every
// place from 2 up to the largest prime dividing 2ab, and at infinity.
struct HilbertCell {
  std::int64_t a = 0, b = 0;
  int infinite = 1;
  std::vector<std::pair<std::int64_t, int>> finite;  // (p, symbol) for p | 2ab
  bool product_is_one = false;
};
std::vector<HilbertCell> hilbert_sweep(std::int64_t n, bool parallel, int jobs = 0);

}  // namespace adelic
