#include "adelic/kernels.hpp"

#include <omp.h>

#include <string>

#include "adelic/error.hpp"
#include "adelic/fv.hpp"
#include "adelic/hilbert.hpp"

namespace adelic {

namespace {

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

// Runs body(i) for i < n, serially or with a dynamic OpenMP schedule;
// exceptions from workers are rethrown (the first by index) afterwards.
template <class Body>
void for_each_index(std::size_t n, bool parallel, int jobs, Body body) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::string> errors(n);
  std::vector<char> mismatch(n, 0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(jobs))
  for (std::size_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (const OracleMismatch& e) {
      errors[i] = e.what();
      mismatch[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) {
      if (mismatch[i]) throw OracleMismatch(errors[i]);
      throw Error(errors[i]);
    }
}

}  // namespace

std::vector<ProductVerdict> batch_product_eval(const Formula& sentence, const std::vector<ProductStructure>& products,
                                               bool parallel, int jobs) {
  std::vector<ProductVerdict> out(products.size());
  // Translations are shared; build them up front so workers only read.
  std::vector<FvTranslation> tr;
  tr.reserve(products.size());
  for (const auto& p : products) {
    if (p.factors.empty()) throw Error("product without factors");
    tr.push_back(translate_cached(sentence, p.factors[0].signature()));
  }
  for_each_index(products.size(), parallel, jobs, [&](std::size_t i) {
    out[i].direct = eval_direct(products[i], sentence);
    out[i].translated = evaluate_translation(tr[i], products[i]);
  });
  return out;
}

std::vector<HilbertCell> hilbert_sweep(std::int64_t n, bool parallel, int jobs) {
  if (n < 1) throw Error("grid radius must be positive");
  std::vector<std::int64_t> values;
  for (std::int64_t a = -n; a <= n; ++a)
    if (a != 0) values.push_back(a);
  const std::size_t w = values.size();
  std::vector<HilbertCell> out(w * w);
  for_each_index(out.size(), parallel, jobs, [&](std::size_t i) {
    HilbertCell& c = out[i];
    c.a = values[i / w];
    c.b = values[i % w];
    const RationalNZ a(c.a), b(c.b);
    int product = 1;
    for (Place v : relevant_places(a, b)) {
      const int s = hilbert_symbol(a, b, v);
      product *= s;
      if (v.is_infinite())
        c.infinite = s;
      else
        c.finite.emplace_back(v.p, s);
    }
    c.product_is_one = product == 1;
  });
  return out;
}

}  // namespace adelic
