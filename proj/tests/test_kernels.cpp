#include "adelic/kernels.hpp"
#include "adelic/parse.hpp"
#include "adelic/random_formulas.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adelic;

TEST_CASE("batch_product_eval: parallel equals serial, direct equals translated") {
  std::vector<ProductStructure> products;
  for (int a = 2; a <= 5; ++a)
    for (int b = 2; b <= 4; ++b)
      products.push_back(ProductStructure({FiniteStructure::ring_mod(a), FiniteStructure::ring_mod(b)}));
  products.push_back(ProductStructure({testutil::pair_ring(2, 2), FiniteStructure::ring_mod(3)}));

  RingFormulaGen gen(5150, {.max_depth = 2, .max_connectives = 2});
  for (int i = 0; i < 20; ++i) {
    Formula s = gen.sentence();
    CAPTURE(render(s));
    auto ser = batch_product_eval(s, products, false);
    auto par = batch_product_eval(s, products, true, 3);
    REQUIRE(ser.size() == products.size());
    for (std::size_t j = 0; j < ser.size(); ++j) {
      CHECK(ser[j].direct == ser[j].translated);
      CHECK(ser[j].direct == par[j].direct);
      CHECK(ser[j].translated == par[j].translated);
    }
  }
}

TEST_CASE("batch_product_eval: idempotent sentence on Z/2 x Z/2") {
  Formula s = parse_formula("exists x. x*x = x /\\ x != 0 /\\ x != 1", ring_signature());
  auto r = batch_product_eval(s, {ProductStructure({FiniteStructure::ring_mod(2), FiniteStructure::ring_mod(2)}),
                                  ProductStructure({FiniteStructure::ring_mod(4)})},
                              true);
  CHECK(r[0].direct);
  CHECK(r[0].translated);
  CHECK(!r[1].direct);
  CHECK(!r[1].translated);
}
