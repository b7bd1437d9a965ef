// Finite-index products of rings, Boolean values and the support/idempotent
// correspondence.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adelic/evaluate.hpp"
#include "adelic/finite_structure.hpp"
#include "adelic/formula.hpp"

namespace adelic {

// Subsets of the index set as bit masks; index i is bit i.
using IndexSet = std::uint64_t;
// An element of a product: one component per factor.
using Tuple = std::vector<Value>;
using TupleAssignment = std::map<Variable, Tuple>;

struct ProductStructure {
  std::vector<std::string> labels;
  std::vector<FiniteStructure> factors;
  // Recorded only; with finitely many indices every tuple is in the
  // restricted product.
  std::optional<Formula> restriction;

  ProductStructure() = default;
  explicit ProductStructure(std::vector<FiniteStructure> fs, std::vector<std::string> names = {});

  std::size_t index_count() const { return factors.size(); }
  IndexSet full() const { return index_count() == 64 ? ~IndexSet{0} : (IndexSet{1} << index_count()) - 1; }
  std::size_t size() const;  // product of factor sizes (saturating)
  std::string describe() const;

  Tuple add(const Tuple& a, const Tuple& b) const;
  Tuple mul(const Tuple& a, const Tuple& b) const;
  Tuple zero() const;
  Tuple one() const;
  // Tuple at position `rank` in mixed-radix order, factor 0 varying fastest.
  Tuple element(std::size_t rank) const;
};

// [[f(asg)]] = {i : M_i |= f(asg(i))}.
IndexSet boolean_value(const ProductStructure& p, const Formula& f, const TupleAssignment& asg = {});

// supp(a) = [[a != 0]].
IndexSet support(const ProductStructure& p, const Tuple& a);
// The 0/1 tuple that is 1 exactly on X.
Tuple idempotent_of_set(const ProductStructure& p, IndexSet x);

// Brute-force truth of a sentence in the full product.
bool eval_direct(const ProductStructure& p, const Formula& sentence, long double budget = kDefaultEvalBudget);
long double direct_cost(const ProductStructure& p, const Formula& f);

// The product as a single table ring, elements in mixed-radix order.
FiniteStructure product_ring(const ProductStructure& p, std::size_t max_size = 4096);
std::size_t tuple_rank(const ProductStructure& p, const Tuple& a);

struct StalkAtAtom {
  const FiniteStructure* factor = nullptr;
  Value atom = 0;         // e_{i} in product_ring(p)
  bool verified = false;  // e*a -> a(i) is a ring isomorphism eR -> M_i
};
StalkAtAtom stalk_at_atom(const ProductStructure& p, std::size_t i);

// Structure specs: "zmod:N". A product spec is a comma or whitespace
// separated list of those, or a file with one "[label =] spec" per line.
FiniteStructure parse_structure_spec(const std::string& spec);
ProductStructure parse_product_spec(const std::string& text);
ProductStructure read_product_file(const std::string& path);
// Structure file: either "ring mod N", or
//   ring tables N
//   zero Z
//   one U
//   add    followed by N rows of N entries
//   mul    followed by N rows of N entries
// '#' starts a comment. A bare "zmod:N" spec is accepted too.
FiniteStructure parse_structure_text(const std::string& text);
FiniteStructure read_structure_file(const std::string& path);
// "p=2,k=3" for prime powers, "Z/n" otherwise.
std::string zmod_label(std::int64_t n);

}  // namespace adelic
