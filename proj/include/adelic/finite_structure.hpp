// Finite interpretations of a signature.
//
// Carriers are 0-based integer ranges, one per sort. Operations are stored
// as dense tables indexed in mixed radix over the argument sorts, except for
// Z/n, which is computed arithmetically so large moduli stay cheap.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adelic/formula.hpp"

namespace adelic {

using Value = std::int64_t;

// Interpretation of an indexed predicate family such as C[j].
using IndexedPredicate = std::function<bool(const std::vector<std::int64_t>& indices, const Value* args)>;

class FiniteStructure {
 public:
  FiniteStructure(Signature sig, std::vector<std::size_t> sort_sizes);

  static FiniteStructure ring_mod(std::int64_t n);
  // Commutative unital ring from explicit tables; the ring axioms are
  // verified exhaustively when the carrier has at most `verify_limit` elements.
  static FiniteStructure ring_from_tables(std::size_t n, std::vector<std::int32_t> add, std::vector<std::int32_t> mul,
                                          Value zero, Value one, std::size_t verify_limit = 256);
  // The powerset algebra of an s-element index set with its natural
  // interpretation of BOOLEAN_ENRICHED (Fin always true, C[j] counts, Res[n,r]
  // tests the count mod n). Elements are bit masks.
  static FiniteStructure powerset_algebra(unsigned s);

  void set_function(const std::string& name, std::vector<std::int32_t> table);
  void set_constant(const std::string& name, Value v);
  void set_predicate(const std::string& name, std::vector<char> table);
  void set_indexed_predicate(const std::string& name, IndexedPredicate p);

  const Signature& signature() const noexcept { return *sig_; }
  std::size_t size() const;  // single-sorted carrier size
  std::size_t size(const std::string& sort) const;
  std::size_t sort_index(const std::string& sort) const;

  // n for Z/n, 0 otherwise.
  std::int64_t modulus() const noexcept { return modulus_; }
  bool is_ring() const noexcept { return ring_; }
  // 0 unless this is a powerset algebra built by powerset_algebra().
  unsigned powerset_width() const noexcept { return powerset_width_; }
  bool ring_axioms_verified() const noexcept { return ring_verified_; }

  Value apply(const std::string& fn, const std::vector<Value>& args) const;
  Value constant(const std::string& name) const;
  bool holds(const std::string& pred, const std::vector<std::int64_t>& indices, const std::vector<Value>& args) const;

  // Ring shortcuts; valid when is_ring().
  Value add(Value a, Value b) const;
  Value mul(Value a, Value b) const;
  Value neg(Value a) const;
  Value zero() const;
  Value one() const;
  Value numeral(std::int64_t k) const;  // k * 1

  std::string label;
  // When this structure was carved out of a parent (e.g. a stalk eR), the
  // parent element that each carrier element stands for.
  std::vector<Value> embedding;

  // Dense tables for a ring (n*n add/mul, n neg). Z/n materializes them.
  struct RingTables {
    std::size_t n;
    std::vector<std::int32_t> add, mul, neg;
    Value zero, one;
  };
  RingTables ring_tables() const;

 private:
  std::size_t table_offset(const FunctionDecl& d, const std::vector<Value>& args) const;
  void verify_ring();

  std::shared_ptr<const Signature> sig_;
  std::vector<std::size_t> sizes_;
  std::map<std::string, std::vector<std::int32_t>> functions_;
  std::map<std::string, Value> constants_;
  std::map<std::string, std::vector<char>> predicates_;
  std::map<std::string, IndexedPredicate> indexed_;
  std::int64_t modulus_ = 0;
  bool ring_ = false;
  bool ring_verified_ = false;
  unsigned powerset_width_ = 0;
};

// Ring isomorphism test. Explicit bijection search (with unit-preserving
// backtracking) for carriers of at most 12 elements; above that only the
// invariants (size, characteristic, idempotent count, unit count,
// nilpotent count) are compared.
struct IsoResult {
  bool isomorphic = false;
  bool by_bijection = false;
  std::vector<Value> map;  // a -> map[a] when by_bijection
};
IsoResult ring_isomorphic(const FiniteStructure& a, const FiniteStructure& b);

// Checks that `map` (carrier of a -> carrier of b) is a unital ring isomorphism.
bool is_ring_isomorphism(const FiniteStructure& a, const FiniteStructure& b, const std::vector<Value>& map);

}  // namespace adelic
