// Eventually periodic subsets of the naturals: a computable model of the
// theory of infinite atomic Boolean algebras with Fin, C_j and Res(n,r)
// interpreted as true finiteness, "at least j elements" and "finite with
// cardinality = r mod n".

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace adelic {

class BooleanElement {
 public:
  using Nat = std::uint64_t;

  // Denotes {k : residues[k mod n]} u added \ removed. Any input is accepted
  // and brought to canonical form: minimal period, then added disjoint from
  // the periodic part and removed inside it.
  static BooleanElement make(Nat n, std::vector<bool> residues, std::set<Nat> added = {}, std::set<Nat> removed = {});
  static BooleanElement empty();
  static BooleanElement all();
  static BooleanElement finite(std::set<Nat> elements);
  static BooleanElement residue_class(Nat n, Nat r);

  Nat modulus() const { return n_; }
  const std::vector<bool>& residues() const { return residues_; }
  const std::set<Nat>& added() const { return added_; }
  const std::set<Nat>& removed() const { return removed_; }

  bool contains(Nat k) const;
  bool is_finite() const;
  // Cardinality; nullopt when infinite.
  std::optional<Nat> count() const;
  // Elements below this bound may be exceptions; above it the set is periodic.
  Nat exception_bound() const;

  BooleanElement meet(const BooleanElement& o) const;
  BooleanElement join(const BooleanElement& o) const;
  BooleanElement complement() const;
  bool le(const BooleanElement& o) const;

  // The first j elements (all of them when fewer).
  BooleanElement first(Nat j) const;
  // Every other element in increasing order, starting with the least.
  BooleanElement alternate() const;

  std::string str() const;
  bool operator==(const BooleanElement&) const = default;

 private:
  BooleanElement() = default;
  Nat n_ = 1;
  std::vector<bool> residues_{false};
  std::set<Nat> added_, removed_;
};

}  // namespace adelic
