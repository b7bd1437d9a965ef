// Quantifier elimination and decision for infinite atomic Boolean algebras
// enriched with Fin, C_j and Res(n,r).
//
// Engine. With free variables v_1..v_k every term is a union of the 2^k
// minterm cells, and every enriched atom is a condition on the cardinalities
// of cells: t = 0 and t <= s ask certain cells to be empty, Fin asks them to
// be finite, C_j bounds a sum from below, Res(n,r) fixes a sum mod n. Cell
// cardinalities are abstracted to the domain
//
//   D(T, q) = {0, .., T-1} u {(>= T, r) : r mod q} u {infinite}
//
// with T at least the largest C index and q the lcm of the Res moduli, so
// a quantifier-free formula is a set of cell profiles, kept as a reduced
// multi-valued decision diagram with one level per cell. exists x splits
// every cell c into c /\ x and c /\ ~x; a split of abstract values (l, r)
// under a parent value is feasible by exact arithmetic:
//
//   infinite parent    one side infinite (finite sets form an ideal and
//                      every infinite set splits into two infinite ones)
//   finite parent N    both sides finite and N in {a + b}, which for
//                      thresholds T is decided by the class of N at
//                      threshold 2T + 2q - 2.
//
// Eliminating a quantifier therefore raises the threshold to 2T + 2q - 2.
// The result is turned back into a disjunction over cell constraints.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adelic/boolean_element.hpp"
#include "adelic/formula.hpp"

namespace adelic {

using BoolAssignment = std::map<Variable, BooleanElement>;

// Per-cell cardinality information.
struct CellSpec {
  enum class Kind { Exact, AtLeast, Infinite } kind = Kind::Exact;
  std::uint64_t k = 0;
  std::uint64_t q = 1, r = 0;  // residue constraint for AtLeast; q = 1 means none

  static CellSpec exact(std::uint64_t k) { return {Kind::Exact, k, 1, 0}; }
  static CellSpec at_least(std::uint64_t k, std::uint64_t q = 1, std::uint64_t r = 0) {
    return {Kind::AtLeast, k, q, q ? r % q : 0};
  }
  static CellSpec infinite() { return {Kind::Infinite, 0, 1, 0}; }
  bool admits(std::uint64_t n) const;  // finite cardinality n satisfies the spec
  std::string str() const;
};

// Is there a set matching `parent` split into disjoint parts matching
// `left` and `right`?
bool split_feasible(const CellSpec& parent, const CellSpec& left, const CellSpec& right);

// Direct semantics in the eventually periodic model.
BooleanElement eval_term(const Term& t, const BoolAssignment& asg);
bool eval_enriched_atom(const Formula& atom, const BoolAssignment& asg);
bool eval_quantifier_free(const Formula& f, const BoolAssignment& asg);

struct QeStats {
  std::uint64_t threshold = 0;  // T of the result
  std::uint64_t modulus = 1;    // q
  std::size_t mdd_nodes = 0;    // nodes of the result diagram
};

// Quantifier-free equivalent in the same free variables. At most 6
// variables may be in scope at once.
Formula eliminate_quantifiers(const Formula& f, QeStats* stats = nullptr);
// Truth of a sentence in every model.
bool decide_sentence(const Formula& f);
// Both formulas quantifier-free: equivalent in every model?
bool qf_equivalent(const Formula& a, const Formula& b);

// Witness search over cell cardinality profiles. Quantifiers range over
// splits of each cell: finite cells into every pair of sizes, infinite
// cells into (inf, inf), (j, inf), (inf, j) with j <= fuel.
struct WitnessResult {
  bool value = false;
  bool sound_only = false;  // fuel below the sufficiency bound
  std::uint64_t fuel = 0;
  std::uint64_t sufficient_fuel = 0;
};
WitnessResult bounded_witness_evaluate(const Formula& f, const BoolAssignment& asg, std::uint64_t fuel);
// Fuel at which the witness search is complete for f.
std::uint64_t sufficient_fuel(const Formula& f);

// For a true sentence exists x. phi: an element x of the eventually
// periodic model with phi(x) (checked by the witness search); for a false
// sentence forall x. phi: a counterexample. nullopt otherwise.
std::optional<BooleanElement> sentence_witness(const Formula& f);

// Instances of the axioms of T^fin and T^fin,res with parameters up to
// max_n, as named sentences.
std::vector<std::pair<std::string, Formula>> boolean_axioms(int max_n);

}  // namespace adelic
