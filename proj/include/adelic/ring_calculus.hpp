// Idempotents, stalks and regularity in finite commutative rings, and the
// finite-instance check of the restricted-product ring axioms.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adelic/evaluate.hpp"
#include "adelic/finite_structure.hpp"
#include "adelic/formula.hpp"

namespace adelic {

// The Boolean algebra of idempotents: e /\ f = ef, e \/ f = e + f - ef,
// ~e = 1 - e, e <= f iff ef = e. Atoms are the minimal nonzero idempotents,
// so a connected ring has the single atom 1.
struct IdempotentLattice {
  const FiniteStructure* ring = nullptr;
  std::vector<Value> idempotents;  // ascending
  std::vector<Value> atoms;        // ascending

  Value meet(Value e, Value f) const;
  Value join(Value e, Value f) const;
  Value complement(Value e) const;
  bool le(Value e, Value f) const;
  bool is_idempotent(Value e) const;
  std::vector<Value> atoms_below(Value e) const;
  Value join_all(const std::vector<Value>& es) const;
  bool connected() const { return idempotents.size() == 2; }
};

IdempotentLattice idempotent_lattice(const FiniteStructure& ring);

// eR with unit e. `embedding[i]` is the element of R that carrier element i
// stands for; `project` sends r in R to the carrier index of e*r.
struct Stalk {
  FiniteStructure ring;
  Value e;
  std::vector<Value> index_of;  // R element -> stalk index (of e*r)
  Value project(Value r) const { return index_of[static_cast<std::size_t>(r)]; }
};

Stalk stalk(const FiniteStructure& ring, Value e);

// a is von Neumann regular: there is x with a = a*a*x.
bool vnr_by_equation(const FiniteStructure& ring, Value a);
// The principal ideal aR equals eR for some idempotent e.
bool vnr_by_idempotent_ideal(const FiniteStructure& ring, Value a);
// Both characterizations; throws OracleMismatch if they disagree.
bool is_von_neumann_regular(const FiniteStructure& ring, Value a);

// The ring formula defining finite-support idempotents, with x free:
//   x = x*x /\ forall y. phi(y*x),
//   phi(w) := exists e y z. (e*e = e /\ w = e*y /\ e = w*z)
const Formula& fin_defining_formula();
// Evaluates fin_defining_formula() verbatim by brute force.
bool fin_formula_holds(const FiniteStructure& ring, Value x);
// The same formula with e ranging over lat.idempotents only (the first
// conjunct of phi forces it), and y, z found by scanning. O(n^2 |idempotents|)
// instead of O(n^4), for rings where the verbatim evaluation is too slow.
bool fin_formula_holds(const FiniteStructure& ring, const IdempotentLattice& lat, Value x);

// Stalks at the atoms, in the order of lat.atoms.
std::vector<Stalk> atom_stalks(const FiniteStructure& ring, const IdempotentLattice& lat);

// [[theta(f)]] computed as the join of the atoms e with R_e |= theta(f_e).
Value boolean_value_by_atoms(const IdempotentLattice& lat, const std::vector<Stalk>& stalks, const Formula& theta,
                             const std::vector<Variable>& vars, const std::vector<Value>& values);

// Same value through the relativized formula evaluated in R itself.
Value boolean_value_by_relativization(const FiniteStructure& ring, const IdempotentLattice& lat,
                                      const Formula& theta, const std::vector<Variable>& vars,
                                      const std::vector<Value>& values);

struct AxiomResult {
  std::string name;
  enum class Status { Pass, Fail, NotApplicable } status = Status::Pass;
  std::string detail;  // witnesses or the counterexample
};

struct AxiomReport {
  std::string ring_label;
  std::size_t idempotent_count = 0;
  std::vector<Value> atoms;
  bool connected = false;
  std::vector<AxiomResult> results;
  bool all_pass() const;
};

// Checks Axioms 1, 2, 3, 5 and the finite content of Axiom 4 for the
// restricting formula phi (one free variable). Axiom 2 and 4 range over a
// built-in corpus of ring formulas; Axiom 3 over a corpus of atomic ones.
AxiomReport check_restricted_product_axioms(const FiniteStructure& ring, const Formula& phi);

}  // namespace adelic
