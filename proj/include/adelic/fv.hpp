// Feferman-Vaught translation: a formula over the factor language becomes
// local formulas psi_1..psi_m plus a Boolean-sort formula Theta(X_1..X_m)
// such that, in any (restricted) product,
//
//   prod |= f(a)  iff  P(I)^+ |= Theta([[psi_1(a)]], ..., [[psi_m(a)]]).
//
// Inductive clauses:
//   atom g        psi = (g),            Theta = (X_1 = 1)
//   ~g            psi of g,             ~Theta_g
//   g /\ h, g \/ h  psi_g ++ psi_h,     Theta_g /\ Theta_h (resp. \/), shifted
//   exists x. g   for every S subset of 1..m_g the minterm
//                   chi_S = /\_{j in S} psi_j /\ /\_{j not in S} ~psi_j,
//                 psi_S = exists x. chi_S, and
//                   Theta = exists Z_1..Z_m. Theta_g(Z)
//                           /\ /\_S (minterm_S(Z) <= Y_S)
//                 since every index lies in exactly one minterm cell of Z,
//                 and Y_S says a witness with that local pattern exists.
//   restricted    psi'_S = exists x. (chi_S /\ Phi(x)) is added and Theta
//                 gets  Fin(\/_S (minterm_S(Z) /\ ~Y'_S)): the witness may
//                 violate Phi only on finitely many indices.
// forall is ~exists~. Constant subformulas are folded first, so a formula
// that simplifies to true/false keeps a single local formula with a Theta
// that ignores it.
//
// The number of local formulas is a tower in the quantifier depth, so the
// exists-level locals are kept lazy: a local formula is identified by its
// minterm pattern and only materialized on request. Over a finite index set
// the translation is evaluated through local types: the type of a tuple in
// a factor records which patterns are realized below each quantifier, which
// is exactly the data [[psi_S]] needs.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adelic/formula.hpp"
#include "adelic/product.hpp"

namespace adelic {

struct FvNode;

struct FvTranslation {
  Formula input;                // after constant folding, forall as ~exists~
  std::vector<Variable> free;   // free variables of the input, sorted
  std::optional<Formula> restriction;
  std::shared_ptr<const FvNode> root;

  // log2 of the number m of local formulas (m itself can be astronomical).
  double log2_local_count() const;
  // m when it fits in 64 bits.
  std::optional<std::uint64_t> local_count() const;
  std::size_t quantifier_depth() const;

  // psi_1..psi_m; throws BudgetExceeded when m > limit.
  std::vector<Formula> local_formulas(std::uint64_t limit = 4096) const;
  // Theta over X1..Xm in the enriched Boolean signature; same limit on m
  // and on the 2^m_child minterm conjuncts of each quantifier.
  Formula boolean_formula(std::uint64_t limit = 256) const;
  // Names of Theta's free variables, X1..Xm.
  std::vector<Variable> boolean_variables(std::uint64_t limit = 4096) const;
};

// `restriction` is a formula with exactly one free variable.
FvTranslation translate(const Formula& f, const Signature& sig, const std::optional<Formula>& restriction = {});
// Same, memoized by formula (and restriction) in a process-wide table.
FvTranslation translate_cached(const Formula& f, const Signature& sig,
                               const std::optional<Formula>& restriction = {});

// Truth of Theta on the Boolean values of the local formulas, computed
// through local types (no materialization).
bool evaluate_translation(const FvTranslation& t, const ProductStructure& p, const TupleAssignment& asg = {});

// The literal route: materialize psi_j and Theta, take [[psi_j]] by brute
// force per factor and evaluate Theta in the powerset algebra of the index
// set. Only for small translations.
bool evaluate_translation_materialized(const FvTranslation& t, const ProductStructure& p,
                                       const TupleAssignment& asg = {});

// Finite index sets {1..s}: the product satisfies the sentence iff the
// sequence ([[psi_1]], .., [[psi_t]]) is one of `accepted`.
struct FiniteIndexTranslation {
  std::size_t s = 0;
  std::vector<Formula> tuple;
  std::vector<std::vector<IndexSet>> accepted;
};
FiniteIndexTranslation translate_finite_index(const Formula& sentence, std::size_t s,
                                              std::uint64_t max_assignments = 1u << 22);

// Rectangle B_1 x .. x B_s; B_i lists k-tuples of factor i.
struct Rectangle {
  std::vector<std::vector<std::vector<Value>>> sides;
  std::size_t cardinality() const;
};
// Disjoint rectangles whose union is the set of k-tuples of product
// elements satisfying f, with `vars` the k coordinates.
std::vector<Rectangle> rectangles(const Formula& f, const std::vector<Variable>& vars,
                                  const std::vector<FiniteStructure>& factors);

}  // namespace adelic
