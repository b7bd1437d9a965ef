// Syntactic normal forms and the idempotent relativization.

#pragma once

#include <string>

#include "adelic/formula.hpp"

namespace adelic {

// Negation normal form: negations only directly above atoms.
Formula to_nnf(const Formula& f);

// Renames bound variables so that no two binders share a name and no binder
// reuses the name of a free variable. Free variables are untouched.
Formula rename_apart(const Formula& f);

// Prenex form of rename_apart(f); the matrix is left as produced (not NNF).
Formula to_prenex(const Formula& f);

struct Relativized {
  Formula formula;
  Variable y;
  bool renamed = false;  // true when the preferred name "y" was taken
};

// For a ring formula f(x_1..x_n), builds Phi(y, x_1..x_n) with
//   eR |= f(e a_1, ..., e a_n)  iff  R |= Phi(e, a_1, ..., a_n)
// for every idempotent e: bound variables range over z = y z, the unit
// 1 becomes y, numerals k become k*y, and free x_i become y*x_i.
Relativized relativize_to_idempotent(const Formula& f, const std::string& preferred = "y");

}  // namespace adelic
