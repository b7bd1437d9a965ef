#pragma once

#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "adelic/evaluate.hpp"
#include "adelic/fv.hpp"

namespace adelic {

struct FvNode {
  enum class Kind { Const, Atom, Not, And, Or, Exists } kind = Kind::Const;
  bool value = false;              // Const
  Formula formula;                 // the subformula translated here
  std::vector<Variable> free;      // its free variables, sorted
  std::shared_ptr<const FvNode> a, b;
  Variable bound;                  // Exists
  bool restricted = false;         // Exists under a restriction
  double log2m = 0;                // log2 of the number of local formulas
  std::uint64_t m = 0;             // that number, 0 when it overflows
  std::size_t depth = 0;           // quantifier depth
};

// Local types of tuples in one factor. Type ids are per node: 0/1 for
// atoms, interned pairs for connectives, interned realized-child-type sets
// for quantifiers.
class FactorTyper {
 public:
  FactorTyper(const FiniteStructure& m, const std::optional<Formula>& restriction);
  FactorTyper(FactorTyper&&) noexcept = default;

  int type(const FvNode& n, std::map<Variable, Value>& env);
  const std::pair<int, int>& parts(const FvNode& n, int id) const;
  const std::vector<int>& realized(const FvNode& n, int id) const;
  const FiniteStructure& structure() const { return *m_; }
  // Largest realized-type set seen at a quantifier node.
  std::size_t max_realized(const FvNode& n) const;

 private:
  struct NodeData {
    std::unique_ptr<PreparedFormula> atom;
    std::unique_ptr<PreparedFormula> phi;
    std::map<std::vector<Value>, int> memo;
    std::map<std::vector<int>, int> intern;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::vector<int>> sets;
  };
  NodeData& data(const FvNode& n);

  const FiniteStructure* m_;
  std::optional<Formula> restriction_;
  std::unordered_map<const FvNode*, NodeData> data_;
};

// Theta evaluated on per-factor types (one id per factor).
class TypeEvaluator {
 public:
  explicit TypeEvaluator(std::vector<FactorTyper>& typers) {
    for (auto& t : typers) typers_.push_back(&t);
  }
  // Index i uses typers[i]; the same typer may serve several indices.
  explicit TypeEvaluator(std::vector<FactorTyper*> typers) : typers_(std::move(typers)) {}
  bool eval(const FvNode& n, const std::vector<int>& types);

 private:
  std::vector<FactorTyper*> typers_;
  std::unordered_map<const FvNode*, std::map<std::vector<int>, bool>> memo_;
};

}  // namespace adelic
