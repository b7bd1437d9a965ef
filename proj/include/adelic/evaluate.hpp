// Brute-force Tarskian evaluation over finite models.
//
// A formula is compiled once against a model into a node array plus postfix
// term programs, then evaluated with depth-first quantifier enumeration and
// short-circuiting. The model type is a template parameter so the inner loop
// is free of virtual calls; the models below cover Z/n, table structures,
// powerset algebras and finite products of rings.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "adelic/error.hpp"
#include "adelic/finite_structure.hpp"
#include "adelic/formula.hpp"

namespace adelic {

// ---- models ----------------------------------------------------------------

struct ZModModel {
  explicit ZModModel(std::int64_t n) : n(n) {}
  std::int64_t n;

  int sort_id(const std::string&) const { return 0; }
  std::size_t carrier(int) const { return static_cast<std::size_t>(n); }
  Value element(int, std::size_t i) const { return static_cast<Value>(i); }
  Value add(Value a, Value b) const { Value s = a + b; return s >= n ? s - n : s; }
  Value mul(Value a, Value b) const { return (a * b) % n; }
  Value neg(Value a) const { return a == 0 ? 0 : n - a; }
  Value meet(Value, Value) const { throw Error("Z/n has no meet"); }
  Value join(Value, Value) const { throw Error("Z/n has no join"); }
  Value compl_(Value) const { throw Error("Z/n has no complement"); }
  Value constant(const std::string& c) const {
    if (c == "0") return 0;
    if (c == "1") return 1 % n;
    throw UnknownSymbol("constant '" + c + "' in Z/n");
  }
  Value numeral(std::int64_t k) const { return ((k % n) + n) % n; }
  int function_id(const std::string& f) const { throw UnknownSymbol("function '" + f + "' in Z/n"); }
  Value apply(int, const Value*) const { return 0; }
  int predicate_id(const std::string& p) const { throw UnknownSymbol("predicate '" + p + "' in Z/n"); }
  bool pred(int, const std::vector<std::int64_t>&, const Value*) const { return false; }
};

// Any FiniteStructure, through its tables.
struct TableModel {
  explicit TableModel(const FiniteStructure& m);
  const FiniteStructure* m;
  std::vector<std::string> fn_names, pred_names;
  const std::int32_t *add_t = nullptr, *mul_t = nullptr, *neg_t = nullptr;
  std::size_t n0 = 0;
  FiniteStructure::RingTables tables;

  int sort_id(const std::string& s) const { return static_cast<int>(m->sort_index(s)); }
  std::size_t carrier(int s) const { return m->size(m->signature().sorts()[static_cast<std::size_t>(s)]); }
  Value element(int, std::size_t i) const { return static_cast<Value>(i); }
  Value add(Value a, Value b) const { return add_t[static_cast<std::size_t>(a) * n0 + static_cast<std::size_t>(b)]; }
  Value mul(Value a, Value b) const { return mul_t[static_cast<std::size_t>(a) * n0 + static_cast<std::size_t>(b)]; }
  Value neg(Value a) const { return neg_t[static_cast<std::size_t>(a)]; }
  Value meet(Value a, Value b) const { return m->apply("meet", {a, b}); }
  Value join(Value a, Value b) const { return m->apply("join", {a, b}); }
  Value compl_(Value a) const { return m->apply("compl", {a}); }
  Value constant(const std::string& c) const { return m->constant(c); }
  Value numeral(std::int64_t k) const { return m->numeral(k); }
  int function_id(const std::string& f);
  Value apply(int id, const Value* args) const;
  int predicate_id(const std::string& p);
  bool pred(int id, const std::vector<std::int64_t>& idx, const Value* args) const;
};

// Powerset algebra of an s-element set; elements are bit masks.
struct PowersetModel {
  explicit PowersetModel(unsigned s) : s(s), full((Value{1} << s) - 1) {}
  unsigned s;
  Value full;
  enum : int { kLe, kFin, kC, kRes };

  int sort_id(const std::string&) const { return 0; }
  std::size_t carrier(int) const { return std::size_t{1} << s; }
  Value element(int, std::size_t i) const { return static_cast<Value>(i); }
  Value add(Value, Value) const { throw Error("no + in a Boolean algebra"); }
  Value mul(Value, Value) const { throw Error("no * in a Boolean algebra"); }
  Value neg(Value) const { throw Error("no - in a Boolean algebra"); }
  Value meet(Value a, Value b) const { return a & b; }
  Value join(Value a, Value b) const { return a | b; }
  Value compl_(Value a) const { return full & ~a; }
  Value constant(const std::string& c) const {
    if (c == "0") return 0;
    if (c == "1") return full;
    throw UnknownSymbol("constant '" + c + "' in a powerset algebra");
  }
  Value numeral(std::int64_t) const { throw Error("numerals in a Boolean algebra"); }
  int function_id(const std::string& f) const { throw UnknownSymbol("function '" + f + "'"); }
  Value apply(int, const Value*) const { return 0; }
  int predicate_id(const std::string& p) const {
    if (p == "le") return kLe;
    if (p == "Fin") return kFin;
    if (p == "C") return kC;
    if (p == "Res") return kRes;
    throw UnknownSymbol("predicate '" + p + "'");
  }
  bool pred(int id, const std::vector<std::int64_t>& idx, const Value* a) const {
    switch (id) {
      case kLe:
        return (a[0] & ~a[1]) == 0;
      case kFin:
        return true;
      case kC:
        return std::popcount(static_cast<std::uint64_t>(a[0])) >= idx[0];
      default: {
        std::int64_t n = idx[0], r = ((idx[1] % n) + n) % n;
        return std::popcount(static_cast<std::uint64_t>(a[0])) % n == r;
      }
    }
  }
};

// Direct product of finitely many rings. Elements are packed one byte per
// factor (factor 0 in the lowest byte), so at most 8 factors of size <= 256.
struct ProductModel {
  explicit ProductModel(const std::vector<const FiniteStructure*>& factors);
  std::size_t k = 0;
  std::vector<std::size_t> sizes;
  std::vector<FiniteStructure::RingTables> tables;
  std::vector<Value> elements;  // all packed elements, mixed-radix order
  Value one_ = 0;

  static Value digit(Value a, std::size_t i) { return (a >> (8 * i)) & 0xFF; }
  Value pack(const std::vector<Value>& comps) const;
  std::vector<Value> unpack(Value a) const;

  int sort_id(const std::string&) const { return 0; }
  std::size_t carrier(int) const { return elements.size(); }
  Value element(int, std::size_t i) const { return elements[i]; }
  Value add(Value a, Value b) const {
    Value r = 0;
    for (std::size_t i = 0; i < k; ++i)
      r |= Value{tables[i].add[static_cast<std::size_t>(digit(a, i) * static_cast<Value>(sizes[i]) + digit(b, i))]}
           << (8 * i);
    return r;
  }
  Value mul(Value a, Value b) const {
    Value r = 0;
    for (std::size_t i = 0; i < k; ++i)
      r |= Value{tables[i].mul[static_cast<std::size_t>(digit(a, i) * static_cast<Value>(sizes[i]) + digit(b, i))]}
           << (8 * i);
    return r;
  }
  Value neg(Value a) const {
    Value r = 0;
    for (std::size_t i = 0; i < k; ++i) r |= Value{tables[i].neg[static_cast<std::size_t>(digit(a, i))]} << (8 * i);
    return r;
  }
  Value meet(Value, Value) const { throw Error("no meet in a ring product"); }
  Value join(Value, Value) const { throw Error("no join in a ring product"); }
  Value compl_(Value) const { throw Error("no complement in a ring product"); }
  Value constant(const std::string& c) const;
  Value numeral(std::int64_t v) const;
  int function_id(const std::string& f) const { throw UnknownSymbol("function '" + f + "' in a ring product"); }
  Value apply(int, const Value*) const { return 0; }
  int predicate_id(const std::string& p) const { throw UnknownSymbol("predicate '" + p + "' in a ring product"); }
  bool pred(int, const std::vector<std::int64_t>&, const Value*) const { return false; }
};

// ---- compiled formulas -----------------------------------------------------

enum class Op : std::uint8_t { Var, Const, Add, Mul, Neg, Meet, Join, Compl, App };

struct Instr {
  Op op;
  std::int32_t arity = 0;
  Value a = 0;  // slot, constant value, or function id
};

enum class NodeKind : std::uint8_t { True, False, Eq, Pred, Not, And, Or, Forall, Exists };

struct Node {
  NodeKind kind;
  std::int32_t left = -1, right = -1;  // child nodes
  std::int32_t t0 = -1, t1 = -1;       // Eq operands (term programs)
  std::int32_t slot = -1, sort = 0;    // quantifiers
  std::int32_t pred = -1;
  std::vector<std::int64_t> indices;
  std::vector<std::int32_t> args;  // Pred operands (term programs)
};

template <class Model>
class CompiledFormula {
 public:
  // `free_order` fixes the environment slots 0..k-1 of the free variables.
  CompiledFormula(const Formula& f, Model& model, const std::vector<Variable>& free_order) : m_(&model) {
    for (const auto& v : free_order) {
      scope_[v] = static_cast<std::int32_t>(scope_.size());
      slots_ = std::max<std::size_t>(slots_, scope_.size());
    }
    free_count_ = free_order.size();
    root_ = compile(f, static_cast<std::int32_t>(free_order.size()));
  }

  std::size_t slots() const { return slots_; }
  std::size_t free_count() const { return free_count_; }

  // env must have at least slots() entries, free variables filled in.
  bool eval(Value* env) const { return eval_node(root_, env); }

  // Upper bound on atom evaluations (product of carrier sizes along nesting).
  long double cost() const { return cost_node(root_); }

 private:
  std::int32_t term(const Term& t) {
    std::vector<Instr> prog;
    std::size_t depth = 0, max_depth = 0;
    emit(t, prog, depth, max_depth);
    if (max_depth > kStack) throw Error("term too deep for the evaluator");
    progs_.push_back(std::move(prog));
    return static_cast<std::int32_t>(progs_.size() - 1);
  }

  void emit(const Term& t, std::vector<Instr>& prog, std::size_t& depth, std::size_t& max_depth) {
    auto push = [&](Instr i, std::size_t pops) {
      prog.push_back(i);
      depth = depth - pops + 1;
      max_depth = std::max(max_depth, depth);
    };
    switch (t.kind()) {
      case TermKind::Var: {
        auto it = scope_.find(t.variable());
        if (it == scope_.end()) throw Error("unassigned free variable '" + t.name() + "'");
        push({Op::Var, 0, it->second}, 0);
        return;
      }
      case TermKind::Const:
        push({Op::Const, 0, m_->constant(t.name())}, 0);
        return;
      case TermKind::Num:
        push({Op::Const, 0, m_->numeral(t.value())}, 0);
        return;
      case TermKind::App:
        break;
    }
    for (const auto& a : t.args()) emit(a, prog, depth, max_depth);
    const std::string& n = t.name();
    std::size_t ar = t.args().size();
    if (n == "+" && ar == 2) push({Op::Add}, 2);
    else if (n == "*" && ar == 2) push({Op::Mul}, 2);
    else if (n == "-" && ar == 1) push({Op::Neg}, 1);
    else if (n == "meet" && ar == 2) push({Op::Meet}, 2);
    else if (n == "join" && ar == 2) push({Op::Join}, 2);
    else if (n == "compl" && ar == 1) push({Op::Compl}, 1);
    else push({Op::App, static_cast<std::int32_t>(ar), m_->function_id(n)}, ar);
  }

  std::int32_t add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t compile(const Formula& f, std::int32_t depth) {
    Node n{};
    switch (f.kind()) {
      case FormulaKind::True:
        n.kind = NodeKind::True;
        break;
      case FormulaKind::False:
        n.kind = NodeKind::False;
        break;
      case FormulaKind::Eq:
        n.kind = NodeKind::Eq;
        n.t0 = term(f.terms()[0]);
        n.t1 = term(f.terms()[1]);
        break;
      case FormulaKind::Pred:
        n.kind = NodeKind::Pred;
        n.pred = m_->predicate_id(f.pred_name());
        n.indices = f.indices();
        for (const auto& t : f.terms()) n.args.push_back(term(t));
        break;
      case FormulaKind::Not:
        n.kind = NodeKind::Not;
        n.left = compile(f.child(), depth);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        n.kind = f.kind() == FormulaKind::And ? NodeKind::And : NodeKind::Or;
        n.left = compile(f.child(0), depth);
        n.right = compile(f.child(1), depth);
        break;
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        n.kind = f.kind() == FormulaKind::Forall ? NodeKind::Forall : NodeKind::Exists;
        n.slot = depth;
        n.sort = m_->sort_id(f.bound().sort);
        slots_ = std::max<std::size_t>(slots_, static_cast<std::size_t>(depth) + 1);
        auto prev = scope_.find(f.bound());
        std::optional<std::int32_t> saved;
        if (prev != scope_.end()) saved = prev->second;
        scope_[f.bound()] = depth;
        n.left = compile(f.child(), depth + 1);
        if (saved) scope_[f.bound()] = *saved;
        else scope_.erase(f.bound());
        break;
      }
    }
    return add(std::move(n));
  }

  Value run(std::int32_t prog, const Value* env) const {
    std::array<Value, kStack> st;
    std::size_t sp = 0;
    for (const Instr& i : progs_[static_cast<std::size_t>(prog)]) {
      switch (i.op) {
        case Op::Var:
          st[sp++] = env[i.a];
          break;
        case Op::Const:
          st[sp++] = i.a;
          break;
        case Op::Add:
          --sp;
          st[sp - 1] = m_->add(st[sp - 1], st[sp]);
          break;
        case Op::Mul:
          --sp;
          st[sp - 1] = m_->mul(st[sp - 1], st[sp]);
          break;
        case Op::Neg:
          st[sp - 1] = m_->neg(st[sp - 1]);
          break;
        case Op::Meet:
          --sp;
          st[sp - 1] = m_->meet(st[sp - 1], st[sp]);
          break;
        case Op::Join:
          --sp;
          st[sp - 1] = m_->join(st[sp - 1], st[sp]);
          break;
        case Op::Compl:
          st[sp - 1] = m_->compl_(st[sp - 1]);
          break;
        case Op::App: {
          sp -= static_cast<std::size_t>(i.arity);
          st[sp] = m_->apply(static_cast<int>(i.a), &st[sp]);
          ++sp;
          break;
        }
      }
    }
    return st[0];
  }

  bool eval_node(std::int32_t id, Value* env) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case NodeKind::True:
        return true;
      case NodeKind::False:
        return false;
      case NodeKind::Eq:
        return run(n.t0, env) == run(n.t1, env);
      case NodeKind::Pred: {
        std::array<Value, 8> args{};
        for (std::size_t i = 0; i < n.args.size(); ++i) args[i] = run(n.args[i], env);
        return m_->pred(n.pred, n.indices, args.data());
      }
      case NodeKind::Not:
        return !eval_node(n.left, env);
      case NodeKind::And:
        return eval_node(n.left, env) && eval_node(n.right, env);
      case NodeKind::Or:
        return eval_node(n.left, env) || eval_node(n.right, env);
      case NodeKind::Forall:
      case NodeKind::Exists: {
        const bool want = n.kind == NodeKind::Exists;
        const std::size_t size = m_->carrier(n.sort);
        for (std::size_t i = 0; i < size; ++i) {
          env[n.slot] = m_->element(n.sort, i);
          if (eval_node(n.left, env) == want) return want;
        }
        return !want;
      }
    }
    return false;
  }

  long double cost_node(std::int32_t id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.kind) {
      case NodeKind::Not:
        return cost_node(n.left);
      case NodeKind::And:
      case NodeKind::Or:
        return cost_node(n.left) + cost_node(n.right);
      case NodeKind::Forall:
      case NodeKind::Exists:
        return static_cast<long double>(m_->carrier(n.sort)) * cost_node(n.left);
      default:
        return 1;
    }
  }

  static constexpr std::size_t kStack = 64;
  Model* m_;
  std::map<Variable, std::int32_t> scope_;
  std::vector<Node> nodes_;
  std::vector<std::vector<Instr>> progs_;
  std::int32_t root_ = -1;
  std::size_t slots_ = 0;
  std::size_t free_count_ = 0;
};

// ---- type-erased prepared formula -----------------------------------------

// A formula compiled against one FiniteStructure for repeated evaluation
// under different assignments of `vars`.
class PreparedFormula {
 public:
  PreparedFormula(const FiniteStructure& m, const Formula& f, const std::vector<Variable>& vars);
  ~PreparedFormula();
  PreparedFormula(PreparedFormula&&) noexcept;
  PreparedFormula& operator=(PreparedFormula&&) noexcept;

  bool operator()(const std::vector<Value>& values) const;
  bool operator()(const Value* values) const;
  long double cost() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// ---- convenience API over FiniteStructure ----------------------------------

using Assignment = std::map<Variable, Value>;

struct Rational {
  std::int64_t num = 0, den = 1;
  static Rational make(std::int64_t n, std::int64_t d);
  friend bool operator==(const Rational&, const Rational&) = default;
  std::string str() const;
};

inline constexpr long double kDefaultEvalBudget = 2e9L;

bool satisfies(const FiniteStructure& m, const Formula& f, const Assignment& asg = {},
               long double budget = kDefaultEvalBudget);

// Exact solution set; `vars` fixes the tuple order (default: free variables
// in their natural order).
std::vector<std::vector<Value>> definable_set(const FiniteStructure& m, const Formula& f,
                                              std::vector<Variable> vars = {},
                                              long double budget = kDefaultEvalBudget);

Rational counting_measure(const FiniteStructure& m, const Formula& f, long double budget = kDefaultEvalBudget);

// Worst-case atom evaluations of `f` over a carrier of the given size.
long double evaluation_cost(const Formula& f, std::size_t carrier);

}  // namespace adelic
