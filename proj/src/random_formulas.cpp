#include "adelic/random_formulas.hpp"

namespace adelic {

// ---- ring formulas ---------------------------------------------------------

RingFormulaGen::RingFormulaGen(std::uint64_t seed, RingGenOptions opts) : rng_(seed), opts_(std::move(opts)) {}

Term RingFormulaGen::term(const std::vector<Variable>& vars, std::size_t depth) {
  const std::string sort = "ring";
  std::size_t choice = below(depth == 0 ? 4 : 8);
  switch (choice) {
    case 0:
    case 1:
      if (!vars.empty()) return Term::var(vars[below(vars.size())]);
      [[fallthrough]];
    case 2:
      return Term::constant(below(2) ? "1" : "0", sort);
    case 3:
      if (opts_.allow_numerals) return Term::numeral(2 + static_cast<std::int64_t>(below(2)), sort);
      return Term::constant("1", sort);
    case 4:
    case 5:
      return Term::app("*", {term(vars, depth - 1), term(vars, depth - 1)}, sort);
    case 6:
      return Term::app("+", {term(vars, depth - 1), term(vars, depth - 1)}, sort);
    default:
      return Term::app("-", {term(vars, depth - 1)}, sort);
  }
}

Formula RingFormulaGen::atom(const std::vector<Variable>& vars) {
  return Formula::eq(term(vars, below(opts_.term_depth + 1)), term(vars, below(opts_.term_depth + 1)));
}

Formula RingFormulaGen::body(std::vector<Variable>& bound, std::size_t depth, std::size_t budget) {
  std::size_t choice = below(depth > 0 ? 6 : 4);
  if (budget == 0 && choice >= 1 && choice <= 3) choice = 0;
  switch (choice) {
    case 0:
      return atom(bound);
    case 1:
      return Formula::negation(body(bound, depth, budget - 1));
    case 2: {
      Formula a = body(bound, depth, budget / 2);
      return Formula::conj(a, body(bound, depth, budget / 2));
    }
    case 3: {
      Formula a = body(bound, depth, budget / 2);
      return Formula::disj(a, body(bound, depth, budget / 2));
    }
    default: {
      // Prefer a name not yet bound, occasionally shadow one.
      std::vector<std::string> fresh;
      for (const auto& n : opts_.var_names) {
        bool used = false;
        for (const auto& v : bound) used = used || v.name == n;
        if (!used) fresh.push_back(n);
      }
      std::string name = (!fresh.empty() && below(5) != 0) ? fresh[below(fresh.size())]
                                                           : opts_.var_names[below(opts_.var_names.size())];
      Variable v{name, "ring"};
      std::vector<Variable> inner;
      for (const auto& b : bound)
        if (b != v) inner.push_back(b);
      inner.push_back(v);
      Formula f = body(inner, depth - 1, opts_.max_connectives);
      return choice == 4 ? Formula::exists(v, f) : Formula::forall(v, f);
    }
  }
}

Formula RingFormulaGen::sentence() {
  std::vector<Variable> none;
  return body(none, opts_.max_depth, opts_.max_connectives);
}

Formula RingFormulaGen::formula(const std::vector<Variable>& free, std::size_t depth) {
  std::vector<Variable> vars = free;
  return body(vars, depth, opts_.max_connectives);
}

// ---- enriched Boolean formulas ---------------------------------------------

BoolFormulaGen::BoolFormulaGen(std::uint64_t seed, BoolGenOptions opts) : rng_(seed), opts_(std::move(opts)) {}

Term BoolFormulaGen::term(const std::vector<Variable>& vars, std::size_t depth) {
  const std::string sort = "bool";
  std::size_t choice = below(depth == 0 ? 3 : 6);
  switch (choice) {
    case 0:
    case 1:
      if (!vars.empty()) return Term::var(vars[below(vars.size())]);
      [[fallthrough]];
    case 2:
      return Term::constant(below(2) ? "1" : "0", sort);
    case 3:
      return Term::app("meet", {term(vars, depth - 1), term(vars, depth - 1)}, sort);
    case 4:
      return Term::app("join", {term(vars, depth - 1), term(vars, depth - 1)}, sort);
    default:
      return Term::app("compl", {term(vars, depth - 1)}, sort);
  }
}

Formula BoolFormulaGen::atom(const std::vector<Variable>& vars) {
  auto t = [&] { return term(vars, below(opts_.term_depth + 1)); };
  std::int64_t k = opts_.max_index;
  switch (below(6)) {
    case 0:
      return Formula::eq(t(), t());
    case 1:
      return Formula::pred("le", {}, {t(), t()});
    case 2:
      return Formula::pred("Fin", {}, {t()});
    case 3:
    case 4:
      return Formula::pred("C", {1 + static_cast<std::int64_t>(below(static_cast<std::size_t>(k)))}, {t()});
    default: {
      std::int64_t n = 1 + static_cast<std::int64_t>(below(static_cast<std::size_t>(k)));
      std::int64_t r = static_cast<std::int64_t>(below(static_cast<std::size_t>(n)));
      return Formula::pred("Res", {n, r}, {t()});
    }
  }
}

Formula BoolFormulaGen::body(std::vector<Variable>& vars, std::size_t depth, std::size_t budget,
                             std::size_t next_bound) {
  std::size_t choice = below(depth > 0 ? 6 : 4);
  if (budget == 0 && choice >= 1 && choice <= 3) choice = 0;
  if (depth > 0 && next_bound >= opts_.bound_names.size()) choice = choice % 4;
  switch (choice) {
    case 0:
      return atom(vars);
    case 1:
      return Formula::negation(body(vars, depth, budget - 1, next_bound));
    case 2: {
      Formula a = body(vars, depth, budget / 2, next_bound);
      return Formula::conj(a, body(vars, depth, budget / 2, next_bound));
    }
    case 3: {
      Formula a = body(vars, depth, budget / 2, next_bound);
      return Formula::disj(a, body(vars, depth, budget / 2, next_bound));
    }
    default: {
      Variable v{opts_.bound_names[next_bound], "bool"};
      std::vector<Variable> inner = vars;
      inner.push_back(v);
      Formula f = body(inner, depth - 1, opts_.max_connectives, next_bound + 1);
      return choice == 4 ? Formula::exists(v, f) : Formula::forall(v, f);
    }
  }
}

Formula BoolFormulaGen::formula() {
  std::vector<Variable> vars;
  for (const auto& n : opts_.free_names) vars.push_back({n, "bool"});
  return body(vars, opts_.max_depth, opts_.max_connectives, 0);
}

Formula BoolFormulaGen::sentence() {
  std::vector<Variable> vars;
  return body(vars, opts_.max_depth, opts_.max_connectives, 0);
}

}  // namespace adelic
