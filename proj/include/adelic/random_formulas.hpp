// Seeded random formula generators for the property suites.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adelic/formula.hpp"

namespace adelic {

struct RingGenOptions {
  std::size_t max_depth = 2;        // quantifier depth
  std::size_t max_connectives = 3;  // Boolean connective budget per level
  std::size_t term_depth = 2;
  std::vector<std::string> var_names = {"x", "y", "z"};
  bool allow_numerals = true;
};

class RingFormulaGen {
 public:
  RingFormulaGen(std::uint64_t seed, RingGenOptions opts = {});

  // A sentence whose quantifier depth is at most opts.max_depth.
  Formula sentence();
  // A formula whose free variables are among `free`.
  Formula formula(const std::vector<Variable>& free, std::size_t depth);
  Term term(const std::vector<Variable>& vars, std::size_t depth);

  std::mt19937_64& rng() { return rng_; }

 private:
  Formula atom(const std::vector<Variable>& vars);
  Formula body(std::vector<Variable>& bound, std::size_t depth, std::size_t budget);
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
  RingGenOptions opts_;
};

struct BoolGenOptions {
  std::size_t max_depth = 2;
  std::size_t max_connectives = 3;
  std::size_t term_depth = 2;
  std::int64_t max_index = 4;  // C[j] with j <= max_index, Res[n,r] with n <= max_index
  std::vector<std::string> free_names = {"a", "b"};
  std::vector<std::string> bound_names = {"u", "v"};
};

class BoolFormulaGen {
 public:
  BoolFormulaGen(std::uint64_t seed, BoolGenOptions opts = {});

  Formula formula();  // free variables among opts.free_names
  Formula sentence();
  std::mt19937_64& rng() { return rng_; }

 private:
  Term term(const std::vector<Variable>& vars, std::size_t depth);
  Formula atom(const std::vector<Variable>& vars);
  Formula body(std::vector<Variable>& vars, std::size_t depth, std::size_t budget, std::size_t next_bound);
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
  BoolGenOptions opts_;
};

}  // namespace adelic
