// Deciding ring sentences across the rings Z/m.
//
// Exact slice: brute force in Z/m for m up to a bound, each composite m
// cross-checked through its CRT decomposition Z/p1^k1 x .. x Z/pr^kr and
// the Feferman-Vaught translation.
//
// Structural route: truth in Z/m depends only on the multiset of local
// types of its prime-power stalks. Stalks are typed for p <= p_bound,
// k <= k_bound and grouped into classes of equal type; selections of
// stalks with distinct primes are then searched for a failing product.
// Whether a class's behaviour persists beyond the bounds is an empirical
// question, so a passing verdict is labelled as assuming stabilization.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adelic/formula.hpp"

namespace adelic {

struct PrimePower {
  std::int64_t p = 0;
  int k = 0;
  std::int64_t value() const;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization in increasing order of p.
std::vector<PrimePower> crt_decompose(std::int64_t m);
bool is_prime(std::int64_t n);

struct ModulusResult {
  std::int64_t m = 0;
  std::optional<bool> direct;   // nullopt: over budget
  std::optional<bool> via_crt;  // composite m only
};

struct PatternCertificate {
  std::size_t classes = 0;
  std::uint64_t multiplicity_needed = 0;  // per-class count beyond which truth is constant
  std::size_t max_selection = 0;          // largest number of stalks combined
  std::uint64_t selections_checked = 0;
  bool exhaustive = false;                // every selection up to the needed multiplicity was checked
  bool uniform = false;                   // every typed stalk has the same truth value
};

struct Verdict {
  enum class Status { HoldsForAllChecked, Fails, HoldsAssumingStabilization };
  Status status = Status::HoldsForAllChecked;
  std::optional<std::int64_t> counterexample;
  std::vector<PrimePower> counterexample_stalks;
  std::string verified_by;  // "direct" or "crt+fv"
  // decide_up_to
  std::int64_t max_m = 0;
  std::vector<ModulusResult> results;
  std::vector<std::int64_t> skipped;
  std::vector<std::int64_t> disagreements;  // direct != CRT route; must stay empty
  // decide_all
  std::optional<PatternCertificate> certificate;
};

std::string status_name(Verdict::Status s);

struct ZmodOptions {
  long double budget = 2e8L;  // atom evaluations per ring
  int jobs = 0;               // OpenMP threads; 0 = runtime default
};

Verdict decide_up_to(const Formula& sentence, std::int64_t max_m, const ZmodOptions& opts = {});

struct StalkEntry {
  std::int64_t p = 0;
  int k = 0;
  std::optional<bool> truth;  // nullopt: over budget
  int type_class = -1;
  std::vector<bool> locals;   // truth of each local sentence, when materialized
};

// Eventual behaviour of one observable along k (per p) and along p (per k).
struct Stability {
  std::string subject;  // "sentence", "type", "psi_j"
  // First index from which the value is constant up to the bound; set only
  // when that covers at least the top half of the range.
  std::map<std::int64_t, std::optional<int>> stable_in_k;
  std::map<int, std::optional<std::int64_t>> stable_in_p;
};

struct StalkClassification {
  std::int64_t p_bound = 0;
  int k_bound = 0;
  std::vector<Formula> locals;  // empty when there are too many to list
  double log2_local_count = 0;
  std::vector<StalkEntry> table;
  std::size_t class_count = 0;
  std::vector<Stability> stability;
  const StalkEntry* at(std::int64_t p, int k) const;
};

inline constexpr std::int64_t kDefaultPBound = 50;
// Stalks are typed only up to this many atom evaluations each; larger
// stalks are left out of the table.
inline constexpr long double kStalkBudget = 5e6L;
inline constexpr int kDefaultKBound = 4;

StalkClassification classify_stalks(const Formula& sentence, std::int64_t p_bound = kDefaultPBound,
                                    int k_bound = kDefaultKBound, const ZmodOptions& opts = {kStalkBudget, 0});

struct DecideAllOptions {
  ZmodOptions zmod{kStalkBudget, 0};
  std::size_t max_selection = 4;         // stalks per selection
  std::uint64_t selection_budget = 200000;
};

Verdict decide_all(const Formula& sentence, std::int64_t p_bound = kDefaultPBound, int k_bound = kDefaultKBound,
                   const DecideAllOptions& opts = {});

}  // namespace adelic
