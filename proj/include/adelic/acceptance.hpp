// The acceptance suite: seven end-to-end checks, each against an oracle
// that does not share code with the engine under test, with a wall-clock
// limit. Shared by the acceptance binary and `adelic corpus run`.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adelic {

struct CriterionInfo {
  int id = 0;
  std::string name;
  double limit_seconds = 0;
  std::string summary;
};

const std::vector<CriterionInfo>& acceptance_criteria();
const CriterionInfo& criterion_by_name(const std::string& name);  // throws Error

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;        // every check passed and the time limit held
  bool within_limit = true;
  double seconds = 0;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> notes;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  std::string corpus_dir;  // empty: default_corpus_dir()
  int jobs = 0;            // OpenMP threads inside a criterion
};

// $ADELIC_CORPUS if set, else the in-tree corpus/ directory.
std::string default_corpus_dir();

// Per-entry seed: a fixed hash of the entry name mixed with the run seed,
// so entries are reproducible independently of which others run.
std::uint64_t entry_seed(std::uint64_t seed, const std::string& name);

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

}  // namespace adelic
