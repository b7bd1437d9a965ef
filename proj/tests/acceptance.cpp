// Runs acceptance criteria 1-7 and prints one line per criterion.
// Usage: acceptance [seed] [criterion ids...]

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "adelic/acceptance.hpp"

int main(int argc, char** argv) {
  adelic::AcceptanceOptions opts;
  std::vector<int> ids;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  for (int i = 2; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const auto& c : adelic::acceptance_criteria()) ids.push_back(c.id);

  bool all = true;
  for (int id : ids) {
    const auto& info = adelic::acceptance_criteria().at(static_cast<std::size_t>(id - 1));
    adelic::CriterionResult r = adelic::run_criterion(id, opts);
    std::printf("criterion %d %-20s %s  %7.1fs / %.0fs  %llu checks, %llu failed\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, info.limit_seconds,
                static_cast<unsigned long long>(r.cases), static_cast<unsigned long long>(r.failures));
    for (const auto& n : r.notes) std::printf("    %s\n", n.c_str());
    if (!r.within_limit) std::printf("    time limit exceeded\n");
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
