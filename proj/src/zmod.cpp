#include "adelic/zmod.hpp"

#include <omp.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>

#include "adelic/error.hpp"
#include "adelic/evaluate.hpp"
#include "adelic/fv.hpp"
#include "adelic/kernels.hpp"
#include "fv_internal.hpp"

namespace adelic {

std::int64_t PrimePower::value() const {
  std::int64_t v = 1;
  for (int i = 0; i < k; ++i) v *= p;
  return v;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<PrimePower> crt_decompose(std::int64_t m) {
  if (m < 2) throw Error("crt_decompose needs m >= 2");
  std::vector<PrimePower> out;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    PrimePower pp{p, 0};
    while (m % p == 0) {
      m /= p;
      ++pp.k;
    }
    out.push_back(pp);
  }
  if (m > 1) out.push_back({m, 1});
  return out;
}

std::string status_name(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::HoldsForAllChecked:
      return "holds_for_all_checked";
    case Verdict::Status::Fails:
      return "fails";
    case Verdict::Status::HoldsAssumingStabilization:
      return "holds_for_all_assuming_stabilization";
  }
  return "?";
}

namespace {

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

void require_sentence(const Formula& f) {
  if (!f.is_sentence()) throw Error("expected a sentence");
}

ModulusResult check_modulus(const Formula& f, std::int64_t m, long double budget) {
  ModulusResult r;
  r.m = m;
  if (evaluation_cost(f, static_cast<std::size_t>(m)) <= budget)
    r.direct = satisfies(FiniteStructure::ring_mod(m), f, {}, budget);
  auto stalks = crt_decompose(m);
  if (stalks.size() > 1 || stalks[0].k > 1) {
    bool fits = true;
    std::vector<FiniteStructure> rings;
    for (const auto& s : stalks) {
      fits = fits && evaluation_cost(f, static_cast<std::size_t>(s.value())) <= budget;
      rings.push_back(FiniteStructure::ring_mod(s.value()));
    }
    if (fits) r.via_crt = evaluate_translation(translate_cached(f, ring_signature()), ProductStructure(std::move(rings)));
  }
  return r;
}

}  // namespace

std::vector<ModulusResult> zmod_sweep(const Formula& sentence, std::int64_t max_m, const ZmodOptions& opts,
                                      bool parallel) {
  require_sentence(sentence);
  if (max_m < 2) throw Error("the modulus bound must be at least 2");
  const std::int64_t count = max_m - 1;
  std::vector<ModulusResult> out(static_cast<std::size_t>(count));
  translate_cached(sentence, ring_signature());
  if (!parallel) {
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = check_modulus(sentence, i + 2, opts.budget);
    return out;
  }
  std::vector<std::string> errors(out.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(opts.jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = check_modulus(sentence, i + 2, opts.budget);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  return out;
}

Verdict decide_up_to(const Formula& sentence, std::int64_t max_m, const ZmodOptions& opts) {
  Verdict v;
  v.max_m = max_m;
  v.results = zmod_sweep(sentence, max_m, opts, true);
  for (const auto& r : v.results) {
    if (!r.direct) v.skipped.push_back(r.m);
    if (r.direct && r.via_crt && *r.direct != *r.via_crt) v.disagreements.push_back(r.m);
    if (!v.counterexample && r.direct && !*r.direct) {
      v.counterexample = r.m;
      v.counterexample_stalks = crt_decompose(r.m);
      v.verified_by = "direct";
    }
  }
  v.status = v.counterexample ? Verdict::Status::Fails : Verdict::Status::HoldsForAllChecked;
  return v;
}

const StalkEntry* StalkClassification::at(std::int64_t p, int k) const {
  for (const auto& e : table)
    if (e.p == p && e.k == k) return &e;
  return nullptr;
}

namespace {

// Types of every stalk, kept alive for the pattern search.
struct TypedStalks {
  FvTranslation t;
  std::deque<FiniteStructure> rings;
  std::vector<std::unique_ptr<FactorTyper>> typers;  // parallel to cls.table; null when skipped
  std::vector<int> ids;
  std::vector<std::size_t> representative;  // class -> table index
  StalkClassification cls;
};

std::string canonical(const FactorTyper& ty, const FvNode& n, int id) {
  switch (n.kind) {
    case FvNode::Kind::Const:
      return n.value ? "T" : "F";
    case FvNode::Kind::Atom:
      return id ? "1" : "0";
    case FvNode::Kind::Not:
      return canonical(ty, *n.a, id);
    case FvNode::Kind::And:
    case FvNode::Kind::Or: {
      auto [x, y] = ty.parts(n, id);
      return "(" + canonical(ty, *n.a, x) + "," + canonical(ty, *n.b, y) + ")";
    }
    case FvNode::Kind::Exists: {
      std::set<std::string> kids;
      for (int c : ty.realized(n, id)) kids.insert(canonical(ty, *n.a, c));
      std::string s = "{";
      for (const auto& k : kids) s += k + ";";
      return s + "}";
    }
  }
  return "";
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p <= n; ++p)
    if (is_prime(p)) ps.push_back(p);
  return ps;
}

// First index from which seq is constant and known, if that covers the
// top half of the range.
std::optional<int> stable_from(const std::vector<std::optional<int>>& seq) {
  if (seq.empty() || !seq.back()) return std::nullopt;
  std::size_t i = seq.size() - 1;
  while (i > 0 && seq[i - 1] && *seq[i - 1] == *seq.back()) --i;
  const std::size_t half = seq.size() - seq.size() / 2;  // 1-based start of the top half is size/2 + 1
  if (seq.size() - i < half) return std::nullopt;
  return static_cast<int>(i);
}

void add_stability(StalkClassification& cls, const std::string& subject,
                   const std::function<std::optional<int>(const StalkEntry&)>& value) {
  Stability st;
  st.subject = subject;
  const auto primes = primes_up_to(cls.p_bound);
  for (std::int64_t p : primes) {
    std::vector<std::optional<int>> seq;
    for (int k = 1; k <= cls.k_bound; ++k) seq.push_back(value(*cls.at(p, k)));
    auto i = stable_from(seq);
    st.stable_in_k[p] = i ? std::optional<int>(*i + 1) : std::nullopt;
  }
  for (int k = 1; k <= cls.k_bound; ++k) {
    std::vector<std::optional<int>> seq;
    for (std::int64_t p : primes) seq.push_back(value(*cls.at(p, k)));
    auto i = stable_from(seq);
    st.stable_in_p[k] = i ? std::optional<std::int64_t>(primes[static_cast<std::size_t>(*i)]) : std::nullopt;
  }
  cls.stability.push_back(std::move(st));
}

TypedStalks type_stalks(const Formula& sentence, std::int64_t p_bound, int k_bound, const ZmodOptions& opts) {
  require_sentence(sentence);
  if (p_bound < 2 || k_bound < 1) throw Error("stalk bounds must be p >= 2 and k >= 1");
  TypedStalks ts;
  ts.t = translate_cached(sentence, ring_signature());
  ts.cls.p_bound = p_bound;
  ts.cls.k_bound = k_bound;
  ts.cls.log2_local_count = ts.t.log2_local_count();
  if (auto m = ts.t.local_count(); m && *m <= 64) ts.cls.locals = ts.t.local_formulas();
  for (std::int64_t p : primes_up_to(p_bound))
    for (int k = 1; k <= k_bound; ++k) {
      StalkEntry e;
      e.p = p;
      e.k = k;
      ts.cls.table.push_back(e);
      ts.rings.push_back(FiniteStructure::ring_mod(PrimePower{p, k}.value()));
    }
  const std::int64_t n = static_cast<std::int64_t>(ts.cls.table.size());
  ts.typers.resize(ts.cls.table.size());
  ts.ids.assign(ts.cls.table.size(), -1);
  std::vector<std::string> canon(ts.cls.table.size());
  const FvNode& root = *ts.t.root;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(opts.jobs))
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    StalkEntry& e = ts.cls.table[u];
    const FiniteStructure& ring = ts.rings[u];
    if (evaluation_cost(ts.t.input, ring.size()) > opts.budget) continue;
    try {
      auto ty = std::make_unique<FactorTyper>(ring, std::nullopt);
      std::map<Variable, Value> env;
      const int id = ty->type(root, env);
      std::vector<FactorTyper*> one{ty.get()};
      e.truth = TypeEvaluator(one).eval(root, {id});
      canon[u] = canonical(*ty, root, id);
      for (const auto& psi : ts.cls.locals) e.locals.push_back(satisfies(ring, psi, {}, opts.budget));
      ts.ids[u] = id;
      ts.typers[u] = std::move(ty);
    } catch (const BudgetExceeded&) {
      e.truth.reset();
      e.locals.clear();
    }
  }
  std::map<std::string, int> classes;
  for (std::size_t u = 0; u < canon.size(); ++u) {
    if (!ts.typers[u]) continue;
    auto [it, fresh] = classes.try_emplace(canon[u], static_cast<int>(classes.size()));
    if (fresh) ts.representative.push_back(u);
    ts.cls.table[u].type_class = it->second;
  }
  ts.cls.class_count = classes.size();
  auto opt = [](std::optional<bool> b) { return b ? std::optional<int>(*b) : std::nullopt; };
  add_stability(ts.cls, "sentence", [&](const StalkEntry& e) { return opt(e.truth); });
  add_stability(ts.cls, "type", [](const StalkEntry& e) {
    return e.type_class < 0 ? std::nullopt : std::optional<int>(e.type_class);
  });
  for (std::size_t j = 0; j < ts.cls.locals.size(); ++j)
    add_stability(ts.cls, "psi_" + std::to_string(j + 1), [j](const StalkEntry& e) {
      return e.locals.empty() ? std::nullopt : std::optional<int>(e.locals[j]);
    });
  return ts;
}

// Counts of one type beyond which truth no longer changes: atoms see
// "some index fails", and a quantifier spreads a count over at most r
// realized child types, each of which matters up to the child's bound.
std::uint64_t multiplicity_needed(const FvNode& n, const std::vector<const FactorTyper*>& reps) {
  constexpr std::uint64_t kCap = std::uint64_t{1} << 40;
  switch (n.kind) {
    case FvNode::Kind::Const:
    case FvNode::Kind::Atom:
      return 1;
    case FvNode::Kind::Not:
      return multiplicity_needed(*n.a, reps);
    case FvNode::Kind::And:
    case FvNode::Kind::Or:
      return std::max(multiplicity_needed(*n.a, reps), multiplicity_needed(*n.b, reps));
    case FvNode::Kind::Exists: {
      std::uint64_t r = 1;
      for (const auto* t : reps) r = std::max<std::uint64_t>(r, t->max_realized(n));
      return std::min(kCap, r * multiplicity_needed(*n.a, reps));
    }
  }
  return 1;
}

// Distinct primes for the chosen classes, smallest modulus first by greedy
// choice with backtracking; nullopt when the primes run out.
std::optional<std::vector<std::size_t>> assign_primes(const TypedStalks& ts, const std::vector<int>& slots) {
  std::vector<std::vector<std::size_t>> members(ts.cls.class_count);
  for (std::size_t u = 0; u < ts.cls.table.size(); ++u)
    if (ts.cls.table[u].type_class >= 0) members[static_cast<std::size_t>(ts.cls.table[u].type_class)].push_back(u);
  for (auto& m : members)
    std::sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
      return ts.rings[a].size() < ts.rings[b].size();
    });
  std::vector<std::size_t> chosen;
  std::set<std::int64_t> used;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == slots.size()) return true;
    for (std::size_t u : members[static_cast<std::size_t>(slots[i])]) {
      const std::int64_t p = ts.cls.table[u].p;
      if (used.count(p)) continue;
      used.insert(p);
      chosen.push_back(u);
      if (go(i + 1)) return true;
      chosen.pop_back();
      used.erase(p);
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return chosen;
}

void verify_counterexample(const Formula& f, Verdict& v, const std::vector<PrimePower>& stalks, long double budget) {
  std::int64_t m = 1;
  bool overflow = false;
  for (const auto& s : stalks) {
    if (m > std::numeric_limits<std::int64_t>::max() / s.value()) overflow = true;
    else m *= s.value();
  }
  v.counterexample_stalks = stalks;
  if (!overflow) v.counterexample = m;
  if (!overflow && evaluation_cost(f, static_cast<std::size_t>(m)) <= budget) {
    if (satisfies(FiniteStructure::ring_mod(m), f, {}, budget)) throw Error("counterexample failed to verify");
    v.verified_by = "direct";
    return;
  }
  std::vector<FiniteStructure> rings;
  for (const auto& s : stalks) rings.push_back(FiniteStructure::ring_mod(s.value()));
  if (evaluate_translation(translate_cached(f, ring_signature()), ProductStructure(std::move(rings))))
    throw Error("counterexample failed to verify");
  v.verified_by = "crt+fv";
}

}  // namespace

StalkClassification classify_stalks(const Formula& sentence, std::int64_t p_bound, int k_bound,
                                    const ZmodOptions& opts) {
  return type_stalks(sentence, p_bound, k_bound, opts).cls;
}

Verdict decide_all(const Formula& sentence, std::int64_t p_bound, int k_bound, const DecideAllOptions& opts) {
  TypedStalks ts = type_stalks(sentence, p_bound, k_bound, opts.zmod);
  Verdict v;
  PatternCertificate cert;
  cert.classes = ts.cls.class_count;
  cert.max_selection = opts.max_selection;
  // Single stalks first, smallest modulus.
  std::optional<std::size_t> bad;
  std::set<bool> truths;
  for (std::size_t u = 0; u < ts.cls.table.size(); ++u) {
    const auto& e = ts.cls.table[u];
    if (!e.truth) continue;
    truths.insert(*e.truth);
    if (!*e.truth && (!bad || ts.rings[u].size() < ts.rings[*bad].size())) bad = u;
  }
  cert.uniform = truths.size() <= 1;
  if (bad) {
    const auto& e = ts.cls.table[*bad];
    verify_counterexample(sentence, v, {{e.p, e.k}}, opts.zmod.budget);
    v.status = Verdict::Status::Fails;
    cert.selections_checked = 1;
    v.certificate = cert;
    return v;
  }
  std::vector<const FactorTyper*> reps;
  for (std::size_t u : ts.representative) reps.push_back(ts.typers[u].get());
  cert.multiplicity_needed = multiplicity_needed(*ts.t.root, reps);
  // Per-class multiplicity bound: the needed count, or the primes available.
  std::vector<std::uint64_t> bound(ts.cls.class_count, 0);
  {
    std::vector<std::set<std::int64_t>> primes(ts.cls.class_count);
    for (const auto& e : ts.cls.table)
      if (e.type_class >= 0) primes[static_cast<std::size_t>(e.type_class)].insert(e.p);
    for (std::size_t c = 0; c < bound.size(); ++c)
      bound[c] = std::min<std::uint64_t>(cert.multiplicity_needed, primes[c].size());
  }
  std::uint64_t total_needed = 0;
  for (auto b : bound) total_needed += b;
  bool budget_hit = false;
  const FvNode& root = *ts.t.root;
  std::vector<int> slots;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t c, std::size_t left) -> bool {
    if (left == 0) {
      if (cert.selections_checked >= opts.selection_budget) {
        budget_hit = true;
        return false;
      }
      auto chosen = assign_primes(ts, slots);
      if (!chosen) return false;
      ++cert.selections_checked;
      std::vector<FactorTyper*> typers;
      std::vector<int> types;
      for (int s : slots) {
        const std::size_t u = ts.representative[static_cast<std::size_t>(s)];
        typers.push_back(ts.typers[u].get());
        types.push_back(ts.ids[u]);
      }
      if (TypeEvaluator(typers).eval(root, types)) return false;
      std::vector<PrimePower> stalks;
      for (std::size_t u : *chosen) stalks.push_back({ts.cls.table[u].p, ts.cls.table[u].k});
      std::sort(stalks.begin(), stalks.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
      verify_counterexample(sentence, v, stalks, opts.zmod.budget);
      return true;
    }
    if (c == bound.size()) return false;
    for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(bound[c], left); ++k) {
      for (std::uint64_t i = 0; i < k; ++i) slots.push_back(static_cast<int>(c));
      const bool found = search(c + 1, left - k);
      for (std::uint64_t i = 0; i < k; ++i) slots.pop_back();
      if (found) return true;
      if (budget_hit) return false;
    }
    return false;
  };
  for (std::size_t size = 2; size <= opts.max_selection && !budget_hit; ++size)
    if (search(0, size)) {
      v.status = Verdict::Status::Fails;
      v.certificate = cert;
      return v;
    }
  cert.exhaustive = !budget_hit && total_needed <= opts.max_selection;
  v.status = Verdict::Status::HoldsAssumingStabilization;
  v.certificate = cert;
  return v;
}

}  // namespace adelic
