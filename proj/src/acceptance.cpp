#include "adelic/acceptance.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <set>

#include "adelic/boolean_qe.hpp"
#include "adelic/error.hpp"
#include "adelic/evaluate.hpp"
#include "adelic/fv.hpp"
#include "adelic/hilbert.hpp"
#include "adelic/kernels.hpp"
#include "adelic/parse.hpp"
#include "adelic/product.hpp"
#include "adelic/random_formulas.hpp"
#include "adelic/ring_calculus.hpp"
#include "adelic/zmod.hpp"

#ifndef ADELIC_CORPUS_DIR
#define ADELIC_CORPUS_DIR "corpus"
#endif

namespace adelic {

namespace {

constexpr std::size_t kMaxNotes = 8;

// Collects failures; keeps the first few messages.
class Tally {
 public:
  explicit Tally(CriterionResult& r) : r_(r) {}
  void check(bool ok, const std::function<std::string()>& what) {
    std::lock_guard<std::mutex> lock(mu_);
    ++r_.cases;
    if (ok) return;
    ++r_.failures;
    if (shown_++ < kMaxNotes) r_.notes.push_back("FAIL " + what());
  }
  void note(const std::string& s) {
    std::lock_guard<std::mutex> lock(mu_);
    r_.notes.push_back(s);
  }

 private:
  CriterionResult& r_;
  std::mutex mu_;
  std::size_t shown_ = 0;
};

int threads(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) out.push_back({p, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

bool squarefree(std::int64_t n) {
  for (auto [p, k] : factor(n))
    if (k > 1) return false;
  return true;
}

ProductStructure zmod_product(const std::vector<std::int64_t>& ns) {
  std::vector<FiniteStructure> fs;
  for (auto n : ns) fs.push_back(FiniteStructure::ring_mod(n));
  return ProductStructure(std::move(fs));
}

ProductStructure random_zmod_product(std::mt19937_64& rng, int lo, int hi, int max_n) {
  std::uniform_int_distribution<int> count(lo, hi), mod(2, max_n);
  std::vector<std::int64_t> ns;
  for (int i = count(rng); i > 0; --i) ns.push_back(mod(rng));
  return zmod_product(ns);
}

BooleanElement random_element(std::mt19937_64& rng) {
  using Nat = BooleanElement::Nat;
  std::uniform_int_distribution<Nat> mod(1, 4), small(0, 11), coin(0, 2);
  const Nat n = mod(rng);
  std::vector<bool> res(n);
  for (Nat i = 0; i < n; ++i) res[i] = coin(rng) == 0;
  std::set<Nat> add, rem;
  for (int i = 0; i < 3; ++i) {
    if (coin(rng) == 0) add.insert(small(rng));
    if (coin(rng) == 0) rem.insert(small(rng));
  }
  return BooleanElement::make(n, res, add, rem);
}

// 1. Feferman-Vaught translation vs direct evaluation on finite products.
void fv_soundness(const AcceptanceOptions& o, CriterionResult& r, Tally& t) {
  constexpr int kSentences = 500;
  // Direct evaluation of a depth-3 sentence on 4 factors of size 9 needs
  // ~6561^3 steps; products over this budget are redrawn.
  constexpr long double kBudget = 2e8L;
  const std::uint64_t seed = entry_seed(o.seed, r.name);
  RingFormulaGen gen(seed, {.max_depth = 3, .max_connectives = 3});
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Formula> fs;
  std::vector<ProductStructure> ps;
  std::size_t redrawn = 0, factor_total = 0;
  for (int i = 0; i < kSentences; ++i) {
    Formula f = gen.sentence();
    ProductStructure p = random_zmod_product(rng, 2, 4, 9);
    for (int tries = 0; direct_cost(p, f) > kBudget; ++tries, ++redrawn)
      p = tries < 50 ? random_zmod_product(rng, 2, 4, 9) : random_zmod_product(rng, 2, 3, 5);
    factor_total += p.index_count();
    fs.push_back(f);
    ps.push_back(std::move(p));
  }
  for (const auto& f : fs) translate_cached(f, ring_signature());
#pragma omp parallel for schedule(dynamic) num_threads(threads(o.jobs))
  for (int i = 0; i < kSentences; ++i) {
    bool direct = false, fv = false;
    std::string err;
    try {
      direct = eval_direct(ps[i], fs[i], kBudget);
      fv = evaluate_translation(translate_cached(fs[i], ring_signature()), ps[i]);
    } catch (const std::exception& e) {
      err = e.what();
    }
    t.check(err.empty() && direct == fv, [&] {
      return render(fs[i]) + " on " + ps[i].describe() + (err.empty() ? "" : ": " + err);
    });
  }
  t.note(std::to_string(kSentences) + " sentences (depth <= 3, vars x,y,z), mean " +
         std::to_string(static_cast<double>(factor_total) / kSentences).substr(0, 4) + " factors; " +
         std::to_string(redrawn) + " products redrawn for exceeding the direct-evaluation budget");
}

// 2. Boolean QE: axioms decide true; QE output vs the witness search.
void boolean_qe(const AcceptanceOptions& o, CriterionResult& r, Tally& t) {
  const auto axioms = boolean_axioms(4);
  for (const auto& [name, ax] : axioms) t.check(decide_sentence(ax), [&] { return "axiom " + name; });
  t.note(std::to_string(axioms.size()) + " axiom instances");

  const std::uint64_t seed = entry_seed(o.seed, r.name);
  BoolFormulaGen gen(seed, {.max_depth = 2, .max_index = 4});
  std::mt19937_64 rng(seed + 1);
  const Variable a{"a", "bool"}, b{"b", "bool"};
  constexpr int kFormulas = 1000;
  for (int i = 0; i < kFormulas; ++i) {
    Formula f = gen.formula();
    Formula qf = eliminate_quantifiers(f);
    BoolAssignment asg{{a, random_element(rng)}, {b, random_element(rng)}};
    WitnessResult w = bounded_witness_evaluate(f, asg, sufficient_fuel(f));
    t.check(qf.is_quantifier_free() && !w.sound_only && eval_quantifier_free(qf, asg) == w.value,
            [&] { return render(f) + "  ~>  " + render(qf); });
  }
  t.note(std::to_string(kFormulas) + " random formulas (depth <= 2, indices <= 4)");
}

// Closed forms from elementary number theory for four of the sentences.
std::optional<bool> known_truth(const std::string& text, std::int64_t m) {
  const auto f = factor(m);
  if (text == "forall x. forall y. x*y = y*x") return true;
  if (text == "exists x. x*x = x /\\ x != 0 /\\ x != 1") return f.size() >= 2;
  if (text == "forall x. x*x*x = x") return 6 % m == 0;
  if (text == "exists x. x*x = -1") {
    for (auto [p, k] : f)
      if ((p == 2 && k >= 2) || p % 4 == 3) return false;
    return true;
  }
  return std::nullopt;
}

// 3. Ax-problem slice up to m = 1000.
void ax_slice(const AcceptanceOptions& o, CriterionResult&, Tally& t) {
  constexpr std::int64_t kMaxM = 1000;
  const auto lines =
      read_formula_file((std::filesystem::path(o.corpus_dir) / "zmod_sentences.txt").string(), ring_signature());
  t.check(lines.size() == 20, [&] { return "corpus has " + std::to_string(lines.size()) + " sentences, want 20"; });
  std::size_t composite = 0, closed_checked = 0;
  for (const auto& line : lines) {
    Verdict v = decide_up_to(line.formula, kMaxM, {2e8L, o.jobs});
    t.check(v.skipped.empty(), [&] { return line.text + ": " + std::to_string(v.skipped.size()) + " moduli skipped"; });
    t.check(v.disagreements.empty(), [&] {
      return line.text + ": CRT route disagrees at m = " + std::to_string(v.disagreements.front());
    });
    std::optional<std::int64_t> first_false;
    for (const auto& mr : v.results) {
      if (mr.via_crt) ++composite;
      if (!first_false && mr.direct && !*mr.direct) first_false = mr.m;
      if (auto want = known_truth(line.text, mr.m)) {
        ++closed_checked;
        t.check(mr.direct == *want, [&] { return line.text + " at m = " + std::to_string(mr.m); });
      }
    }
    t.check(v.counterexample == first_false && (v.status == Verdict::Status::Fails) == first_false.has_value(),
            [&] { return line.text + ": verdict does not match the per-modulus results"; });
    if (v.counterexample)
      t.check(!satisfies(FiniteStructure::ring_mod(*v.counterexample), line.formula),
              [&] { return line.text + ": counterexample does not refute"; });
    if (line.text == "exists x. x*x = x /\\ x != 0 /\\ x != 1")
      t.check(v.counterexample == 2, [&] { return "idempotent counterexample should be m = 2"; });
    if (line.text == "forall x. x*x*x = x")
      t.check(v.counterexample == 4, [&] { return "x^3 = x counterexample should be m = 4"; });
    if (line.text == "forall x. forall y. x*y = y*x")
      t.check(v.status == Verdict::Status::HoldsForAllChecked, [&] { return "commutativity should hold"; });
  }
  t.note(std::to_string(lines.size()) + " sentences, m <= 1000; " + std::to_string(composite) +
         " CRT cross-checks; " + std::to_string(closed_checked) + " values against closed forms");
}

// 4. Idempotent calculus on Z/n, n <= 200.
void idempotent_calculus(const AcceptanceOptions& o, CriterionResult&, Tally& t) {
  const auto corpus =
      read_formula_file((std::filesystem::path(o.corpus_dir) / "stalk_formulas.txt").string(), ring_signature());
  const Variable x{"x", "ring"};
  std::vector<std::int64_t> literal_fail;
  std::mutex mu;
  auto one = [&](int n) {
    const FiniteStructure m = FiniteStructure::ring_mod(n);
    const IdempotentLattice lat = idempotent_lattice(m);
    const auto fs = factor(n);
    const std::string at = "n=" + std::to_string(n);

    // Stalks at the atoms are the CRT factors Z/p^k, via a -> a mod p^k.
    std::multiset<std::int64_t> want, got;
    for (auto [p, k] : fs) {
      std::int64_t q = 1;
      for (int i = 0; i < k; ++i) q *= p;
      want.insert(q);
    }
    const std::vector<Stalk> stalks = atom_stalks(m, lat);
    for (const Stalk& s : stalks) {
      const auto q = static_cast<std::int64_t>(s.ring.size());
      got.insert(q);
      std::vector<Value> map(static_cast<std::size_t>(q));
      for (std::size_t i = 0; i < map.size(); ++i) map[i] = s.ring.embedding[i] % q;
      t.check(is_ring_isomorphism(s.ring, FiniteStructure::ring_mod(q), map),
              [&] { return at + ": stalk at " + std::to_string(s.e) + " is not Z/" + std::to_string(q); });
    }
    t.check(got == want, [&] { return at + ": stalk sizes differ from the factorization"; });

    // Regularity: a = a^2 x solvable iff (a) = (e) for an idempotent e.
    for (Value a = 0; a < n; ++a)
      t.check(vnr_by_equation(m, a) == vnr_by_idempotent_ideal(m, a),
              [&] { return at + ": regularity characterizations differ at " + std::to_string(a); });

    // Fin-defining formula. Literal reading: exactly the idempotents. Exact
    // finite content: idempotents e whose multiples ae are all regular.
    bool literal = true;
    for (Value e = 0; e < n; ++e) {
      const bool holds = fin_formula_holds(m, lat, e);
      if (n <= 30)
        t.check(holds == fin_formula_holds(m, e),
                [&] { return at + ": reduced and verbatim Fin evaluation differ at " + std::to_string(e); });
      bool regular_multiples = lat.is_idempotent(e);
      for (Value a = 0; regular_multiples && a < n; ++a) regular_multiples = vnr_by_equation(m, m.mul(a, e));
      t.check(holds == regular_multiples, [&] { return at + ": Fin formula at " + std::to_string(e); });
      literal = literal && holds == lat.is_idempotent(e);
    }
    t.check(literal, [&] { return at + ": Fin formula does not define exactly the idempotents"; });
    if (!literal) {
      std::lock_guard<std::mutex> lock(mu);
      literal_fail.push_back(n);
    }

    // Boolean values: supremum of atoms (internal) vs index set (external).
    for (const auto& line : corpus)
      for (Value a = 0; a < n; ++a) {
        const Value internal = boolean_value_by_relativization(m, lat, line.formula, {x}, {a});
        const Value by_atoms = boolean_value_by_atoms(lat, stalks, line.formula, {x}, {a});
        Value external = 0;
        for (std::size_t i = 0; i < lat.atoms.size(); ++i) {
          const auto q = static_cast<std::int64_t>(stalks[i].ring.size());
          if (satisfies(FiniteStructure::ring_mod(q), line.formula, {{x, a % q}}))
            external = lat.join(external, lat.atoms[i]);
        }
        t.check(internal == external && by_atoms == external,
                [&] { return at + ": Boolean value of " + line.text + " at " + std::to_string(a); });
      }
  };
#pragma omp parallel for schedule(dynamic) num_threads(threads(o.jobs))
  for (int n = 2; n <= 200; ++n) {
    try {
      one(n);
    } catch (const std::exception& ex) {
      t.check(false, [&] { return "n=" + std::to_string(n) + ": " + ex.what(); });
    }
  }
  std::sort(literal_fail.begin(), literal_fail.end());
  bool all_non_squarefree = true;
  for (auto n : literal_fail) all_non_squarefree = all_non_squarefree && !squarefree(n);
  std::size_t non_squarefree = 0;
  for (int n = 2; n <= 200; ++n) non_squarefree += !squarefree(n);
  t.note("Fin formula = idempotents fails on " + std::to_string(literal_fail.size()) + " of " +
         std::to_string(non_squarefree) + " non-squarefree n" +
         (all_non_squarefree ? " and on no squarefree n" : " (including squarefree n!)") +
         "; it defines the idempotents e with every ae regular on all n <= 200");
}

// 5. Rectangle decomposition vs the brute-force definable set.
void rectangles_check(const AcceptanceOptions& o, CriterionResult& r, Tally& t) {
  const std::uint64_t seed = entry_seed(o.seed, r.name);
  std::mt19937_64 rng(seed);
  RingFormulaGen gen(seed + 1, {.max_depth = 2});
  const Variable x{"x", "ring"}, y{"y", "ring"};
  constexpr int kPairs = 200;
  for (int i = 0; i < kPairs; ++i) {
    const bool two = i % 2 == 0;
    Formula f = two ? gen.formula({x, y}, 1) : gen.formula({x}, 2);
    std::vector<Variable> vars = two ? std::vector<Variable>{x, y} : std::vector<Variable>{x};
    ProductStructure p = random_zmod_product(rng, 2, 3, two ? 4 : 6);
    auto rects = rectangles(f, vars, p.factors);
    FiniteStructure ring = product_ring(p);
    std::set<std::vector<Value>> want, got;
    for (const auto& row : definable_set(ring, f, vars)) want.insert(row);
    std::size_t total = 0;
    for (const auto& rect : rects) {
      total += rect.cardinality();
      std::vector<std::size_t> pos(rect.sides.size(), 0);
      bool empty = false;
      for (const auto& side : rect.sides) empty = empty || side.empty();
      while (!empty) {
        std::vector<Value> row(vars.size());
        for (std::size_t j = 0; j < vars.size(); ++j) {
          Tuple tu;
          for (std::size_t k = 0; k < rect.sides.size(); ++k) tu.push_back(rect.sides[k][pos[k]][j]);
          row[j] = static_cast<Value>(tuple_rank(p, tu));
        }
        got.insert(row);
        std::size_t k = 0;
        for (; k < pos.size() && ++pos[k] == rect.sides[k].size(); ++k) pos[k] = 0;
        if (k == pos.size()) break;
      }
    }
    t.check(got == want && total == want.size(), [&] { return render(f) + " on " + p.describe(); });
  }
  t.note(std::to_string(kPairs) + " (formula, product) pairs");
}

// 6. Hilbert symbols on the +-30 grid.
void hilbert_grid(const AcceptanceOptions& o, CriterionResult&, Tally& t) {
  std::vector<HilbertCell> cells;
  try {
    cells = hilbert_sweep(30, true, o.jobs);  // every symbol is checked against the solution search
  } catch (const std::exception& e) {
    t.check(false, [&] { return std::string("sweep: ") + e.what(); });
    return;
  }
  std::uint64_t symbols = 0;
  for (const auto& c : cells) {
    symbols += 1 + c.finite.size();
    t.check(c.product_is_one, [&] { return "product formula at (" + std::to_string(c.a) + "," + std::to_string(c.b) + ")"; });
  }
  t.check(cells.size() == 3600, [&] { return "grid has " + std::to_string(cells.size()) + " cells"; });

  std::vector<Place> places{Place::infinity()};
  for (std::int64_t p = 2; p <= 29; ++p)
    if (is_prime(p)) places.push_back(Place{p});
  std::uint64_t identities = 0;
  for (std::int64_t a = -30; a <= 30; ++a) {
    if (!a) continue;
    for (std::int64_t b = -30; b <= 30; ++b) {
      if (!b) continue;
      for (Place v : places) {
        const int ab = hilbert_closed(RationalNZ(a), RationalNZ(b), v);
        t.check(ab == hilbert_closed(RationalNZ(b), RationalNZ(a), v), [&] { return "symmetry"; });
        for (std::int64_t c = -30; c <= 30; ++c) {
          if (!c) continue;
          t.check(hilbert_closed(RationalNZ(a * c), RationalNZ(b), v) ==
                      ab * hilbert_closed(RationalNZ(c), RationalNZ(b), v),
                  [&] { return "bimultiplicativity at a=" + std::to_string(a) + " c=" + std::to_string(c) +
                               " b=" + std::to_string(b) + " v=" + v.str(); });
          ++identities;
        }
      }
    }
  }
  for (Place v : places) {
    const int want = v.p == 2 || v.p == 3 ? -1 : 1;
    t.check(hilbert_symbol(RationalNZ(2), RationalNZ(3), v) == want, [&] { return "(2,3)_" + v.str(); });
  }
  t.note("3600 pairs, " + std::to_string(symbols) + " symbols cross-checked, " + std::to_string(identities) +
         " bimultiplicativity instances");
}

// 7. Axiom checker on Z/n and the corpus products.
void axiom_checker(const AcceptanceOptions& o, CriterionResult&, Tally& t) {
  const std::vector<Formula> phis{parse_formula("x = x", ring_signature()),
                                  parse_formula("exists y. x*y = 1 \\/ x*x = 0", ring_signature())};
  auto check = [&](const FiniteStructure& ring, const std::string& label, std::optional<bool> connected) {
    for (const auto& phi : phis) {
      AxiomReport rep = check_restricted_product_axioms(ring, phi);
      for (const auto& res : rep.results) {
        const bool required = res.name.rfind("Axiom 4", 0) != 0;
        if (required)
          t.check(res.status == AxiomResult::Status::Pass,
                  [&] { return label + ": " + res.name + " " + res.detail; });
      }
      if (connected)
        t.check(rep.connected == *connected, [&] { return label + ": connectedness reported wrongly"; });
    }
  };
#pragma omp parallel for schedule(dynamic) num_threads(threads(o.jobs))
  for (int n = 2; n <= 200; ++n) {
    try {
      check(FiniteStructure::ring_mod(n), "Z/" + std::to_string(n), factor(n).size() == 1);
    } catch (const std::exception& ex) {
      t.check(false, [&] { return "Z/" + std::to_string(n) + ": " + ex.what(); });
    }
  }
  std::size_t products = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(o.corpus_dir) / "products")) {
    ProductStructure p = read_product_file(entry.path().string());
    check(product_ring(p), entry.path().filename().string(), p.index_count() == 1 ? std::optional<bool>{} : false);
    ++products;
  }
  t.note("Z/n for n <= 200 and " + std::to_string(products) + " corpus products, 2 restricting formulas");
}

using Runner = void (*)(const AcceptanceOptions&, CriterionResult&, Tally&);

const std::vector<Runner>& runners() {
  static const std::vector<Runner> r{fv_soundness, boolean_qe,       ax_slice,     idempotent_calculus,
                                     rectangles_check, hilbert_grid, axiom_checker};
  return r;
}

}  // namespace

const std::vector<CriterionInfo>& acceptance_criteria() {
  static const std::vector<CriterionInfo> c{
      {1, "fv-soundness", 600, "FV translation equals direct truth on 500 random sentences and products"},
      {2, "boolean-qe", 300, "axioms decide true; QE agrees with the witness search on 1000 formulas"},
      {3, "ax-slice", 900, "20 sentences over Z/m, m <= 1000: brute force, CRT route and counterexamples"},
      {4, "idempotent-calculus", 300, "stalks, regularity, Fin formula and Boolean values on Z/n, n <= 200"},
      {5, "rectangles", 300, "rectangle unions equal definable sets on 200 random pairs"},
      {6, "hilbert", 120, "Hilbert symbols on the +-30 grid: product formula, oracle, identities, (2,3)"},
      {7, "axiom-checker", 120, "Axioms 1, 2, 3, 5 on Z/n, n <= 200, and corpus products; connectedness"},
  };
  return c;
}

const CriterionInfo& criterion_by_name(const std::string& name) {
  for (const auto& c : acceptance_criteria())
    if (c.name == name || std::to_string(c.id) == name) return c;
  throw Error("unknown corpus entry '" + name + "'");
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("ADELIC_CORPUS"); env && *env) return env;
  return ADELIC_CORPUS_DIR;
}

std::uint64_t entry_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h ^ (seed * 0x9e3779b97f4a7c15ULL);
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > static_cast<int>(acceptance_criteria().size())) throw Error("no criterion " + std::to_string(id));
  const CriterionInfo& info = acceptance_criteria()[static_cast<std::size_t>(id - 1)];
  AcceptanceOptions o = opts;
  if (o.corpus_dir.empty()) o.corpus_dir = default_corpus_dir();
  CriterionResult r;
  r.id = id;
  r.name = info.name;
  Tally t(r);
  const auto start = std::chrono::steady_clock::now();
  try {
    runners()[static_cast<std::size_t>(id - 1)](o, r, t);
  } catch (const std::exception& e) {
    t.check(false, [&] { return std::string("aborted: ") + e.what(); });
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.within_limit = r.seconds <= info.limit_seconds;
  r.pass = r.failures == 0 && r.within_limit;
  return r;
}

}  // namespace adelic
