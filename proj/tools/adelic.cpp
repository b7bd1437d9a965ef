// adelic: command-line front end.
//
// Exit status: 0 success, 1 a check failed (oracle mismatch, failed axiom,
// failed criterion, budget exhausted), 2 usage or input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "adelic/acceptance.hpp"
#include "adelic/boolean_qe.hpp"
#include "adelic/error.hpp"
#include "adelic/fv.hpp"
#include "adelic/hilbert.hpp"
#include "adelic/kernels.hpp"
#include "adelic/parse.hpp"
#include "adelic/product.hpp"
#include "adelic/ring_calculus.hpp"
#include "adelic/zmod.hpp"
#include "json.hpp"

using namespace adelic;
using json = nlohmann::json;

namespace {

constexpr const char* kSchema = "adelic.report/1";

struct Global {
  bool json = false;
  bool timings = false;
  std::uint64_t seed = 1;
  int jobs = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct FormulaInput {
  std::string text;
  std::string file;

  void add_to(CLI::App* app, const std::string& what = "formula") {
    auto* f = app->add_option("-f,--formula", text, what);
    auto* p = app->add_option("--file", file, "file with one " + what + " per line")->check(CLI::ExistingFile);
    f->excludes(p);
  }

  std::vector<FormulaLine> all(const Signature& sig) const {
    if (!text.empty()) return {{1, text, parse_formula(text, sig)}};
    if (!file.empty()) return read_formula_file(file, sig);
    throw UsageError("give --formula or --file");
  }

  Formula one(const Signature& sig) const {
    auto lines = all(sig);
    if (lines.size() != 1)
      throw UsageError("expected exactly one formula, found " + std::to_string(lines.size()) + " in " + file);
    return lines[0].formula;
  }
};

const Signature& signature_named(const std::string& name) {
  if (name == "ring") return ring_signature();
  if (name == "bool" || name == "boolean") return boolean_signature();
  throw UsageError("unknown language '" + name + "' (ring or bool)");
}

json vars_json(const std::set<Variable>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(v.name + ":" + v.sort);
  return out;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

json opt_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

// ---- parse -----------------------------------------------------------------

struct ParseCmd {
  FormulaInput in;
  std::string language = "ring";
  bool sorts = false;

  int run(const Global&, json& out) const {
    const Signature& sig = signature_named(language);
    out["formulas"] = json::array();
    for (const auto& l : in.all(sig)) {
      const std::string r = render(l.formula, {.annotate_sorts = sorts});
      const bool round_trip = parse_formula(render(l.formula), sig) == l.formula;
      out["formulas"].push_back({{"line", l.line},
                                 {"rendered", r},
                                 {"free", vars_json(l.formula.free_vars())},
                                 {"quantifier_depth", l.formula.quantifier_depth()},
                                 {"round_trip", round_trip}});
      if (!round_trip) throw OracleMismatch("render/parse round trip changed line " + std::to_string(l.line));
    }
    return 0;
  }

  static void human(const json& out) {
    for (const auto& f : out["formulas"]) std::cout << f["rendered"].get<std::string>() << "\n";
  }
};

// ---- qe-bool / decide-bool ---------------------------------------------------

struct QeBoolCmd {
  FormulaInput in;

  int run(const Global&, json& out) const {
    const Formula f = in.one(boolean_signature());
    QeStats st;
    const Formula q = eliminate_quantifiers(f, &st);
    out["input"] = render(f);
    out["result"] = render(q);
    out["threshold"] = st.threshold;
    out["modulus"] = st.modulus;
    out["mdd_nodes"] = st.mdd_nodes;
    return 0;
  }

  static void human(const json& out) { std::cout << out["result"].get<std::string>() << "\n"; }
};

struct DecideBoolCmd {
  FormulaInput in;
  bool witness = false;
  bool check = false;
  std::uint64_t fuel = 0;

  int run(const Global&, json& out) const {
    const Formula f = in.one(boolean_signature());
    if (!f.is_sentence()) throw UsageError("decide-bool needs a sentence; free: " + vars_json(f.free_vars()).dump());
    const bool value = decide_sentence(f);
    out["input"] = render(f);
    out["value"] = value;
    if (witness) {
      auto w = sentence_witness(f);
      out["witness"] = w ? json(w->str()) : json(nullptr);
    }
    if (check) {
      const std::uint64_t need = sufficient_fuel(f);
      const WitnessResult r = bounded_witness_evaluate(f, {}, fuel ? fuel : need);
      out["oracle"] = {{"value", r.value}, {"fuel", r.fuel}, {"sufficient_fuel", r.sufficient_fuel},
                       {"sound_only", r.sound_only}};
      if (r.value != value && !r.sound_only)
        throw OracleMismatch("elimination says " + yes_no(value) + ", witness search says " + yes_no(r.value));
    }
    return 0;
  }

  static void human(const json& out) {
    std::cout << (out["value"].get<bool>() ? "true" : "false") << "\n";
    if (out.contains("witness"))
      std::cout << "witness: " << (out["witness"].is_null() ? "none" : out["witness"].get<std::string>()) << "\n";
    if (out.contains("oracle"))
      std::cout << "witness search at fuel " << out["oracle"]["fuel"] << ": "
                << (out["oracle"]["value"].get<bool>() ? "true" : "false")
                << (out["oracle"]["sound_only"].get<bool>() ? " (below sufficient fuel)" : "") << "\n";
  }
};

// ---- fv / eval-product -------------------------------------------------------

struct FvCmd {
  FormulaInput in;
  std::string restrict;
  std::uint64_t limit = 64;

  int run(const Global&, json& out) const {
    const Formula f = in.one(ring_signature());
    std::optional<Formula> phi;
    if (!restrict.empty()) phi = parse_formula(restrict, ring_signature());
    const FvTranslation t = translate(f, ring_signature(), phi);
    out["input"] = render(t.input);
    out["log2_local_count"] = t.log2_local_count();
    out["local_count"] = t.local_count() ? json(*t.local_count()) : json(nullptr);
    if (t.local_count() && *t.local_count() <= limit) {
      json locals = json::array();
      for (const auto& psi : t.local_formulas(limit)) locals.push_back(render(psi));
      out["locals"] = locals;
      try {
        out["theta"] = render(t.boolean_formula(limit));
      } catch (const BudgetExceeded&) {
        out["theta"] = nullptr;
      }
    } else {
      out["locals"] = nullptr;
      out["theta"] = nullptr;
    }
    return 0;
  }

  static void human(const json& out) {
    if (out["locals"].is_null()) {
      std::cout << "2^" << out["log2_local_count"].get<double>() << " local formulas; raise --limit to list them\n";
      return;
    }
    int i = 1;
    for (const auto& psi : out["locals"]) std::cout << "psi_" << i++ << ": " << psi.get<std::string>() << "\n";
    std::cout << "Theta: " << (out["theta"].is_null() ? "(too large)" : out["theta"].get<std::string>()) << "\n";
  }
};

struct EvalProductCmd {
  FormulaInput in;
  std::string factors;
  std::string product_file;
  long double budget = kDefaultEvalBudget;

  int run(const Global&, json& out) const {
    const Formula f = in.one(ring_signature());
    if (!f.is_sentence()) throw UsageError("eval-product needs a sentence");
    ProductStructure p;
    if (!factors.empty()) {
      p = parse_product_spec(factors);
    } else if (!product_file.empty()) {
      p = read_product_file(product_file);
    } else {
      throw UsageError("give --factors or --product");
    }
    if (p.index_count() == 0) throw UsageError("empty product");
    const bool direct = eval_direct(p, f, budget);
    const bool fv = evaluate_translation(translate(f, ring_signature()), p);
    out["input"] = render(f);
    out["product"] = p.describe();
    out["direct"] = direct;
    out["fv"] = fv;
    out["agree"] = direct == fv;
    if (direct != fv)
      throw OracleMismatch("direct evaluation says " + yes_no(direct) + ", FV translation says " + yes_no(fv));
    return 0;
  }

  static void human(const json& out) {
    std::cout << out["product"].get<std::string>() << "\n"
              << "direct: " << yes_no(out["direct"].get<bool>()) << "\n"
              << "fv:     " << yes_no(out["fv"].get<bool>()) << "\n";
  }
};

// ---- decide-zmod ---------------------------------------------------------------

json stalks_json(const std::vector<PrimePower>& v) {
  json out = json::array();
  for (const auto& pk : v) out.push_back({pk.p, pk.k});
  return out;
}

struct DecideZmodCmd {
  FormulaInput in;
  std::int64_t max_m = 0;
  std::int64_t p_bound = kDefaultPBound;
  int k_bound = kDefaultKBound;
  bool table = false;
  long double budget = 2e8L;

  int run(const Global& g, json& out) const {
    const Formula f = in.one(ring_signature());
    if (!f.is_sentence()) throw UsageError("decide-zmod needs a sentence");
    out["input"] = render(f);
    Verdict v;
    if (max_m > 0) {
      v = decide_up_to(f, max_m, {budget, g.jobs});
      out["mode"] = "up_to";
      out["max_m"] = max_m;
      out["skipped"] = v.skipped;
      out["disagreements"] = v.disagreements;
      if (table) {
        json t = json::array();
        for (const auto& r : v.results) t.push_back({{"m", r.m}, {"direct", opt_bool(r.direct)}, {"crt", opt_bool(r.via_crt)}});
        out["table"] = t;
      }
    } else {
      DecideAllOptions o;
      o.zmod.jobs = g.jobs;
      v = decide_all(f, p_bound, k_bound, o);
      out["mode"] = "structural";
      out["p_bound"] = p_bound;
      out["k_bound"] = k_bound;
      if (v.certificate) {
        const auto& c = *v.certificate;
        out["certificate"] = {{"classes", c.classes},
                              {"multiplicity_needed", c.multiplicity_needed},
                              {"max_selection", c.max_selection},
                              {"selections_checked", c.selections_checked},
                              {"exhaustive", c.exhaustive},
                              {"uniform", c.uniform}};
      }
      if (table) {
        const StalkClassification sc = classify_stalks(f, p_bound, k_bound, {kStalkBudget, g.jobs});
        json t = json::array();
        for (const auto& e : sc.table)
          t.push_back({{"p", e.p}, {"k", e.k}, {"truth", opt_bool(e.truth)}, {"class", e.type_class}});
        out["table"] = t;
        out["class_count"] = sc.class_count;
      }
    }
    out["status"] = status_name(v.status);
    out["counterexample"] = v.counterexample ? json(*v.counterexample) : json(nullptr);
    out["counterexample_stalks"] = stalks_json(v.counterexample_stalks);
    out["verified_by"] = v.verified_by;
    if (!v.disagreements.empty())
      throw OracleMismatch("direct and CRT evaluation disagree at m = " + std::to_string(v.disagreements.front()));
    return 0;
  }

  static void human(const json& out) {
    std::cout << out["status"].get<std::string>() << "\n";
    if (!out["counterexample"].is_null()) {
      std::cout << "counterexample: m = " << out["counterexample"] << " (";
      bool first = true;
      for (const auto& pk : out["counterexample_stalks"]) {
        std::cout << (first ? "" : " x ") << "Z/" << pk[0] << "^" << pk[1];
        first = false;
      }
      std::cout << "), verified by " << out["verified_by"].get<std::string>() << "\n";
    }
    if (out.contains("skipped") && !out["skipped"].empty())
      std::cout << "skipped (over budget): " << out["skipped"].size() << " moduli\n";
    if (out.contains("certificate")) {
      const auto& c = out["certificate"];
      std::cout << c["classes"] << " stalk classes, multiplicity " << c["multiplicity_needed"] << ", "
                << c["selections_checked"] << " selections" << (c["exhaustive"].get<bool>() ? "" : " (not exhaustive)")
                << "\n";
    }
    if (out.contains("table")) {
      for (const auto& r : out["table"]) {
        if (r.contains("m")) {
          std::cout << "  m=" << r["m"] << "  direct=" << (r["direct"].is_null() ? "-" : r["direct"].dump())
                    << "  crt=" << (r["crt"].is_null() ? "-" : r["crt"].dump()) << "\n";
        } else {
          std::cout << "  p=" << r["p"] << " k=" << r["k"] << "  " << (r["truth"].is_null() ? "-" : r["truth"].dump())
                    << "  class " << r["class"] << "\n";
        }
      }
    }
  }
};

// ---- hilbert ----------------------------------------------------------------

Place parse_place(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "oo" || s == "0") return Place::infinity();
  try {
    std::size_t used = 0;
    const std::int64_t p = std::stoll(s, &used);
    if (used == s.size()) return Place::prime(p);
  } catch (const Error&) {
    throw UsageError("place must be 'inf' or a prime: '" + s + "'");
  } catch (...) {
  }
  throw UsageError("place must be 'inf' or a prime: '" + s + "'");
}

json symbol_json(const SymbolReport& r) {
  return {{"place", r.place.str()}, {"closed", r.closed}, {"oracle", r.oracle}, {"modulus_exponent", r.modulus_exponent}};
}

struct HilbertCmd {
  std::string a, b, place;
  std::int64_t sweep = 0;

  int run(const Global& g, json& out) const {
    if (sweep > 0) {
      if (!a.empty() || !b.empty()) throw UsageError("--sweep excludes --a/--b");
      const auto cells = hilbert_sweep(sweep, true, g.jobs);
      std::size_t bad = 0, symbols = 0;
      json failures = json::array();
      for (const auto& c : cells) {
        symbols += 1 + c.finite.size();
        if (!c.product_is_one) {
          ++bad;
          failures.push_back({c.a, c.b});
        }
      }
      out["n"] = sweep;
      out["pairs"] = cells.size();
      out["symbols"] = symbols;
      out["products_not_one"] = failures;
      if (bad) throw OracleMismatch(std::to_string(bad) + " pairs with product of symbols != 1");
      return 0;
    }
    if (a.empty() || b.empty()) throw UsageError("give --a and --b, or --sweep N");
    const RationalNZ ra = RationalNZ::parse(a), rb = RationalNZ::parse(b);
    out["a"] = ra.str();
    out["b"] = rb.str();
    if (!place.empty()) {
      out["symbols"] = json::array({symbol_json(hilbert_report(ra, rb, parse_place(place)))});
      return 0;
    }
    const ProductReport pr = product_formula_check(ra, rb);
    json syms = json::array();
    for (const auto& s : pr.symbols) syms.push_back(symbol_json(s));
    out["symbols"] = syms;
    out["product"] = pr.product;
    const KernelReport k = adelic_kernel_check(ra, rb);
    json failing = json::array();
    for (const auto& v : k.failing) failing.push_back(v.str());
    out["kernel"] = {{"failing_places", failing}, {"even", k.even}, {"res20", k.res20}};
    return 0;
  }

  static void human(const json& out) {
    if (out.contains("pairs")) {
      std::cout << out["pairs"] << " pairs, " << out["symbols"] << " symbols, "
                << (out["products_not_one"].empty() ? "all products 1" : "PRODUCT != 1 on some pairs") << "\n";
      return;
    }
    for (const auto& s : out["symbols"]) {
      std::cout << "(" << out["a"].get<std::string>() << "," << out["b"].get<std::string>() << ")_"
                << s["place"].get<std::string>() << " = " << s["closed"];
      const int n = s["modulus_exponent"].get<int>();
      if (n > 0) std::cout << "  (oracle mod " << s["place"].get<std::string>() << "^" << n << ": " << s["oracle"] << ")";
      if (n < 0) std::cout << "  (oracle skipped)";
      std::cout << "\n";
    }
    if (out.contains("product")) std::cout << "product over places: " << out["product"] << "\n";
  }
};

// ---- check-axioms --------------------------------------------------------------

struct CheckAxiomsCmd {
  std::string structure;
  std::string factors;
  std::string product_file;
  std::string phi = "x = x";

  int run(const Global&, json& out) const {
    FiniteStructure ring = [&] {
      if (!structure.empty() + !factors.empty() + !product_file.empty() != 1)
        throw UsageError("give exactly one of --structure, --factors, --product");
      if (!factors.empty()) return product_ring(parse_product_spec(factors));
      if (!product_file.empty()) return product_ring(read_product_file(product_file));
      if (std::ifstream(structure)) return read_structure_file(structure);
      return parse_structure_text(structure);
    }();
    const AxiomReport r = check_restricted_product_axioms(ring, parse_formula(phi, ring_signature()));
    out["ring"] = r.ring_label;
    out["phi"] = phi;
    out["idempotents"] = r.idempotent_count;
    out["atoms"] = r.atoms;
    out["connected"] = r.connected;
    json results = json::array();
    for (const auto& a : r.results) {
      const char* st = a.status == AxiomResult::Status::Pass   ? "pass"
                       : a.status == AxiomResult::Status::Fail ? "fail"
                                                               : "n/a";
      results.push_back({{"name", a.name}, {"status", st}, {"detail", a.detail}});
    }
    out["results"] = results;
    out["all_pass"] = r.all_pass();
    return r.all_pass() ? 0 : 1;
  }

  static void human(const json& out) {
    std::cout << out["ring"].get<std::string>() << ": " << out["idempotents"] << " idempotents, "
              << out["atoms"].size() << " atoms" << (out["connected"].get<bool>() ? ", connected" : "") << "\n";
    for (const auto& r : out["results"]) {
      std::cout << "  " << r["status"].get<std::string>() << "  " << r["name"].get<std::string>();
      const auto d = r["detail"].get<std::string>();
      if (!d.empty()) std::cout << "  " << d;
      std::cout << "\n";
    }
  }
};

// ---- corpus ------------------------------------------------------------------

struct CorpusCmd {
  std::vector<std::string> names;
  bool all = false;
  std::string dir;

  static int list(json& out) {
    json entries = json::array();
    for (const auto& c : acceptance_criteria())
      entries.push_back({{"id", c.id}, {"name", c.name}, {"limit_seconds", c.limit_seconds}, {"summary", c.summary}});
    out["entries"] = entries;
    return 0;
  }

  int run(const Global& g, json& out) const {
    std::vector<int> ids;
    if (all) {
      if (!names.empty()) throw UsageError("--all excludes entry names");
      for (const auto& c : acceptance_criteria()) ids.push_back(c.id);
    } else {
      if (names.empty()) throw UsageError("name entries to run, or --all");
      for (const auto& n : names) ids.push_back(criterion_by_name(n).id);
    }
    // Entries run side by side up to --jobs; the threads of the machine are
    // shared out among them for the kernels inside each entry.
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int lanes = std::max(1, std::min<int>(g.jobs > 0 ? g.jobs : 1, static_cast<int>(ids.size())));
    AcceptanceOptions base;
    base.seed = g.seed;
    base.corpus_dir = dir.empty() ? default_corpus_dir() : dir;
    base.jobs = std::max(1, hw / lanes);

    std::vector<CriterionResult> results(ids.size());
    std::vector<std::string> errors(ids.size());
    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next == ids.size()) return;
          i = next++;
        }
        try {
          results[i] = run_criterion(ids[i], base);
        } catch (const std::exception& e) {
          errors[i] = e.what();
          results[i].id = ids[i];
          results[i].pass = false;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < lanes; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool ok = true;
    json entries = json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& r = results[i];
      const auto& info = acceptance_criteria()[static_cast<std::size_t>(ids[i] - 1)];
      json e = {{"id", info.id},       {"name", info.name},         {"pass", r.pass},
                {"cases", r.cases},    {"failures", r.failures},   {"within_limit", r.within_limit},
                {"notes", r.notes},    {"limit_seconds", info.limit_seconds}};
      if (!errors[i].empty()) e["error"] = errors[i];
      if (g.timings) e["seconds"] = r.seconds;
      entries.push_back(e);
      ok = ok && r.pass;
    }
    out["seed"] = g.seed;
    out["entries"] = entries;
    out["all_pass"] = ok;
    return ok ? 0 : 1;
  }

  static void human(const json& out) {
    for (const auto& e : out["entries"]) {
      if (!e.contains("pass")) {
        std::cout << e["id"] << "  " << e["name"].get<std::string>() << "  " << e["summary"].get<std::string>()
                  << "\n";
        continue;
      }
      std::cout << e["id"] << "  " << e["name"].get<std::string>() << "  " << (e["pass"].get<bool>() ? "PASS" : "FAIL")
                << "  " << e["cases"] << " checks, " << e["failures"] << " failed";
      if (e.contains("seconds")) std::cout << ", " << e["seconds"].get<double>() << "s";
      if (!e["within_limit"].get<bool>()) std::cout << " (over time limit)";
      std::cout << "\n";
      if (e.contains("error")) std::cout << "    error: " << e["error"].get<std::string>() << "\n";
      for (const auto& n : e["notes"]) std::cout << "    " << n.get<std::string>() << "\n";
    }
  }
};

int default_jobs() {
  if (const char* env = std::getenv("ADELIC_JOBS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for enriched Boolean algebras, products of rings and Hilbert symbols"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  g.jobs = default_jobs();
  app.add_flag("--json", g.json, "machine-readable report");
  app.add_flag("--timings", g.timings, "include wall-clock timings in reports");
  app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
  app.add_option("-j,--jobs", g.jobs, "parallel jobs (default $ADELIC_JOBS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  ParseCmd parse_cmd;
  auto* parse = app.add_subcommand("parse", "parse and pretty-print formulas");
  parse_cmd.in.add_to(parse);
  parse->add_option("--language", parse_cmd.language, "ring or bool")->capture_default_str();
  parse->add_flag("--sorts", parse_cmd.sorts, "annotate bound variables with sorts");

  QeBoolCmd qe_cmd;
  auto* qe = app.add_subcommand("qe-bool", "quantifier elimination in enriched Boolean algebras");
  qe_cmd.in.add_to(qe);

  DecideBoolCmd db_cmd;
  auto* db = app.add_subcommand("decide-bool", "decide an enriched Boolean sentence");
  db_cmd.in.add_to(db, "sentence");
  db->add_flag("--witness", db_cmd.witness, "describe a witness or counterexample");
  db->add_flag("--check", db_cmd.check, "cross-check with the witness search");
  db->add_option("--fuel", db_cmd.fuel, "witness search fuel (default: sufficient)")->check(CLI::PositiveNumber);

  FvCmd fv_cmd;
  auto* fv = app.add_subcommand("fv", "Feferman-Vaught translation of a ring formula");
  fv_cmd.in.add_to(fv);
  fv->add_option("--restrict", fv_cmd.restrict, "restricting formula in one free variable");
  fv->add_option("--limit", fv_cmd.limit, "list locals only up to this many")->capture_default_str();

  EvalProductCmd ep_cmd;
  auto* ep = app.add_subcommand("eval-product", "evaluate a sentence in a product directly and through FV");
  ep_cmd.in.add_to(ep, "sentence");
  auto* epf = ep->add_option("--factors", ep_cmd.factors, "e.g. zmod:4,zmod:9");
  auto* epp = ep->add_option("--product", ep_cmd.product_file, "product file")->check(CLI::ExistingFile);
  epf->excludes(epp);
  ep->add_option("--budget", ep_cmd.budget, "atom evaluations allowed for the direct route");

  DecideZmodCmd dz_cmd;
  auto* dz = app.add_subcommand("decide-zmod", "decide a ring sentence across the rings Z/m");
  dz_cmd.in.add_to(dz, "sentence");
  auto* dzm = dz->add_option("--max-m", dz_cmd.max_m, "exact check for 2 <= m <= M")->check(CLI::Range(2, 1000000));
  auto* dzp = dz->add_option("--p-bound", dz_cmd.p_bound, "stalk primes up to P")->check(CLI::Range(2, 100000));
  auto* dzk = dz->add_option("--k-bound", dz_cmd.k_bound, "stalk exponents up to K")->check(CLI::Range(1, 64));
  dzm->excludes(dzp)->excludes(dzk);
  dz->add_flag("--table", dz_cmd.table, "print the per-modulus or stalk table");
  dz->add_option("--budget", dz_cmd.budget, "atom evaluations per ring (exact mode)");

  HilbertCmd h_cmd;
  auto* h = app.add_subcommand("hilbert", "Hilbert symbols and the product formula");
  h->add_option("--a", h_cmd.a, "rational a, e.g. -3 or 2/5");
  h->add_option("--b", h_cmd.b, "rational b");
  h->add_option("--place", h_cmd.place, "inf or a prime; default: all relevant places");
  h->add_option("--sweep", h_cmd.sweep, "grid a, b in +-1..+-N")->check(CLI::Range(1, 1000));

  CheckAxiomsCmd ca_cmd;
  auto* ca = app.add_subcommand("check-axioms", "restricted-product axioms on a finite ring");
  ca->add_option("--structure", ca_cmd.structure, "structure file, or inline spec such as 'ring mod 12'");
  ca->add_option("--factors", ca_cmd.factors, "product spec, checked as one table ring");
  ca->add_option("--product", ca_cmd.product_file, "product file, checked as one table ring")->check(CLI::ExistingFile);
  ca->add_option("--phi", ca_cmd.phi, "restricting formula in x")->capture_default_str();

  CorpusCmd c_cmd;
  auto* corpus = app.add_subcommand("corpus", "acceptance corpus");
  corpus->require_subcommand(1);
  corpus->fallthrough();
  auto* clist = corpus->add_subcommand("list", "list entries");
  auto* crun = corpus->add_subcommand("run", "run entries");
  crun->add_option("names", c_cmd.names, "entry names");
  crun->add_flag("--all", c_cmd.all, "run every entry");
  crun->add_option("--dir", c_cmd.dir, "corpus directory (default $ADELIC_CORPUS or the in-tree corpus)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  json out = {{"schema", kSchema}};
  std::function<void(const json&)> human;
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    auto dispatch = [&](CLI::App* sub, const std::string& name, auto& cmd) {
      if (!sub->parsed()) return false;
      out["command"] = name;
      code = cmd.run(g, out);
      human = [&cmd](const json& j) { std::decay_t<decltype(cmd)>::human(j); };
      return true;
    };
    if (clist->parsed()) {
      out["command"] = "corpus list";
      code = CorpusCmd::list(out);
      human = CorpusCmd::human;
    } else if (!dispatch(parse, "parse", parse_cmd) && !dispatch(qe, "qe-bool", qe_cmd) &&
               !dispatch(db, "decide-bool", db_cmd) && !dispatch(fv, "fv", fv_cmd) &&
               !dispatch(ep, "eval-product", ep_cmd) && !dispatch(dz, "decide-zmod", dz_cmd) &&
               !dispatch(h, "hilbert", h_cmd) && !dispatch(ca, "check-axioms", ca_cmd)) {
      dispatch(crun, "corpus run", c_cmd);
    }
  } catch (const OracleMismatch& e) {
    out["error"] = {{"kind", "oracle_mismatch"}, {"message", e.what()}};
    code = 1;
  } catch (const BudgetExceeded& e) {
    out["error"] = {{"kind", "budget_exceeded"}, {"message", e.what()}};
    code = 1;
  } catch (const std::exception& e) {
    out["error"] = {{"kind", "usage"}, {"message", e.what()}};
    code = 2;
  }
  if (g.timings)
    out["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out["exit"] = code;

  if (g.json) {
    std::cout << out.dump(2) << "\n";
  } else if (out.contains("error")) {
    std::cerr << "adelic: " << out["error"]["message"].get<std::string>() << "\n";
  } else if (human) {
    human(out);
  }
  return code;
}
