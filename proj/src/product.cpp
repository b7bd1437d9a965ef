#include "adelic/product.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "adelic/error.hpp"
#include "adelic/ring_calculus.hpp"

namespace adelic {

ProductStructure::ProductStructure(std::vector<FiniteStructure> fs, std::vector<std::string> names)
    : labels(std::move(names)), factors(std::move(fs)) {
  if (factors.empty()) throw Error("a product needs at least one factor");
  if (factors.size() > 64) throw Error("at most 64 factors");
  for (const auto& f : factors)
    if (!f.is_ring()) throw SortError("product factors must be rings");
  if (labels.empty())
    for (const auto& f : factors) labels.push_back(f.label);
  if (labels.size() != factors.size()) throw Error("one label per factor");
}

std::size_t ProductStructure::size() const {
  std::size_t n = 1;
  for (const auto& f : factors) {
    if (n > std::numeric_limits<std::size_t>::max() / f.size()) return std::numeric_limits<std::size_t>::max();
    n *= f.size();
  }
  return n;
}

std::string ProductStructure::describe() const {
  std::string s;
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " x " : "") + factors[i].label;
  return s;
}

Tuple ProductStructure::add(const Tuple& a, const Tuple& b) const {
  Tuple r(factors.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = factors[i].add(a[i], b[i]);
  return r;
}

Tuple ProductStructure::mul(const Tuple& a, const Tuple& b) const {
  Tuple r(factors.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = factors[i].mul(a[i], b[i]);
  return r;
}

Tuple ProductStructure::zero() const {
  Tuple r;
  for (const auto& f : factors) r.push_back(f.zero());
  return r;
}

Tuple ProductStructure::one() const {
  Tuple r;
  for (const auto& f : factors) r.push_back(f.one());
  return r;
}

Tuple ProductStructure::element(std::size_t rank) const {
  Tuple r(factors.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = static_cast<Value>(rank % factors[i].size());
    rank /= factors[i].size();
  }
  return r;
}

std::size_t tuple_rank(const ProductStructure& p, const Tuple& a) {
  std::size_t r = 0;
  for (std::size_t i = p.factors.size(); i-- > 0;) r = r * p.factors[i].size() + static_cast<std::size_t>(a[i]);
  return r;
}

IndexSet boolean_value(const ProductStructure& p, const Formula& f, const TupleAssignment& asg) {
  std::vector<Variable> vars;
  for (const auto& [v, t] : asg) {
    if (t.size() != p.index_count()) throw SortError("assignment to '" + v.name + "' has the wrong length");
    vars.push_back(v);
  }
  for (const auto& v : f.free_vars())
    if (!asg.count(v)) throw Error("unassigned free variable '" + v.name + "'");
  IndexSet out = 0;
  std::vector<Value> vals(vars.size());
  for (std::size_t i = 0; i < p.index_count(); ++i) {
    PreparedFormula pf(p.factors[i], f, vars);
    for (std::size_t j = 0; j < vars.size(); ++j) vals[j] = asg.at(vars[j])[i];
    if (pf(vals)) out |= IndexSet{1} << i;
  }
  return out;
}

IndexSet support(const ProductStructure& p, const Tuple& a) {
  IndexSet s = 0;
  for (std::size_t i = 0; i < p.index_count(); ++i)
    if (a[i] != p.factors[i].zero()) s |= IndexSet{1} << i;
  return s;
}

Tuple idempotent_of_set(const ProductStructure& p, IndexSet x) {
  Tuple r(p.index_count());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (x >> i) & 1 ? p.factors[i].one() : p.factors[i].zero();
  return r;
}

namespace {

ProductModel product_model(const ProductStructure& p) {
  if (p.index_count() > 8) throw Error("direct evaluation supports at most 8 factors");
  std::vector<const FiniteStructure*> fs;
  for (const auto& f : p.factors) {
    if (f.size() > 256) throw Error("direct evaluation supports factors of at most 256 elements");
    fs.push_back(&f);
  }
  return ProductModel(fs);
}

}  // namespace

long double direct_cost(const ProductStructure& p, const Formula& f) {
  return evaluation_cost(f, p.size());
}

bool eval_direct(const ProductStructure& p, const Formula& sentence, long double budget) {
  if (!sentence.is_sentence()) throw Error("eval_direct expects a sentence");
  long double c = direct_cost(p, sentence);
  if (c > budget) throw BudgetExceeded("direct evaluation on " + p.describe() + " needs ~" + std::to_string(c) +
                                       " atom evaluations");
  ProductModel m = product_model(p);
  CompiledFormula<ProductModel> cf(sentence, m, {});
  std::vector<Value> env(cf.slots() + 1);
  return cf.eval(env.data());
}

FiniteStructure product_ring(const ProductStructure& p, std::size_t max_size) {
  const std::size_t n = p.size();
  if (n > max_size) throw BudgetExceeded("product ring of size " + std::to_string(n) + " exceeds " +
                                         std::to_string(max_size));
  std::vector<Tuple> el(n);
  for (std::size_t r = 0; r < n; ++r) el[r] = p.element(r);
  std::vector<std::int32_t> add(n * n), mul(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      add[a * n + b] = static_cast<std::int32_t>(tuple_rank(p, p.add(el[a], el[b])));
      mul[a * n + b] = static_cast<std::int32_t>(tuple_rank(p, p.mul(el[a], el[b])));
    }
  FiniteStructure r = FiniteStructure::ring_from_tables(n, std::move(add), std::move(mul),
                                                        static_cast<Value>(tuple_rank(p, p.zero())),
                                                        static_cast<Value>(tuple_rank(p, p.one())));
  r.label = p.describe();
  return r;
}

StalkAtAtom stalk_at_atom(const ProductStructure& p, std::size_t i) {
  if (i >= p.index_count()) throw Error("index out of range");
  StalkAtAtom out;
  out.factor = &p.factors[i];
  FiniteStructure ring = product_ring(p);
  out.atom = static_cast<Value>(tuple_rank(p, idempotent_of_set(p, IndexSet{1} << i)));
  Stalk s = stalk(ring, out.atom);
  std::vector<Value> map;
  for (Value r : s.ring.embedding) map.push_back(p.element(static_cast<std::size_t>(r))[i]);
  out.verified = is_ring_isomorphism(s.ring, p.factors[i], map);
  return out;
}

std::string zmod_label(std::int64_t n) {
  std::int64_t p = 2, m = n;
  while (p * p <= m && m % p) ++p;
  if (m % p) p = m;  // n itself is prime
  int k = 0;
  while (m % p == 0) {
    m /= p;
    ++k;
  }
  if (m == 1) return "p=" + std::to_string(p) + ",k=" + std::to_string(k);
  return "Z/" + std::to_string(n);
}

FiniteStructure parse_structure_spec(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  if (colon == std::string::npos || (kind != "zmod" && kind != "Z")) throw Error("unknown structure spec '" + spec + "'");
  std::int64_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoll(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw Error("");
  } catch (...) {
    throw Error("bad modulus in structure spec '" + spec + "'");
  }
  if (n < 2 || n > 256) throw Error("zmod modulus must lie in 2..256: '" + spec + "'");
  return FiniteStructure::ring_mod(n);
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

void add_entry(std::vector<FiniteStructure>& fs, std::vector<std::string>& labels, const std::string& raw) {
  std::string item = trim(raw), label;
  if (item.empty()) return;
  if (auto eq = item.find('='); eq != std::string::npos && item.find(':') > eq) {
    label = trim(item.substr(0, eq));
    item = trim(item.substr(eq + 1));
  }
  fs.push_back(parse_structure_spec(item));
  labels.push_back(label.empty() ? zmod_label(fs.back().modulus()) : label);
}

}  // namespace

ProductStructure parse_product_spec(const std::string& text) {
  std::vector<FiniteStructure> fs;
  std::vector<std::string> labels;
  std::string item;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\n' || c == '\t') {
      add_entry(fs, labels, item);
      item.clear();
    } else {
      item += c;
    }
  }
  add_entry(fs, labels, item);
  return ProductStructure(std::move(fs), std::move(labels));
}

ProductStructure read_product_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open product file '" + path + "'");
  std::vector<FiniteStructure> fs;
  std::vector<std::string> labels;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    try {
      add_entry(fs, labels, line);
    } catch (const Error& e) {
      throw Error(path + ":" + std::to_string(no) + ": " + e.what());
    }
  }
  return ProductStructure(std::move(fs), std::move(labels));
}

FiniteStructure parse_structure_text(const std::string& text) {
  std::istringstream lines(text);
  std::string stripped, line;
  while (std::getline(lines, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    stripped += line + "\n";
  }
  std::istringstream in(stripped);
  std::string word, what;
  if (!(in >> word)) throw Error("empty structure spec");
  if (word.rfind("zmod:", 0) == 0 || word.rfind("Z:", 0) == 0) {
    std::string rest;
    if (in >> rest) throw Error("unexpected '" + rest + "' after '" + word + "' (a product file?)");
    return parse_structure_spec(word);
  }
  if (word != "ring" || !(in >> what)) throw Error("structure spec must start with 'ring mod' or 'ring tables'");
  std::int64_t n = 0;
  if (!(in >> n) || n < 1 || n > 4096) throw Error("bad carrier size in structure spec");
  if (what == "mod") {
    if (n < 2 || n > 256) throw Error("ring mod N needs N in 2..256");
    if (std::string rest; in >> rest) throw Error("unexpected '" + rest + "' after 'ring mod " + std::to_string(n) + "'");
    return FiniteStructure::ring_mod(n);
  }
  if (what != "tables") throw Error("unknown structure kind '" + what + "'");
  Value zero = -1, one = -1;
  std::vector<std::int32_t> add, mul;
  auto table = [&](std::vector<std::int32_t>& t, const std::string& name) {
    for (std::int64_t i = 0; i < n * n; ++i) {
      std::int64_t v = 0;
      if (!(in >> v)) throw Error("table '" + name + "' has fewer than N*N entries");
      if (v < 0 || v >= n) throw Error("table '" + name + "' entry out of range: " + std::to_string(v));
      t.push_back(static_cast<std::int32_t>(v));
    }
  };
  while (in >> word) {
    if (word == "zero" && in >> zero) continue;
    if (word == "one" && in >> one) continue;
    if (word == "add") {
      table(add, word);
    } else if (word == "mul") {
      table(mul, word);
    } else {
      throw Error("unexpected '" + word + "' in structure spec");
    }
  }
  if (add.empty() || mul.empty() || zero < 0 || one < 0 || zero >= n || one >= n)
    throw Error("ring tables need zero, one, add and mul");
  return FiniteStructure::ring_from_tables(static_cast<std::size_t>(n), std::move(add), std::move(mul), zero, one);
}

FiniteStructure read_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open structure file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_structure_text(ss.str());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace adelic
