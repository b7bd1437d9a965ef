#include "adelic/ring_calculus.hpp"

#include <algorithm>
#include <set>

#include "adelic/error.hpp"
#include "adelic/parse.hpp"
#include "adelic/transform.hpp"

namespace adelic {

// ---- lattice ---------------------------------------------------------------

Value IdempotentLattice::meet(Value e, Value f) const { return ring->mul(e, f); }

Value IdempotentLattice::join(Value e, Value f) const { return ring->add(ring->add(e, f), ring->neg(ring->mul(e, f))); }

Value IdempotentLattice::complement(Value e) const { return ring->add(ring->one(), ring->neg(e)); }

bool IdempotentLattice::le(Value e, Value f) const { return ring->mul(e, f) == e; }

bool IdempotentLattice::is_idempotent(Value e) const {
  return std::binary_search(idempotents.begin(), idempotents.end(), e);
}

std::vector<Value> IdempotentLattice::atoms_below(Value e) const {
  std::vector<Value> out;
  for (Value a : atoms)
    if (le(a, e)) out.push_back(a);
  return out;
}

Value IdempotentLattice::join_all(const std::vector<Value>& es) const {
  Value acc = ring->zero();
  for (Value e : es) acc = join(acc, e);
  return acc;
}

IdempotentLattice idempotent_lattice(const FiniteStructure& ring) {
  if (!ring.is_ring()) throw Error("idempotent lattice needs a ring");
  IdempotentLattice lat;
  lat.ring = &ring;
  const Value n = static_cast<Value>(ring.size());
  for (Value x = 0; x < n; ++x)
    if (ring.mul(x, x) == x) lat.idempotents.push_back(x);
  const Value zero = ring.zero();
  for (Value e : lat.idempotents) {
    if (e == zero) continue;
    bool minimal = true;
    for (Value f : lat.idempotents)
      if (f != zero && f != e && lat.le(f, e)) {
        minimal = false;
        break;
      }
    if (minimal) lat.atoms.push_back(e);
  }
  return lat;
}

// ---- stalks ----------------------------------------------------------------

Stalk stalk(const FiniteStructure& ring, Value e) {
  if (!ring.is_ring()) throw Error("stalk needs a ring");
  if (ring.mul(e, e) != e) throw Error("stalk: element " + std::to_string(e) + " is not idempotent");
  if (e == ring.zero()) throw Error("stalk at 0 is the zero ring");
  const std::size_t n = ring.size();
  std::set<Value> image;
  for (std::size_t m = 0; m < n; ++m) image.insert(ring.mul(e, static_cast<Value>(m)));
  std::vector<Value> elems(image.begin(), image.end());
  std::vector<Value> pos(n, -1);
  for (std::size_t i = 0; i < elems.size(); ++i) pos[static_cast<std::size_t>(elems[i])] = static_cast<Value>(i);
  const std::size_t k = elems.size();
  std::vector<std::int32_t> add(k * k), mul(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      add[i * k + j] = static_cast<std::int32_t>(pos[static_cast<std::size_t>(ring.add(elems[i], elems[j]))]);
      mul[i * k + j] = static_cast<std::int32_t>(pos[static_cast<std::size_t>(ring.mul(elems[i], elems[j]))]);
    }
  // eR is an ideal with unit e, so the laws are inherited from R; small
  // stalks are still re-verified.
  FiniteStructure s = FiniteStructure::ring_from_tables(k, std::move(add), std::move(mul),
                                                        pos[static_cast<std::size_t>(ring.zero())],
                                                        pos[static_cast<std::size_t>(e)], 64);
  s.embedding = elems;
  s.label = ring.label + "@e=" + std::to_string(e);
  Stalk st{std::move(s), e, {}};
  st.index_of.resize(n);
  for (std::size_t m = 0; m < n; ++m) st.index_of[m] = pos[static_cast<std::size_t>(ring.mul(e, static_cast<Value>(m)))];
  return st;
}

std::vector<Stalk> atom_stalks(const FiniteStructure& ring, const IdempotentLattice& lat) {
  std::vector<Stalk> out;
  for (Value a : lat.atoms) out.push_back(stalk(ring, a));
  return out;
}

// ---- regularity ------------------------------------------------------------

bool vnr_by_equation(const FiniteStructure& ring, Value a) {
  const Value n = static_cast<Value>(ring.size());
  const Value aa = ring.mul(a, a);
  for (Value x = 0; x < n; ++x)
    if (ring.mul(aa, x) == a) return true;
  return false;
}

bool vnr_by_idempotent_ideal(const FiniteStructure& ring, Value a) {
  const std::size_t n = ring.size();
  std::vector<char> ideal(n, 0);
  for (std::size_t m = 0; m < n; ++m) ideal[static_cast<std::size_t>(ring.mul(a, static_cast<Value>(m)))] = 1;
  for (std::size_t v = 0; v < n; ++v) {
    Value e = static_cast<Value>(v);
    if (ring.mul(e, e) != e || !ideal[v]) continue;
    // e in aR, so eR is contained in aR; equality needs a in eR, i.e. ea = a.
    if (ring.mul(e, a) == a) return true;
  }
  return false;
}

bool is_von_neumann_regular(const FiniteStructure& ring, Value a) {
  bool x = vnr_by_equation(ring, a);
  bool y = vnr_by_idempotent_ideal(ring, a);
  if (x != y)
    throw OracleMismatch("regularity characterizations disagree at " + std::to_string(a) + " in " + ring.label);
  return x;
}

const Formula& fin_defining_formula() {
  // The inner bound y of phi is renamed to y1 so that phi(y*x) does not
  // capture the outer y.
  static const Formula f = parse_formula(
      "x = x*x /\\ forall y. exists e y1 z. (e*e = e /\\ y*x = e*y1 /\\ e = (y*x)*z)", ring_signature());
  return f;
}

bool fin_formula_holds(const FiniteStructure& ring, Value x) {
  static const Variable vx{"x", "ring"};
  return satisfies(ring, fin_defining_formula(), {{vx, x}});
}

bool fin_formula_holds(const FiniteStructure& ring, const IdempotentLattice& lat, Value x) {
  if (ring.mul(x, x) != x) return false;
  const Value n = static_cast<Value>(ring.size());
  for (Value y = 0; y < n; ++y) {
    const Value w = ring.mul(y, x);
    bool found = false;
    for (Value e : lat.idempotents) {
      bool in_eR = false, generates = false;
      for (Value t = 0; t < n && !(in_eR && generates); ++t) {
        in_eR = in_eR || ring.mul(e, t) == w;
        generates = generates || ring.mul(w, t) == e;
      }
      if (in_eR && generates) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---- Boolean values --------------------------------------------------------

Value boolean_value_by_atoms(const IdempotentLattice& lat, const std::vector<Stalk>& stalks, const Formula& theta,
                             const std::vector<Variable>& vars, const std::vector<Value>& values) {
  std::vector<Value> hits;
  for (std::size_t i = 0; i < stalks.size(); ++i) {
    Assignment asg;
    for (std::size_t j = 0; j < vars.size(); ++j) asg[vars[j]] = stalks[i].project(values[j]);
    if (satisfies(stalks[i].ring, theta, asg)) hits.push_back(lat.atoms[i]);
  }
  return lat.join_all(hits);
}

Value boolean_value_by_relativization(const FiniteStructure& ring, const IdempotentLattice& lat,
                                      const Formula& theta, const std::vector<Variable>& vars,
                                      const std::vector<Value>& values) {
  Relativized r = relativize_to_idempotent(theta);
  std::vector<Variable> order = vars;
  order.push_back(r.y);
  PreparedFormula pf(ring, r.formula, order);
  std::vector<Value> vals = values;
  vals.push_back(0);
  std::vector<Value> hits;
  for (Value a : lat.atoms) {
    vals.back() = a;
    if (pf(vals)) hits.push_back(a);
  }
  return lat.join_all(hits);
}

// ---- axioms ----------------------------------------------------------------

bool AxiomReport::all_pass() const {
  for (const auto& r : results)
    if (r.status == AxiomResult::Status::Fail) return false;
  return true;
}

namespace {

// Per-atom compiled formulas so the exhaustive sweeps avoid recompiling.
class AtomEvaluator {
 public:
  AtomEvaluator(const IdempotentLattice& lat, const std::vector<Stalk>& stalks, const Formula& f,
                const std::vector<Variable>& vars)
      : lat_(lat), stalks_(stalks) {
    for (const auto& s : stalks) prepared_.emplace_back(s.ring, f, vars);
  }

  Value value(const std::vector<Value>& values) const {
    Value acc = lat_.ring->zero();
    std::vector<Value> local(values.size());
    for (std::size_t i = 0; i < stalks_.size(); ++i) {
      for (std::size_t j = 0; j < values.size(); ++j) local[j] = stalks_[i].project(values[j]);
      if (prepared_[i](local)) acc = lat_.join(acc, lat_.atoms[i]);
    }
    return acc;
  }

 private:
  const IdempotentLattice& lat_;
  const std::vector<Stalk>& stalks_;
  std::vector<PreparedFormula> prepared_;
};

// Fin(e) in the idempotent algebra: e is the join of the atoms below it.
bool fin_idempotent(const IdempotentLattice& lat, Value e) { return lat.join_all(lat.atoms_below(e)) == e; }

const std::vector<std::string>& atomic_corpus() {
  static const std::vector<std::string> c = {"x = y", "x*y = x + y", "x*x = y", "x + 1 = y*y", "x*y = 0", "x = 0"};
  return c;
}

const std::vector<std::string>& witness_corpus() {
  static const std::vector<std::string> c = {"x*w = 0", "w*w = w /\\ x*w = x", "x = w*w", "x*w = 1",
                                             "w + w = x", "x*w = w /\\ ~(w = 0)"};
  return c;
}

std::string show(const std::vector<Value>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

}  // namespace

AxiomReport check_restricted_product_axioms(const FiniteStructure& ring, const Formula& phi) {
  if (!ring.is_ring()) throw Error("axiom check needs a ring");
  if (phi.free_vars().size() != 1) throw Error("restricting formula must have exactly one free variable");
  const Variable phi_var = *phi.free_vars().begin();
  const Signature& sig = ring_signature();
  const Variable x{"x", "ring"}, y{"y", "ring"}, w{"w", "ring"};
  const Value n = static_cast<Value>(ring.size());

  AxiomReport rep;
  rep.ring_label = ring.label;
  IdempotentLattice lat = idempotent_lattice(ring);
  std::vector<Stalk> stalks = atom_stalks(ring, lat);
  rep.idempotent_count = lat.idempotents.size();
  rep.atoms = lat.atoms;
  rep.connected = lat.connected();
  using S = AxiomResult::Status;

  {  // Axiom 1: every nonzero idempotent lies above an atom.
    AxiomResult r{"Axiom 1 (B atomic)", S::Pass, "atoms " + show(lat.atoms)};
    for (Value e : lat.idempotents)
      if (e != ring.zero() && lat.atoms_below(e).empty()) {
        r.status = S::Fail;
        r.detail = "idempotent " + std::to_string(e) + " has no atom below it";
        break;
      }
    rep.results.push_back(r);
  }

  {  // Axiom 2: the join defining [[theta]] is the least upper bound in B.
    AxiomResult r{"Axiom 2 ([[theta]] exists)", S::Pass, ""};
    std::size_t checked = 0;
    for (const auto& text : witness_corpus()) {
      Formula theta = parse_formula(text, sig);
      AtomEvaluator ev(lat, stalks, theta, {x, w});
      for (Value a = 0; a < n && r.status == S::Pass; ++a)
        for (Value b = 0; b < n; ++b) {
          Value v = ev.value({a, b});
          if (!lat.is_idempotent(v)) {
            r.status = S::Fail;
            r.detail = text + ": join is not idempotent";
            break;
          }
          // Least upper bound: u bounds the chosen atoms iff v <= u.
          for (Value u : lat.idempotents) {
            bool bounds = true;
            for (Value at : lat.atoms_below(v)) bounds = bounds && lat.le(at, u);
            if (bounds != lat.le(v, u)) {
              r.status = S::Fail;
              r.detail = text + ": join is not the least upper bound";
              break;
            }
          }
          ++checked;
        }
    }
    if (r.status == S::Pass) r.detail = std::to_string(checked) + " Boolean values";
    rep.results.push_back(r);
  }

  {  // Axiom 3: atomic truth is truth at every atom.
    AxiomResult r{"Axiom 3 (atomic formulas)", S::Pass, ""};
    std::size_t checked = 0;
    for (const auto& text : atomic_corpus()) {
      Formula theta = parse_formula(text, sig);
      AtomEvaluator ev(lat, stalks, theta, {x, y});
      PreparedFormula direct(ring, theta, {x, y});
      for (Value a = 0; a < n && r.status == S::Pass; ++a)
        for (Value b = 0; b < n; ++b) {
          bool lhs = direct({a, b});
          bool rhs = ev.value({a, b}) == ring.one();
          ++checked;
          if (lhs != rhs) {
            r.status = S::Fail;
            r.detail = text + " at (" + std::to_string(a) + "," + std::to_string(b) + ")";
            break;
          }
        }
    }
    if (r.status == S::Pass) r.detail = std::to_string(checked) + " atomic instances";
    rep.results.push_back(r);
  }

  {  // Axiom 4: T^fin needs an infinite algebra; check its finite content.
    AxiomResult t{"Axiom 4 (T^fin part)", S::NotApplicable,
                  "B is finite; Fin is the whole algebra (an ideal, not proper)"};
    for (Value e : lat.idempotents)
      if (!fin_idempotent(lat, e)) {
        t.status = S::Fail;
        t.detail = "idempotent " + std::to_string(e) + " is not a finite join of atoms";
      }
    rep.results.push_back(t);

    // Gluing: some g realizes the witnesses of all atoms at once, i.e.
    // [[exists w theta(f,w)]] <= [[theta(f,g)]].
    AxiomResult r{"Axiom 4 (witness gluing)", S::Pass, ""};
    std::size_t checked = 0;
    for (const auto& text : witness_corpus()) {
      Formula theta = parse_formula(text, sig);
      AtomEvaluator ev(lat, stalks, theta, {x, w});
      AtomEvaluator ex(lat, stalks, Formula::exists(w, theta), {x});
      for (Value a = 0; a < n && r.status == S::Pass; ++a) {
        Value target = ex.value({a});
        bool found = false;
        for (Value g = 0; g < n && !found; ++g) found = lat.le(target, ev.value({a, g}));
        ++checked;
        if (!found) {
          r.status = S::Fail;
          r.detail = text + ": no gluing witness at x=" + std::to_string(a);
        }
      }
    }
    if (r.status == S::Pass) r.detail = std::to_string(checked) + " instances glued";
    rep.results.push_back(r);
  }

  {  // Axiom 5: [[~phi(x)]] is in Fin for every x.
    AxiomResult r{"Axiom 5 (Fin([[~phi(x)]]))", S::Pass, ""};
    AtomEvaluator ev(lat, stalks, Formula::negation(phi), {phi_var});
    for (Value a = 0; a < n; ++a)
      if (!fin_idempotent(lat, ev.value({a}))) {
        r.status = S::Fail;
        r.detail = "x=" + std::to_string(a);
        break;
      }
    if (r.status == S::Pass) r.detail = std::to_string(n) + " elements";
    rep.results.push_back(r);
  }
  return rep;
}

}  // namespace adelic
