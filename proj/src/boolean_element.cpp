#include "adelic/boolean_element.hpp"

#include <algorithm>
#include <numeric>

#include "adelic/error.hpp"

namespace adelic {

namespace {

using Nat = BooleanElement::Nat;
constexpr Nat kMaxModulus = Nat{1} << 20;

Nat checked_lcm(Nat a, Nat b) {
  Nat l = std::lcm(a, b);
  if (l > kMaxModulus) throw BudgetExceeded("period " + std::to_string(l) + " is too large");
  return l;
}

}  // namespace

BooleanElement BooleanElement::make(Nat n, std::vector<bool> residues, std::set<Nat> added, std::set<Nat> removed) {
  if (n == 0 || residues.size() != n) throw Error("residue pattern must have one entry per class");
  if (n > kMaxModulus) throw BudgetExceeded("period too large");
  auto member = [&](Nat k) { return !removed.count(k) && (added.count(k) || residues[k % n]); };
  // Minimal period of the residue pattern.
  Nat d = n;
  for (Nat c = 1; c < n; ++c) {
    if (n % c) continue;
    bool ok = true;
    for (Nat i = c; ok && i < n; ++i) ok = residues[i] == residues[i % c];
    if (ok) {
      d = c;
      break;
    }
  }
  BooleanElement e;
  e.n_ = d;
  e.residues_.assign(residues.begin(), residues.begin() + static_cast<std::ptrdiff_t>(d));
  for (Nat k : added)
    if (member(k) && !e.residues_[k % d]) e.added_.insert(k);
  for (Nat k : removed)
    if (!member(k) && e.residues_[k % d]) e.removed_.insert(k);
  return e;
}

BooleanElement BooleanElement::empty() { return make(1, {false}); }
BooleanElement BooleanElement::all() { return make(1, {true}); }
BooleanElement BooleanElement::finite(std::set<Nat> elements) { return make(1, {false}, std::move(elements)); }

BooleanElement BooleanElement::residue_class(Nat n, Nat r) {
  if (n == 0) throw Error("modulus must be positive");
  std::vector<bool> res(n, false);
  res[r % n] = true;
  return make(n, std::move(res));
}

bool BooleanElement::contains(Nat k) const {
  if (added_.count(k)) return true;
  if (removed_.count(k)) return false;
  return residues_[k % n_];
}

bool BooleanElement::is_finite() const { return std::none_of(residues_.begin(), residues_.end(), [](bool b) { return b; }); }

std::optional<Nat> BooleanElement::count() const {
  if (!is_finite()) return std::nullopt;
  return added_.size();
}

Nat BooleanElement::exception_bound() const {
  Nat b = 0;
  if (!added_.empty()) b = std::max(b, *added_.rbegin() + 1);
  if (!removed_.empty()) b = std::max(b, *removed_.rbegin() + 1);
  return b;
}

namespace {

template <class Op>
BooleanElement combine(const BooleanElement& x, const BooleanElement& y, Op op) {
  const Nat l = checked_lcm(x.modulus(), y.modulus());
  std::vector<bool> res(l);
  for (Nat i = 0; i < l; ++i) res[i] = op(x.residues()[i % x.modulus()], y.residues()[i % y.modulus()]);
  std::set<Nat> added, removed;
  const Nat bound = std::max(x.exception_bound(), y.exception_bound());
  for (Nat k = 0; k < bound; ++k) {
    bool in = op(x.contains(k), y.contains(k));
    if (in && !res[k % l]) added.insert(k);
    if (!in && res[k % l]) removed.insert(k);
  }
  return BooleanElement::make(l, std::move(res), std::move(added), std::move(removed));
}

}  // namespace

BooleanElement BooleanElement::meet(const BooleanElement& o) const {
  return combine(*this, o, [](bool a, bool b) { return a && b; });
}

BooleanElement BooleanElement::join(const BooleanElement& o) const {
  return combine(*this, o, [](bool a, bool b) { return a || b; });
}

BooleanElement BooleanElement::complement() const {
  std::vector<bool> res(n_);
  for (Nat i = 0; i < n_; ++i) res[i] = !residues_[i];
  return make(n_, std::move(res), removed_, added_);
}

bool BooleanElement::le(const BooleanElement& o) const { return meet(o.complement()) == empty(); }

BooleanElement BooleanElement::first(Nat j) const {
  std::set<Nat> out;
  for (Nat k = 0; out.size() < j; ++k) {
    if (is_finite() && k >= exception_bound()) break;
    if (contains(k)) out.insert(k);
  }
  return finite(std::move(out));
}

BooleanElement BooleanElement::alternate() const {
  // Past `base` the set is periodic, so the even-position elements are
  // periodic with period 2n.
  const Nat base = (exception_bound() + n_ - 1) / n_ * n_;
  const Nat period = checked_lcm(2 * n_, 1);
  std::set<Nat> added, removed;
  std::vector<bool> res(period, false);
  Nat idx = 0;
  for (Nat k = 0; k < base + period; ++k) {
    if (!contains(k)) continue;
    const bool keep = idx++ % 2 == 0;
    if (k < base) {
      if (keep) added.insert(k);
    } else {
      res[k % period] = keep;
    }
  }
  // Below base the periodic pattern must not contribute.
  for (Nat k = 0; k < base; ++k)
    if (res[k % period] && !added.count(k)) removed.insert(k);
  return make(period, std::move(res), std::move(added), std::move(removed));
}

std::string BooleanElement::str() const {
  auto list = [](const std::set<Nat>& s) {
    std::string out = "{";
    bool first = true;
    for (Nat k : s) {
      out += (first ? "" : ",") + std::to_string(k);
      first = false;
    }
    return out + "}";
  };
  if (is_finite()) return list(added_);
  std::string s;
  if (n_ == 1) {
    s = "N";
  } else {
    std::set<Nat> rs;
    for (Nat i = 0; i < n_; ++i)
      if (residues_[i]) rs.insert(i);
    s = "{k : k mod " + std::to_string(n_) + " in " + list(rs) + "}";
  }
  if (!added_.empty()) s += " + " + list(added_);
  if (!removed_.empty()) s += " - " + list(removed_);
  return s;
}

}  // namespace adelic
