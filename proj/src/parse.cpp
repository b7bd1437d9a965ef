#include "adelic/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "adelic/error.hpp"

namespace adelic {

namespace {

enum class Tok {
  Ident, Int, LParen, RParen, LBrack, RBrack, Comma, Dot, Colon,
  Plus, Minus, Star, Caret, Eq, Neq, Le, Lt,
  Not, And, Or, Imp, Iff, Forall, Exists, True, False, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

struct Alias {
  std::string_view spelling;
  Tok kind;
};

// Longest spellings first so "<->" wins over "<=" and "->".
const Alias kAliases[] = {
    {"<->", Tok::Iff}, {"->", Tok::Imp},  {"<=", Tok::Le},   {"!=", Tok::Neq},
    {"/\\", Tok::And}, {"\\/", Tok::Or},  {"∀", Tok::Forall}, {"∃", Tok::Exists},
    {"¬", Tok::Not},   {"∧", Tok::And},   {"∨", Tok::Or},    {"→", Tok::Imp},
    {"↔", Tok::Iff},   {"≤", Tok::Le},    {"≠", Tok::Neq},   {"⊤", Tok::True},
    {"⊥", Tok::False}, {"·", Tok::Star},  {"−", Tok::Minus}, {"(", Tok::LParen},
    {")", Tok::RParen}, {"[", Tok::LBrack}, {"]", Tok::RBrack}, {",", Tok::Comma},
    {".", Tok::Dot},   {":", Tok::Colon}, {"+", Tok::Plus},  {"-", Tok::Minus},
    {"*", Tok::Star},  {"^", Tok::Caret}, {"=", Tok::Eq},    {"<", Tok::Lt},
    {"~", Tok::Not},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t l0 = line, c0 = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string w(s.substr(i, j - i));
      Tok k = Tok::Ident;
      if (w == "forall") k = Tok::Forall;
      else if (w == "exists") k = Tok::Exists;
      else if (w == "true") k = Tok::True;
      else if (w == "false") k = Tok::False;
      out.push_back({k, w, l0, c0});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& a : kAliases) {
      if (s.substr(i, a.spelling.size()) == a.spelling) {
        out.push_back({a.kind, std::string(a.spelling), l0, c0});
        advance(a.spelling.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError("unexpected character '" + std::string(1, c) + "'", l0, c0);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  Formula formula_eof() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  Term term_eof() {
    Term t = term(false);
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + (at(Tok::End) ? "" : ", found '" + peek().text + "'"));
    return next();
  }

  bool boolean() const { return sig_.is_boolean(); }

  // ---- formulas ----

  Formula formula() {
    Formula f = implication();
    while (accept(Tok::Iff)) f = Formula::iff(f, implication());
    return f;
  }

  Formula implication() {
    Formula f = disjunction();
    if (accept(Tok::Imp)) return Formula::implies(f, implication());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    if (at(Tok::Forall) || at(Tok::Exists)) return quantifier();
    if (accept(Tok::True)) return Formula::truth();
    if (accept(Tok::False)) return Formula::falsity();
    if (at(Tok::LParen)) {
      std::size_t save = pos_;
      try {
        Term lhs = term(true);
        if (relation_ahead()) return relation(lhs);
      } catch (const ParseError&) {
      } catch (const SortError&) {
      }
      pos_ = save;
      expect(Tok::LParen, "'('");
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Ident) && sig_.predicate(peek().text)) return predicate_atom();
    if (at(Tok::Ident) && !is_symbol(peek().text) && (peek(1).kind == Tok::LParen || peek(1).kind == Tok::LBrack))
      throw UnknownSymbol("unknown predicate '" + peek().text + "' at " + std::to_string(peek().line) + ":" +
                          std::to_string(peek().col));
    Term lhs = term(true);
    if (!relation_ahead()) fail("expected '=', '!=', '<=' or '<' after term");
    return relation(lhs);
  }

  Formula quantifier() {
    bool universal = next().kind == Tok::Forall;
    std::vector<std::string> names;
    do {
      const Token& t = expect(Tok::Ident, "bound variable");
      if (is_symbol(t.text)) throw ParseError("'" + t.text + "' is a declared symbol", t.line, t.col);
      names.push_back(t.text);
    } while (at(Tok::Ident));
    std::string sort;
    if (accept(Tok::Colon)) {
      const Token& s = expect(Tok::Ident, "sort name");
      if (!sig_.has_sort(s.text)) throw SortError("unknown sort '" + s.text + "'");
      sort = s.text;
    } else {
      if (!sig_.single_sorted()) fail("quantified variable needs a sort annotation");
      sort = sig_.default_sort();
    }
    expect(Tok::Dot, "'.'");
    std::vector<std::pair<std::string, std::string>> saved;
    for (const auto& n : names) {
      auto it = scope_.find(n);
      saved.emplace_back(n, it == scope_.end() ? std::string() : it->second);
      scope_[n] = sort;
    }
    Formula body = formula();
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      if (it->second.empty()) scope_.erase(it->first);
      else scope_[it->first] = it->second;
    }
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      Variable v{*it, sort};
      body = universal ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    return body;
  }

  bool relation_ahead() const {
    return at(Tok::Eq) || at(Tok::Neq) || at(Tok::Le) || at(Tok::Lt);
  }

  Formula relation(const Term& lhs) {
    Tok op = next().kind;
    Term rhs = term(true);
    if (lhs.sort() != rhs.sort()) fail("sort mismatch between '" + render(lhs) + "' and '" + render(rhs) + "'");
    switch (op) {
      case Tok::Eq:
        return Formula::eq(lhs, rhs);
      case Tok::Neq:
        return Formula::negation(Formula::eq(lhs, rhs));
      case Tok::Le:
        return le(lhs, rhs);
      case Tok::Lt:
        return Formula::conj(le(lhs, rhs), Formula::negation(Formula::eq(lhs, rhs)));
      default:
        fail("expected relation");
    }
  }

  Formula le(const Term& a, const Term& b) {
    const PredicateDecl* d = sig_.predicate("le");
    if (!d) fail("'<=' is not available in this signature");
    check_args("le", *d, {a, b});
    return Formula::pred("le", {}, {a, b});
  }

  Formula predicate_atom() {
    const Token& nt = next();
    const PredicateDecl* d = sig_.predicate(nt.text);
    std::vector<std::int64_t> idx;
    if (accept(Tok::LBrack)) {
      do idx.push_back(integer()); while (accept(Tok::Comma));
      expect(Tok::RBrack, "']'");
    }
    if (idx.size() != d->index_count)
      throw ParseError("predicate '" + nt.text + "' takes " + std::to_string(d->index_count) + " indices",
                       nt.line, nt.col);
    validate_indices(nt, idx);
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    if (!at(Tok::RParen)) {
      do args.push_back(term(false)); while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    check_args(nt.text, *d, args);
    return Formula::pred(nt.text, std::move(idx), std::move(args));
  }

  void validate_indices(const Token& nt, const std::vector<std::int64_t>& idx) const {
    if (nt.text == "C" && idx[0] < 1) throw ParseError("C[j] needs j >= 1", nt.line, nt.col);
    if (nt.text == "Res" && idx[0] < 1) throw ParseError("Res[n,r] needs n >= 1", nt.line, nt.col);
  }

  std::int64_t integer() {
    bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Int, "integer");
    std::int64_t v = std::stoll(t.text);
    return neg ? -v : v;
  }

  void check_args(const std::string& name, const PredicateDecl& d, const std::vector<Term>& args) {
    if (args.size() != d.arg_sorts.size())
      fail("'" + name + "' expects " + std::to_string(d.arg_sorts.size()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].sort() != d.arg_sorts[i])
        throw SortError("argument '" + render(args[i]) + "' of '" + name + "' has sort '" + args[i].sort() +
                        "', expected '" + d.arg_sorts[i] + "'");
  }

  // ---- terms ----

  bool is_symbol(const std::string& n) const {
    return sig_.function(n) || sig_.predicate(n) || sig_.constant_sort(n);
  }

  Term app(const std::string& fn, std::vector<Term> args) {
    const FunctionDecl* d = sig_.function(fn);
    if (!d) fail("operator '" + fn + "' is not available in this signature");
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].sort() != d->arg_sorts[i])
        throw SortError("argument '" + render(args[i]) + "' of '" + fn + "' has the wrong sort");
    return Term::app(fn, std::move(args), d->result_sort);
  }

  // `top` marks the outermost term of an atom, where Boolean connective
  // spellings belong to the formula level.
  Term term(bool top) {
    if (boolean()) return top ? bool_primary() : bool_join();
    return sum();
  }

  Term bool_join() {
    Term t = bool_meet();
    while (accept(Tok::Or)) t = app("join", {t, bool_meet()});
    return t;
  }

  Term bool_meet() {
    Term t = bool_unary();
    while (accept(Tok::And)) t = app("meet", {t, bool_unary()});
    return t;
  }

  Term bool_unary() {
    if (accept(Tok::Not)) return app("compl", {bool_unary()});
    return bool_primary();
  }

  Term bool_primary() {
    if (accept(Tok::LParen)) {
      Term t = bool_join();
      expect(Tok::RParen, "')'");
      return t;
    }
    return primary();
  }

  Term sum() {
    Term t = product();
    for (;;) {
      if (accept(Tok::Plus)) t = app("+", {t, product()});
      else if (accept(Tok::Minus)) t = app("+", {t, app("-", {product()})});
      else return t;
    }
  }

  Term product() {
    Term t = negation();
    while (accept(Tok::Star)) t = app("*", {t, negation()});
    return t;
  }

  Term negation() {
    if (accept(Tok::Minus)) return app("-", {negation()});
    return power();
  }

  Term power() {
    Term base = at(Tok::LParen) ? paren_sum() : primary();
    if (!accept(Tok::Caret)) return base;
    const Token& e = expect(Tok::Int, "exponent");
    long k = std::stol(e.text);
    if (k < 1) throw ParseError("exponent must be >= 1", e.line, e.col);
    Term t = base;
    for (long i = 1; i < k; ++i) t = app("*", {t, base});
    return t;
  }

  Term paren_sum() {
    expect(Tok::LParen, "'('");
    Term t = sum();
    expect(Tok::RParen, "')'");
    return t;
  }

  Term primary() {
    if (at(Tok::Int)) {
      const Token& t = next();
      if (auto s = sig_.constant_sort(t.text)) return Term::constant(t.text, *s);
      if (!sig_.is_ring()) throw ParseError("numeral '" + t.text + "' outside a ring signature", t.line, t.col);
      return Term::numeral(std::stoll(t.text), sig_.default_sort());
    }
    const Token& t = expect(Tok::Ident, "term");
    if (auto s = sig_.constant_sort(t.text)) return Term::constant(t.text, *s);
    if (const FunctionDecl* d = sig_.function(t.text)) {
      expect(Tok::LParen, "'('");
      std::vector<Term> args;
      if (!at(Tok::RParen)) {
        do args.push_back(term(false)); while (accept(Tok::Comma));
      }
      expect(Tok::RParen, "')'");
      if (args.size() != d->arg_sorts.size())
        throw ParseError("'" + t.text + "' expects " + std::to_string(d->arg_sorts.size()) + " arguments", t.line,
                         t.col);
      return app(t.text, std::move(args));
    }
    if (sig_.predicate(t.text)) throw ParseError("predicate '" + t.text + "' used as a term", t.line, t.col);
    if (at(Tok::LParen))
      throw UnknownSymbol("unknown function '" + t.text + "' at " + std::to_string(t.line) + ":" + std::to_string(t.col));
    if (auto it = scope_.find(t.text); it != scope_.end()) return Term::var({t.text, it->second});
    if (!sig_.single_sorted()) throw SortError("free variable '" + t.text + "' has no sort in a many-sorted signature");
    return Term::var({t.text, sig_.default_sort()});
  }

  std::vector<Token> toks_;
  const Signature& sig_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> scope_;
};

// ---- rendering -------------------------------------------------------------

// Binding strength of a term's top operator (higher binds tighter).
int term_level(const Term& t) {
  if (t.kind() != TermKind::App) return 9;
  const std::string& n = t.name();
  if (n == "+" || n == "join") return 1;
  if (n == "*" || n == "meet") return 2;
  if (n == "-" || n == "compl") return 3;
  return 9;
}

std::string render_term(const Term& t);

std::string wrap_term(const Term& t, int min_level) {
  std::string s = render_term(t);
  return term_level(t) >= min_level ? s : "(" + s + ")";
}

std::string render_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return t.name();
    case TermKind::Num:
      return std::to_string(t.value());
    case TermKind::App:
      break;
  }
  const std::string& n = t.name();
  const auto& a = t.args();
  if (n == "+") return wrap_term(a[0], 1) + " + " + wrap_term(a[1], 2);
  if (n == "*") return wrap_term(a[0], 2) + "*" + wrap_term(a[1], 3);
  if (n == "-") return "-" + wrap_term(a[0], 3);
  if (n == "join") return wrap_term(a[0], 1) + " \\/ " + wrap_term(a[1], 2);
  if (n == "meet") return wrap_term(a[0], 2) + " /\\ " + wrap_term(a[1], 3);
  if (n == "compl") return "~" + wrap_term(a[0], 3);
  std::string s = n + "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + render_term(a[i]);
  return s + ")";
}

// Atom sides: Boolean connectives must be parenthesised there.
std::string atom_side(const Term& t) {
  if (t.kind() == TermKind::App) {
    const std::string& n = t.name();
    if (n == "meet" || n == "join" || n == "compl") return "(" + render_term(t) + ")";
  }
  return render_term(t);
}

// Formula binding levels: 0 quantifier/iff-free top, 1 or, 2 and, 3 unary.
int formula_level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return 0;
    default:
      return 3;
  }
}

std::string render_formula(const Formula& f, const RenderOptions& o);

std::string wrap_formula(const Formula& f, int min_level, const RenderOptions& o) {
  std::string s = render_formula(f, o);
  return formula_level(f) >= min_level ? s : "(" + s + ")";
}

std::string render_formula(const Formula& f, const RenderOptions& o) {
  switch (f.kind()) {
    case FormulaKind::True:
      return "true";
    case FormulaKind::False:
      return "false";
    case FormulaKind::Eq:
      return atom_side(f.terms()[0]) + " = " + atom_side(f.terms()[1]);
    case FormulaKind::Pred: {
      if (f.pred_name() == "le" && f.indices().empty() && f.terms().size() == 2)
        return atom_side(f.terms()[0]) + " <= " + atom_side(f.terms()[1]);
      std::string s = f.pred_name();
      if (!f.indices().empty()) {
        s += "[";
        for (std::size_t i = 0; i < f.indices().size(); ++i)
          s += (i ? "," : "") + std::to_string(f.indices()[i]);
        s += "]";
      }
      s += "(";
      for (std::size_t i = 0; i < f.terms().size(); ++i) s += (i ? ", " : "") + render_term(f.terms()[i]);
      return s + ")";
    }
    case FormulaKind::Not: {
      const Formula& c = f.child();
      bool bare = c.kind() == FormulaKind::True || c.kind() == FormulaKind::False || c.kind() == FormulaKind::Not ||
                  (c.kind() == FormulaKind::Pred && c.pred_name() != "le");
      return "~" + (bare ? render_formula(c, o) : "(" + render_formula(c, o) + ")");
    }
    case FormulaKind::And:
      return wrap_formula(f.child(0), 2, o) + " /\\ " + wrap_formula(f.child(1), 3, o);
    case FormulaKind::Or:
      return wrap_formula(f.child(0), 1, o) + " \\/ " + wrap_formula(f.child(1), 2, o);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      std::string s = f.kind() == FormulaKind::Forall ? "forall " : "exists ";
      s += f.bound().name;
      if (o.annotate_sorts) s += ":" + f.bound().sort;
      return s + ". " + render_formula(f.child(), o);
    }
  }
  return "";
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  return Parser(lex(text), sig).formula_eof();
}

Term parse_term(std::string_view text, const Signature& sig) { return Parser(lex(text), sig).term_eof(); }

std::string render(const Formula& f, RenderOptions opts) { return render_formula(f, opts); }

std::string render(const Term& t) { return render_term(t); }

std::vector<FormulaLine> parse_formula_lines(std::string_view text, const Signature& sig) {
  std::vector<FormulaLine> out;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    std::string s(line);
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (!s.empty()) {
      try {
        out.push_back({line_no, s, parse_formula(s, sig)});
      } catch (const ParseError& e) {
        std::string msg = e.what();
        if (auto c = msg.find(": "); c != std::string::npos) msg = msg.substr(c + 2);
        throw ParseError(msg, line_no, e.column());
      }
    }
    start = end + 1;
  }
  return out;
}

std::vector<FormulaLine> read_formula_file(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_formula_lines(ss.str(), sig);
}

}  // namespace adelic
