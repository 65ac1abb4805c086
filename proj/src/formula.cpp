#include "toposforge/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace toposforge {

// ---------------------------------------------------------------- sorts

SortPtr Sort::sheaf(std::string n) {
  auto s = std::make_shared<Sort>();
  s->kind = Kind::Sheaf;
  s->name = std::move(n);
  return s;
}

SortPtr Sort::omega() {
  auto s = std::make_shared<Sort>();
  s->kind = Kind::Omega;
  return s;
}

SortPtr Sort::power(SortPtr inner) {
  auto s = std::make_shared<Sort>();
  s->kind = Kind::Power;
  s->inner = std::move(inner);
  return s;
}

bool Sort::equals(const Sort& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Sheaf: return name == o.name;
    case Kind::Omega: return true;
    case Kind::Power: return inner->equals(*o.inner);
  }
  return false;
}

std::string Sort::str() const {
  switch (kind) {
    case Kind::Sheaf: return name;
    case Kind::Omega: return "Omega";
    case Kind::Power: return "P(" + inner->str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- terms

bool Term::equals(const Term& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Var:
    case Kind::Const:
      return name == o.name && sort && o.sort && sort->equals(*o.sort);
    case Kind::Num:
      return num == o.num;
    case Kind::App: {
      if (name != o.name || args.size() != o.args.size()) return false;
      for (std::size_t i = 0; i < args.size(); ++i)
        if (!args[i]->equals(*o.args[i])) return false;
      return true;
    }
    case Kind::Pow:
      if (!base->equals(*o.base)) return false;
      if (exp.symbolic != o.exp.symbolic) return false;
      return exp.symbolic ? exp.var == o.exp.var : exp.value == o.exp.value;
  }
  return false;
}

TermPtr t_var(std::string name, SortPtr s) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  t->sort = std::move(s);
  return t;
}

TermPtr t_const(std::string name, SortPtr s) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Const;
  t->name = std::move(name);
  t->sort = std::move(s);
  return t;
}

TermPtr t_num(int v, SortPtr s) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Num;
  t->num = v;
  t->sort = std::move(s);
  return t;
}

TermPtr t_app(std::string fn, std::vector<TermPtr> args, SortPtr result) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->name = std::move(fn);
  t->args = std::move(args);
  t->sort = std::move(result);
  return t;
}

TermPtr t_pow(TermPtr base, Exponent e) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Pow;
  t->sort = base->sort;
  t->base = std::move(base);
  t->exp = std::move(e);
  return t;
}

// ---------------------------------------------------------------- formulas

static FormulaPtr mk(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr f_eq(TermPtr x, TermPtr y) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Eq));
  f->t1 = std::move(x);
  f->t2 = std::move(y);
  return f;
}

FormulaPtr f_member(TermPtr x, TermPtr container) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Member));
  f->t1 = std::move(x);
  f->t2 = std::move(container);
  return f;
}

FormulaPtr f_top() { return mk(Formula::Kind::Top); }
FormulaPtr f_bot() { return mk(Formula::Kind::Bot); }

static FormulaPtr binop(Formula::Kind k, FormulaPtr x, FormulaPtr y) {
  auto f = std::const_pointer_cast<Formula>(mk(k));
  f->a = std::move(x);
  f->b = std::move(y);
  return f;
}

FormulaPtr f_and(FormulaPtr x, FormulaPtr y) { return binop(Formula::Kind::And, std::move(x), std::move(y)); }
FormulaPtr f_or(FormulaPtr x, FormulaPtr y) { return binop(Formula::Kind::Or, std::move(x), std::move(y)); }
FormulaPtr f_implies(FormulaPtr x, FormulaPtr y) { return binop(Formula::Kind::Implies, std::move(x), std::move(y)); }
FormulaPtr f_not(FormulaPtr x) { return f_implies(std::move(x), f_bot()); }

FormulaPtr f_bigand(std::vector<FormulaPtr> xs) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::BigAnd));
  f->kids = std::move(xs);
  return f;
}

FormulaPtr f_bigor(std::vector<FormulaPtr> xs) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::BigOr));
  f->kids = std::move(xs);
  return f;
}

static FormulaPtr schema(Formula::Kind k, std::string var, int lo, SchemaBound hi, FormulaPtr body) {
  auto f = std::const_pointer_cast<Formula>(mk(k));
  f->var = std::move(var);
  f->lo = lo;
  f->hi = std::move(hi);
  f->a = std::move(body);
  return f;
}

FormulaPtr f_bigor_schema(std::string var, int lo, SchemaBound hi, FormulaPtr body) {
  return schema(Formula::Kind::BigOrSchema, std::move(var), lo, std::move(hi), std::move(body));
}

FormulaPtr f_bigand_schema(std::string var, int lo, SchemaBound hi, FormulaPtr body) {
  return schema(Formula::Kind::BigAndSchema, std::move(var), lo, std::move(hi), std::move(body));
}

FormulaPtr f_forall(std::string v, SortPtr s, FormulaPtr body) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Forall));
  f->var = std::move(v);
  f->sort = std::move(s);
  f->a = std::move(body);
  return f;
}

FormulaPtr f_exists(std::string v, SortPtr s, FormulaPtr body) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Exists));
  f->var = std::move(v);
  f->sort = std::move(s);
  f->a = std::move(body);
  return f;
}

FormulaPtr f_modal(std::string nucleus, FormulaPtr body) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Modal));
  f->nucleus = std::move(nucleus);
  f->a = std::move(body);
  return f;
}

FormulaPtr f_prop(TermPtr omegaTerm) {
  auto f = std::const_pointer_cast<Formula>(mk(Formula::Kind::Prop));
  f->t1 = std::move(omegaTerm);
  return f;
}

bool Formula::equals(const Formula& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Eq:
    case Kind::Member:
      return t1->equals(*o.t1) && t2->equals(*o.t2);
    case Kind::Prop:
      return t1->equals(*o.t1);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return a->equals(*o.a) && b->equals(*o.b);
    case Kind::BigAnd:
    case Kind::BigOr: {
      if (kids.size() != o.kids.size()) return false;
      for (std::size_t i = 0; i < kids.size(); ++i)
        if (!kids[i]->equals(*o.kids[i])) return false;
      return true;
    }
    case Kind::BigAndSchema:
    case Kind::BigOrSchema:
      if (var != o.var || lo != o.lo || hi.symbolic != o.hi.symbolic) return false;
      if (hi.symbolic ? hi.name != o.hi.name : hi.value != o.hi.value) return false;
      return a->equals(*o.a);
    case Kind::Forall:
    case Kind::Exists:
      return var == o.var && sort->equals(*o.sort) && a->equals(*o.a);
    case Kind::Modal:
      return nucleus == o.nucleus && a->equals(*o.a);
  }
  return false;
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;
  Tok kind = Tok::End;
  std::string text;
  std::size_t tokStart = 0;

  explicit Lexer(const std::string& src) : s(src) { next(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tokStart); }

  void next() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    tokStart = pos;
    if (pos >= s.size()) {
      kind = Tok::End;
      text.clear();
      return;
    }
    char c = s[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
        ++pos;
      kind = Tok::Ident;
      text = s.substr(b, pos - b);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t b = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      kind = Tok::Int;
      text = s.substr(b, pos - b);
      return;
    }
    // multi-char symbols
    static const char* two[] = {"/\\", "\\/", "=>", "..", "->"};
    for (const char* t : two) {
      if (s.compare(pos, 2, t) == 0) {
        kind = Tok::Sym;
        text = t;
        pos += 2;
        return;
      }
    }
    kind = Tok::Sym;
    text = std::string(1, c);
    ++pos;
  }

  bool is(const char* sym) const { return kind == Tok::Sym && text == sym; }
  bool isIdent(const char* id) const { return kind == Tok::Ident && text == id; }
  void expect(const char* sym) {
    if (!is(sym)) fail(std::string("expected '") + sym + "'");
    next();
  }
  std::string ident(const char* what) {
    if (kind != Tok::Ident) fail(std::string("expected ") + what);
    std::string t = text;
    next();
    return t;
  }
  int integer() {
    if (kind != Tok::Int) fail("expected integer");
    int v = std::stoi(text);
    next();
    return v;
  }
  struct State {
    std::size_t pos, tokStart;
    Tok kind;
    std::string text;
  };
  State save() const { return {pos, tokStart, kind, text}; }
  void restore(const State& st) {
    pos = st.pos;
    tokStart = st.tokStart;
    kind = st.kind;
    text = st.text;
  }
};

// "P" is only special in sort position, so it stays usable as a symbol name.
bool is_keyword(const std::string& w) {
  static const std::set<std::string> kw = {"forall", "exists", "true",  "false", "in",
                                           "box",    "bigvee", "bigand", "inv",  "nilp",
                                           "Omega",  "Sheaf"};
  return kw.count(w) > 0;
}

struct Parser {
  Lexer lx;
  const SymbolTable& st;
  std::vector<std::pair<std::string, SortPtr>> scope;  // quantified variables
  std::vector<std::string> schemaScope;                // schema (exponent) variables
  int freshCounter = 0;

  Parser(const std::string& text, const SymbolTable& symtab) : lx(text), st(symtab) {}

  SortPtr lookup_var(const std::string& n) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == n) return it->second;
    return nullptr;
  }

  bool in_schema_scope(const std::string& n) const {
    return std::find(schemaScope.begin(), schemaScope.end(), n) != schemaScope.end();
  }

  bool is_ring_sort(const SortPtr& s) const {
    return s && s->kind == Sort::Kind::Sheaf && st.ringSorts.count(s->name) > 0;
  }

  std::string fresh_var(const std::string& base) {
    std::string n = base;
    auto taken = [&](const std::string& v) {
      return lookup_var(v) != nullptr || st.constants.count(v) || st.freeVars.count(v);
    };
    while (taken(n)) n += "'";
    return n;
  }

  // ---- sorts
  SortPtr parse_sort() {
    if (lx.isIdent("Omega")) {
      lx.next();
      return Sort::omega();
    }
    if (lx.isIdent("P")) {
      lx.next();
      lx.expect("(");
      SortPtr inner = parse_sort();
      lx.expect(")");
      return Sort::power(inner);
    }
    if (lx.isIdent("Sheaf"))
      throw SortError("quantification over all sheaves is not supported (bounded sorts only)");
    std::string n = lx.ident("sort name");
    if (!st.sheafSorts.count(n)) throw SortError("unknown sheaf sort '" + n + "'");
    return Sort::sheaf(n);
  }

  // ---- terms (numerals carry a null sort until coerced)
  TermPtr coerce(const TermPtr& t, const SortPtr& want) {
    if (t->sort) {
      if (want && !t->sort->equals(*want))
        throw SortError("sort mismatch: term '" + print_term(*t) + "' has sort " + t->sort->str() +
                        ", expected " + want->str());
      return t;
    }
    // numeral or an operator tree over numerals
    if (!want) {
      if (st.defaultRingSort) return coerce(t, Sort::sheaf(*st.defaultRingSort));
      throw SortError("cannot infer the sort of numeral term '" + print_term(*t) + "'");
    }
    if (want->kind != Sort::Kind::Sheaf || !st.ringSorts.count(want->name))
      throw SortError("numeral used at non-ring sort " + want->str());
    switch (t->kind) {
      case Term::Kind::Num:
        return t_num(t->num, want);
      case Term::Kind::App: {
        std::vector<TermPtr> as;
        for (auto& a : t->args) as.push_back(coerce(a, want));
        return t_app(t->name, std::move(as), want);
      }
      case Term::Kind::Pow:
        return t_pow(coerce(t->base, want), t->exp);
      default:
        throw SortError("internal: unsolved term sort");
    }
  }

  TermPtr parse_term() {
    TermPtr t = parse_addend();
    while (lx.is("+")) {
      lx.next();
      TermPtr r = parse_addend();
      t = ring_binop("add", t, r);
    }
    return t;
  }

  TermPtr parse_addend() {
    TermPtr t = parse_factor();
    while (lx.is("*")) {
      lx.next();
      TermPtr r = parse_factor();
      t = ring_binop("mul", t, r);
    }
    return t;
  }

  TermPtr ring_binop(const char* op, TermPtr a, TermPtr b) {
    SortPtr s = a->sort ? a->sort : b->sort;
    if (!s && st.defaultRingSort) s = Sort::sheaf(*st.defaultRingSort);
    if (!s) return t_app(op, {a, b}, nullptr);  // resolved later by coerce
    auto it = st.functions.find(op);
    if (it != st.functions.end()) {
      for (const auto& sig : it->second) {
        if (sig.args.size() == 2 && sig.args[0]->equals(*s) && sig.args[1]->equals(*s)) {
          a = coerce(a, sig.args[0]);
          b = coerce(b, sig.args[1]);
          return t_app(op, {a, b}, sig.result);
        }
      }
    }
    if (is_ring_sort(s)) {
      a = coerce(a, s);
      b = coerce(b, s);
      return t_app(op, {a, b}, s);
    }
    throw SortError(std::string("no '") + op + "' operation on sort " + s->str());
  }

  TermPtr parse_factor() {
    TermPtr t = parse_primary();
    if (lx.is("^")) {
      lx.next();
      Exponent e;
      if (lx.kind == Tok::Int) {
        e.value = lx.integer();
      } else {
        std::string n = lx.ident("exponent");
        if (!in_schema_scope(n)) throw SortError("exponent variable '" + n + "' is not bound by a schema");
        e.symbolic = true;
        e.var = n;
      }
      if (t->sort && !is_ring_sort(t->sort)) throw SortError("'^' needs a ring-structured sort");
      t = t_pow(t, e);
    }
    return t;
  }

  TermPtr parse_primary() {
    if (lx.kind == Tok::Int) {
      int v = lx.integer();
      return t_num(v, nullptr);
    }
    if (lx.is("(")) {
      lx.next();
      TermPtr t = parse_term();
      lx.expect(")");
      return t;
    }
    std::string n = lx.ident("term");
    if (is_keyword(n)) lx.fail("unexpected keyword '" + n + "' in term");
    if (lx.is("(")) {
      lx.next();
      std::vector<TermPtr> args;
      if (!lx.is(")")) {
        args.push_back(parse_term());
        while (lx.is(",")) {
          lx.next();
          args.push_back(parse_term());
        }
      }
      lx.expect(")");
      auto it = st.functions.find(n);
      if (it == st.functions.end()) throw SortError("unknown function symbol '" + n + "'");
      const SymbolTable::FnSig* match = nullptr;
      bool arityOk = false;
      for (const auto& sig : it->second) {
        if (sig.args.size() != args.size()) continue;
        arityOk = true;
        bool ok = true;
        for (std::size_t i = 0; i < args.size(); ++i)
          if (args[i]->sort && !args[i]->sort->equals(*sig.args[i])) ok = false;
        if (!ok) continue;
        if (match) throw SortError("ambiguous overload for function '" + n + "'");
        match = &sig;
      }
      if (!match)
        throw SortError(arityOk ? "no matching overload for function '" + n + "'"
                                : "arity mismatch for function '" + n + "'");
      for (std::size_t i = 0; i < args.size(); ++i) args[i] = coerce(args[i], match->args[i]);
      return t_app(n, std::move(args), match->result);
    }
    if (SortPtr s = lookup_var(n)) return t_var(n, s);
    if (auto it = st.freeVars.find(n); it != st.freeVars.end()) return t_var(n, it->second);
    if (auto it = st.constants.find(n); it != st.constants.end()) return t_const(n, it->second);
    throw SortError("unbound identifier '" + n + "'");
  }

  // ---- formulas
  FormulaPtr parse_formula() {
    if (lx.isIdent("forall") || lx.isIdent("exists")) {
      bool uni = lx.text == "forall";
      lx.next();
      std::string v = lx.ident("variable");
      lx.expect(":");
      SortPtr s = parse_sort();
      lx.expect(".");
      scope.emplace_back(v, s);
      FormulaPtr body = parse_formula();
      scope.pop_back();
      return uni ? f_forall(v, s, body) : f_exists(v, s, body);
    }
    return parse_impl();
  }

  FormulaPtr parse_impl() {
    FormulaPtr l = parse_disj();
    if (lx.is("=>")) {
      lx.next();
      FormulaPtr r = parse_formula();
      return f_implies(l, r);
    }
    return l;
  }

  FormulaPtr parse_disj() {
    FormulaPtr l = parse_conj();
    while (lx.is("\\/")) {
      lx.next();
      l = f_or(l, parse_conj());
    }
    return l;
  }

  FormulaPtr parse_conj() {
    FormulaPtr l = parse_atom();
    while (lx.is("/\\")) {
      lx.next();
      l = f_and(l, parse_atom());
    }
    return l;
  }

  SchemaBound parse_schema_bound() {
    SchemaBound b;
    if (lx.kind == Tok::Int) {
      b.value = lx.integer();
    } else {
      std::string n = lx.ident("schema bound");
      if (st.schemaBoundDefault) {
        b.value = *st.schemaBoundDefault;
      } else {
        b.symbolic = true;
        b.name = n;
      }
    }
    return b;
  }

  FormulaPtr parse_schema(bool disjunctive) {
    lx.next();
    if (lx.is("{")) {  // explicit finite list
      lx.next();
      std::vector<FormulaPtr> kids;
      if (!lx.is("}")) {
        kids.push_back(parse_formula());
        while (lx.is(";")) {
          lx.next();
          kids.push_back(parse_formula());
        }
      }
      lx.expect("}");
      return disjunctive ? f_bigor(std::move(kids)) : f_bigand(std::move(kids));
    }
    lx.expect("[");
    std::string v = lx.ident("schema variable");
    lx.expect("=");
    int lo = lx.integer();
    lx.expect("..");
    SchemaBound hi = parse_schema_bound();
    lx.expect("]");
    schemaScope.push_back(v);
    FormulaPtr body = parse_formula();
    schemaScope.pop_back();
    return disjunctive ? f_bigor_schema(v, lo, hi, body) : f_bigand_schema(v, lo, hi, body);
  }

  FormulaPtr parse_atom() {
    if (lx.is("~")) {
      lx.next();
      return f_not(parse_atom());
    }
    if (lx.isIdent("box")) {
      lx.next();
      lx.expect("[");
      std::string n = lx.ident("nucleus name");
      if (!st.nuclei.count(n)) throw SortError("unknown nucleus '" + n + "'");
      lx.expect("]");
      return f_modal(n, parse_atom());
    }
    if (lx.isIdent("true")) {
      lx.next();
      return f_top();
    }
    if (lx.isIdent("false")) {
      lx.next();
      return f_bot();
    }
    if (lx.isIdent("bigvee")) return parse_schema(true);
    if (lx.isIdent("bigand")) return parse_schema(false);
    if (lx.isIdent("inv") || lx.isIdent("nilp")) {
      bool isInv = lx.text == "inv";
      lx.next();
      lx.expect("(");
      TermPtr t = parse_term();
      lx.expect(")");
      t = coerce(t, t->sort ? t->sort
                            : (st.defaultRingSort ? Sort::sheaf(*st.defaultRingSort) : nullptr));
      if (!is_ring_sort(t->sort))
        throw SortError(std::string(isInv ? "inv" : "nilp") + " needs a ring-structured sort");
      if (isInv) {
        std::string w = fresh_var("w");
        return f_exists(w, t->sort,
                        f_eq(t_app("mul", {t, t_var(w, t->sort)}, t->sort), t_num(1, t->sort)));
      }
      std::string n = fresh_var("n");
      SchemaBound b;
      if (st.schemaBoundDefault) {
        b.value = *st.schemaBoundDefault;
      } else {
        b.symbolic = true;
        b.name = "B";
      }
      Exponent e;
      e.symbolic = true;
      e.var = n;
      return f_bigor_schema(n, 0, b, f_eq(t_pow(t, e), t_num(0, t->sort)));
    }
    if (lx.is("(")) {
      // Could be a parenthesized formula or a parenthesized term.
      auto snap = lx.save();
      try {
        lx.next();
        FormulaPtr f = parse_formula();
        lx.expect(")");
        return f;
      } catch (const std::exception&) {
        lx.restore(snap);
        return parse_term_atom();
      }
    }
    return parse_term_atom();
  }

  FormulaPtr parse_term_atom() {
    TermPtr t = parse_term();
    if (lx.is("=")) {
      lx.next();
      TermPtr r = parse_term();
      SortPtr s = t->sort ? t->sort : r->sort;
      t = coerce(t, s);
      r = coerce(r, s ? s : nullptr);
      if (!t->sort->equals(*r->sort))
        throw SortError("equality between different sorts " + t->sort->str() + " and " +
                        r->sort->str());
      return f_eq(t, r);
    }
    if (lx.isIdent("in")) {
      lx.next();
      std::string n = lx.ident("subsheaf or power-sort term");
      TermPtr cont;
      if (SortPtr s = lookup_var(n))
        cont = t_var(n, s);
      else if (auto it = st.freeVars.find(n); it != st.freeVars.end())
        cont = t_var(n, it->second);
      else if (auto it = st.constants.find(n); it != st.constants.end())
        cont = t_const(n, it->second);
      else
        throw SortError("unbound identifier '" + n + "'");
      if (cont->sort->kind != Sort::Kind::Power)
        throw SortError("'in' needs a power-sort container, got " + cont->sort->str());
      t = coerce(t, cont->sort->inner);
      return f_member(t, cont);
    }
    t = coerce(t, t->sort);
    if (t->sort->kind != Sort::Kind::Omega)
      throw SortError("a bare term used as a formula must have sort Omega, got " + t->sort->str());
    return f_prop(t);
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const SymbolTable& symtab) {
  Parser p(text, symtab);
  FormulaPtr f = p.parse_formula();
  if (p.lx.kind != Tok::End) p.lx.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------- printer

namespace {

void print_term_prec(std::ostream& os, const Term& t, int level);

void print_term_args(std::ostream& os, const Term& t) {
  os << t.name << "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) os << ", ";
    print_term_prec(os, *t.args[i], 0);
  }
  os << ")";
}

// levels: 0 = sum, 1 = product, 2 = power base, 3 = primary
void print_term_prec(std::ostream& os, const Term& t, int level) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      os << t.name;
      return;
    case Term::Kind::Num:
      os << t.num;
      return;
    case Term::Kind::App: {
      bool infixAdd = t.name == "add" && t.args.size() == 2;
      bool infixMul = t.name == "mul" && t.args.size() == 2;
      if (infixAdd) {
        if (level > 0) os << "(";
        print_term_prec(os, *t.args[0], 0);
        os << " + ";
        print_term_prec(os, *t.args[1], 1);
        if (level > 0) os << ")";
      } else if (infixMul) {
        if (level > 1) os << "(";
        print_term_prec(os, *t.args[0], 1);
        os << "*";
        print_term_prec(os, *t.args[1], 2);
        if (level > 1) os << ")";
      } else {
        print_term_args(os, t);
      }
      return;
    }
    case Term::Kind::Pow:
      print_term_prec(os, *t.base, 3);
      os << "^";
      if (t.exp.symbolic)
        os << t.exp.var;
      else
        os << t.exp.value;
      return;
  }
}

bool is_not(const Formula& f) {
  return f.kind == Formula::Kind::Implies && f.b->kind == Formula::Kind::Bot;
}

// levels: 0 = formula, 1 = implication lhs, 2 = disjunct, 3 = atom
void print_prec(std::ostream& os, const Formula& f, int level);

void print_guarded_body(std::ostream& os, const Formula& body) {
  // operand of ~ or box[...]
  switch (body.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
    case Formula::Kind::Prop:
      print_prec(os, body, 3);
      return;
    case Formula::Kind::Modal:
      print_prec(os, body, 3);
      return;
    default:
      if (is_not(body)) {
        print_prec(os, body, 3);
        return;
      }
      os << "(";
      print_prec(os, body, 0);
      os << ")";
  }
}

void print_prec(std::ostream& os, const Formula& f, int level) {
  auto paren = [&](int mine, auto&& body) {
    if (level > mine) os << "(";
    body();
    if (level > mine) os << ")";
  };
  switch (f.kind) {
    case Formula::Kind::Top:
      os << "true";
      return;
    case Formula::Kind::Bot:
      os << "false";
      return;
    case Formula::Kind::Prop:
      print_term_prec(os, *f.t1, 0);
      return;
    case Formula::Kind::Eq:
      print_term_prec(os, *f.t1, 0);
      os << " = ";
      print_term_prec(os, *f.t2, 0);
      return;
    case Formula::Kind::Member:
      print_term_prec(os, *f.t1, 0);
      os << " in ";
      print_term_prec(os, *f.t2, 0);
      return;
    case Formula::Kind::Modal:
      os << "box[" << f.nucleus << "]";
      print_guarded_body(os, *f.a);
      return;
    case Formula::Kind::Implies:
      if (is_not(f)) {
        os << "~";
        print_guarded_body(os, *f.a);
        return;
      }
      paren(0, [&] {
        print_prec(os, *f.a, 1);
        os << " => ";
        print_prec(os, *f.b, 0);
      });
      return;
    case Formula::Kind::And:
      paren(2, [&] {
        print_prec(os, *f.a, 2);
        os << " /\\ ";
        print_prec(os, *f.b, 3);
      });
      return;
    case Formula::Kind::Or:
      paren(1, [&] {
        print_prec(os, *f.a, 1);
        os << " \\/ ";
        print_prec(os, *f.b, 2);
      });
      return;
    case Formula::Kind::BigAnd:
    case Formula::Kind::BigOr: {
      os << (f.kind == Formula::Kind::BigAnd ? "bigand{" : "bigvee{");
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) os << "; ";
        print_prec(os, *f.kids[i], 0);
      }
      os << "}";
      return;
    }
    case Formula::Kind::BigAndSchema:
    case Formula::Kind::BigOrSchema:
      paren(0, [&] {
        os << (f.kind == Formula::Kind::BigAndSchema ? "bigand[" : "bigvee[") << f.var << "="
           << f.lo << "..";
        if (f.hi.symbolic)
          os << f.hi.name;
        else
          os << f.hi.value;
        os << "] ";
        print_prec(os, *f.a, 0);
      });
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      paren(0, [&] {
        os << (f.kind == Formula::Kind::Forall ? "forall " : "exists ") << f.var << ":"
           << f.sort->str() << ". ";
        print_prec(os, *f.a, 0);
      });
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  print_prec(os, f, 0);
  return os.str();
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_term_prec(os, t, 0);
  return os.str();
}

// ---------------------------------------------------------------- free variables

namespace {

void term_vars(const Term& t, std::set<std::pair<std::string, std::string>>& out,
               const std::set<std::string>& bound) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (!bound.count(t.name)) out.insert({t.name, t.sort->str()});
      return;
    case Term::Kind::App:
      for (auto& a : t.args) term_vars(*a, out, bound);
      return;
    case Term::Kind::Pow:
      term_vars(*t.base, out, bound);
      return;
    default:
      return;
  }
}

void fv(const Formula& f, std::set<std::pair<std::string, std::string>>& out,
        std::set<std::string>& bound) {
  switch (f.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Eq:
    case Formula::Kind::Member:
      term_vars(*f.t1, out, bound);
      term_vars(*f.t2, out, bound);
      return;
    case Formula::Kind::Prop:
      term_vars(*f.t1, out, bound);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      fv(*f.a, out, bound);
      fv(*f.b, out, bound);
      return;
    case Formula::Kind::BigAnd:
    case Formula::Kind::BigOr:
      for (auto& k : f.kids) fv(*k, out, bound);
      return;
    case Formula::Kind::BigAndSchema:
    case Formula::Kind::BigOrSchema:
    case Formula::Kind::Modal:
      fv(*f.a, out, bound);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool fresh = bound.insert(f.var).second;
      fv(*f.a, out, bound);
      if (fresh) bound.erase(f.var);
      return;
    }
  }
}

}  // namespace

std::set<std::pair<std::string, std::string>> free_vars(const Formula& f) {
  std::set<std::pair<std::string, std::string>> out;
  std::set<std::string> bound;
  fv(f, out, bound);
  return out;
}

// ---------------------------------------------------------------- substitution

namespace {

TermPtr subst_term(const TermPtr& t, const std::string& v, const TermPtr& repl) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->name == v) {
        if (!t->sort->equals(*repl->sort))
          throw SortError("substitution sort mismatch for '" + v + "': " + t->sort->str() +
                          " vs " + repl->sort->str());
        return repl;
      }
      return t;
    case Term::Kind::App: {
      std::vector<TermPtr> as;
      bool changed = false;
      for (auto& a : t->args) {
        TermPtr n = subst_term(a, v, repl);
        changed |= (n != a);
        as.push_back(n);
      }
      return changed ? t_app(t->name, std::move(as), t->sort) : t;
    }
    case Term::Kind::Pow: {
      TermPtr b = subst_term(t->base, v, repl);
      return b == t->base ? t : t_pow(b, t->exp);
    }
    default:
      return t;
  }
}

bool term_mentions(const Term& t, const std::string& v) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t.name == v;
    case Term::Kind::App:
      for (auto& a : t.args)
        if (term_mentions(*a, v)) return true;
      return false;
    case Term::Kind::Pow:
      return term_mentions(*t.base, v);
    default:
      return false;
  }
}

FormulaPtr subst(const FormulaPtr& f, const std::string& v, const TermPtr& repl);

FormulaPtr subst_quant(const FormulaPtr& f, const std::string& v, const TermPtr& repl) {
  if (f->var == v) return f;  // bound occurrence shadows
  bool capture = false;
  {
    std::set<std::pair<std::string, std::string>> rfv;
    std::set<std::string> none;
    term_vars(*repl, rfv, none);
    for (auto& [n, s] : rfv)
      if (n == f->var) capture = true;
  }
  std::string var = f->var;
  FormulaPtr body = f->a;
  if (capture) {
    std::string fresh = var;
    auto used = [&](const std::string& n) {
      if (term_mentions(*repl, n)) return true;
      for (auto& [fn, fs] : free_vars(*body))
        if (fn == n) return true;
      return false;
    };
    do {
      fresh += "'";
    } while (used(fresh));
    body = subst(body, var, t_var(fresh, f->sort));
    var = fresh;
  }
  FormulaPtr nb = subst(body, v, repl);
  if (nb == f->a && var == f->var) return f;
  return f->kind == Formula::Kind::Forall ? f_forall(var, f->sort, nb)
                                          : f_exists(var, f->sort, nb);
}

FormulaPtr subst(const FormulaPtr& f, const std::string& v, const TermPtr& repl) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq: {
      TermPtr a = subst_term(f->t1, v, repl), b = subst_term(f->t2, v, repl);
      return (a == f->t1 && b == f->t2) ? f : f_eq(a, b);
    }
    case Formula::Kind::Member: {
      TermPtr a = subst_term(f->t1, v, repl), b = subst_term(f->t2, v, repl);
      return (a == f->t1 && b == f->t2) ? f : f_member(a, b);
    }
    case Formula::Kind::Prop: {
      TermPtr a = subst_term(f->t1, v, repl);
      return a == f->t1 ? f : f_prop(a);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      FormulaPtr a = subst(f->a, v, repl), b = subst(f->b, v, repl);
      if (a == f->a && b == f->b) return f;
      return binop(f->kind, a, b);
    }
    case Formula::Kind::BigAnd:
    case Formula::Kind::BigOr: {
      std::vector<FormulaPtr> kids;
      bool changed = false;
      for (auto& k : f->kids) {
        FormulaPtr n = subst(k, v, repl);
        changed |= (n != k);
        kids.push_back(n);
      }
      if (!changed) return f;
      return f->kind == Formula::Kind::BigAnd ? f_bigand(std::move(kids))
                                              : f_bigor(std::move(kids));
    }
    case Formula::Kind::BigAndSchema:
    case Formula::Kind::BigOrSchema: {
      FormulaPtr a = subst(f->a, v, repl);
      if (a == f->a) return f;
      return schema(f->kind, f->var, f->lo, f->hi, a);
    }
    case Formula::Kind::Modal: {
      FormulaPtr a = subst(f->a, v, repl);
      return a == f->a ? f : f_modal(f->nucleus, a);
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return subst_quant(f, v, repl);
  }
  return f;
}

}  // namespace

FormulaPtr substitute(const Formula& f, const std::string& v, TermPtr t) {
  auto self = std::make_shared<Formula>(f);
  return subst(self, v, t);
}

// ---------------------------------------------------------------- classification

bool is_geometric(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Member:
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
    case Formula::Kind::Prop:
      return true;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return is_geometric(*f.a) && is_geometric(*f.b);
    case Formula::Kind::BigOr: {
      for (auto& k : f.kids)
        if (!is_geometric(*k)) return false;
      return true;
    }
    case Formula::Kind::BigOrSchema:
      return is_geometric(*f.a);
    case Formula::Kind::Exists:
      return is_geometric(*f.a);
    case Formula::Kind::BigAnd:
    case Formula::Kind::BigAndSchema:
    case Formula::Kind::Implies:
    case Formula::Kind::Forall:
    case Formula::Kind::Modal:
      return false;
  }
  return false;
}

bool is_geometric_implication(const Formula& f) {
  const Formula* g = &f;
  while (g->kind == Formula::Kind::Forall) g = g->a.get();
  if (g->kind == Formula::Kind::Implies)
    return is_geometric(*g->a) && is_geometric(*g->b);
  return is_geometric(*g);  // degenerate shape: empty prefix, antecedent ⊤
}

// ---------------------------------------------------------------- translations

namespace {

using Wrap = std::function<FormulaPtr(FormulaPtr)>;

FormulaPtr translate(const FormulaPtr& f, const Wrap& box, const Wrap& gray) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return f;  // box(⊤) ⇔ ⊤
    case Formula::Kind::Bot:
    case Formula::Kind::Eq:
    case Formula::Kind::Member:
    case Formula::Kind::Prop:
    case Formula::Kind::Modal:
      return box(f);
    case Formula::Kind::And:
      return gray(f_and(translate(f->a, box, gray), translate(f->b, box, gray)));
    case Formula::Kind::BigAnd: {
      std::vector<FormulaPtr> kids;
      for (auto& k : f->kids) kids.push_back(translate(k, box, gray));
      return gray(f_bigand(std::move(kids)));
    }
    case Formula::Kind::BigAndSchema:
      return gray(schema(f->kind, f->var, f->lo, f->hi, translate(f->a, box, gray)));
    case Formula::Kind::Or:
      return box(f_or(translate(f->a, box, gray), translate(f->b, box, gray)));
    case Formula::Kind::BigOr: {
      std::vector<FormulaPtr> kids;
      for (auto& k : f->kids) kids.push_back(translate(k, box, gray));
      return box(f_bigor(std::move(kids)));
    }
    case Formula::Kind::BigOrSchema:
      return box(schema(f->kind, f->var, f->lo, f->hi, translate(f->a, box, gray)));
    case Formula::Kind::Implies:
      return gray(f_implies(translate(f->a, box, gray), translate(f->b, box, gray)));
    case Formula::Kind::Forall:
      return gray(f_forall(f->var, f->sort, translate(f->a, box, gray)));
    case Formula::Kind::Exists:
      return box(f_exists(f->var, f->sort, translate(f->a, box, gray)));
  }
  return f;
}

}  // namespace

TranslationResult box_translate(const Formula& f, const std::string& nucleusName, bool elideGray) {
  Wrap box = [&](FormulaPtr x) { return f_modal(nucleusName, std::move(x)); };
  Wrap gray = elideGray ? Wrap([](FormulaPtr x) { return x; }) : box;
  auto self = std::make_shared<Formula>(f);
  return {translate(self, box, gray), elideGray};
}

TranslationResult negneg_translate(const Formula& f, bool elideGray) {
  Wrap box = [](FormulaPtr x) { return f_not(f_not(std::move(x))); };
  Wrap gray = elideGray ? Wrap([](FormulaPtr x) { return x; }) : box;
  auto self = std::make_shared<Formula>(f);
  return {translate(self, box, gray), elideGray};
}

}  // namespace toposforge
