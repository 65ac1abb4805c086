#include <doctest.h>

#include <random>

#include "toposforge/formula.hpp"
#include "toposforge/verify.hpp"

using namespace toposforge;

namespace {

SymbolTable basic_symbols() {
  SymbolTable st;
  st.sheafSorts = {"F", "X", "Y"};
  st.ringSorts = {"F"};
  SortPtr sF = Sort::sheaf("F");
  SortPtr sX = Sort::sheaf("X");
  SortPtr sY = Sort::sheaf("Y");
  st.functions["add"].push_back({{sF, sF}, sF});
  st.functions["mul"].push_back({{sF, sF}, sF});
  st.functions["P"].push_back({{sF}, Sort::omega()});
  st.functions["Q"].push_back({{sF}, Sort::omega()});
  st.functions["alpha"].push_back({{sF}, sF});
  st.functions["f"].push_back({{sX}, sY});
  st.functions["p"].push_back({{sF}, sF});
  st.freeVars["x"] = sF;
  st.freeVars["y"] = sF;
  st.constants["G"] = Sort::power(sF);
  st.nuclei = {"j", "negneg"};
  return st;
}

}  // namespace

TEST_CASE("negation is definitional sugar for implication into falsehood") {
  auto st = basic_symbols();
  FormulaPtr f = parse_formula("~(x = 0)", st);
  CHECK(f->kind == Formula::Kind::Implies);
  CHECK(f->b->kind == Formula::Kind::Bot);
  CHECK(f->a->kind == Formula::Kind::Eq);
}

TEST_CASE("universally quantified implication over omega-valued atoms is a geometric implication") {
  auto st = basic_symbols();
  FormulaPtr f = parse_formula("forall x:F. (P(x) => Q(x))", st);
  CHECK(f->kind == Formula::Kind::Forall);
  CHECK(is_geometric_implication(*f));
  CHECK_FALSE(is_geometric(*f));
}

TEST_CASE("malformed input reports a position") {
  auto st = basic_symbols();
  CHECK_THROWS_AS(parse_formula("forall x:F. (", st), ParseError);
  try {
    parse_formula("forall x:F. (", st);
  } catch (const ParseError& e) {
    CHECK(e.offset >= 12);
  }
}

TEST_CASE("free variables") {
  auto st = basic_symbols();
  FormulaPtr f = parse_formula("x = y", st);
  auto fv = free_vars(*f);
  CHECK(fv.size() == 2);
  FormulaPtr g = parse_formula("forall x:F. x = y", st);
  auto gv = free_vars(*g);
  REQUIRE(gv.size() == 1);
  CHECK(gv.begin()->first == "y");
  CHECK(free_vars(*f_top()).empty());
}

TEST_CASE("substitution") {
  auto st = basic_symbols();
  SortPtr sF = Sort::sheaf("F");
  FormulaPtr f = parse_formula("x = 0", st);
  FormulaPtr g = substitute(*f, "x", t_num(1, sF));
  CHECK(print_formula(*g) == "1 = 0");

  // capture avoidance: (forall x. x = y)[y := x] renames the binder
  FormulaPtr q = parse_formula("forall x:F. x = y", st);
  FormulaPtr r = substitute(*q, "y", t_var("x", sF));
  CHECK(r->kind == Formula::Kind::Forall);
  CHECK(r->var != "x");
  CHECK(print_formula(*r) == "forall x':F. x' = x");

  FormulaPtr t = substitute(*f_top(), "x", t_num(1, sF));
  CHECK(t->kind == Formula::Kind::Top);

  CHECK_THROWS_AS(substitute(*f, "x", t_var("p", Sort::omega())), SortError);
}

TEST_CASE("geometric classification") {
  auto st = basic_symbols();
  CHECK(is_geometric(*parse_formula("exists x:F. alpha(x) = y", st)));
  CHECK_FALSE(is_geometric(*parse_formula("true => true", st)));
  CHECK_FALSE(is_geometric(*f_bigand({f_top(), f_top()})));
  CHECK(is_geometric(*parse_formula("bigvee[n=0..3] x^n = 0", st)));
  CHECK(is_geometric(*parse_formula("x in G", st)));

  // geometric implications
  CHECK(is_geometric_implication(*parse_formula("x = 0 \\/ x = 1", st)));  // degenerate shape
  CHECK_FALSE(is_geometric_implication(*parse_formula("(true => false) => true", st)));
  CHECK(is_geometric_implication(*parse_formula("forall x:F. x in G => x = 0", st)));
  // substitution preserves geometricity
  FormulaPtr g = parse_formula("exists w:F. x = w*y", st);
  CHECK(is_geometric(*g));
  CHECK(is_geometric(*substitute(*g, "x", t_num(1, Sort::sheaf("F")))));
}

TEST_CASE("box translation") {
  auto st = basic_symbols();
  FormulaPtr eq = parse_formula("x = y", st);
  auto t = box_translate(*eq, "j", false);
  CHECK(print_formula(*t.formula) == "box[j](x = y)");

  FormulaPtr conj = parse_formula("x = y /\\ y = x", st);
  auto elided = box_translate(*conj, "j", true);
  CHECK(print_formula(*elided.formula) == "box[j](x = y) /\\ box[j](y = x)");
  CHECK(elided.elidedGrayBoxes);
  auto full = box_translate(*conj, "j", false);
  CHECK(print_formula(*full.formula) == "box[j](box[j](x = y) /\\ box[j](y = x))");

  auto bot = box_translate(*f_bot(), "j", true);
  CHECK(bot.formula->kind == Formula::Kind::Modal);
  CHECK(bot.formula->a->kind == Formula::Kind::Bot);

  auto top = box_translate(*f_top(), "j", false);
  CHECK(top.formula->kind == Formula::Kind::Top);
}

TEST_CASE("double negation translation") {
  auto st = basic_symbols();
  FormulaPtr f = parse_formula("forall y:Y. exists x:X. f(x) = y", st);
  auto t = negneg_translate(*f);
  CHECK(print_formula(*t.formula) == "forall y:Y. ~~(exists x:X. ~~(f(x) = y))");

  CHECK(negneg_translate(*f_top()).formula->kind == Formula::Kind::Top);
  CHECK(print_formula(*negneg_translate(*f_bot()).formula) == "~~false");
}

TEST_CASE("box translation of geometric formulas keeps forbidden connectives boxed") {
  auto st = basic_symbols();
  // the output has no =>, forall, bigand outside a modal node iff the input
  // is geometric
  auto outside_forbidden = [](const Formula& f) {
    std::function<bool(const Formula&)> rec = [&](const Formula& g) -> bool {
      switch (g.kind) {
        case Formula::Kind::Implies:
        case Formula::Kind::Forall:
        case Formula::Kind::BigAnd:
        case Formula::Kind::BigAndSchema:
          return true;
        case Formula::Kind::Modal:
          return false;  // everything below is boxed
        case Formula::Kind::And:
        case Formula::Kind::Or:
          return rec(*g.a) || rec(*g.b);
        case Formula::Kind::BigOr: {
          for (auto& k : g.kids)
            if (rec(*k)) return true;
          return false;
        }
        case Formula::Kind::BigOrSchema:
        case Formula::Kind::Exists:
          return rec(*g.a);
        default:
          return false;
      }
    };
    return rec(f);
  };
  FormulaPtr geo = parse_formula("exists w:F. x = w \\/ x = 0", st);
  FormulaPtr nongeo = parse_formula("forall w:F. w = x => x = w", st);
  CHECK_FALSE(outside_forbidden(*box_translate(*geo, "j", true).formula));
  CHECK(outside_forbidden(*box_translate(*nongeo, "j", true).formula));
}

TEST_CASE("parse is a left inverse of the printer on generated formulas") {
  FiniteSpace S = FiniteSpace::sierpinski();
  SpaceEnv se(S);
  std::mt19937_64 rng(7);
  FormulaGen gen(se.env, rng);
  FormulaGen::Config cfg;
  SymbolTable st = se.env.symbols();
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = gen.gen(3, cfg);
    std::string s = print_formula(*f);
    FormulaPtr g = parse_formula(s, st);
    CHECK_MESSAGE(f->equals(*g), s);
  }
}

TEST_CASE("schema and explicit-list syntax round-trips") {
  auto st = basic_symbols();
  for (const char* text : {"bigvee[n=0..3] x^n = 0", "bigand[n=1..2] x^n = x",
                           "bigvee{x = 0; x = 1}", "bigand{true; x = 0}",
                           "exists p:Omega. p => x = 0", "box[negneg](x = 0)"}) {
    FormulaPtr f = parse_formula(text, st);
    FormulaPtr g = parse_formula(print_formula(*f), st);
    CHECK_MESSAGE(f->equals(*g), text);
  }
}

TEST_CASE("quantifying over all sheaves is rejected with a dedicated error") {
  auto st = basic_symbols();
  CHECK_THROWS_AS(parse_formula("forall Z:Sheaf. true", st), SortError);
}

TEST_CASE("unbound identifiers and arity mismatches are sort errors") {
  auto st = basic_symbols();
  CHECK_THROWS_AS(parse_formula("zz = 0", st), SortError);
  CHECK_THROWS_AS(parse_formula("alpha(x, y) = x", st), SortError);
  CHECK_THROWS_AS(parse_formula("f(x) = x", st), SortError);  // sorts X -> Y vs F
}
