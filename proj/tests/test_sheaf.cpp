#include <doctest.h>

#include "toposforge/forcing.hpp"
#include "toposforge/verify.hpp"

using namespace toposforge;

TEST_CASE("the constant presheaf fails gluing on a discrete space") {
  FiniteSpace X = FiniteSpace::discrete({"a", "b"});
  // sections(U) = M = {0,1} for every inhabited U, identity restrictions:
  // the matching-families oracle over the two singletons gives M × M, so
  // gluing fails over the full open
  Sheaf F(X, "constpre");
  int emptyIdx = X.index_of(0);
  for (int u = 0; u < X.open_count(); ++u)
    F.set_sections(u, u == emptyIdx ? std::vector<std::string>{"*"}
                                    : std::vector<std::string>{"0", "1"});
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if ((X.open_at(v) & ~X.open_at(u)) != 0) continue;
      if (v == emptyIdx)
        F.set_restriction(u, v, std::vector<int>(F.card(u), 0));
      else
        F.set_restriction(u, v, {0, 1});
    }
  CHECK_THROWS_WITH_AS(F.check(), doctest::Contains("gluing-failure"), ValidationError);
}

TEST_CASE("constant sheaves") {
  FiniteSpace S = FiniteSpace::sierpinski();
  Sheaf M = constant_sheaf(S, {"0", "1"}, "M");
  CHECK(M.card(S.index_of(S.full())) == 2);  // S is connected
  CHECK(M.card(S.index_of(0)) == 1);

  FiniteSpace D = FiniteSpace::discrete({"a", "b"});
  Sheaf MD = constant_sheaf(D, {"0", "1"}, "M");
  CHECK(MD.card(D.index_of(D.full())) == 4);  // |M|^2
  CHECK(MD.stalk_card(0) == 2);
}

TEST_CASE("omega is a sheaf with the right stalks") {
  FiniteSpace S = FiniteSpace::sierpinski();
  Sheaf O = omega_sheaf(S);
  CHECK_NOTHROW(O.check());
  CHECK(O.stalk_card(1) == 3);  // min open of sigma is S; Omega(S) = {∅, {eta}, S}
  CHECK(O.stalk_card(0) == 2);
}

TEST_CASE("power objects") {
  FiniteSpace S = FiniteSpace::sierpinski();
  PowerObject P1 = power_object(terminal_sheaf(S));
  CHECK(P1.sheaf.card(S.index_of(S.full())) == 3);  // the opens of S
  CHECK(P1.sheaf.card(S.index_of(0)) == 1);

  Sheaf M = constant_sheaf(S, {"0", "1"}, "M");
  PowerObject PM = power_object(M);
  // oracle: pairs (S_sigma ⊆ M(S), S_eta ⊆ M({eta})) with S_sigma ⊆ S_eta
  // under the identity restriction: 1 + 2 + 2 + 4 = 9
  CHECK(PM.sheaf.card(S.index_of(S.full())) == 9);
}

TEST_CASE("comprehension") {
  FiniteSpace S = FiniteSpace::sierpinski();
  SpaceEnv se(S);
  SortPtr sM = Sort::sheaf("M");

  Subsheaf empty = comprehend(*se.M, f_bot(), "x", se.env);
  CHECK(empty.selected[S.index_of(S.full())].count() == 0);
  CHECK(empty.selected[S.index_of(0)].count() == 1);

  // extension by the empty set: {x : U0} with U0 = {eta}
  FormulaPtr u1 = f_prop(t_const("U1", Sort::omega()));
  Subsheaf jshriek = comprehend(*se.M, u1, "x", se.env);
  CHECK(jshriek.selected[S.index_of(S.full())].count() == 0);
  CHECK(jshriek.selected[S.index_of(bit(0))].count() == 2);

  // extension by zero: {x : x = 0 ∨ U0}
  FormulaPtr extz = f_or(f_eq(t_var("x", sM), t_num(0, sM)), u1);
  Subsheaf ez = comprehend(*se.M, extz, "x", se.env);
  CHECK(ez.selected[S.index_of(S.full())].count() == 1);
  CHECK(ez.selected[S.index_of(bit(0))].count() == 2);
}

TEST_CASE("plus construction and sheafification") {
  FiniteSpace S = FiniteSpace::sierpinski();
  int fullIdx = S.index_of(S.full());
  int etaIdx = S.index_of(bit(0));

  SUBCASE("singleton sheaf is fixed") {
    Sheaf one = terminal_sheaf(S);
    for (auto mk : {0, 1}) {
      Nucleus j = mk == 0 ? nucleus_negneg(S) : nucleus_open(S, bit(0));
      PlusResult P = plus_construction(one, j);
      CHECK(P.sheaf.card(fullIdx) == 1);
      CHECK(P.sheaf.card(etaIdx) == 1);
    }
  }

  SUBCASE("G with G(S)=1, G({eta})=Z/2 under the open nucleus at {eta}") {
    Sheaf G(S, "G");
    G.set_sections(S.index_of(0), {"*"});
    G.set_sections(etaIdx, {"0", "1"});
    G.set_sections(fullIdx, {"g"});
    for (int u = 0; u < S.open_count(); ++u) {
      G.set_restriction(u, u, [&] {
        std::vector<int> t(G.card(u));
        for (int s = 0; s < G.card(u); ++s) t[s] = s;
        return t;
      }());
      if (u != S.index_of(0)) G.set_restriction(u, S.index_of(0), std::vector<int>(G.card(u), 0));
    }
    G.set_restriction(fullIdx, etaIdx, {0});
    CHECK_NOTHROW(G.check());

    Nucleus j = nucleus_open(S, bit(0));
    PlusResult P = plus_construction(G, j);
    CHECK(P.sheaf.card(fullIdx) == 2);  // G+(S) ≅ Z/2: sheafification is j_* j^{-1}
    CHECK(P.sheaf.card(etaIdx) == 2);
    CHECK(is_box_sheaf(P.sheaf, j));
  }

  SUBCASE("identity nucleus fixes everything") {
    SpaceEnv se(S);
    Nucleus id = nucleus_identity(S.opens_frame());
    for (const Sheaf* F : {se.M.get()}) {
      PlusResult P = plus_construction(*F, id);
      for (int u = 0; u < S.open_count(); ++u) CHECK(P.sheaf.card(u) == F->card(u));
      CHECK(is_box_separated(*F, id));
      CHECK(is_box_sheaf(*F, id));
    }
  }

  SUBCASE("negneg examples") {
    Sheaf M = constant_sheaf(S, {"0", "1"}, "M");
    Nucleus nn = nucleus_negneg(S);
    CHECK(is_box_separated(M, nn));
    CHECK(is_box_sheaf(M, nn));  // restriction S -> {eta} is bijective
    PlusResult PP = sheafify(M, nn);
    for (int u = 0; u < S.open_count(); ++u) CHECK(PP.sheaf.card(u) == M.card(u));

    // j_!(Z/2 from {eta}): F(S) = ∅, F({eta}) = Z/2; not a negneg-sheaf,
    // its sheafification is the constant sheaf
    SpaceEnv se(S);
    FormulaPtr u1 = f_prop(t_const("U1", Sort::omega()));
    Sheaf J = subsheaf_to_sheaf(comprehend(*se.M, u1, "x", se.env), "jshriek");
    CHECK(J.card(S.index_of(S.full())) == 0);
    CHECK_FALSE(is_box_sheaf(J, nn));
    PlusResult JPP = sheafify(J, nn);
    CHECK(JPP.sheaf.card(S.index_of(S.full())) == 2);
    CHECK(JPP.sheaf.card(S.index_of(bit(0))) == 2);
    CHECK(is_box_sheaf(JPP.sheaf, nn));
  }
}

TEST_CASE("flabbiness") {
  FiniteSpace S = FiniteSpace::sierpinski();
  CHECK(is_flabby(constant_sheaf(S, {"0", "1"}, "M")));  // identity restriction on connected S

  SpaceEnv se(S);
  FormulaPtr u1 = f_prop(t_const("U1", Sort::omega()));
  Sheaf J = subsheaf_to_sheaf(comprehend(*se.M, u1, "x", se.env), "jshriek");
  CHECK_FALSE(is_flabby(J));  // ∅ -> Z/2 is not surjective

  FiniteSpace pt = FiniteSpace::validate({"x"}, {0, 1});
  CHECK(is_flabby(constant_sheaf(pt, {"0", "1", "2"}, "M")));
  CHECK(is_flabby(omega_sheaf(S)));
}

TEST_CASE("comprehension respects logical equivalence") {
  FiniteSpace S = FiniteSpace::sierpinski();
  SpaceEnv se(S);
  SortPtr sM = Sort::sheaf("M");
  // x = 0 ∨ x = 1 is equivalent to ⊤ for the two-element constant sheaf
  FormulaPtr phi = f_or(f_eq(t_var("x", sM), t_num(0, sM)), f_eq(t_var("x", sM), t_num(1, sM)));
  Subsheaf a = comprehend(*se.M, phi, "x", se.env);
  Subsheaf b = comprehend(*se.M, f_top(), "x", se.env);
  CHECK(a.equals_on(b, S.full()));
}

TEST_CASE("sheaf file format round trip") {
  FiniteSpace S = FiniteSpace::sierpinski();
  std::string text =
      "sheaf demo on sierpinski\n"
      "sections 0: *\n"
      "sections 1: a b\n"
      "sections 2: x y\n"
      "restrict 2->1: x->a y->b\n"
      "op add 0: * * -> *\n"
      "op add 1: a a -> a a b -> b b a -> b b b -> a\n"
      "op add 2: x x -> x x y -> y y x -> y y y -> x\n"
      "const zero: x\n";
  SheafFile sf = parse_sheaf_file(text, S);
  CHECK(sf.sheaf.card(2) == 2);
  CHECK(sf.sheaf.restrict_idx(2, 1, 1) == 1);
  CHECK(sf.ops.count("add"));
  CHECK(sf.constants.at("zero") == "x");
  CHECK_THROWS_AS(parse_sheaf_file("sections 0: a b\n", S), ValidationError);
}

TEST_CASE("stalks of comprehension subsheaves of geometric formulas") {
  // for geometric φ the stalk of {x | φ} is the set of germs satisfying φ
  FiniteSpace S = FiniteSpace::sierpinski();
  SpaceEnv se(S);
  Forcer fz(se.env);
  SortPtr sM = Sort::sheaf("M");
  FormulaPtr phi = f_or(f_eq(t_var("x", sM), t_num(0, sM)),
                        f_prop(t_const("U1", Sort::omega())));
  Subsheaf G = comprehend(*se.M, phi, "x", se.env);
  for (int p = 0; p < S.point_count(); ++p) {
    int mi = S.index_of(S.min_open(p));
    for (int s = 0; s < se.M->card(mi); ++s) {
      int e = fz.bind(Forcer::kRootEnv, "x", S.min_open(p), Value::of_section(se.M.get(), s));
      bool classical = fz.classical_at(p, phi, e);
      CHECK(G.contains(mi, s) == classical);
    }
  }
}
