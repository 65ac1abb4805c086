#include <doctest.h>

#include "toposforge/spectrum.hpp"
#include "toposforge/verify.hpp"

using namespace toposforge;

TEST_CASE("spec frames") {
  SpecFrame z12 = spec_frame(FinRing::zmod(12));
  CHECK(z12.radicals.size() == 4);
  // Boolean: every element is complemented
  for (int a = 0; a < z12.frame.size(); ++a) {
    bool complemented = false;
    for (int b = 0; b < z12.frame.size(); ++b)
      if (z12.frame.meet(a, b) == z12.frame.bottom() && z12.frame.join(a, b) == z12.frame.top())
        complemented = true;
    CHECK(complemented);
  }

  SpecFrame z4 = spec_frame(FinRing::zmod(4));
  CHECK(z4.radicals.size() == 2);  // the one-point locale: every element nilpotent or invertible

  SpecFrame zero = spec_frame(FinRing::zero_ring());
  CHECK(zero.radicals.size() == 1);
}

TEST_CASE("spec spaces and points") {
  FinRing z12 = FinRing::zmod(12);
  SpecFrame SF = spec_frame(z12);
  SpecSpace SS = spec_space_of(z12, SF);
  CHECK(SS.space.point_count() == 2);
  CHECK(SS.space.open_count() == 4);  // discrete on two points

  FinRing f4 = FinRing::polyquot(FinRing::zmod(2), {1, 1, 1});
  SpecSpace ptf4 = spec_space_of(f4, spec_frame(f4));
  CHECK(ptf4.space.point_count() == 1);

  FinRing z4 = FinRing::zmod(4);
  SpecSpace ptz4 = spec_space_of(z4, spec_frame(z4));
  CHECK(ptz4.space.point_count() == 1);
}

TEST_CASE("structure sheaf of Z/12") {
  FinRing A = FinRing::zmod(12);
  SpectrumContext ctx(A);
  const FiniteSpace& X = ctx.space();
  int fullIdx = X.index_of(X.full());

  // Γ(Spec A, O) ≅ A, and ≅ Z/4 × Z/3 by the CRT oracle
  const LocRing& glob = ctx.localization(fullIdx);
  CHECK(glob.ring.size() == 12);
  CHECK(find_ring_isomorphism(glob.ring, A).has_value());
  CHECK(find_ring_isomorphism(glob.ring, FinRing::product(FinRing::zmod(4), FinRing::zmod(3)))
            .has_value());

  // stalk at the point for (2) has order 4 (the localization oracle)
  Mask primeTwo = ideal_closure(A, bit(2));
  Mask filterAtTwo = (bit(12) - 1) & ~primeTwo;
  int pt = -1;
  for (std::size_t i = 0; i < ctx.points().filters.size(); ++i)
    if (ctx.points().filters[i] == filterAtTwo) pt = static_cast<int>(i);
  REQUIRE(pt >= 0);
  const LocRing& stalk = ctx.localization(X.index_of(X.min_open(pt)));
  CHECK(stalk.ring.size() == 4);
  CHECK(find_ring_isomorphism(stalk.ring, localize(A, filterAtTwo).ring).has_value());
  // sections over the basic open containing that point are the same ring
  CHECK(X.min_open(pt) == ctx.points().basic_open(3));
}

TEST_CASE("generic filter membership law and stalks") {
  FinRing A = FinRing::zmod(12);
  SpectrumContext ctx(A);
  Forcer fz(ctx.env());
  SortPtr sA = Sort::sheaf("A");
  SortPtr pA = Sort::power(sA);

  // D(2) ⊨ 4 ∈ F since 2 ∈ √(4)
  FormulaPtr mem4 = f_member(t_const("c4", sA), t_const("F", pA));
  CHECK(fz.force(ctx.points().basic_open(2), mem4));
  // the full law against the radical oracle
  for (int f = 0; f < A.size(); ++f)
    for (int x = 0; x < A.size(); ++x) {
      FormulaPtr mem = f_member(t_const("c" + A.elem_name(x), sA), t_const("F", pA));
      bool lhs = fz.force(ctx.points().basic_open(f), mem);
      bool rhs = has(radical(A, ideal_closure(A, bit(x))), f);
      CHECK(lhs == rhs);
    }
  // stalks biject with A ∖ p
  for (int p = 0; p < ctx.space().point_count(); ++p) {
    int mi = ctx.space().index_of(ctx.space().min_open(p));
    CHECK(ctx.generic_filter().selected[mi].count() ==
          popcount(ctx.points().filters[p]));
  }
  // internally a filter
  FormulaPtr ax = parse_formula(
      "~(c0 in F) /\\ (c1 in F) /\\ (forall x:A. forall y:A. (x*y in F => x in F /\\ y in F)"
      " /\\ (x in F /\\ y in F => x*y in F) /\\ (x+y in F => x in F \\/ y in F))",
      ctx.env().symbols());
  CHECK(fz.force(ctx.space().full(), ax));
}

TEST_CASE("tilde modules") {
  FinRing A = FinRing::zmod(12);
  SpectrumContext ctx(A);

  // tilde of the ring itself matches the structure sheaf open by open
  const Sheaf& T = ctx.tilde(FinModule::ring_as_module(A), "AT");
  for (int u = 0; u < ctx.space().open_count(); ++u)
    CHECK(T.card(u) == ctx.structure_sheaf().card(u));

  // M = Z/2 over Z/12: stalk at (2) is Z/2, at (3) it vanishes
  FinModule Z2 = FinModule::quotient_by_ideal(A, ideal_closure(A, bit(2)));
  const Sheaf& T2 = ctx.tilde(Z2, "Z2T");
  for (int p = 0; p < ctx.space().point_count(); ++p) {
    bool at2 = !has(ctx.points().filters[p], 2);
    CHECK(T2.stalk_card(p) == (at2 ? 2 : 1));
  }

  const Sheaf& TZ = ctx.tilde(FinModule::zero_module(A), "ZT");
  for (int u = 0; u < ctx.space().open_count(); ++u) CHECK(TZ.card(u) == 1);
}

TEST_CASE("generic-filter metaproperty") {
  FinRing A = FinRing::zmod(12);
  SpectrumContext ctx(A);
  SortPtr sA = Sort::sheaf("A");

  // the annihilator of 6
  FormulaPtr ann6 = f_eq(t_app("mul", {t_const("c6", sA), t_var("a", sA)}, sA), t_num(0, sA));
  CHECK(check_generic_metaproperty(ctx, ann6, "a").ok);
  // the unit ideal, trivially
  CHECK(check_generic_metaproperty(ctx, f_top(), "a").ok);
  // families mentioning non-constant sorts are rejected
  FormulaPtr bad = f_exists("s", Sort::sheaf("O"),
                            f_eq(t_var("s", Sort::sheaf("O")), t_var("s", Sort::sheaf("O"))));
  CHECK_THROWS_AS(check_generic_metaproperty(ctx, bad, "a"), ValidationError);
}

TEST_CASE("local spectrum and quasicoherator") {
  FinRing z4 = FinRing::zmod(4);
  LocalSpecFrame a = local_spectrum_frame(z4, RingHom::identity(z4));
  CHECK(a.frame.size() == 2);
  CHECK(points_of_frame(a.frame).size() == 1);

  FinRing prod = FinRing::product(z4, z4);
  std::vector<int> diag(4);
  for (int x = 0; x < 4; ++x)
    diag[x] = prod.elem_by_name("(" + z4.elem_name(x) + "," + z4.elem_name(x) + ")");
  RingHom phi = RingHom::make(z4, prod, diag);
  LocalSpecFrame b = local_spectrum_frame(z4, phi);
  CHECK(b.frame.size() == 4);
  CHECK(points_of_frame(b.frame).size() == 2);

  // quasicoherator laws on all radical ideals
  auto rads = enumerate_radical_ideals(prod);
  for (Mask I : rads) {
    Mask q = quasicoherator(z4, phi, I);
    CHECK((I & ~q) == 0);
    CHECK(quasicoherator(z4, phi, q) == q);
    CHECK((q == I) == local_spectrum_condition(z4, phi, I));
    CHECK(local_spectrum_condition(z4, phi, I) == local_quasicoherence_condition(z4, phi, I));
    for (Mask J : rads) {
      Mask qi = quasicoherator(z4, phi, I), qj = quasicoherator(z4, phi, J);
      CHECK(quasicoherator(z4, phi, I & J) == (qi & qj));
    }
  }

  FinRing f4 = FinRing::polyquot(FinRing::zmod(2), {1, 1, 1});
  LocalSpecFrame c = local_spectrum_frame(f4, RingHom::identity(f4));
  CHECK(points_of_frame(c.frame).size() == 1);

  CHECK_THROWS_AS(local_spectrum_frame(FinRing::zmod(6), RingHom::identity(FinRing::zmod(6))),
                  ValidationError);  // Z/6 is not local
}

TEST_CASE("internal quasicoherence condition over Spec(Z/12)") {
  FinRing A = FinRing::zmod(12);
  SpectrumContext ctx(A);
  FinModule M = FinModule::ring_as_module(A);
  ctx.tilde(M, "MT");
  for (Mask I : enumerate_ideals(A)) {
    auto G = ctx.tilde_submodule("MT", I);
    CHECK(check_internal_quasicoherence(ctx, "MT", G));
  }
  auto Z = ctx.tilde_submodule("MT", bit(M.zero()));
  CHECK(check_internal_quasicoherence(ctx, "MT", Z));
}

TEST_CASE("internal ring properties of the structure sheaf") {
  for (int n : {4, 6, 12}) {
    FinRing A = FinRing::zmod(n);
    SpectrumContext ctx(A);
    Forcer fz(ctx.env());
    SymbolTable st = ctx.env().symbols();
    CHECK(fz.force(ctx.space().full(),
                   parse_formula("forall s:O. (~inv(s)) => nilp(s)", st)));
    CHECK(fz.force(ctx.space().full(),
                   parse_formula("~(1 = 0) /\\ (forall x:O. forall y:O. inv(x+y) => inv(x) \\/ inv(y))",
                                 st)));
    bool field = fz.force(ctx.space().full(),
                          parse_formula("forall s:O. (~inv(s)) => s = 0", st));
    CHECK(field == A.is_reduced());
  }
}
