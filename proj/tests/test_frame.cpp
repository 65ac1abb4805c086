#include <doctest.h>

#include <random>

#include "toposforge/frame.hpp"
#include "toposforge/verify.hpp"

using namespace toposforge;

TEST_CASE("space validation") {
  CHECK_NOTHROW(FiniteSpace::sierpinski());
  CHECK_THROWS_WITH_AS(FiniteSpace::validate({"a", "b"}, {0, 1}),
                       doctest::Contains("full set missing"), ValidationError);
  // opens missing a union: {∅, {a}, {b}, X missing the union {a b} of... use 3 points
  CHECK_THROWS_AS(FiniteSpace::validate({"a", "b", "c"}, {0, 1, 2, 7}), ValidationError);
  try {
    FiniteSpace::validate({"a", "b", "c"}, {0, 1, 2, 7});
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("union") != std::string::npos);
  }
}

TEST_CASE("heyting implication on Sierpinski") {
  FiniteSpace S = FiniteSpace::sierpinski();
  Mask eta = bit(0);
  // oracle: the largest open W with W ∩ U ⊆ V, by enumeration
  auto oracle = [&](Mask u, Mask v) {
    Mask best = 0;
    for (Mask w : S.opens())
      if ((w & u & ~v) == 0 && popcount(w) >= popcount(best)) best = w;
    return best;
  };
  CHECK(S.heyting(eta, 0) == oracle(eta, 0));
  CHECK(S.heyting(eta, 0) == 0);
  for (Mask u : S.opens()) {
    CHECK(S.heyting(u, u) == S.full());
    CHECK(S.heyting(S.full(), u) == u);
  }
}

TEST_CASE("nuclei from the table") {
  FiniteSpace S = FiniteSpace::sierpinski();
  Mask eta = bit(0);
  Nucleus nn = nucleus_negneg(S);
  CHECK(S.open_at(nn.apply(S.index_of(0))) == 0);
  CHECK(S.open_at(nn.apply(S.index_of(eta))) == S.full());  // Int(Clos({eta})) = Int(S) = S
  CHECK(S.open_at(nn.apply(S.index_of(S.full()))) == S.full());

  Nucleus jo = nucleus_open(S, eta);
  CHECK(S.open_at(jo.apply(S.index_of(0))) == 0);  // Int({sigma}) = ∅
  CHECK(S.open_at(jo.apply(S.index_of(eta))) == S.full());

  Nucleus jc = nucleus_closed(S, 0);  // A = X
  for (int u = 0; u < S.open_count(); ++u) CHECK(jc.apply(u) == u);

  CHECK(check_nucleus(nn));
  CHECK(check_nucleus(jo));
  CHECK(check_nucleus(jc));
  CHECK(check_nucleus(nucleus_point(S, 0)));
  CHECK(check_nucleus(nucleus_point(S, 1)));
  CHECK(check_nucleus(nucleus_identity(S.opens_frame())));

  Nucleus bad;
  bad.frame = &S.opens_frame();
  bad.map.assign(S.open_count(), S.index_of(0));
  CHECK_FALSE(check_nucleus(bad));
}

TEST_CASE("nucleus axioms hold for all four constructors on random spaces") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 12; ++i) {
    FiniteSpace X = random_space(rng, 6);
    CHECK(check_nucleus(nucleus_negneg(X)));
    for (Mask u : X.opens()) {
      CHECK(check_nucleus(nucleus_open(X, u)));
      CHECK(check_nucleus(nucleus_closed(X, u)));
    }
    for (int p = 0; p < X.point_count(); ++p) CHECK(check_nucleus(nucleus_point(X, p)));
    // double negation computed two ways
    Nucleus nn = nucleus_negneg(X);
    for (int u = 0; u < X.open_count(); ++u) {
      Mask v = X.open_at(u);
      CHECK(X.open_at(nn.apply(u)) == X.heyting(X.heyting(v, 0), 0));
    }
  }
}

TEST_CASE("sublocale frames") {
  FiniteSpace S = FiniteSpace::sierpinski();
  Sublocale nn = sublocale_frame(nucleus_negneg(S));
  REQUIRE(nn.fixed.size() == 2);  // {∅, S}: the one-point locale
  CHECK(S.open_at(nn.fixed[0]) == 0);
  CHECK(S.open_at(nn.fixed[1]) == S.full());
  CHECK(points_of_frame(nn.frame).size() == 1);

  Sublocale whole = sublocale_frame(nucleus_identity(S.opens_frame()));
  CHECK(whole.fixed.size() == static_cast<std::size_t>(S.open_count()));

  // fixed-point oracle for the open nucleus at {eta}: {V : Int({sigma} ∪ V) = V}
  Mask eta = bit(0);
  Sublocale jo = sublocale_frame(nucleus_open(S, eta));
  std::vector<Mask> fixedOracle;
  for (Mask v : S.opens())
    if (S.interior((S.full() & ~eta) | v) == v) fixedOracle.push_back(v);
  REQUIRE(jo.fixed.size() == fixedOracle.size());
  for (std::size_t i = 0; i < fixedOracle.size(); ++i)
    CHECK(S.open_at(jo.fixed[i]) == fixedOracle[i]);
  // two fixed points, order-isomorphic to the opens {∅, {eta}} of the subspace
  CHECK(jo.fixed.size() == 2);
  CHECK(fixedOracle[0] == 0);
  CHECK(fixedOracle[1] == S.full());
}

TEST_CASE("points of frames") {
  FiniteSpace S = FiniteSpace::sierpinski();
  CHECK(points_of_frame(S.opens_frame()).size() == 2);

  std::vector<std::vector<bool>> leq2 = {{true, true}, {false, true}};
  Frame two = Frame::from_leq(2, leq2, {"0", "1"});
  CHECK(points_of_frame(two).size() == 1);

  std::vector<std::vector<bool>> leq1 = {{true}};
  Frame trivial = Frame::from_leq(1, leq1, {"*"});
  CHECK(points_of_frame(trivial).empty());
}

TEST_CASE("density") {
  FiniteSpace S = FiniteSpace::sierpinski();
  CHECK(S.is_dense(bit(0)));   // Clos({eta}) = S
  CHECK_FALSE(S.is_dense(0));
  CHECK(S.is_dense(S.full()));
  // j(V) = X iff V dense, for the double negation nucleus
  Nucleus nn = nucleus_negneg(S);
  for (int u = 0; u < S.open_count(); ++u)
    CHECK((S.open_at(nn.apply(u)) == S.full()) == S.is_dense(S.open_at(u)));
}

TEST_CASE("space file format") {
  std::string text = "points: a b\nopen:\nopen: a\nopen: a b\n";
  FiniteSpace S = FiniteSpace::from_file_text(text);
  CHECK(S.point_count() == 2);
  CHECK(S.open_count() == 3);
  CHECK(S.is_open(bit(0)));
  CHECK_FALSE(S.is_open(bit(1)));
  CHECK_THROWS_AS(FiniteSpace::from_file_text("points: a\nopen: b\nopen: a\nopen:\n"),
                  ValidationError);
}

TEST_CASE("frames of opens are frames; abstract frames validated") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 8; ++i) {
    FiniteSpace X = random_space(rng, 5);
    const Frame& L = X.opens_frame();
    CHECK(L.size() == X.open_count());
    CHECK(L.bottom() == X.index_of(0));
    CHECK(L.top() == X.index_of(X.full()));
  }
  // a non-distributive lattice (diamond M3) is rejected
  // order: bottom < a,b,c < top
  std::vector<std::vector<bool>> leq(5, std::vector<bool>(5, false));
  for (int i = 0; i < 5; ++i) leq[i][i] = true;
  for (int m = 1; m <= 3; ++m) {
    leq[0][m] = true;
    leq[m][4] = true;
  }
  leq[0][4] = true;
  CHECK_THROWS_AS(Frame::from_leq(5, leq, {}), ValidationError);
}
