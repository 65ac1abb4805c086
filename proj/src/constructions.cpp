#include <numeric>

#include "toposforge/forcing.hpp"

namespace toposforge {

Subsheaf comprehend(const Sheaf& F, const FormulaPtr& phi, const std::string& var,
                    const BaseEnv& env) {
  const FiniteSpace& X = F.space();
  Forcer forcer(env);
  Subsheaf S;
  S.parent = &F;
  S.domain = X.full();
  S.selected.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    DynBitset sel(F.card(u));
    for (int s = 0; s < F.card(u); ++s) {
      int e = forcer.bind(Forcer::kRootEnv, var, U, Value::of_section(&F, s));
      if (forcer.force(U, phi, e)) sel.set(s);
    }
    S.selected[u] = sel;
  }
  S.check();  // locality holds by the locality of the internal language
  return S;
}

namespace {

struct PlusMachine {
  const Sheaf& F;
  const Nucleus& j;
  BaseEnv env;
  std::unique_ptr<Forcer> forcer;
  FormulaPtr boxSingleton;  // free S : P(F)
  FormulaPtr boxEqual;      // free S, T : P(F)

  PlusMachine(const Sheaf& f, const Nucleus& nuc) : F(f), j(nuc) {
    env.space = &F.space();
    env.sheaves["F"] = &F;
    env.nuclei["j"] = &j;
    forcer = std::make_unique<Forcer>(env);

    SortPtr sF = Sort::sheaf("F");
    SortPtr pF = Sort::power(sF);
    auto member = [&](const char* x, const char* S) {
      return f_member(t_var(x, sF), t_var(S, pF));
    };
    FormulaPtr inhabited = f_exists("x", sF, member("x", "S"));
    FormulaPtr subsingle = f_forall(
        "x", sF,
        f_forall("y", sF,
                 f_implies(f_and(member("x", "S"), member("y", "S")),
                           f_eq(t_var("x", sF), t_var("y", sF)))));
    boxSingleton = f_modal("j", f_and(inhabited, subsingle));
    boxEqual = f_modal("j", f_eq(t_var("S", pF), t_var("T", pF)));
  }

  bool qualifies(Mask U, const Subsheaf& S) {
    int e = forcer->bind(Forcer::kRootEnv, "S", U, Value::of_sub(std::make_shared<Subsheaf>(S)));
    return forcer->force(U, boxSingleton, e);
  }

  bool equivalent(Mask U, const Subsheaf& S, const Subsheaf& T) {
    int e = forcer->bind(Forcer::kRootEnv, "S", U, Value::of_sub(std::make_shared<Subsheaf>(S)));
    e = forcer->bind(e, "T", U, Value::of_sub(std::make_shared<Subsheaf>(T)));
    return forcer->force(U, boxEqual, e);
  }
};

}  // namespace

PlusResult plus_construction(const Sheaf& F, const Nucleus& j) {
  const FiniteSpace& X = F.space();
  PlusMachine M(F, j);

  // Per open: the qualifying subsheaves, grouped into classes with the
  // lexicographically least member as representative.
  std::vector<std::vector<int>> qual(X.open_count());       // enumeration indices
  std::vector<std::vector<int>> classOf(X.open_count());    // enum idx -> class idx (or -1)
  std::vector<std::vector<int>> classRep(X.open_count());   // class -> enum idx of representative

  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    const auto& all = M.forcer->power_sections(&F, u);
    classOf[u].assign(all.size(), -1);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (M.qualifies(U, all[i])) qual[u].push_back(static_cast<int>(i));
    for (int i : qual[u]) {
      bool placed = false;
      for (std::size_t c = 0; c < classRep[u].size() && !placed; ++c) {
        if (M.equivalent(U, all[i], all[classRep[u][c]])) {
          classOf[u][i] = static_cast<int>(c);
          placed = true;
        }
      }
      if (!placed) {
        classOf[u][i] = static_cast<int>(classRep[u].size());
        classRep[u].push_back(i);  // enumeration is sorted, so the first member is least
      }
    }
  }

  PlusResult R;
  R.sheaf = Sheaf(X, F.name() + "+");
  for (int u = 0; u < X.open_count(); ++u) {
    std::vector<std::string> names;
    for (std::size_t c = 0; c < classRep[u].size(); ++c)
      names.push_back("[" + std::to_string(classRep[u][c]) + "]");
    R.sheaf.set_sections(u, std::move(names));
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      const auto& allU = M.forcer->power_sections(&F, u);
      std::vector<int> t(classRep[u].size());
      for (std::size_t c = 0; c < classRep[u].size(); ++c) {
        Subsheaf res = allU[classRep[u][c]].restricted(X.open_at(v));
        // locate in the v-enumeration, then map to its class
        const auto& allV = M.forcer->power_sections(&F, v);
        int idx = -1;
        for (std::size_t k = 0; k < allV.size(); ++k)
          if (allV[k].equals_on(res, res.domain)) {
            idx = static_cast<int>(k);
            break;
          }
        if (idx < 0 || classOf[v][idx] < 0)
          throw ValidationError("plus construction: restriction left the qualifying classes");
        t[c] = classOf[v][idx];
      }
      R.sheaf.set_restriction(u, v, std::move(t));
    }
  R.sheaf.check();

  R.canonical.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    const auto& all = M.forcer->power_sections(&F, u);
    R.canonical[u].resize(F.card(u));
    for (int s = 0; s < F.card(u); ++s) {
      Subsheaf sing = singleton_subsheaf(F, U, s);
      int idx = -1;
      for (std::size_t k = 0; k < all.size(); ++k)
        if (all[k].equals_on(sing, sing.domain)) {
          idx = static_cast<int>(k);
          break;
        }
      if (idx < 0 || classOf[u][idx] < 0)
        throw ValidationError("plus construction: canonical image does not qualify");
      R.canonical[u][s] = classOf[u][idx];
    }
  }
  return R;
}

PlusResult sheafify(const Sheaf& F, const Nucleus& j) {
  PlusResult once = plus_construction(F, j);
  PlusResult twice = plus_construction(once.sheaf, j);
  PlusResult R;
  R.sheaf = std::move(twice.sheaf);
  R.sheaf.set_name(F.name() + "++");
  const FiniteSpace& X = F.space();
  R.canonical.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    R.canonical[u].resize(F.card(u));
    for (int s = 0; s < F.card(u); ++s)
      R.canonical[u][s] = twice.canonical[u][once.canonical[u][s]];
  }
  return R;
}

namespace {

FormulaPtr separated_formula() {
  SortPtr sF = Sort::sheaf("F");
  return f_forall(
      "x", sF,
      f_forall("y", sF,
               f_implies(f_modal("j", f_eq(t_var("x", sF), t_var("y", sF))),
                         f_eq(t_var("x", sF), t_var("y", sF)))));
}

FormulaPtr gluing_formula() {
  SortPtr sF = Sort::sheaf("F");
  SortPtr pF = Sort::power(sF);
  FormulaPtr singleton = f_and(
      f_exists("x", sF, f_member(t_var("x", sF), t_var("S", pF))),
      f_forall("x", sF,
               f_forall("y", sF,
                        f_implies(f_and(f_member(t_var("x", sF), t_var("S", pF)),
                                        f_member(t_var("y", sF), t_var("S", pF))),
                                  f_eq(t_var("x", sF), t_var("y", sF))))));
  return f_forall("S", pF,
                  f_implies(f_modal("j", singleton),
                            f_exists("x", sF,
                                     f_modal("j", f_member(t_var("x", sF), t_var("S", pF))))));
}

}  // namespace

bool is_box_separated(const Sheaf& F, const Nucleus& j) {
  BaseEnv env;
  env.space = &F.space();
  env.sheaves["F"] = &F;
  env.nuclei["j"] = &j;
  Forcer forcer(env);
  return forcer.force(F.space().full(), separated_formula());
}

bool is_box_sheaf(const Sheaf& F, const Nucleus& j) {
  if (!is_box_separated(F, j)) return false;
  BaseEnv env;
  env.space = &F.space();
  env.sheaves["F"] = &F;
  env.nuclei["j"] = &j;
  Forcer forcer(env);
  return forcer.force(F.space().full(), gluing_formula());
}

bool is_flabby(const Sheaf& F) {
  const FiniteSpace& X = F.space();
  int fullIdx = X.index_of(X.full());

  // external characterization: all restrictions from global sections surject
  bool external = true;
  for (int u = 0; u < X.open_count() && external; ++u) {
    std::vector<bool> hit(F.card(u), false);
    for (int s = 0; s < F.card(fullIdx); ++s) hit[F.restrict_idx(fullIdx, u, s)] = true;
    for (bool b : hit)
      if (!b) external = false;
  }

  // internal characterization: every partially-defined element refines to an
  // honest element
  BaseEnv env;
  env.space = &X;
  env.sheaves["F"] = &F;
  Forcer forcer(env);
  SortPtr sF = Sort::sheaf("F");
  SortPtr pF = Sort::power(sF);
  FormulaPtr subsingle = f_forall(
      "x", sF,
      f_forall("y", sF,
               f_implies(f_and(f_member(t_var("x", sF), t_var("K", pF)),
                               f_member(t_var("y", sF), t_var("K", pF))),
                         f_eq(t_var("x", sF), t_var("y", sF)))));
  FormulaPtr refine = f_exists(
      "s", sF,
      f_implies(f_exists("t", sF, f_member(t_var("t", sF), t_var("K", pF))),
                f_member(t_var("s", sF), t_var("K", pF))));
  FormulaPtr internalCond = f_forall("K", pF, f_implies(subsingle, refine));
  bool internal = forcer.force(X.full(), internalCond);

  if (external != internal)
    throw ValidationError("flabbiness: external and internal characterizations disagree on " +
                          F.name());
  return external;
}

}  // namespace toposforge
