#include "toposforge/spectrum.hpp"

#include <algorithm>
#include <numeric>

namespace toposforge {

// ---------------------------------------------------------------- SpecFrame

int SpecFrame::index_of(Mask radicalIdeal) const {
  for (std::size_t i = 0; i < radicals.size(); ++i)
    if (radicals[i] == radicalIdeal) return static_cast<int>(i);
  throw ResolveError("not a radical ideal of the ring");
}

std::vector<int> SpecFrame::generators(int idx) const {
  const FinRing& R = *ring;
  Mask target = radicals[idx];
  auto gen = [&](const std::vector<int>& gens) {
    Mask g = 0;
    for (int e : gens) g |= bit(e);
    return radical(R, ideal_closure(R, g)) == target;
  };
  if (gen({})) return {};
  for (int a = 0; a < R.size(); ++a)
    if (has(target, a) && gen({a})) return {a};
  for (int a = 0; a < R.size(); ++a)
    for (int b = a + 1; b < R.size(); ++b)
      if (has(target, a) && has(target, b) && gen({a, b})) return {a, b};
  std::vector<int> all;
  for (int a = 0; a < R.size(); ++a)
    if (has(target, a)) all.push_back(a);
  return all;
}

SpecFrame spec_frame(const FinRing& A) {
  SpecFrame S;
  S.ring = &A;
  S.radicals = enumerate_radical_ideals(A);
  int n = static_cast<int>(S.radicals.size());
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) leq[i][k] = (S.radicals[i] & ~S.radicals[k]) == 0;
  std::vector<std::string> labels(n);
  S.frame = Frame::from_leq(n, leq, labels);  // placeholder labels first
  for (int i = 0; i < n; ++i) {
    auto gens = S.generators(i);
    if (gens.empty()) gens.push_back(A.zero());
    std::string l = "(";
    for (std::size_t k = 0; k < gens.size(); ++k)
      l += (k ? "," : "") + A.elem_name(gens[k]);
    labels[i] = l + ")";
  }
  S.frame = Frame::from_leq(n, leq, std::move(labels));
  // meet is intersection, join the radical of the sum: both follow from the
  // inclusion order on a finite lattice, checked here
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Mask m = S.radicals[i] & S.radicals[k];
      Mask j = radical(A, ideal_closure(A, S.radicals[i] | S.radicals[k]));
      if (S.radicals[S.frame.meet(i, k)] != m || S.radicals[S.frame.join(i, k)] != j)
        throw ValidationError("spec frame: lattice operations disagree with ideal arithmetic");
    }
  return S;
}

// ---------------------------------------------------------------- SpecSpace

Mask SpecSpace::basic_open(int f) const {
  Mask m = 0;
  for (std::size_t i = 0; i < filters.size(); ++i)
    if (has(filters[i], f)) m |= bit(static_cast<int>(i));
  return m;
}

SpecSpace spec_space_of(const FinRing& A, const SpecFrame& SF) {
  SpecSpace S;
  S.ring = &A;
  S.filters = enumerate_filters(A);
  int npts = static_cast<int>(S.filters.size());
  if (npts > 64) throw ValidationError("spectrum has too many points");

  std::vector<std::string> names;
  for (int i = 0; i < npts; ++i) names.push_back("p" + std::to_string(i));
  std::vector<Mask> opens = {0};
  for (int f = 0; f < A.size(); ++f) {
    Mask d = S.basic_open(f);
    if (std::find(opens.begin(), opens.end(), d) == opens.end()) opens.push_back(d);
  }
  bool grew = true;  // close under unions (intersections are basic: D(f)∩D(g)=D(fg))
  while (grew) {
    grew = false;
    for (std::size_t i = 0; i < opens.size(); ++i)
      for (std::size_t k = 0; k < opens.size(); ++k) {
        Mask u = opens[i] | opens[k];
        if (std::find(opens.begin(), opens.end(), u) == opens.end()) {
          opens.push_back(u);
          grew = true;
        }
      }
  }
  S.space = FiniteSpace::validate(names, opens);

  // frame isomorphism: radical ideal ↦ union of D(f), f in the ideal
  int n = static_cast<int>(SF.radicals.size());
  S.openOfRadical.assign(n, -1);
  S.radicalOfOpen.assign(S.space.open_count(), -1);
  for (int i = 0; i < n; ++i) {
    Mask u = 0;
    for (int f = 0; f < A.size(); ++f)
      if (has(SF.radicals[i], f)) u |= S.basic_open(f);
    S.openOfRadical[i] = S.space.index_of(u);
    if (S.radicalOfOpen[S.openOfRadical[i]] != -1)
      throw ValidationError("spectrum: radical-ideal to open map is not injective");
    S.radicalOfOpen[S.openOfRadical[i]] = i;
  }
  for (int u = 0; u < S.space.open_count(); ++u)
    if (S.radicalOfOpen[u] < 0)
      throw ValidationError("spectrum: an open is not the image of a radical ideal");
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      bool incl = (SF.radicals[i] & ~SF.radicals[k]) == 0;
      bool incl2 = (S.space.open_at(S.openOfRadical[i]) &
                    ~S.space.open_at(S.openOfRadical[k])) == 0;
      if (incl != incl2) throw ValidationError("spectrum: order not preserved");
    }
  if (static_cast<int>(points_of_frame(SF.frame).size()) != npts)
    throw ValidationError("spectrum: point count differs from filter count");
  return S;
}

// ---------------------------------------------------------------- SpectrumContext

SpectrumContext::SpectrumContext(const FinRing& A)
    : ring_(A), specFrame_(spec_frame(ring_)), specSpace_(spec_space_of(ring_, specFrame_)) {
  specFrame_.ring = &ring_;
  specSpace_.ring = &ring_;
  const FiniteSpace& X = specSpace_.space;

  // multiplicative sets: S_U = elements invertible at every point of U
  sectionSets_.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    Mask s = 0;
    for (int f = 0; f < ring_.size(); ++f)
      if ((X.open_at(u) & ~specSpace_.basic_open(f)) == 0) s |= bit(f);
    sectionSets_[u] = s;
  }
  for (int u = 0; u < X.open_count(); ++u) locs_.push_back(localize(ring_, sectionSets_[u]));

  // structure sheaf: sections over U are A[S_U⁻¹]
  structureSheaf_ = std::make_unique<Sheaf>(X, "O_Spec(" + ring_.spec() + ")");
  for (int u = 0; u < X.open_count(); ++u) {
    std::vector<std::string> names;
    for (int s = 0; s < locs_[u].ring.size(); ++s) names.push_back(locs_[u].ring.elem_name(s));
    structureSheaf_->set_sections(u, std::move(names));
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(structureSheaf_->card(u));
      for (int s = 0; s < structureSheaf_->card(u); ++s) {
        // map a representative pair through the finer localization
        int a = -1, d = -1;
        for (int x = 0; x < ring_.size() && a < 0; ++x)
          for (int y = 0; y < ring_.size(); ++y)
            if (has(sectionSets_[u], y) && locs_[u].cls(x, y) == s) {
              a = x;
              d = y;
              break;
            }
        t[s] = locs_[v].cls(a, d);
      }
      structureSheaf_->set_restriction(u, v, std::move(t));
    }
  structureSheaf_->check();

  // constant sheaf of the ring carrier
  std::vector<std::string> elemNames;
  for (int i = 0; i < ring_.size(); ++i) elemNames.push_back(ring_.elem_name(i));
  constSheaf_ = std::make_unique<Sheaf>(constant_sheaf(X, elemNames, "A_const"));

  env_.space = &X;
  env_.sheaves["O"] = structureSheaf_.get();
  env_.sheaves["A"] = constSheaf_.get();
  env_.schemaBound = ring_.size();

  // ring operations on O
  morphisms_.push_back(make_morphism("add", {structureSheaf_.get(), structureSheaf_.get()},
                                     structureSheaf_.get(), [&](int u, const std::vector<int>& s) {
                                       return locs_[u].ring.add(s[0], s[1]);
                                     }));
  env_.functions["add"].push_back(&morphisms_.back());
  morphisms_.push_back(make_morphism("mul", {structureSheaf_.get(), structureSheaf_.get()},
                                     structureSheaf_.get(), [&](int u, const std::vector<int>& s) {
                                       return locs_[u].ring.mul(s[0], s[1]);
                                     }));
  env_.functions["mul"].push_back(&morphisms_.back());
  {
    RingStructure rs;
    rs.carrier = structureSheaf_.get();
    rs.add = &morphisms_[morphisms_.size() - 2];
    rs.mul = &morphisms_.back();
    int fullIdx = X.index_of(X.full());
    rs.zeroGlobal = locs_[fullIdx].map[ring_.zero()];
    rs.oneGlobal = locs_[fullIdx].map[ring_.one()];
    env_.rings["O"] = rs;
  }

  // componentwise ring operations on the constant sheaf
  {
    ConstantCodec codec(X, ring_.size());
    morphisms_.push_back(constant_binop(*constSheaf_, codec, "add",
                                        [this](int a, int b) { return ring_.add(a, b); }));
    env_.functions["add"].push_back(&morphisms_.back());
    morphisms_.push_back(constant_binop(*constSheaf_, codec, "mul",
                                        [this](int a, int b) { return ring_.mul(a, b); }));
    env_.functions["mul"].push_back(&morphisms_.back());
    RingStructure rs;
    rs.carrier = constSheaf_.get();
    rs.add = &morphisms_[morphisms_.size() - 2];
    rs.mul = &morphisms_.back();
    int fullIdx = X.index_of(X.full());
    rs.zeroGlobal = constant_section(fullIdx, ring_.zero());
    rs.oneGlobal = constant_section(fullIdx, ring_.one());
    env_.rings["A"] = rs;
  }

  // the localization map A -> O as a function symbol
  morphisms_.push_back(make_morphism(
      "loc", {constSheaf_.get()}, structureSheaf_.get(), [&](int u, const std::vector<int>& s) {
        // a locally constant function maps to the class of any of its values;
        // on connected opens this is the constant value. On general opens the
        // localized ring separates components, so map via gluing: find the
        // section of O agreeing componentwise. For finite rings the spectrum
        // is discrete, hence components are single points and the class of
        // the point value works.
        auto comps = X.components(X.open_at(u));
        if (comps.empty()) return 0;
        // decode component values
        int k = static_cast<int>(comps.size());
        std::vector<int> vals(k);
        int code = s[0];
        for (int i = k - 1; i >= 0; --i) {
          vals[i] = code % ring_.size();
          code /= ring_.size();
        }
        // glue: the section of O over U restricting to vals[i]/1 on comps[i]
        for (int cand = 0; cand < locs_[u].ring.size(); ++cand) {
          bool ok = true;
          for (int i = 0; i < k && ok; ++i) {
            int vi = X.index_of(comps[i]);
            int restricted = structureSheaf_->restrict_idx(u, vi, cand);
            if (restricted != locs_[vi].map[vals[i]]) ok = false;
          }
          if (ok) return cand;
        }
        throw ValidationError("structure sheaf: constant section does not glue");
      }));
  env_.functions["loc"].push_back(&morphisms_.back());

  // section constants: every ring element as a global section of O and of A
  int fullIdx = X.index_of(X.full());
  for (int a = 0; a < ring_.size(); ++a) {
    env_.sectionConstants["c" + std::to_string(a)] = {constSheaf_.get(), X.full(),
                                                      constant_section(fullIdx, a)};
  }

  // the generic filter as a subsheaf of the constant sheaf
  {
    std::vector<DynBitset> perPoint(X.point_count());
    for (int p = 0; p < X.point_count(); ++p) {
      DynBitset b(constSheaf_->card(X.index_of(X.min_open(p))));
      // minimal opens of the spectrum are single points, so stalks are A
      for (int a = 0; a < ring_.size(); ++a)
        if (has(specSpace_.filters[p], a)) b.set(constant_section(X.index_of(X.min_open(p)), a));
      perPoint[p] = b;
    }
    auto gf = subsheaf_from_stalks(*constSheaf_, X.full(), perPoint);
    gf.check();
    genericFilter_ = std::make_shared<Subsheaf>(std::move(gf));
    env_.subsheaves["F"] = genericFilter_;
  }

  // basic opens as propositional constants
  for (int f = 0; f < ring_.size(); ++f)
    env_.propConstants["D" + std::to_string(f)] = specSpace_.basic_open(f);
}

int SpectrumContext::global_section_of(int ringElem) const {
  int fullIdx = specSpace_.space.index_of(specSpace_.space.full());
  return locs_[fullIdx].map[ringElem];
}

int SpectrumContext::constant_section(int openIdx, int ringElem) const {
  const FiniteSpace& X = specSpace_.space;
  int k = static_cast<int>(X.components(X.open_at(openIdx)).size());
  int code = 0;
  for (int i = 0; i < k; ++i) code = code * ring_.size() + ringElem;
  return code;
}

const Sheaf& SpectrumContext::tilde(const FinModule& M, const std::string& name) {
  if (auto it = tildes_.find(name); it != tildes_.end()) return *it->second.sheaf;
  const FiniteSpace& X = specSpace_.space;
  TildeData td;
  td.module = std::make_unique<FinModule>(M);
  for (int u = 0; u < X.open_count(); ++u)
    td.locs.push_back(localize_module(ring_, *td.module, sectionSets_[u], locs_[u]));

  td.sheaf = std::make_unique<Sheaf>(X, name);
  for (int u = 0; u < X.open_count(); ++u) {
    std::vector<std::string> names;
    for (int s = 0; s < td.locs[u].size; ++s) names.push_back(td.locs[u].names[s]);
    td.sheaf->set_sections(u, std::move(names));
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(td.locs[u].size);
      for (int s = 0; s < td.locs[u].size; ++s) {
        int m = -1, d = -1;
        for (int x = 0; x < td.module->size() && m < 0; ++x)
          for (int y = 0; y < ring_.size(); ++y)
            if (has(sectionSets_[u], y) && td.locs[u].cls(x, y) == s) {
              m = x;
              d = y;
              break;
            }
        t[s] = td.locs[v].cls(m, d);
      }
      td.sheaf->set_restriction(u, v, std::move(t));
    }
  td.sheaf->check();

  env_.sheaves[name] = td.sheaf.get();
  int fullIdx = X.index_of(X.full());
  env_.sectionConstants["z" + name] = {td.sheaf.get(), X.full(), td.locs[fullIdx].zero};
  auto [it, fresh] = tildes_.emplace(name, std::move(td));
  TildeData& stored = it->second;

  morphisms_.push_back(make_morphism("add", {stored.sheaf.get(), stored.sheaf.get()},
                                     stored.sheaf.get(), [&stored](int u, const std::vector<int>& s) {
                                       return stored.locs[u].add[s[0]][s[1]];
                                     }));
  env_.functions["add"].push_back(&morphisms_.back());
  morphisms_.push_back(make_morphism("smul", {structureSheaf_.get(), stored.sheaf.get()},
                                     stored.sheaf.get(), [&stored](int u, const std::vector<int>& s) {
                                       return stored.locs[u].smul[s[0]][s[1]];
                                     }));
  env_.functions["smul"].push_back(&morphisms_.back());
  return *stored.sheaf;
}

SubsheafPtr SpectrumContext::tilde_submodule(const std::string& tildeName, Mask submoduleCarrier) {
  const TildeData& td = tildes_.at(tildeName);
  const FiniteSpace& X = specSpace_.space;
  Subsheaf S;
  S.parent = td.sheaf.get();
  S.domain = X.full();
  S.selected.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    DynBitset sel(td.locs[u].size);
    for (int m = 0; m < td.module->size(); ++m) {
      if (!has(submoduleCarrier, m)) continue;
      for (int y = 0; y < ring_.size(); ++y)
        if (has(sectionSets_[u], y)) sel.set(td.locs[u].cls(m, y));
    }
    S.selected[u] = sel;
  }
  S.check();
  return std::make_shared<Subsheaf>(std::move(S));
}

const SheafMorphism& SpectrumContext::tilde_hom(const ModuleHom& h, const std::string& fnName,
                                                const std::string& tildeDom,
                                                const std::string& tildeCod) {
  const TildeData& dom = tildes_.at(tildeDom);
  const TildeData& cod = tildes_.at(tildeCod);
  const FinRing& R = ring_;
  morphisms_.push_back(make_morphism(
      fnName, {dom.sheaf.get()}, cod.sheaf.get(),
      [&dom, &cod, &h, &R, this](int u, const std::vector<int>& s) {
        int m = -1, d = -1;
        for (int x = 0; x < dom.module->size() && m < 0; ++x)
          for (int y = 0; y < R.size(); ++y)
            if (has(sectionSets_[u], y) && dom.locs[u].cls(x, y) == s[0]) {
              m = x;
              d = y;
              break;
            }
        return cod.locs[u].cls(h(m), d);
      }));
  env_.functions[fnName].push_back(&morphisms_.back());
  return morphisms_.back();
}

const FinModule& SpectrumContext::tilde_module(const std::string& tildeName) const {
  return *tildes_.at(tildeName).module;
}

const LocModule& SpectrumContext::tilde_localization(const std::string& tildeName,
                                                     int openIdx) const {
  return tildes_.at(tildeName).locs[openIdx];
}

// ---------------------------------------------------------------- generic metaproperty

GenericMetaReport check_generic_metaproperty(SpectrumContext& ctx, const FormulaPtr& phi,
                                             const std::string& var) {
  // constant-parameter hypothesis: only the constant sheaf A may appear
  std::function<void(const Formula&)> inspect = [&](const Formula& f) {
    auto checkSort = [&](const SortPtr& s) {
      const Sort* cur = s.get();
      while (cur->kind == Sort::Kind::Power) cur = cur->inner.get();
      if (cur->kind == Sort::Kind::Sheaf && cur->name != "A")
        throw ValidationError(
            "generic metaproperty: the ideal family must be defined with constant parameters "
            "(constant sheaf sorts only)");
    };
    std::function<void(const Term&)> checkTerm = [&](const Term& t) {
      if (t.sort) checkSort(t.sort);
      for (auto& a : t.args) checkTerm(*a);
      if (t.base) checkTerm(*t.base);
    };
    if (f.t1) checkTerm(*f.t1);
    if (f.t2) checkTerm(*f.t2);
    if (f.sort) checkSort(f.sort);
    if (f.a) inspect(*f.a);
    if (f.b) inspect(*f.b);
    for (auto& k : f.kids) inspect(*k);
  };
  inspect(*phi);

  const FinRing& A = ctx.ring();
  const FiniteSpace& X = ctx.space();
  const Sheaf& cA = ctx.ring_constant_sheaf();
  auto I = std::make_shared<Subsheaf>(comprehend(cA, phi, var, ctx.env()));

  Forcer forcer(ctx.env());
  SortPtr sA = Sort::sheaf("A");
  SortPtr pA = Sort::power(sA);
  FormulaPtr meets = f_exists(
      "a", sA, f_and(f_member(t_var("a", sA), t_var("I", pA)),
                     f_member(t_var("a", sA), t_const("F", pA))));

  GenericMetaReport rep;
  for (int f = 0; f < A.size(); ++f) {
    Mask Df = ctx.points().basic_open(f);
    int e = forcer.bind(Forcer::kRootEnv, "I", X.full(), Value::of_sub(I));
    if (!forcer.force(Df, meets, e)) continue;
    bool found = false;
    for (int n = 0; n <= A.size() && !found; ++n) {
      int fn = A.pow(f, n);
      int uIdx = X.index_of(Df);
      int sec = ctx.constant_section(uIdx, fn);
      if (I->contains(uIdx, sec)) found = true;
    }
    if (!found) {
      rep.ok = false;
      rep.detail = "f = " + A.elem_name(f) + ": I ∩ F inhabited on D(f) but no power of f lies in I";
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------- local spectrum

namespace {

/// The forcing environment over Spec(R) with constant sheaves R and A
/// (the algebra), the hom as a function symbol, and componentwise operations.
struct BaseSpecEnv {
  SpectrumContext ctx;  // of the base ring
  const FinRing* algebra;
  std::unique_ptr<Sheaf> constAlg;  // constant sheaf of the algebra carrier
  std::deque<SheafMorphism> morphisms;
  BaseEnv env;

  BaseSpecEnv(const FinRing& R, const RingHom& phi) : ctx(R), algebra(phi.cod) {
    const FiniteSpace& X = ctx.space();
    env = ctx.env();  // R appears as "A" there; rename below

    std::vector<std::string> elems;
    for (int i = 0; i < algebra->size(); ++i) elems.push_back(algebra->elem_name(i));
    constAlg = std::make_unique<Sheaf>(constant_sheaf(X, elems, "Alg_const"));
    env.sheaves["Alg"] = constAlg.get();

    ConstantCodec algCodec(X, algebra->size());
    ConstantCodec baseCodec(X, ctx.ring().size());

    morphisms.push_back(constant_binop(*constAlg, algCodec, "mul",
                                       [a = algebra](int x, int y) { return a->mul(x, y); }));
    env.functions["mul"].push_back(&morphisms.back());
    morphisms.push_back(constant_binop(*constAlg, algCodec, "add",
                                       [a = algebra](int x, int y) { return a->add(x, y); }));
    env.functions["add"].push_back(&morphisms.back());
    {
      RingStructure rs;
      rs.carrier = constAlg.get();
      rs.add = &morphisms.back();
      rs.mul = &morphisms[morphisms.size() - 2];
      int fullIdx = X.index_of(X.full());
      rs.zeroGlobal = algCodec.constant(fullIdx, algebra->zero());
      rs.oneGlobal = algCodec.constant(fullIdx, algebra->one());
      env.rings["Alg"] = rs;
    }
    morphisms.push_back(make_morphism(
        "phi", {env.sheaves.at("A")}, constAlg.get(),
        [algCodec, baseCodec, &phi](int u, const std::vector<int>& s) {
          auto a = baseCodec.decode(u, s[0]);
          std::vector<int> r(a.size());
          for (std::size_t i = 0; i < a.size(); ++i) r[i] = phi(a[i]);
          return algCodec.encode(u, r);
        }));
    env.functions["phi"].push_back(&morphisms.back());
  }

  /// Constant subsheaf of Alg given by a subset of the algebra carrier.
  SubsheafPtr constant_subsheaf(Mask subset) const {
    const FiniteSpace& X = ctx.space();
    std::vector<DynBitset> perPoint(X.point_count());
    for (int p = 0; p < X.point_count(); ++p) {
      int mi = X.index_of(X.min_open(p));
      DynBitset b(constAlg->card(mi));
      auto comps = X.components(X.min_open(p));
      int k = static_cast<int>(comps.size());
      for (int code = 0; code < constAlg->card(mi); ++code) {
        std::vector<int> vals(k);
        int c = code;
        bool in = true;
        for (int i = k - 1; i >= 0; --i) {
          vals[i] = c % algebra->size();
          c /= algebra->size();
        }
        for (int v : vals)
          if (!has(subset, v)) in = false;
        if (in) b.set(code);
      }
      perPoint[p] = b;
    }
    auto S = subsheaf_from_stalks(*constAlg, X.full(), perPoint);
    return std::make_shared<Subsheaf>(std::move(S));
  }

  /// ∀f:R ∀s:Alg. (inv(f) ⇒ s ∈ I) ⇒ phi(f)*s ∈ I, forced over Spec(R).
  bool membership_condition(Mask radicalIdeal) {
    Forcer forcer(env);
    SortPtr sR = Sort::sheaf("A");  // the base ring's constant sheaf
    SortPtr sAlg = Sort::sheaf("Alg");
    SortPtr pAlg = Sort::power(sAlg);
    FormulaPtr inv =
        f_exists("w", sR, f_eq(t_app("mul", {t_var("f", sR), t_var("w", sR)}, sR), t_num(1, sR)));
    FormulaPtr antecedent = f_implies(inv, f_member(t_var("s", sAlg), t_var("I", pAlg)));
    FormulaPtr consequent = f_member(
        t_app("mul", {t_app("phi", {t_var("f", sR)}, sAlg), t_var("s", sAlg)}, sAlg),
        t_var("I", pAlg));
    FormulaPtr cond = f_forall("f", sR, f_forall("s", sAlg, f_implies(antecedent, consequent)));
    int e = forcer.bind(Forcer::kRootEnv, "I", ctx.space().full(),
                        Value::of_sub(constant_subsheaf(radicalIdeal)));
    return forcer.force(ctx.space().full(), cond, e);
  }
};

}  // namespace

bool local_spectrum_condition(const FinRing& R, const RingHom& phi, Mask radicalIdeal) {
  BaseSpecEnv base(R, phi);
  return base.membership_condition(radicalIdeal);
}

bool local_quasicoherence_condition(const FinRing& R, const RingHom& phi, Mask radicalIdeal) {
  BaseSpecEnv base(R, phi);
  Forcer forcer(base.env);
  SortPtr sR = Sort::sheaf("A");
  SortPtr sAlg = Sort::sheaf("Alg");
  SortPtr pAlg = Sort::power(sAlg);
  FormulaPtr inv =
      f_exists("w", sR, f_eq(t_app("mul", {t_var("f", sR), t_var("w", sR)}, sR), t_num(1, sR)));
  FormulaPtr antecedent = f_implies(inv, f_member(t_var("s", sAlg), t_var("I", pAlg)));
  Exponent n;
  n.symbolic = true;
  n.var = "n";
  SchemaBound b;
  b.value = phi.cod->size();
  FormulaPtr disjunct = f_member(
      t_app("mul", {t_pow(t_app("phi", {t_var("f", sR)}, sAlg), n), t_var("s", sAlg)}, sAlg),
      t_var("I", pAlg));
  FormulaPtr cond = f_forall(
      "f", sR, f_forall("s", sAlg, f_implies(antecedent, f_bigor_schema("n", 0, b, disjunct))));
  int e = forcer.bind(Forcer::kRootEnv, "I", base.ctx.space().full(),
                      Value::of_sub(base.constant_subsheaf(radicalIdeal)));
  return forcer.force(base.ctx.space().full(), cond, e);
}

Mask quasicoherator(const FinRing& R, const RingHom& phi, Mask radicalIdeal) {
  const FinRing& A = *phi.cod;
  BaseSpecEnv base(R, phi);
  SortPtr sR = Sort::sheaf("A");
  SortPtr sAlg = Sort::sheaf("Alg");
  SortPtr pAlg = Sort::power(sAlg);

  // register every algebra element as a constant section of Alg once
  {
    const FiniteSpace& X = base.ctx.space();
    int k = static_cast<int>(X.components(X.full()).size());
    for (int s = 0; s < A.size(); ++s) {
      int code = 0;
      for (int i = 0; i < k; ++i) code = code * A.size() + s;
      base.env.sectionConstants["alg" + std::to_string(s)] = {base.constAlg.get(), X.full(), code};
    }
  }

  Mask I = radicalIdeal;
  while (true) {
    // elements phi(f)·s with (f inv ⇒ s ∈ I) forced over Spec(R)
    Mask gens = I;
    Forcer forcer(base.env);
    auto Isub = base.constant_subsheaf(I);
    for (int f = 0; f < R.size(); ++f)
      for (int s = 0; s < A.size(); ++s) {
        FormulaPtr inv = f_exists(
            "w", sR,
            f_eq(t_app("mul", {t_const("c" + std::to_string(f), sR), t_var("w", sR)}, sR),
                 t_num(1, sR)));
        FormulaPtr member = f_member(t_const("alg" + std::to_string(s), sAlg), t_var("I", pAlg));
        FormulaPtr cond = f_implies(inv, member);
        int e = forcer.bind(Forcer::kRootEnv, "I", base.ctx.space().full(), Value::of_sub(Isub));
        if (forcer.force(base.ctx.space().full(), cond, e)) gens |= bit(A.mul(phi(f), s));
      }
    Mask next = radical(A, ideal_closure(A, gens));
    if (next == I) return I;
    I = next;
  }
}

int LocalSpecFrame::index_of(Mask radicalIdeal) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (parent.radicals[members[i]] == radicalIdeal) return static_cast<int>(i);
  throw ResolveError("not a member of the local-spectrum frame");
}

LocalSpecFrame local_spectrum_frame(const FinRing& R, const RingHom& phi) {
  if (!R.is_local()) throw ValidationError("local spectrum: the base ring is not local");
  const FinRing& A = *phi.cod;

  LocalSpecFrame L;
  L.base = &R;
  L.algebra = &A;
  L.parent = spec_frame(A);

  BaseSpecEnv base(R, phi);
  for (std::size_t i = 0; i < L.parent.radicals.size(); ++i)
    if (base.membership_condition(L.parent.radicals[i])) L.members.push_back(static_cast<int>(i));

  // the quasicoherator is a nucleus on the parent frame whose fixed points
  // are exactly the members
  L.quasicoherator.frame = &L.parent.frame;
  L.quasicoherator.label = "quasicoherator";
  L.quasicoherator.map.resize(L.parent.frame.size());
  for (int i = 0; i < L.parent.frame.size(); ++i)
    L.quasicoherator.map[i] = L.parent.index_of(quasicoherator(R, phi, L.parent.radicals[i]));
  if (!check_nucleus(L.quasicoherator))
    throw ValidationError("local spectrum: the quasicoherator is not a nucleus");
  for (int i = 0; i < L.parent.frame.size(); ++i) {
    bool fixed = L.quasicoherator.map[i] == i;
    bool member = std::find(L.members.begin(), L.members.end(), i) != L.members.end();
    if (fixed != member)
      throw ValidationError(
          "local spectrum: quasicoherator fixed points differ from the forced membership "
          "condition");
  }

  Sublocale S = sublocale_frame(L.quasicoherator);
  L.frame = S.frame;
  // joins are quasicoherator of the parent join, by construction of the
  // sublocale frame; assert the literal law
  for (std::size_t i = 0; i < L.members.size(); ++i)
    for (std::size_t k = 0; k < L.members.size(); ++k) {
      int pj = L.parent.frame.join(L.members[i], L.members[k]);
      int q = L.quasicoherator.map[pj];
      if (S.fixed[L.frame.join(static_cast<int>(i), static_cast<int>(k))] != q)
        throw ValidationError("local spectrum: joins are not quasicoherator-closed");
    }
  return L;
}

// ---------------------------------------------------------------- internal quasicoherence

bool check_internal_quasicoherence(SpectrumContext& ctx, const std::string& tildeName,
                                   const SubsheafPtr& G) {
  Forcer forcer(ctx.env());
  SortPtr sO = Sort::sheaf("O");
  SortPtr sM = Sort::sheaf(tildeName);
  SortPtr pM = Sort::power(sM);

  FormulaPtr inv =
      f_exists("w", sO, f_eq(t_app("mul", {t_var("f", sO), t_var("w", sO)}, sO), t_num(1, sO)));
  FormulaPtr antecedent = f_implies(inv, f_member(t_var("s", sM), t_var("G", pM)));
  Exponent n;
  n.symbolic = true;
  n.var = "n";
  SchemaBound b;
  b.value = ctx.ring().size();
  FormulaPtr disjunct = f_member(
      t_app("smul", {t_pow(t_var("f", sO), n), t_var("s", sM)}, sM), t_var("G", pM));
  FormulaPtr consequent = f_bigor_schema("n", 0, b, disjunct);
  FormulaPtr cond =
      f_forall("f", sO, f_forall("s", sM, f_implies(antecedent, consequent)));
  int e = forcer.bind(Forcer::kRootEnv, "G", ctx.space().full(), Value::of_sub(G));
  return forcer.force(ctx.space().full(), cond, e);
}

}  // namespace toposforge
