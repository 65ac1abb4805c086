#include "toposforge/verify.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

namespace toposforge {

// ---------------------------------------------------------------- Report

void Report::add(bool pass, std::string name, std::string detail) {
  lines.push_back({pass, std::move(name), std::move(detail)});
}

bool Report::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

int Report::fail_count() const {
  int c = 0;
  for (auto& l : lines)
    if (!l.pass) ++c;
  return c;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (auto& l : lines) {
    os << (l.pass ? "PASS " : "FAIL ") << l.name;
    if (!l.detail.empty()) os << ": " << l.detail;
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- corpus

FiniteSpace random_space(std::mt19937_64& rng, int maxPoints, int maxOpens) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    int n = 1 + static_cast<int>(rng() % maxPoints);
    Mask full = bit(n) - 1;
    std::vector<Mask> opens = {0, full};
    int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) opens.push_back(rng() & full);
    // close under union and intersection
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < opens.size(); ++i)
        for (std::size_t j = i + 1; j < opens.size(); ++j) {
          for (Mask m : {opens[i] | opens[j], opens[i] & opens[j]}) {
            if (std::find(opens.begin(), opens.end(), m) == opens.end()) {
              opens.push_back(m);
              grew = true;
            }
          }
        }
    }
    if (static_cast<int>(opens.size()) > maxOpens) continue;
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back(std::string(1, static_cast<char>('a' + i)));
    return FiniteSpace::validate(std::move(pts), std::move(opens));
  }
  return FiniteSpace::sierpinski();
}

std::vector<FiniteSpace> corpus_spaces(int count, int maxPoints, std::mt19937_64& rng) {
  std::vector<FiniteSpace> out;
  out.push_back(FiniteSpace::validate({"x"}, {0, 1}));  // point
  out.push_back(FiniteSpace::sierpinski());
  out.push_back(FiniteSpace::discrete({"a", "b"}));
  out.push_back(FiniteSpace::indiscrete({"a", "b"}));
  out.push_back(FiniteSpace::validate({"a", "b", "c"}, {0, 1, 3, 7}));  // 3-chain
  // pseudocircle
  out.push_back(FiniteSpace::validate({"a", "b", "c", "d"}, {0, 1, 2, 3, 7, 11, 15}));
  out.push_back(FiniteSpace::discrete({"a", "b", "c"}));
  out.push_back(FiniteSpace::validate({"a", "b", "c"}, {0, 1, 2, 3, 7}));  // 2 open pts + generic
  while (static_cast<int>(out.size()) < count) out.push_back(random_space(rng, maxPoints));
  out.resize(count > static_cast<int>(out.size()) ? out.size() : count);
  return out;
}

std::vector<FinRing> corpus_rings() {
  std::vector<FinRing> out;
  for (int n : {2, 3, 4, 6, 8, 9, 12}) out.push_back(FinRing::zmod(n));
  out.push_back(FinRing::polyquot(FinRing::zmod(2), {1, 1, 1}));  // F4 = F2[x]/(x²+x+1)
  out.push_back(FinRing::product(FinRing::zmod(2), FinRing::zmod(3)));
  out.push_back(FinRing::product(FinRing::zmod(4), FinRing::zmod(4)));
  return out;
}

// ---------------------------------------------------------------- SpaceEnv

SpaceEnv::SpaceEnv(const FiniteSpace& X, bool withSubsheaf) : space(X) {
  env.space = &space;
  std::vector<std::string> elems = {"0", "1"};
  M = std::make_unique<Sheaf>(constant_sheaf(space, elems, "M"));
  env.sheaves["M"] = M.get();
  env.schemaBound = 2;

  ConstantCodec codec(space, 2);
  morphisms.push_back(constant_binop(*M, codec, "add", [](int a, int b) { return a ^ b; }));
  env.functions["add"].push_back(&morphisms.back());
  morphisms.push_back(constant_binop(*M, codec, "mul", [](int a, int b) { return a & b; }));
  env.functions["mul"].push_back(&morphisms.back());
  morphisms.push_back(constant_unop(*M, codec, "f", [](int a) { return a ^ 1; }));
  env.functions["f"].push_back(&morphisms.back());

  int fullIdx = space.index_of(space.full());
  {
    RingStructure rs;
    rs.carrier = M.get();
    rs.add = &morphisms[0];
    rs.mul = &morphisms[1];
    rs.zeroGlobal = codec.constant(fullIdx, 0);
    rs.oneGlobal = codec.constant(fullIdx, 1);
    env.rings["M"] = rs;
  }

  for (int u = 0; u < space.open_count(); ++u)
    env.propConstants["U" + std::to_string(u)] = space.open_at(u);

  int gcount = std::min(4, M->card(fullIdx));
  for (int s = 0; s < gcount; ++s)
    env.sectionConstants["g" + std::to_string(s)] = {M.get(), space.full(), s};

  nuclei.push_back(nucleus_negneg(space));
  env.nuclei["negneg"] = &nuclei.back();
  nuclei.push_back(nucleus_identity(space.opens_frame()));
  env.nuclei["ident"] = &nuclei.back();
  Mask properOpen = space.open_count() >= 2 ? space.open_at(space.open_count() - 2) : space.full();
  nuclei.push_back(nucleus_open(space, properOpen));
  env.nuclei["jopen"] = &nuclei.back();
  Mask smallOpen = space.open_count() >= 2 ? space.open_at(1) : 0;
  nuclei.push_back(nucleus_closed(space, smallOpen));
  env.nuclei["jclosed"] = &nuclei.back();
  if (space.point_count() > 0) {
    nuclei.push_back(nucleus_point(space, 0));
    env.nuclei["jpoint"] = &nuclei.back();
  }

  if (withSubsheaf && space.point_count() > 0) {
    SortPtr sM = Sort::sheaf("M");
    FormulaPtr phi = f_or(f_eq(t_var("x", sM), t_num(0, sM)),
                          f_prop(t_const("U" + std::to_string(space.open_count() >= 2
                                                                  ? space.open_count() - 2
                                                                  : 0),
                                         Sort::omega())));
    G = std::make_shared<Subsheaf>(comprehend(*M, phi, "x", env));
    env.subsheaves["G"] = G;
  }
}

// ---------------------------------------------------------------- FormulaGen

FormulaGen::FormulaGen(const BaseEnv& env, std::mt19937_64& rng) : env_(&env), rng_(&rng) {
  for (auto& [n, m] : env.propConstants) {
    (void)m;
    props_.push_back(n);
  }
  for (auto& [n, c] : env.sectionConstants) {
    (void)c;
    consts_.push_back(n);
  }
  for (auto& [n, j] : env.nuclei) {
    (void)j;
    nucs_.push_back(n);
  }
  for (auto& [n, s] : env.subsheaves) {
    (void)s;
    subs_.push_back(n);
  }
  for (auto& [n, fn] : env.functions)
    if (fn.size() == 1 && fn[0]->args.size() == 1) fns_.push_back(n);
  msort_ = env.rings.count("M") ? "M" : (env.sheaves.empty() ? "" : env.sheaves.begin()->first);
}

TermPtr FormulaGen::gen_term(int depth, const std::string& sheafSort, bool simpleOnly) {
  SortPtr s = Sort::sheaf(sheafSort);
  std::vector<std::string> vars;
  for (auto& [v, vs] : scope_)
    if (vs->kind == Sort::Kind::Sheaf && vs->name == sheafSort) vars.push_back(v);
  std::vector<std::string> mine;
  for (auto& n : consts_)
    if (env_->sectionConstants.at(n).sheaf == env_->sheaves.at(sheafSort)) mine.push_back(n);
  if (depth == 0 || simpleOnly || pick(3) == 0) {
    int c = pick(static_cast<int>(vars.size() + mine.size()) + (simpleOnly ? 0 : 1));
    if (c < static_cast<int>(vars.size())) return t_var(vars[c], s);
    c -= static_cast<int>(vars.size());
    if (c < static_cast<int>(mine.size())) return t_const(mine[c], s);
    if (!simpleOnly) return t_num(pick(2), s);
    if (!vars.empty()) return t_var(vars[0], s);
    throw ResolveError("term generator: no simple terms available");
  }
  switch (pick(3)) {
    case 0:
      if (!fns_.empty())
        return t_app(fns_[pick(static_cast<int>(fns_.size()))], {gen_term(depth - 1, sheafSort)},
                     s);
      [[fallthrough]];
    case 1:
      return t_app("add", {gen_term(depth - 1, sheafSort), gen_term(depth - 1, sheafSort)}, s);
    default:
      return t_app("mul", {gen_term(depth - 1, sheafSort), gen_term(depth - 1, sheafSort)}, s);
  }
}

FormulaPtr FormulaGen::atom(const Config& cfg) {
  std::vector<std::string> omegaVars;
  for (auto& [v, vs] : scope_)
    if (vs->kind == Sort::Kind::Omega) omegaVars.push_back(v);
  while (true) {
    switch (pick(8)) {
      case 0:
      case 1:
      case 2:
        if (!msort_.empty())
          return f_eq(gen_term(cfg.frameSafe ? 0 : 1, msort_, cfg.frameSafe),
                      gen_term(cfg.frameSafe ? 0 : 1, msort_, cfg.frameSafe));
        break;
      case 3:
        if (!props_.empty())
          return f_prop(t_const(props_[pick(static_cast<int>(props_.size()))], Sort::omega()));
        break;
      case 4:
        if (!omegaVars.empty())
          return f_prop(t_var(omegaVars[pick(static_cast<int>(omegaVars.size()))], Sort::omega()));
        break;
      case 5:
        if (!cfg.frameSafe && !subs_.empty() && !msort_.empty()) {
          std::string sub = subs_[pick(static_cast<int>(subs_.size()))];
          SortPtr ps = Sort::power(Sort::sheaf(msort_));
          return f_member(gen_term(1, msort_), t_const(sub, ps));
        }
        break;
      case 6:
        return f_top();
      default:
        return f_bot();
    }
  }
}

FormulaPtr FormulaGen::gen(int depth, const Config& cfg) {
  if (depth <= 0) return atom(cfg);
  int pool = cfg.geometricOnly ? 5 : 10;
  switch (pick(pool)) {
    case 0:
      return f_and(gen(depth - 1, cfg), gen(depth - 1, cfg));
    case 1:
      return f_or(gen(depth - 1, cfg), gen(depth - 1, cfg));
    case 2: {
      int k = 2 + pick(2);
      std::vector<FormulaPtr> kids;
      for (int i = 0; i < k; ++i) kids.push_back(gen(depth - 1, cfg));
      return f_bigor(std::move(kids));
    }
    case 3: {  // exists over the sheaf sort
      if (msort_.empty()) return atom(cfg);
      std::string v = "x" + std::to_string(varCounter_++);
      scope_.emplace_back(v, Sort::sheaf(msort_));
      FormulaPtr body = gen(depth - 1, cfg);
      scope_.pop_back();
      return f_exists(v, Sort::sheaf(msort_), body);
    }
    case 4: {  // exists over Omega
      std::string v = "p" + std::to_string(varCounter_++);
      scope_.emplace_back(v, Sort::omega());
      FormulaPtr body = gen(depth - 1, cfg);
      scope_.pop_back();
      return f_exists(v, Sort::omega(), body);
    }
    case 5:
      return f_implies(gen(depth - 1, cfg), gen(depth - 1, cfg));
    case 6:
      return f_not(gen(depth - 1, cfg));
    case 7: {
      int k = 2 + pick(2);
      std::vector<FormulaPtr> kids;
      for (int i = 0; i < k; ++i) kids.push_back(gen(depth - 1, cfg));
      return f_bigand(std::move(kids));
    }
    case 8: {  // forall over the sheaf sort or Omega
      bool omega = pick(3) == 0;
      std::string v = (omega ? "p" : "x") + std::to_string(varCounter_++);
      SortPtr s = omega || msort_.empty() ? Sort::omega() : Sort::sheaf(msort_);
      scope_.emplace_back(v, s);
      FormulaPtr body = gen(depth - 1, cfg);
      scope_.pop_back();
      return f_forall(v, s, body);
    }
    default: {
      if (cfg.allowModal && !cfg.frameSafe && !nucs_.empty())
        return f_modal(nucs_[pick(static_cast<int>(nucs_.size()))], gen(depth - 1, cfg));
      return f_implies(gen(depth - 1, cfg), gen(depth - 1, cfg));
    }
  }
}

// ---------------------------------------------------------------- checkers

bool sequent_holds(Forcer& forcer, const std::vector<std::pair<std::string, SortPtr>>& ctx,
                   const FormulaPtr& prem, const FormulaPtr& concl, std::string* where) {
  const FiniteSpace& X = forcer.space();
  for (Mask U : X.opens()) {
    std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int envId) {
      if (i == ctx.size()) {
        if (forcer.force(U, prem, envId) && !forcer.force(U, concl, envId)) {
          if (where) *where = "on " + X.format_mask(U);
          return false;
        }
        return true;
      }
      for (const Value& v : forcer.sort_values(ctx[i].second, U))
        if (!rec(i + 1, forcer.bind(envId, ctx[i].first, U, v))) return false;
      return true;
    };
    if (!rec(0, Forcer::kRootEnv)) return false;
  }
  return true;
}

bool check_locality(Forcer& forcer, const FormulaPtr& phi, Mask U, const std::vector<Mask>& cover) {
  bool whole = forcer.force(U, phi);
  bool pieces = true;
  for (Mask V : cover)
    if (!forcer.force(V, phi)) pieces = false;
  return whole == pieces;
}

SpreadReport check_geometric_spreading(Forcer& forcer, const FormulaPtr& phi) {
  if (!is_geometric(*phi)) throw SortError("check_geometric_spreading: formula is not geometric");
  const FiniteSpace& X = forcer.space();
  SpreadReport rep;
  for (int p = 0; p < X.point_count(); ++p) {
    bool atStalk = forcer.classical_at(p, phi);
    bool onMin = forcer.force(X.min_open(p), phi);
    bool someNbhd = false;
    for (Mask V : X.opens())
      if (has(V, p) && forcer.force(V, phi)) someNbhd = true;
    if (atStalk != onMin || atStalk != someNbhd) {
      rep.ok = false;
      rep.detail = "at point " + X.points()[p] + ": stalk=" + std::to_string(atStalk) +
                   " minopen=" + std::to_string(onMin) + " nbhd=" + std::to_string(someNbhd);
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------- box theorem

namespace {

struct SublocaleCtx {
  Sublocale sub;
  std::deque<PlusResult> sheafified;
  FrameContext fctx;
};

SublocaleCtx make_sublocale_context(const SpaceEnv& se, const Nucleus& j) {
  const FiniteSpace& X = se.space;
  SublocaleCtx out;
  out.sub = sublocale_frame(j);
  out.fctx.L = &out.sub.frame;
  out.fctx.schemaBound = se.env.schemaBound;

  const Frame& L = out.sub.frame;
  for (auto& [name, F] : se.env.sheaves) {
    out.sheafified.push_back(sheafify(*F, j));
    const Sheaf& FF = out.sheafified.back().sheaf;
    FrameSheaf fs;
    fs.sortName = name;
    fs.card.resize(L.size());
    fs.restr.assign(L.size(), std::vector<std::vector<int>>(L.size()));
    for (int e = 0; e < L.size(); ++e) fs.card[e] = FF.card(out.sub.fixed[e]);
    for (int e = 0; e < L.size(); ++e)
      for (int e2 = 0; e2 < L.size(); ++e2) {
        if (!L.leq(e2, e)) continue;
        std::vector<int> t(fs.card[e]);
        for (int s = 0; s < fs.card[e]; ++s)
          t[s] = FF.restrict_idx(out.sub.fixed[e], out.sub.fixed[e2], s);
        fs.restr[e][e2] = std::move(t);
      }
    out.fctx.sheaves[name] = std::move(fs);

    // section constants of this sheaf, pushed through the canonical map and
    // lifted along the j-sheaf bijection F''(j(D)) ≅ F''(D)
    const PlusResult& pp = out.sheafified.back();
    for (auto& [cn, sc] : se.env.sectionConstants) {
      if (sc.sheaf != F) continue;
      int dIdx = X.index_of(sc.defOpen);
      int image = pp.canonical[dIdx][sc.section];
      int jdIdx = X.index_of(X.open_at(j.apply(dIdx)));
      int lifted = -1;
      for (int t = 0; t < FF.card(jdIdx); ++t)
        if (FF.restrict_idx(jdIdx, dIdx, t) == image) {
          if (lifted >= 0) throw ValidationError("box theorem: section lift not unique");
          lifted = t;
        }
      if (lifted < 0) throw ValidationError("box theorem: section does not lift");
      out.fctx.sectionConstants[cn] = {name, out.sub.project(jdIdx), lifted};
    }
  }
  for (auto& [pn, W] : se.env.propConstants)
    out.fctx.propConstants[pn] = out.sub.project(X.index_of(W));
  return out;
}

}  // namespace

bool check_box_theorem(const SpaceEnv& se, const std::string& nucName, const FormulaPtr& phi,
                       bool elideGray, std::string* detail) {
  const Nucleus& j = *se.env.nuclei.at(nucName);
  Forcer forcer(se.env);
  FormulaPtr translated = box_translate(*phi, nucName, elideGray).formula;
  bool lhs = forcer.force(se.space.full(), translated);

  SublocaleCtx sc = make_sublocale_context(se, j);
  FrameForcer ff(sc.fctx);
  bool rhs = ff.force(sc.fctx.L->top(), phi);
  if (lhs != rhs && detail)
    *detail = "lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs) + " formula " +
              print_formula(*phi);
  return lhs == rhs;
}

// ---------------------------------------------------------------- metaproperties

bool space_is_local(const FiniteSpace& X) {
  Mask properUnion = 0;
  for (Mask U : X.opens())
    if (U != X.full()) properUnion |= U;
  return X.point_count() > 0 && properUnion != X.full();
}

bool space_is_irreducible(const FiniteSpace& X) {
  if (X.point_count() == 0) return false;
  for (Mask U : X.opens())
    for (Mask V : X.opens())
      if (U && V && (U & V) == 0) return false;
  return true;
}

bool space_is_boolean(const FiniteSpace& X) {
  for (Mask U : X.opens())
    for (Mask V : X.opens()) {
      if (V & ~U) continue;
      // V dense in U iff U ⊆ Clos(V)
      if ((U & ~X.closure(V)) == 0 && V != U) return false;
    }
  return true;
}

MetaReport check_metaproperty(Forcer& forcer, MetaKind kind,
                              const std::vector<std::vector<FormulaPtr>>& instances) {
  const FiniteSpace& X = forcer.space();
  MetaReport rep;
  rep.metaproperty = true;
  switch (kind) {
    case MetaKind::Quasicompact:
      rep.topological = true;  // every finite space is quasicompact
      break;
    case MetaKind::Local:
      rep.topological = space_is_local(X);
      break;
    case MetaKind::Irreducible:
      rep.topological = space_is_irreducible(X);
      break;
  }
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& fam = instances[i];
    if (kind == MetaKind::Irreducible) {
      if (fam.size() != 2) throw ValidationError("irreducibility instances are formula pairs");
      bool premise = forcer.force(X.full(), f_not(f_and(fam[0], fam[1])));
      bool concl = forcer.force(X.full(), f_not(fam[0])) || forcer.force(X.full(), f_not(fam[1]));
      bool nonTrivial = X.point_count() > 0;
      if (premise && (!concl || !nonTrivial)) {
        rep.metaproperty = false;
        rep.counterexample = "instance " + std::to_string(i);
      }
    } else {
      bool whole = forcer.force(X.full(), f_bigor(fam));
      bool some = false;
      for (auto& f : fam)
        if (forcer.force(X.full(), f)) some = true;
      if (whole && !some) {
        rep.metaproperty = false;
        rep.counterexample = "instance " + std::to_string(i);
      }
    }
  }
  return rep;
}

// ================================================================== suites

namespace {

using Ctx = std::vector<std::pair<std::string, SortPtr>>;

struct Sequent {
  FormulaPtr prem, concl;
};

/// Premises hold semantically → the conclusion must; vacuous instances pass.
bool rule_instance_ok(Forcer& fz, const Ctx& ctx, const std::vector<Sequent>& premises,
                      const Ctx& cctx, const Sequent& conclusion, std::string* where) {
  for (auto& p : premises)
    if (!sequent_holds(fz, ctx, p.prem, p.concl)) return true;  // premise fails: nothing to check
  return sequent_holds(fz, cctx, conclusion.prem, conclusion.concl, where);
}

std::vector<FiniteSpace> suite_spaces(const VerifyOptions& opt, std::mt19937_64& rng) {
  if (!opt.spaces.empty()) return opt.spaces;
  return corpus_spaces(opt.spaceCount, opt.maxPoints, rng);
}

FormulaPtr em_probe_formula() {
  FormulaPtr p = f_prop(t_var("p", Sort::omega()));
  return f_forall("p", Sort::omega(), f_or(p, f_not(p)));
}

}  // namespace

Report verify_inference_rules(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "inference-rules";
  std::mt19937_64 rng(opt.seed);
  auto spaces = suite_spaces(opt, rng);

  int emFails = 0;
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    SpaceEnv se(spaces[si]);
    Forcer fz(se.env);
    FormulaGen gen(se.env, rng);
    SortPtr sM = Sort::sheaf(gen.sheaf_sort());
    FormulaGen::Config cfg;
    std::string tag = "space" + std::to_string(si);

    auto genx = [&](std::initializer_list<const char*> vars, int depth) {
      for (auto* v : vars) gen.push_context(v, sM);
      FormulaPtr f = gen.gen(depth, cfg);
      for (std::size_t i = 0; i < vars.size(); ++i) gen.pop_context();
      return f;
    };

    struct RuleResult {
      bool ok = true;
      std::string where;
    };
    std::map<std::string, RuleResult> results;
    auto run = [&](const std::string& rule, const Ctx& pctx, const std::vector<Sequent>& prems,
                   const Ctx& cctx, const Sequent& concl) {
      std::string where;
      if (!rule_instance_ok(fz, pctx, prems, cctx, concl, &where)) {
        auto& r = results[rule];
        r.ok = false;
        r.where = where;
      } else {
        results.emplace(rule, RuleResult{});
      }
    };

    Ctx cx = {{"x", sM}};
    Ctx cxy = {{"x", sM}, {"y", sM}};
    for (int i = 0; i < opt.instanceCount; ++i) {
      int d = opt.maxDepth;
      FormulaPtr phi = genx({"x"}, d), psi = genx({"x"}, d), chi = genx({"x"}, d);
      FormulaPtr rho = genx({"x"}, d - 1);

      run("identity", cx, {}, cx, {phi, phi});
      run("cut", cx, {{phi, psi}, {psi, chi}}, cx, {phi, chi});
      run("cut", cx, {{phi, f_or(phi, rho)}, {f_or(phi, rho), f_or(f_or(phi, rho), psi)}}, cx,
          {phi, f_or(f_or(phi, rho), psi)});
      {  // substitution with a closed term
        TermPtr s = t_num(static_cast<int>(rng() % 2), sM);
        run("substitution", cx, {{phi, f_or(phi, rho)}}, {},
            {substitute(*phi, "x", s), substitute(*f_or(phi, rho), "x", s)});
      }
      run("top-intro", cx, {}, cx, {phi, f_top()});
      run("and-elim-l", cx, {}, cx, {f_and(phi, psi), phi});
      run("and-elim-r", cx, {}, cx, {f_and(phi, psi), psi});
      run("and-intro", cx, {{phi, psi}, {phi, chi}}, cx, {phi, f_and(psi, chi)});
      run("and-intro", cx, {{phi, f_or(phi, psi)}, {phi, f_or(phi, chi)}}, cx,
          {phi, f_and(f_or(phi, psi), f_or(phi, chi))});
      run("bot-elim", cx, {}, cx, {f_bot(), phi});
      run("or-intro-l", cx, {}, cx, {phi, f_or(phi, psi)});
      run("or-intro-r", cx, {}, cx, {psi, f_or(phi, psi)});
      run("or-elim", cx, {{phi, chi}, {psi, chi}}, cx, {f_or(phi, psi), chi});
      run("or-elim", cx, {{f_and(chi, phi), chi}, {f_and(chi, psi), chi}}, cx,
          {f_or(f_and(chi, phi), f_and(chi, psi)), chi});
      {
        std::vector<FormulaPtr> fam = {phi, psi, chi};
        for (std::size_t j = 0; j < fam.size(); ++j) {
          run("bigand-elim", cx, {}, cx, {f_bigand(fam), fam[j]});
          run("bigor-intro", cx, {}, cx, {fam[j], f_bigor(fam)});
        }
        run("bigand-intro", cx,
            {{rho, f_or(rho, phi)}, {rho, f_or(rho, psi)}, {rho, f_or(rho, chi)}}, cx,
            {rho, f_bigand({f_or(rho, phi), f_or(rho, psi), f_or(rho, chi)})});
        run("bigor-elim", cx,
            {{f_and(rho, phi), rho}, {f_and(rho, psi), rho}, {f_and(rho, chi), rho}}, cx,
            {f_bigor({f_and(rho, phi), f_and(rho, psi), f_and(rho, chi)}), rho});
      }
      run("imp-intro", cx, {{f_and(phi, psi), phi}}, cx, {phi, f_implies(psi, phi)});
      run("imp-intro", cx, {{f_and(phi, psi), chi}}, cx, {phi, f_implies(psi, chi)});
      run("imp-elim", cx, {{f_implies(psi, chi), f_implies(psi, chi)}}, cx,
          {f_and(f_implies(psi, chi), psi), chi});
      {
        // quantifier double rules with y fresh
        FormulaPtr phixy = genx({"x", "y"}, d - 1);
        FormulaPtr psix = genx({"x"}, d - 1);
        // (∃y.φ) ⊢ ψ  ⟺  φ ⊢_{x,y} ψ  (y not in ψ)
        run("exists-intro", cxy, {{phixy, psix}}, cx,
            {f_exists("y", sM, phixy), psix});
        run("exists-elim", cx, {{f_exists("y", sM, phixy), f_or(f_exists("y", sM, phixy), psix)}},
            cxy, {phixy, f_or(f_exists("y", sM, phixy), psix)});
        // φ ⊢ ∀y.ψ  ⟺  φ ⊢_{x,y} ψ  (y not in φ)
        run("forall-intro", cxy, {{psix, phixy}}, cx, {psix, f_forall("y", sM, phixy)});
        run("forall-elim", cx, {{f_forall("y", sM, phixy), f_forall("y", sM, phixy)}}, cxy,
            {f_forall("y", sM, phixy), phixy});
      }
      {
        FormulaPtr phix = genx({"x"}, d - 1);
        run("eq-refl", cx, {}, cx, {f_top(), f_eq(t_var("x", sM), t_var("x", sM))});
        run("eq-subst", cxy, {}, cxy,
            {f_and(f_eq(t_var("x", sM), t_var("y", sM)), phix),
             substitute(*phix, "x", t_var("y", sM))});
      }
    }
    for (auto& [rule, r] : results)
      rep.add(r.ok, tag + " " + rule, r.where);

    bool em = fz.force(spaces[si].full(), em_probe_formula());
    bool boolean = space_is_boolean(spaces[si]);
    rep.add(em == boolean, tag + " excluded-middle-probe",
            em ? "holds (Boolean space)" : "fails as expected");
    if (!em) ++emFails;
  }
  rep.add(emFails > 0, "excluded-middle fails on some corpus space",
          std::to_string(emFails) + " spaces");
  return rep;
}

Report verify_locality(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "locality";
  std::mt19937_64 rng(opt.seed);
  auto spaces = suite_spaces(opt, rng);
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const FiniteSpace& X = spaces[si];
    SpaceEnv se(X);
    Forcer fz(se.env);
    FrameContext fctx = frame_context_of_space(se.env);
    FrameForcer ff(fctx);
    FormulaGen gen(se.env, rng);
    FormulaGen::Config cfg;
    std::string tag = "space" + std::to_string(si);

    bool localityOk = true, monoOk = true, oracleOk = true;
    std::string detail;
    for (int i = 0; i < opt.instanceCount; ++i) {
      FormulaPtr phi = gen.gen(opt.maxDepth, cfg);
      for (int u = 0; u < X.open_count(); ++u) {
        Mask U = X.open_at(u);
        std::vector<std::vector<Mask>> covers;
        covers.push_back({U});  // trivial
        std::vector<Mask> minimal;
        for (int p = 0; p < X.point_count(); ++p)
          if (has(U, p)) minimal.push_back(X.min_open(p));
        covers.push_back(minimal);
        {
          std::vector<Mask> sub;
          for (Mask V : X.opens())
            if ((V & ~U) == 0 && V != U) sub.push_back(V);
          Mask uni = 0;
          for (Mask V : sub) uni |= V;
          if (uni == U) covers.push_back(sub);
          // two random covers
          for (int rc = 0; rc < 2; ++rc) {
            std::vector<Mask> pick6;
            Mask got = 0;
            std::vector<Mask> shuffled = sub;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (Mask V : shuffled) {
              if ((got | V) == got) continue;
              pick6.push_back(V);
              got |= V;
              if (got == U) break;
            }
            if (got == U && !pick6.empty()) covers.push_back(pick6);
          }
        }
        for (auto& cover : covers)
          if (!check_locality(fz, phi, U, cover)) {
            localityOk = false;
            detail = "formula " + print_formula(*phi) + " over " + X.format_mask(U);
          }
        for (Mask V : X.opens())
          if ((V & ~U) == 0 && fz.force(U, phi) && !fz.force(V, phi)) monoOk = false;
        if (fz.force(U, phi) != ff.force(u, phi)) {
          oracleOk = false;
          detail = "cover-semantics oracle disagrees on " + print_formula(*phi);
        }
      }
    }
    rep.add(localityOk, tag + " locality", detail);
    rep.add(monoOk, tag + " monotonicity");
    rep.add(oracleOk, tag + " cover-oracle", detail);
  }
  return rep;
}

Report verify_geometric_spreading(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "geometric-spreading";
  std::mt19937_64 rng(opt.seed);
  auto spaces = suite_spaces(opt, rng);
  int perSpace = std::max(1, opt.instanceCount / static_cast<int>(spaces.size()));
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const FiniteSpace& X = spaces[si];
    SpaceEnv se(X);
    Forcer fz(se.env);
    FormulaGen gen(se.env, rng);
    FormulaGen::Config cfg;
    cfg.geometricOnly = true;
    std::string tag = "space" + std::to_string(si);

    bool spreadOk = true, implOk = true;
    std::string detail;
    for (int i = 0; i < perSpace; ++i) {
      FormulaPtr phi = gen.gen(opt.maxDepth, cfg);
      if (!is_geometric(*phi)) {
        spreadOk = false;
        detail = "generator produced a non-geometric formula";
        break;
      }
      auto r = check_geometric_spreading(fz, phi);
      if (!r.ok) {
        spreadOk = false;
        detail = print_formula(*phi) + " " + r.detail;
      }

      // geometric implication: forced globally iff true at every stalk
      SortPtr sM = Sort::sheaf(gen.sheaf_sort());
      gen.push_context("x", sM);
      FormulaPtr g1 = gen.gen(opt.maxDepth - 1, cfg), g2 = gen.gen(opt.maxDepth - 1, cfg);
      gen.pop_context();
      FormulaPtr gi = f_forall("x", sM, f_implies(g1, g2));
      if (!is_geometric_implication(*gi)) {
        implOk = false;
        continue;
      }
      bool global = fz.force(X.full(), gi);
      bool pointwise = true;
      for (int p = 0; p < X.point_count(); ++p)
        if (!fz.classical_at(p, gi)) pointwise = false;
      if (global != pointwise) {
        implOk = false;
        detail = print_formula(*gi);
      }
    }
    rep.add(spreadOk, tag + " stalk-vs-neighborhood", detail);
    rep.add(implOk, tag + " geometric-implication", detail);
  }
  return rep;
}

Report verify_box_theorem(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "box-theorem";
  std::mt19937_64 rng(opt.seed);
  auto t0 = std::chrono::steady_clock::now();
  int maxPts = std::min(opt.maxPoints, 5);
  auto spaces = opt.spaces;
  if (spaces.empty()) spaces = corpus_spaces(std::max(4, opt.spaceCount / 2), maxPts, rng);

  int done = 0;
  std::size_t si = 0;
  while (done < opt.instanceCount) {
    const FiniteSpace& X = spaces[si % spaces.size()];
    ++si;
    SpaceEnv se(X, /*withSubsheaf=*/false);
    FormulaGen gen(se.env, rng);
    FormulaGen::Config cfg;
    cfg.frameSafe = true;
    cfg.allowModal = false;
    std::vector<std::string> nucNames;
    for (auto& [n, j] : se.env.nuclei) {
      (void)j;
      nucNames.push_back(n);
    }
    for (auto& nuc : nucNames) {
      if (done >= opt.instanceCount) break;
      FormulaPtr phi = gen.gen(opt.maxDepth, cfg);
      std::string detail;
      bool okOn = check_box_theorem(se, nuc, phi, true, &detail);
      bool okOff = check_box_theorem(se, nuc, phi, false, &detail);
      rep.add(okOn && okOff, "triple" + std::to_string(done) + " nucleus=" + nuc, detail);
      ++done;
    }
  }
  auto dt = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0);
  rep.add(dt.count() < 60, "runtime < 60 s", std::to_string(dt.count()) + " s");
  return rep;
}

Report verify_sheafification(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "sheafification";
  std::mt19937_64 rng(opt.seed);
  std::vector<FiniteSpace> spaces = {
      FiniteSpace::validate({"x"}, {0, 1}), FiniteSpace::sierpinski(),
      FiniteSpace::discrete({"a", "b"}), FiniteSpace::indiscrete({"a", "b"}),
      FiniteSpace::validate({"a", "b", "c"}, {0, 1, 3, 7})};
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const FiniteSpace& X = spaces[si];
    SpaceEnv se(X);
    std::string tag = "space" + std::to_string(si);

    // sheaf corpus on X (stalks ≤ 4)
    std::vector<std::pair<std::string, Sheaf>> sheaves;
    sheaves.emplace_back("constZ2", constant_sheaf(X, {"0", "1"}, "constZ2"));
    sheaves.emplace_back("terminal", terminal_sheaf(X));
    sheaves.emplace_back("omega", omega_sheaf(X));
    for (int u = 1; u + 1 < X.open_count(); ++u) {
      FormulaPtr ext = f_prop(t_const("U" + std::to_string(u), Sort::omega()));
      Subsheaf Sj = comprehend(*se.M, ext, "x", se.env);
      sheaves.emplace_back("ext" + std::to_string(u), subsheaf_to_sheaf(Sj, "ext"));
      if (static_cast<int>(sheaves.size()) > 5) break;
    }

    std::vector<Nucleus> nucs;
    nucs.push_back(nucleus_negneg(X));
    nucs.push_back(nucleus_identity(X.opens_frame()));
    for (Mask U : X.opens()) {
      nucs.push_back(nucleus_open(X, U));
      nucs.push_back(nucleus_closed(X, U));
    }
    for (int p = 0; p < X.point_count(); ++p) nucs.push_back(nucleus_point(X, p));

    bool ok = true;
    std::string detail;
    for (auto& [fname, F] : sheaves) {
      for (auto& j : nucs) {
        PlusResult P = plus_construction(F, j);
        PlusResult PP = sheafify(F, j);
        if (!is_box_separated(P.sheaf, j)) {
          ok = false;
          detail = fname + " +: not separated under " + j.label;
        }
        if (!is_box_sheaf(PP.sheaf, j)) {
          ok = false;
          detail = fname + " ++: not a sheaf under " + j.label;
        }
        bool inj = true;
        for (int u = 0; u < X.open_count(); ++u) {
          std::vector<bool> seen(P.sheaf.card(u), false);
          for (int s = 0; s < F.card(u); ++s) {
            if (seen[P.canonical[u][s]]) inj = false;
            seen[P.canonical[u][s]] = true;
          }
        }
        if (inj != is_box_separated(F, j)) {
          ok = false;
          detail = fname + ": injectivity of F -> F+ mismatches separatedness under " + j.label;
        }
        if (is_box_sheaf(F, j)) {
          bool bij = true;
          for (int u = 0; u < X.open_count(); ++u)
            if (P.sheaf.card(u) != F.card(u)) bij = false;
          if (!bij) {
            ok = false;
            detail = fname + ": F -> F+ not bijective on a box-sheaf under " + j.label;
          }
        }
        // idempotence up to the canonical map
        PlusResult again = plus_construction(PP.sheaf, j);
        for (int u = 0; u < X.open_count(); ++u) {
          std::vector<bool> seen(again.sheaf.card(u), false);
          for (int s = 0; s < PP.sheaf.card(u); ++s) seen[again.canonical[u][s]] = true;
          bool bij = again.sheaf.card(u) == PP.sheaf.card(u) &&
                     std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
          if (!bij) {
            ok = false;
            detail = fname + ": sheafification not idempotent under " + j.label;
          }
        }
      }
    }
    rep.add(ok, tag + " plus/sheafify laws", detail);

    // flabbiness: external surjectivity agrees with the internal condition
    bool flabbyOk = true;
    for (auto& [fname, F] : sheaves) {
      (void)fname;
      try {
        (void)is_flabby(F);
      } catch (const ValidationError& e) {
        flabbyOk = false;
        detail = e.what();
      }
    }
    rep.add(flabbyOk, tag + " flabby internal/external agreement", detail);
  }
  (void)rng;
  (void)opt;
  return rep;
}

Report verify_metaproperties(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "metaproperties";
  std::mt19937_64 rng(opt.seed);
  auto spaces = suite_spaces(opt, rng);
  for (std::size_t si = 0; si < spaces.size(); ++si) {
    const FiniteSpace& X = spaces[si];
    const Frame& L = X.opens_frame();
    std::string tag = "space" + std::to_string(si);

    // ---- criterion 4: nuclei
    bool nucleiOk = true;
    std::string detail;
    std::vector<Nucleus> four;
    four.push_back(nucleus_negneg(X));
    for (Mask U : X.opens()) {
      four.push_back(nucleus_open(X, U));
      four.push_back(nucleus_closed(X, U));
    }
    for (int p = 0; p < X.point_count(); ++p) four.push_back(nucleus_point(X, p));
    for (auto& j : four)
      if (!check_nucleus(j)) {
        nucleiOk = false;
        detail = j.label;
      }
    rep.add(nucleiOk, tag + " nucleus axioms", detail);

    // ¬¬ computed two ways: Int∘Clos vs Heyting double negation
    bool negnegOk = true;
    Nucleus nn = nucleus_negneg(X);
    for (int u = 0; u < X.open_count(); ++u) {
      Mask V = X.open_at(u);
      Mask viaHeyting = X.heyting(X.heyting(V, 0), 0);
      if (X.open_at(nn.apply(u)) != viaHeyting) negnegOk = false;
      if ((X.open_at(nn.apply(u)) == X.full()) != X.is_dense(V)) negnegOk = false;
    }
    rep.add(negnegOk, tag + " negneg = IntClos = ((V=>0)=>0), top iff dense");

    // sublocale frames of open/closed nuclei vs subspace frames
    bool sublocOk = true;
    for (Mask U : X.opens()) {
      Sublocale S = sublocale_frame(nucleus_open(X, U));
      std::vector<Mask> expected;
      for (Mask V : X.opens())
        if ((V & ~U) == 0) expected.push_back(V);
      if (expected.size() != S.fixed.size()) sublocOk = false;
      // V ↦ j(V) is an order isomorphism from opens(U) to the fixed points
      for (Mask V : expected)
        for (Mask W : expected) {
          Mask jV = X.interior((X.full() & ~U) | V), jW = X.interior((X.full() & ~U) | W);
          if (((V & ~W) == 0) != ((jV & ~jW) == 0)) sublocOk = false;
        }
      Sublocale Sc = sublocale_frame(nucleus_closed(X, U));
      std::vector<Mask> closedSub;  // subspace A = X∖U carries opens V∩A
      Mask A = X.full() & ~U;
      for (int e : Sc.fixed) closedSub.push_back(X.open_at(e) & A);
      std::sort(closedSub.begin(), closedSub.end(), mask_less);
      std::vector<Mask> expect2;
      for (Mask V : X.opens()) {
        Mask t = V & A;
        if (std::find(expect2.begin(), expect2.end(), t) == expect2.end()) expect2.push_back(t);
      }
      std::sort(expect2.begin(), expect2.end(), mask_less);
      if (closedSub != expect2) sublocOk = false;
      for (std::size_t a = 0; a < Sc.fixed.size(); ++a)
        for (std::size_t b = 0; b < Sc.fixed.size(); ++b) {
          Mask Va = X.open_at(Sc.fixed[a]), Vb = X.open_at(Sc.fixed[b]);
          if (((Va & ~Vb) == 0) != (((Va & A) & ~(Vb & A)) == 0)) sublocOk = false;
        }
    }
    rep.add(sublocOk, tag + " sublocales of open/closed nuclei are subspace frames");

    // points of the opens frame vs sober points
    {
      auto pts = points_of_frame(L);
      bool t0space = true;
      for (int p = 0; p < X.point_count(); ++p)
        for (int q = p + 1; q < X.point_count(); ++q)
          if (X.min_open(p) == X.min_open(q)) t0space = false;
      bool ok = !t0space || static_cast<int>(pts.size()) == X.point_count();
      rep.add(ok, tag + " frame points = sober points (T0)",
              "frame points " + std::to_string(pts.size()));
    }

    // ---- quasicompact / local / irreducible metaproperties
    SpaceEnv se(X);
    Forcer fz(se.env);
    FormulaGen gen(se.env, rng);
    FormulaGen::Config cfg;

    {
      // monotone directed families along chains of opens
      std::vector<std::vector<FormulaPtr>> families;
      std::vector<FormulaPtr> chain;
      for (int u = 0; u < X.open_count(); ++u)
        chain.push_back(f_prop(t_const("U" + std::to_string(u), Sort::omega())));
      // the canonical order is by size, so a filtered-by-inclusion subchain:
      std::vector<FormulaPtr> incl;
      Mask cur = 0;
      for (int u = 0; u < X.open_count(); ++u)
        if ((cur & ~X.open_at(u)) == 0) {
          incl.push_back(chain[u]);
          cur = X.open_at(u);
        }
      families.push_back(incl);
      auto r = check_metaproperty(fz, MetaKind::Quasicompact, families);
      rep.add(r.topological == r.metaproperty, tag + " quasicompact metaproperty",
              r.counterexample);
    }
    {
      std::vector<std::vector<FormulaPtr>> families;
      std::vector<FormulaPtr> proper;
      for (int u = 0; u < X.open_count(); ++u)
        if (X.open_at(u) != X.full())
          proper.push_back(f_prop(t_const("U" + std::to_string(u), Sort::omega())));
      families.push_back(proper);
      for (int i = 0; i < opt.instanceCount; ++i) {
        std::vector<FormulaPtr> fam;
        int k = 2 + static_cast<int>(rng() % 2);
        for (int q = 0; q < k; ++q) fam.push_back(gen.gen(opt.maxDepth - 1, cfg));
        families.push_back(fam);
      }
      auto r = check_metaproperty(fz, MetaKind::Local, families);
      // on a local space the metaproperty must hold; on a non-local space the
      // canonical proper-opens family must fail
      bool ok = r.topological ? r.metaproperty : !r.metaproperty;
      if (X.point_count() == 0) ok = true;
      rep.add(ok, tag + " local metaproperty",
              std::string(r.topological ? "local" : "not local") + " " + r.counterexample);
    }
    {
      std::vector<std::vector<FormulaPtr>> pairs;
      for (int u = 0; u < X.open_count(); ++u)
        for (int v = 0; v < X.open_count(); ++v)
          pairs.push_back({f_prop(t_const("U" + std::to_string(u), Sort::omega())),
                           f_prop(t_const("U" + std::to_string(v), Sort::omega()))});
      auto r = check_metaproperty(fz, MetaKind::Irreducible, pairs);
      bool ok = r.topological ? r.metaproperty : !r.metaproperty;
      rep.add(ok, tag + " irreducible metaproperty",
              std::string(r.topological ? "irreducible" : "reducible") + " " + r.counterexample);
    }
  }
  return rep;
}

// ------------------------------------------------------------------ ring suites

namespace {

std::vector<FinRing> suite_rings(const VerifyOptions& opt) {
  if (!opt.ringSpec.empty()) {
    std::vector<FinRing> one;
    one.push_back(FinRing::from_spec(opt.ringSpec));
    return one;
  }
  return corpus_rings();
}

/// Brute-force radical-ideal enumeration over all subsets (oracle).
std::vector<Mask> brute_radical_ideals(const FinRing& R) {
  if (R.size() > 16) throw ValidationError("brute-force oracle limited to 16 elements");
  std::vector<Mask> out;
  Mask full = bit(R.size()) - 1;
  for (Mask m = 0; m <= full; ++m)
    if (is_ideal(R, m) && radical(R, m) == m) out.push_back(m);
  return out;
}

FormulaPtr parse_in(const BaseEnv& env, const std::string& text) {
  return parse_formula(text, env.symbols());
}

}  // namespace

Report verify_spectrum(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "spectrum";
  for (const FinRing& A : suite_rings(opt)) {
    std::string tag = A.spec();
    SpecFrame SF = spec_frame(A);

    if (A.size() <= 16) {
      auto brute = brute_radical_ideals(A);
      rep.add(brute.size() == SF.radicals.size(), tag + " radical ideals vs brute force",
              std::to_string(SF.radicals.size()) + " vs " + std::to_string(brute.size()));
    }
    auto filters = enumerate_filters(A);
    rep.add(points_of_frame(SF.frame).size() == filters.size(),
            tag + " frame points = filters",
            std::to_string(points_of_frame(SF.frame).size()) + " vs " +
                std::to_string(filters.size()));
    {
      auto primes = enumerate_prime_ideals(A);
      bool ok = primes.size() == filters.size();
      Mask full = A.size() == 64 ? ~Mask{0} : bit(A.size()) - 1;
      for (Mask p : primes)
        if (std::find(filters.begin(), filters.end(), full & ~p) == filters.end()) ok = false;
      rep.add(ok, tag + " filters are prime-ideal complements");
    }
    {
      bool onePoint = SF.radicals.size() == 2;
      bool nilpOrInv = !A.is_trivial();
      for (int x = 0; x < A.size(); ++x)
        if (!A.is_nilpotent(x) && !A.is_invertible(x)) nilpOrInv = false;
      rep.add(onePoint == nilpOrInv, tag + " one-point locale iff nilpotent-or-invertible");
      rep.add((SF.radicals.size() == 1) == A.is_trivial(), tag + " trivial frame iff zero ring");
    }

    SpectrumContext ctx(A);
    const FiniteSpace& X = ctx.space();
    {
      // Γ(Spec A, O) ≅ A via the canonical map
      const LocRing& glob = ctx.localization(X.index_of(X.full()));
      bool bij = glob.ring.size() == A.size();
      std::vector<bool> seen(glob.ring.size(), false);
      for (int a = 0; a < A.size(); ++a) {
        if (seen[glob.map[a]]) bij = false;
        seen[glob.map[a]] = true;
      }
      bool hom = true;
      for (int a = 0; a < A.size(); ++a)
        for (int b = 0; b < A.size(); ++b) {
          if (glob.map[A.add(a, b)] != glob.ring.add(glob.map[a], glob.map[b])) hom = false;
          if (glob.map[A.mul(a, b)] != glob.ring.mul(glob.map[a], glob.map[b])) hom = false;
        }
      rep.add(bij && hom, tag + " global sections of O are A");
    }
    {
      // stalks are the classical localizations at prime complements
      auto primes = enumerate_prime_ideals(A);
      bool ok = true;
      for (int p = 0; p < X.point_count(); ++p) {
        Mask filter = ctx.points().filters[p];
        LocRing classical = localize(A, filter);
        const LocRing& stalk = ctx.localization(X.index_of(X.min_open(p)));
        if (!find_ring_isomorphism(stalk.ring, classical.ring)) ok = false;
      }
      (void)primes;
      rep.add(ok, tag + " stalks of O are classical localizations");
    }
    {
      // membership law of the generic filter: D(f) ⊨ x ∈ F iff f ∈ √(x)
      bool ok = true;
      Forcer fz(ctx.env());
      SortPtr sA = Sort::sheaf("A");
      SortPtr pA = Sort::power(sA);
      for (int f = 0; f < A.size() && ok; ++f)
        for (int x = 0; x < A.size(); ++x) {
          FormulaPtr mem = f_member(t_const("c" + std::to_string(x), sA), t_const("F", pA));
          bool forced = fz.force(ctx.points().basic_open(f), mem);
          bool lhs = has(radical(A, ideal_closure(A, bit(x))), f);
          if (forced != lhs) {
            ok = false;
            break;
          }
        }
      rep.add(ok, tag + " generic filter membership law");
    }
    if (!A.is_trivial()) {
      // internal filter axioms
      Forcer fz(ctx.env());
      FormulaPtr ax = parse_in(
          ctx.env(),
          "~(c" + std::to_string(A.zero()) + " in F) /\\ (c" + std::to_string(A.one()) +
              " in F) /\\ (forall x:A. forall y:A. (x*y in F => x in F /\\ y in F)"
              " /\\ (x in F /\\ y in F => x*y in F) /\\ (x+y in F => x in F \\/ y in F))");
      rep.add(fz.force(X.full(), ax), tag + " generic filter is internally a filter");
      // stalks of F biject with the filter
      bool ok = true;
      for (int p = 0; p < X.point_count(); ++p) {
        int mi = X.index_of(X.min_open(p));
        int c = ctx.generic_filter().selected[mi].count();
        if (c != popcount(ctx.points().filters[p])) ok = false;
      }
      rep.add(ok, tag + " generic filter stalks are the filters");
    }
    if (!A.is_trivial()) {
      Forcer fz(ctx.env());
      FormulaPtr local = parse_in(ctx.env(),
                                  "~(1 = 0) /\\ (forall x:O. forall y:O. inv(x+y) => inv(x) \\/ "
                                  "inv(y))");
      rep.add(fz.force(X.full(), local), tag + " O is internally local");
      FormulaPtr nin = parse_in(ctx.env(), "forall s:O. (~inv(s)) => nilp(s)");
      rep.add(fz.force(X.full(), nin), tag + " not-invertible implies nilpotent");
      FormulaPtr field = parse_in(ctx.env(), "forall s:O. (~inv(s)) => s = 0");
      rep.add(fz.force(X.full(), field) == A.is_reduced(),
              tag + " field condition iff reduced",
              A.is_reduced() ? "reduced" : "not reduced");
    }
  }
  return rep;
}

Report verify_generic_filter(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "generic-filter";
  std::mt19937_64 rng(opt.seed);
  SortPtr sAs = Sort::sheaf("A");

  int ideals = 0;
  int target = std::max(opt.instanceCount, 10);
  auto rings = suite_rings(opt);
  for (const FinRing& A : rings) {
    if (A.is_trivial()) continue;
    SpectrumContext ctx(A);
    std::string tag = A.spec();
    bool ok = true;
    std::string detail;
    auto probe = [&](const FormulaPtr& phi, const std::string& label) {
      auto r = check_generic_metaproperty(ctx, phi, "a");
      if (!r.ok) {
        ok = false;
        detail = label + ": " + r.detail;
      }
      ++ideals;
    };
    auto cst = [&](int e) { return t_const("c" + std::to_string(e), sAs); };
    auto va = [&] { return t_var("a", sAs); };
    for (int q = 0; q < 3; ++q) {
      int c = static_cast<int>(rng() % A.size());
      int dd = static_cast<int>(rng() % A.size());
      // annihilator of c
      probe(f_eq(t_app("mul", {cst(c), va()}, sAs), t_num(0, sAs)), "Ann(" + A.elem_name(c) + ")");
      // principal ideal (c)
      probe(f_exists("b", sAs, f_eq(va(), t_app("mul", {t_var("b", sAs), cst(c)}, sAs))),
            "(" + A.elem_name(c) + ")");
      // radical of (c)
      {
        Exponent n;
        n.symbolic = true;
        n.var = "n";
        SchemaBound bnd;
        bnd.value = A.size();
        probe(f_bigor_schema(
                  "n", 0, bnd,
                  f_exists("b", sAs,
                           f_eq(t_pow(va(), n), t_app("mul", {t_var("b", sAs), cst(c)}, sAs)))),
              "rad(" + A.elem_name(c) + ")");
      }
      // sum (c) + (d)
      probe(f_exists("b", sAs,
                     f_exists("e", sAs,
                              f_eq(va(), t_app("add",
                                               {t_app("mul", {t_var("b", sAs), cst(c)}, sAs),
                                                t_app("mul", {t_var("e", sAs), cst(dd)}, sAs)},
                                               sAs)))),
            "(" + A.elem_name(c) + ")+(" + A.elem_name(dd) + ")");
      // transporter ((c) : d)
      probe(f_exists("b", sAs,
                     f_eq(t_app("mul", {va(), cst(dd)}, sAs),
                          t_app("mul", {t_var("b", sAs), cst(c)}, sAs))),
            "((" + A.elem_name(c) + "):" + A.elem_name(dd) + ")");
    }
    rep.add(ok, tag + " generic-filter metaproperty on comprehension ideals", detail);
  }
  rep.add(ideals >= target, "ideal families probed >= " + std::to_string(target),
          std::to_string(ideals));

  {
    // the Remark's counterexample: the internalized implication fails for
    // I = (g), g neither nilpotent nor invertible (g = 2 in Z/12)
    FinRing A = FinRing::zmod(12);
    SpectrumContext ctx(A);
    SortPtr pA = Sort::power(sAs);
    FormulaPtr phi = f_exists(
        "b", sAs, f_eq(t_var("a", sAs), t_app("mul", {t_var("b", sAs), t_const("c2", sAs)}, sAs)));
    auto I = std::make_shared<Subsheaf>(comprehend(ctx.ring_constant_sheaf(), phi, "a", ctx.env()));
    Forcer fz(ctx.env());
    FormulaPtr meets =
        f_exists("a", sAs, f_and(f_member(t_var("a", sAs), t_var("I", pA)),
                                 f_member(t_var("a", sAs), t_const("F", pA))));
    Exponent n;
    n.symbolic = true;
    n.var = "n";
    SchemaBound bnd;
    bnd.value = A.size();
    FormulaPtr stronger = f_implies(
        meets, f_bigor_schema("n", 0, bnd,
                              f_member(t_pow(t_const("c1", sAs), n), t_var("I", pA))));
    int e = fz.bind(Forcer::kRootEnv, "I", ctx.space().full(), Value::of_sub(I));
    bool forced = fz.force(ctx.space().full(), stronger, e);
    rep.add(!forced, "the stronger internal implication fails for g=2 in Z/12");
  }

  // ---- prime-ideal-elimination table
  struct Triple {
    std::string label;
    FinRing ring;
    FinModule M, N;
    std::vector<int> map;
  };
  std::vector<Triple> triples;
  auto scaled = [](const FinRing& R, const FinModule& M, int c) {
    std::vector<int> m(M.size());
    for (int a = 0; a < M.size(); ++a) m[a] = M.smul(c, a);
    (void)R;
    return m;
  };
  {
    FinRing R = FinRing::zmod(12);
    FinModule A12 = FinModule::ring_as_module(R);
    FinModule Q4 = FinModule::quotient_by_ideal(R, ideal_closure(R, bit(4)));
    FinModule Q3 = FinModule::quotient_by_ideal(R, ideal_closure(R, bit(3)));
    FinModule Z = FinModule::zero_module(R);
    std::vector<int> id(A12.size());
    std::iota(id.begin(), id.end(), 0);
    triples.push_back({"z12 id", R, A12, A12, id});
    triples.push_back({"z12 mul2", R, A12, A12, scaled(R, A12, 2)});
    triples.push_back({"z12 mul6", R, A12, A12, scaled(R, A12, 6)});
    {
      std::vector<int> q(A12.size());
      for (int a = 0; a < A12.size(); ++a) q[a] = a % 4;
      triples.push_back({"z12 quot4", R, A12, Q4, q});
    }
    {
      std::vector<int> q(A12.size());
      for (int a = 0; a < A12.size(); ++a) q[a] = a % 3;
      triples.push_back({"z12 quot3", R, A12, Q3, q});
    }
    triples.push_back({"z12 zero", R, A12, Z, std::vector<int>(A12.size(), 0)});
  }
  {
    FinRing R = FinRing::zmod(4);
    FinModule A4 = FinModule::ring_as_module(R);
    FinModule Q2 = FinModule::quotient_by_ideal(R, ideal_closure(R, bit(2)));
    std::vector<int> q(A4.size());
    for (int a = 0; a < A4.size(); ++a) q[a] = a % 2;
    triples.push_back({"z4 quot2", R, A4, Q2, q});
    triples.push_back({"z4 mul2", R, A4, A4, scaled(R, A4, 2)});
    std::vector<int> id(A4.size());
    std::iota(id.begin(), id.end(), 0);
    triples.push_back({"z4 id", R, A4, A4, id});
  }
  {
    FinRing R = FinRing::zmod(6);
    FinModule A6 = FinModule::ring_as_module(R);
    triples.push_back({"z6 mul3", R, A6, A6, scaled(R, A6, 3)});
    triples.push_back({"z6 mul2", R, A6, A6, scaled(R, A6, 2)});
  }

  for (auto& t : triples) {
    SpectrumContext ctx(t.ring);
    ctx.tilde(t.M, "MT");
    ctx.tilde(t.N, "NT");
    ModuleHom h = ModuleHom::make(ctx.tilde_module("MT"), ctx.tilde_module("NT"), t.map);
    ctx.tilde_hom(h, "alpha", "MT", "NT");
    Forcer fz(ctx.env());
    const FiniteSpace& X = ctx.space();
    SortPtr sM = Sort::sheaf("MT");
    SortPtr sN = Sort::sheaf("NT");

    bool allOk = true;
    std::string detail;
    auto expect = [&](const std::string& what, bool internal, bool classical) {
      if (internal != classical) {
        allOk = false;
        detail = what + ": internal " + std::to_string(internal) + " classical " +
                 std::to_string(classical);
      }
    };
    FormulaPtr reduced = parse_in(ctx.env(), "forall s:O. nilp(s) => s = 0");
    expect("reduced", fz.force(X.full(), reduced), t.ring.is_reduced());
    {
      FormulaPtr zero = f_forall("m", sM, f_eq(t_var("m", sM), t_const("zMT", sM)));
      expect("M=0", fz.force(X.full(), zero), t.M.size() == 1);
    }
    {
      // finitely generated with bound 2
      SortPtr sO = Sort::sheaf("O");
      FormulaPtr g0 = f_forall("m", sM, f_eq(t_var("m", sM), t_const("zMT", sM)));
      FormulaPtr g1 = f_exists(
          "x", sM,
          f_forall("m", sM,
                   f_exists("u", sO, f_eq(t_var("m", sM),
                                          t_app("smul", {t_var("u", sO), t_var("x", sM)}, sM)))));
      FormulaPtr g2 = f_exists(
          "x", sM,
          f_exists(
              "y", sM,
              f_forall(
                  "m", sM,
                  f_exists(
                      "u", sO,
                      f_exists("v", sO,
                               f_eq(t_var("m", sM),
                                    t_app("add",
                                          {t_app("smul", {t_var("u", sO), t_var("x", sM)}, sM),
                                           t_app("smul", {t_var("v", sO), t_var("y", sM)}, sM)},
                                          sM)))))));
      bool internal = fz.force(X.full(), f_bigor({g0, g1, g2}));
      expect("finitely generated (bound 2)", internal, t.M.generated_by_at_most(2));
    }
    {
      FormulaPtr inj = f_forall(
          "m", sM,
          f_forall("m2", sM,
                   f_implies(f_eq(t_app("alpha", {t_var("m", sM)}, sN),
                                  t_app("alpha", {t_var("m2", sM)}, sN)),
                             f_eq(t_var("m", sM), t_var("m2", sM)))));
      expect("injective", fz.force(X.full(), inj), h.injective());
      FormulaPtr sur = f_forall(
          "nn", sN,
          f_exists("m", sM, f_eq(t_app("alpha", {t_var("m", sM)}, sN), t_var("nn", sN))));
      expect("surjective", fz.force(X.full(), sur), h.surjective());
    }
    rep.add(allOk, "elimination table " + t.label, detail);
  }
  rep.add(static_cast<int>(triples.size()) >= 10,
          "elimination triples >= 10", std::to_string(triples.size()));
  return rep;
}

Report verify_quasicoherator(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "quasicoherator";
  auto t0 = std::chrono::steady_clock::now();

  struct Instance {
    std::string label;
    FinRing R, A;
    std::vector<int> phi;
  };
  std::vector<Instance> instances;
  {
    FinRing z2 = FinRing::zmod(2), z4 = FinRing::zmod(4), z9 = FinRing::zmod(9);
    FinRing f4 = FinRing::polyquot(FinRing::zmod(2), {1, 1, 1});
    std::vector<int> id2 = {0, 1}, id4 = {0, 1, 2, 3};
    std::vector<int> id9(9), idf4(4);
    std::iota(id9.begin(), id9.end(), 0);
    std::iota(idf4.begin(), idf4.end(), 0);
    instances.push_back({"z2 over z2", z2, z2, id2});
    instances.push_back({"z4 over z4", z4, z4, id4});
    instances.push_back({"z9 over z9", z9, z9, id9});
    instances.push_back({"F4 over F4", f4, f4, idf4});
    {
      FinRing prod = FinRing::product(z4, z4);
      std::vector<int> diag(4);
      for (int a = 0; a < 4; ++a) diag[a] = prod.elem_by_name("(" + z4.elem_name(a) + "," +
                                                              z4.elem_name(a) + ")");
      instances.push_back({"z4xz4 over z4 (diagonal)", z4, prod, diag});
    }
    {
      std::vector<int> quot = {0, 1, 0, 1};
      instances.push_back({"z2 over z4", z4, z2, quot});
    }
  }

  for (auto& inst : instances) {
    RingHom phi = RingHom::make(inst.R, inst.A, inst.phi);
    std::string tag = inst.label;
    auto rads = enumerate_radical_ideals(inst.A);

    bool laws = true, equiv = true;
    std::string detail;
    std::map<Mask, Mask> q;
    for (Mask I : rads) q[I] = quasicoherator(inst.R, phi, I);
    for (Mask I : rads) {
      if ((I & ~q[I]) != 0) laws = false;                   // extensive
      if (q[q[I]] != q[I]) laws = false;                    // idempotent
      bool fixedQ = q[I] == I;
      bool member = local_spectrum_condition(inst.R, phi, I);
      bool disj = local_quasicoherence_condition(inst.R, phi, I);
      if (fixedQ != member || member != disj) {
        equiv = false;
        detail = "ideal of size " + std::to_string(popcount(I));
      }
      for (Mask J : rads) {
        if ((I & ~J) == 0 && (q[I] & ~q[J]) != 0) laws = false;  // monotone
        Mask meet = I & J;
        if (q[meet] != (q[I] & q[J])) {
          laws = false;
          detail = "meet preservation";
        }
      }
    }
    rep.add(laws, tag + " quasicoherator is an extensive monotone idempotent meet-map", detail);
    rep.add(equiv, tag + " fixed points = forced membership condition = disjunctive form",
            detail);

    LocalSpecFrame L = local_spectrum_frame(inst.R, phi);
    int overUnits = 0;
    for (Mask F : enumerate_filters(inst.A)) {
      bool over = true;
      for (int r = 0; r < inst.R.size(); ++r)
        if (has(F, phi(r)) && !inst.R.is_invertible(r)) over = false;
      if (over) ++overUnits;
    }
    rep.add(static_cast<int>(points_of_frame(L.frame).size()) == overUnits,
            tag + " local-spectrum points = filters over the filter of units",
            std::to_string(points_of_frame(L.frame).size()) + " vs " +
                std::to_string(overUnits));
  }

  {
    // spec'd instances of the local spectrum
    FinRing z4 = FinRing::zmod(4);
    LocalSpecFrame a = local_spectrum_frame(z4, RingHom::identity(z4));
    rep.add(a.frame.size() == 2 && points_of_frame(a.frame).size() == 1,
            "Spec(z4|z4) is the one-point locale with a 2-element frame");
    FinRing prod = FinRing::product(z4, z4);
    std::vector<int> diag(4);
    for (int x = 0; x < 4; ++x)
      diag[x] = prod.elem_by_name("(" + z4.elem_name(x) + "," + z4.elem_name(x) + ")");
    LocalSpecFrame b = local_spectrum_frame(z4, RingHom::make(z4, prod, diag));
    rep.add(b.frame.size() == 4 && points_of_frame(b.frame).size() == 2,
            "Spec(z4xz4|z4) has a 4-element frame and 2 points");
    FinRing f4 = FinRing::polyquot(FinRing::zmod(2), {1, 1, 1});
    LocalSpecFrame c = local_spectrum_frame(f4, RingHom::identity(f4));
    rep.add(points_of_frame(c.frame).size() == 1, "Spec(F4|F4) is a one-point locale");
  }

  {
    // internal quasicoherence of submodule subsheaves over Spec(Z/12); on a
    // zero-dimensional base every submodule subsheaf satisfies the condition
    FinRing A = FinRing::zmod(12);
    SpectrumContext ctx(A);
    FinModule M = FinModule::ring_as_module(A);
    ctx.tilde(M, "MT");
    bool ok = true;
    for (Mask I : enumerate_ideals(A)) {
      auto G = ctx.tilde_submodule("MT", I);
      if (!check_internal_quasicoherence(ctx, "MT", G)) ok = false;
    }
    rep.add(ok, "tilde submodules satisfy the internal quasicoherence condition");
    // extension by zero from a non-dense basic open: Spec(Z/12) is discrete
    // and zero-dimensional, so the condition still holds (f inv or nilpotent)
    SortPtr sM = Sort::sheaf("MT");
    FormulaPtr ext = f_or(f_eq(t_var("x", sM), t_const("zMT", sM)),
                          f_prop(t_const("D" + std::to_string(2), Sort::omega())));
    auto G = std::make_shared<Subsheaf>(
        comprehend(ctx.tilde(M, "MT"), ext, "x", ctx.env()));
    rep.add(check_internal_quasicoherence(ctx, "MT", G),
            "extension by zero is quasicoherent over a zero-dimensional base");
    auto Z = ctx.tilde_submodule("MT", bit(M.zero()));
    rep.add(check_internal_quasicoherence(ctx, "MT", Z), "zero subsheaf is quasicoherent");
  }

  auto dt = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0);
  rep.add(dt.count() < 120, "runtime < 120 s", std::to_string(dt.count()) + " s");
  (void)opt;
  return rep;
}

Report verify_dimension(const VerifyOptions& opt) {
  Report rep;
  rep.suite = "dimension";
  for (const FinRing& A : suite_rings(opt)) {
    std::string tag = A.spec();
    auto r0 = krull_dim_leq(A, 0);
    rep.add(r0.ok == (classical_krull_dim(A) <= 0), tag + " dim<=0 agrees with prime chains");
    auto rm1 = krull_dim_leq(A, -1);
    rep.add(rm1.ok == A.is_trivial(), tag + " dim<=-1 iff trivial");
    if (r0.ok && !A.is_trivial()) {
      // Kronecker identity on the witnesses: rad(x, a) = rad(a - x*b)
      bool kron = true;
      for (auto& w : r0.witnesses) {
        int a = w.seq[0], b = w.complement[0];
        for (int x = 0; x < A.size(); ++x) {
          Mask lhs = radical(A, ideal_closure(A, bit(x) | bit(a)));
          Mask rhs = radical(A, ideal_closure(A, bit(A.sub(a, A.mul(x, b))) | bit(x)));
          // Kronecker: rad(x, a) = rad(x, a - x b) and the one-generator form
          // rad(x, a) = rad(a - x b) after eliminating x
          Mask rhs1 = radical(A, ideal_closure(A, bit(A.sub(a, A.mul(x, b)))));
          if (lhs != rhs) kron = false;
          if (lhs != rhs1) kron = false;
        }
      }
      rep.add(kron, tag + " Kronecker generator reduction on witnesses");
    }
    {
      // a deliberately failing candidate table is rejected: √(1) ⊄ √(0)
      if (!A.is_trivial()) {
        bool rejected = !complementary_sequence_ok(A, {A.zero()}, {A.zero()});
        rep.add(rejected, tag + " wrong complementary candidate rejected");
      }
    }
    if (!A.is_trivial()) {
      SpectrumContext ctx(A);
      Forcer fz(ctx.env());
      FormulaPtr dim0 = parse_in(
          ctx.env(),
          "forall a:O. exists b:O. (exists u:O. exists v:O. 1 = u*a + v*b) /\\ nilp(a*b)");
      bool internal = fz.force(ctx.space().full(), dim0);
      bool stalks = true;
      for (int p = 0; p < ctx.space().point_count(); ++p) {
        const LocRing& st = ctx.localization(ctx.space().index_of(ctx.space().min_open(p)));
        if (!krull_dim_leq(st.ring, 0).ok) stalks = false;
      }
      rep.add(internal == stalks, tag + " internal dim<=0 iff stalkwise dim<=0");
    }
  }
  return rep;
}

// ------------------------------------------------------------------ dispatch

std::vector<std::string> suite_names() {
  return {"inference-rules", "locality",      "geometric-spreading", "box-theorem",
          "sheafification",  "metaproperties", "spectrum",            "generic-filter",
          "quasicoherator",  "dimension"};
}

Report verify_suite(const std::string& suite, const VerifyOptions& opt) {
  if (suite == "inference-rules") return verify_inference_rules(opt);
  if (suite == "locality") return verify_locality(opt);
  if (suite == "geometric-spreading") return verify_geometric_spreading(opt);
  if (suite == "box-theorem") return verify_box_theorem(opt);
  if (suite == "sheafification") return verify_sheafification(opt);
  if (suite == "metaproperties") return verify_metaproperties(opt);
  if (suite == "spectrum") return verify_spectrum(opt);
  if (suite == "generic-filter") return verify_generic_filter(opt);
  if (suite == "quasicoherator") return verify_quasicoherator(opt);
  if (suite == "dimension") return verify_dimension(opt);
  throw ResolveError("unknown verify suite '" + suite + "'");
}

Report acceptance_criterion(int k, std::uint64_t seed) {
  VerifyOptions opt;
  opt.seed = seed;
  switch (k) {
    case 1:
      opt.spaceCount = 20;
      opt.maxPoints = 6;
      opt.instanceCount = 10;
      opt.maxDepth = 3;
      return verify_inference_rules(opt);
    case 2:
      opt.spaceCount = 20;
      opt.instanceCount = 10;
      opt.maxDepth = 3;
      return verify_locality(opt);
    case 3:
      opt.spaceCount = 20;
      opt.instanceCount = 200;
      return verify_geometric_spreading(opt);
    case 4: {
      opt.spaceCount = 20;
      Report all = verify_metaproperties(opt);
      Report rep;
      rep.suite = "nuclei";
      for (auto& l : all.lines)
        if (l.name.find("nucleus") != std::string::npos ||
            l.name.find("negneg") != std::string::npos ||
            l.name.find("sublocale") != std::string::npos)
          rep.lines.push_back(l);
      return rep;
    }
    case 5:
      opt.maxPoints = 5;
      opt.maxDepth = 3;
      opt.instanceCount = 100;
      return verify_box_theorem(opt);
    case 6:
      return verify_sheafification(opt);
    case 7:
      return verify_spectrum(opt);
    case 8:
      opt.instanceCount = 50;
      return verify_generic_filter(opt);
    case 9: {
      Report spectrum = verify_spectrum(opt);
      Report dim = verify_dimension(opt);
      Report rep;
      rep.suite = "internal-ring-properties";
      for (auto& l : spectrum.lines)
        if (l.name.find("internally local") != std::string::npos ||
            l.name.find("not-invertible") != std::string::npos ||
            l.name.find("field condition") != std::string::npos)
          rep.lines.push_back(l);
      for (auto& l : dim.lines)
        if (l.name.find("internal dim") != std::string::npos) rep.lines.push_back(l);
      return rep;
    }
    case 10:
      return verify_quasicoherator(opt);
    case 11: {
      opt.instanceCount = 50;
      Report gf = verify_generic_filter(opt);
      Report rep;
      rep.suite = "prime-ideal-elimination";
      for (auto& l : gf.lines)
        if (l.name.find("elimination") != std::string::npos) rep.lines.push_back(l);
      return rep;
    }
    default:
      throw ResolveError("acceptance criterion out of range");
  }
}

}  // namespace toposforge
