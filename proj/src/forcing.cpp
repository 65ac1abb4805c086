#include "toposforge/forcing.hpp"

#include <algorithm>

namespace toposforge {

// ---------------------------------------------------------------- Value

Value Value::of_section(const Sheaf* F, int s) {
  Value v;
  v.kind = Kind::Section;
  v.sheaf = F;
  v.section = s;
  return v;
}

Value Value::of_open(Mask m) {
  Value v;
  v.kind = Kind::Open;
  v.open = m;
  return v;
}

Value Value::of_sub(SubsheafPtr s) {
  Value v;
  v.kind = Kind::Sub;
  v.sub = std::move(s);
  return v;
}

Value Value::of_int(int i) {
  Value v;
  v.kind = Kind::Int;
  v.intval = i;
  return v;
}

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Section: return sheaf == o.sheaf && section == o.section;
    case Kind::Open: return open == o.open;
    case Kind::Sub:
      return sub->parent == o.sub->parent && sub->domain == o.sub->domain &&
             sub->equals_on(*o.sub, sub->domain);
    case Kind::Int: return intval == o.intval;
  }
  return false;
}

std::size_t Value::hash() const {
  std::size_t h = static_cast<std::size_t>(kind);
  switch (kind) {
    case Kind::Section:
      h = hash_mix(h, std::hash<const void*>{}(sheaf));
      h = hash_mix(h, std::hash<int>{}(section));
      break;
    case Kind::Open: h = hash_mix(h, std::hash<Mask>{}(open)); break;
    case Kind::Sub: h = hash_mix(h, sub->hash()); break;
    case Kind::Int: h = hash_mix(h, std::hash<int>{}(intval)); break;
  }
  return h;
}

// ---------------------------------------------------------------- Forcer

Forcer::Forcer(const BaseEnv& base) : base_(&base), X_(base.space) {
  envs_.push_back({-1, "", 0, Value::of_int(0)});  // root environment
}

int Forcer::bind(int envId, const std::string& var, Mask defOpen, Value v) {
  std::size_t h = std::hash<int>{}(envId);
  h = hash_mix(h, std::hash<std::string>{}(var));
  h = hash_mix(h, std::hash<Mask>{}(defOpen));
  h = hash_mix(h, v.hash());
  for (int cand : envIndex_[h]) {
    const EnvNode& n = envs_[cand];
    if (n.parent == envId && n.var == var && n.defOpen == defOpen && n.val == v) return cand;
  }
  envs_.push_back({envId, var, defOpen, v});
  int id = static_cast<int>(envs_.size()) - 1;
  envIndex_[h].push_back(id);
  return id;
}

const Forcer::EnvNode* Forcer::lookup(int envId, const std::string& var) const {
  while (envId > 0) {
    const EnvNode& n = envs_[envId];
    if (n.var == var) return &n;
    envId = n.parent;
  }
  return nullptr;
}

const Sheaf* Forcer::sheaf_of_sort(const SortPtr& s) {
  switch (s->kind) {
    case Sort::Kind::Sheaf: return base_->sheaf(s->name);
    case Sort::Kind::Omega: {
      auto it = sortSheaves_.find("Omega");
      if (it == sortSheaves_.end())
        it = sortSheaves_.emplace("Omega", std::make_shared<Sheaf>(omega_sheaf(*X_))).first;
      return it->second.get();
    }
    case Sort::Kind::Power: {
      const Sheaf* inner = sheaf_of_sort(s->inner);
      auto key = "P@" + std::to_string(reinterpret_cast<std::uintptr_t>(inner));
      auto it = sortSheaves_.find(key);
      if (it == sortSheaves_.end()) {
        auto po = std::make_shared<PowerObject>(power_object(*inner));
        powerObjs_[inner] = po;
        it = sortSheaves_.emplace(key, std::shared_ptr<Sheaf>(po, &po->sheaf)).first;
      }
      return it->second.get();
    }
  }
  throw SortError("internal: bad sort");
}

const std::vector<Subsheaf>& Forcer::power_sections(const Sheaf* F, int openIdx) {
  auto it = powerObjs_.find(F);
  if (it == powerObjs_.end()) {
    auto po = std::make_shared<PowerObject>(power_object(*F));
    it = powerObjs_.emplace(F, po).first;
  }
  return it->second->bySection[openIdx];
}

int Forcer::omega_index(Mask U, Mask w) const {
  // Omega sections over U are the opens ⊆ U in canonical order.
  int i = 0;
  for (Mask v : X_->opens()) {
    if (v & ~U) continue;
    if (v == w) return i;
    ++i;
  }
  throw ValidationError("internal: not an Omega section");
}

Value Forcer::eval_term(const TermPtr& t, Mask U, int envId) {
  switch (t->kind) {
    case Term::Kind::Var: {
      const EnvNode* n = lookup(envId, t->name);
      if (!n) {
        // declared free variables may also be provided as section constants
        auto it = base_->sectionConstants.find(t->name);
        if (it != base_->sectionConstants.end())
          return Value::of_section(it->second.sheaf,
                                   it->second.sheaf->restrict_mask(it->second.defOpen, U,
                                                                   it->second.section));
        throw ResolveError("unbound variable '" + t->name + "'");
      }
      switch (n->val.kind) {
        case Value::Kind::Section:
          return Value::of_section(n->val.sheaf, n->val.sheaf->restrict_mask(n->defOpen, U,
                                                                             n->val.section));
        case Value::Kind::Open: return Value::of_open(n->val.open & U);
        case Value::Kind::Sub: return n->val;
        case Value::Kind::Int: return n->val;
      }
      break;
    }
    case Term::Kind::Const: {
      if (auto it = base_->sectionConstants.find(t->name); it != base_->sectionConstants.end())
        return Value::of_section(
            it->second.sheaf, it->second.sheaf->restrict_mask(it->second.defOpen, U, it->second.section));
      if (auto it = base_->propConstants.find(t->name); it != base_->propConstants.end())
        return Value::of_open(it->second & U);
      if (auto it = base_->subsheaves.find(t->name); it != base_->subsheaves.end())
        return Value::of_sub(it->second);
      throw ResolveError("unbound constant '" + t->name + "'");
    }
    case Term::Kind::Num: {
      auto it = base_->rings.find(t->sort->name);
      if (it == base_->rings.end())
        throw ResolveError("numeral at sort without ring structure: " + t->sort->str());
      int fullIdx = X_->index_of(X_->full());
      int g = it->second.numeral(t->num, fullIdx);
      return Value::of_section(it->second.carrier,
                               it->second.carrier->restrict_mask(X_->full(), U, g));
    }
    case Term::Kind::App: {
      std::vector<const Sheaf*> argSheaves;
      std::vector<int> secs;
      for (auto& a : t->args) {
        Value v = eval_term(a, U, envId);
        if (v.kind != Value::Kind::Section)
          throw SortError("function argument must be a section");
        argSheaves.push_back(v.sheaf);
        secs.push_back(v.section);
      }
      const SheafMorphism* m = base_->find_function(t->name, argSheaves);
      return Value::of_section(m->result, m->apply(X_->index_of(U), secs));
    }
    case Term::Kind::Pow: {
      Value b = eval_term(t->base, U, envId);
      if (b.kind != Value::Kind::Section) throw SortError("power of a non-section");
      int k;
      if (t->exp.symbolic) {
        const EnvNode* n = lookup(envId, t->exp.var);
        if (!n || n->val.kind != Value::Kind::Int)
          throw ResolveError("schema variable '" + t->exp.var + "' is not bound");
        k = n->val.intval;
      } else {
        k = t->exp.value;
      }
      auto it = base_->rings.find(t->sort->name);
      if (it == base_->rings.end())
        throw ResolveError("power at sort without ring structure: " + t->sort->str());
      const RingStructure& R = it->second;
      int uIdx = X_->index_of(U);
      int acc = R.carrier->restrict_mask(X_->full(), U, R.oneGlobal);
      for (int i = 0; i < k; ++i) acc = R.mul->apply(uIdx, {acc, b.section});
      return Value::of_section(R.carrier, acc);
    }
  }
  throw SortError("internal: bad term");
}

Mask Forcer::domain_of(const FormulaPtr& f, int envId) {
  Mask dom = X_->full();
  std::function<void(const TermPtr&)> walkT = [&](const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var: {
        if (const EnvNode* n = lookup(envId, t->name)) dom &= n->defOpen;
        break;
      }
      case Term::Kind::Const: {
        if (auto it = base_->sectionConstants.find(t->name); it != base_->sectionConstants.end())
          dom &= it->second.defOpen;
        if (auto it = base_->subsheaves.find(t->name); it != base_->subsheaves.end())
          dom &= it->second->domain;
        break;
      }
      case Term::Kind::App:
        for (auto& a : t->args) walkT(a);
        break;
      case Term::Kind::Pow:
        walkT(t->base);
        break;
      default: break;
    }
  };
  std::function<void(const Formula&)> walkF = [&](const Formula& g) {
    if (g.t1) walkT(g.t1);
    if (g.t2) walkT(g.t2);
    if (g.a) walkF(*g.a);
    if (g.b) walkF(*g.b);
    for (auto& k : g.kids) walkF(*k);
  };
  walkF(*f);
  return dom;
}

int Forcer::schema_hi(const Formula& f) const {
  if (!f.hi.symbolic) return f.hi.value;
  if (base_->schemaBound) return *base_->schemaBound;
  throw ResolveError("unbounded schema: no bound for '" + f.hi.name +
                     "' (set a schema bound in the environment)");
}

std::vector<Value> Forcer::sort_values(const SortPtr& s, Mask V) {
  std::vector<Value> out;
  switch (s->kind) {
    case Sort::Kind::Sheaf: {
      const Sheaf* F = base_->sheaf(s->name);
      int c = F->card(X_->index_of(V));
      for (int i = 0; i < c; ++i) out.push_back(Value::of_section(F, i));
      return out;
    }
    case Sort::Kind::Omega: {
      for (Mask w : X_->opens())
        if ((w & ~V) == 0) out.push_back(Value::of_open(w));
      return out;
    }
    case Sort::Kind::Power: {
      const Sheaf* F = sheaf_of_sort(s->inner);
      for (const Subsheaf& S : power_sections(F, X_->index_of(V)))
        out.push_back(Value::of_sub(std::make_shared<Subsheaf>(S)));
      return out;
    }
  }
  throw SortError("internal: bad sort");
}

bool Forcer::force(Mask U, const FormulaPtr& f, int envId) {
  std::size_t h = std::hash<const void*>{}(f.get());
  h = hash_mix(h, std::hash<Mask>{}(U));
  h = hash_mix(h, std::hash<int>{}(envId));
  {
    auto it = memo_.find(h);
    if (it != memo_.end())
      for (auto& [key, res] : it->second)
        if (key.node.get() == f.get() && key.open == U && key.env == envId) return res;
  }
  bool r = force_uncached(U, f, envId);
  memo_[h].push_back({{f, U, envId}, r});
  return r;
}

bool Forcer::force_uncached(Mask U, const FormulaPtr& f, int envId) {
  const FiniteSpace& X = *X_;
  switch (f->kind) {
    case Formula::Kind::Top: return true;
    case Formula::Kind::Bot: return U == 0;
    case Formula::Kind::Eq: {
      Value a = eval_term(f->t1, U, envId);
      Value b = eval_term(f->t2, U, envId);
      if (a.kind != b.kind) throw SortError("equality between different kinds of values");
      switch (a.kind) {
        case Value::Kind::Section: return a.section == b.section;
        case Value::Kind::Open: return a.open == b.open;
        case Value::Kind::Sub: return a.sub->equals_on(*b.sub, U);
        case Value::Kind::Int: return a.intval == b.intval;
      }
      return false;
    }
    case Formula::Kind::Member: {
      Value el = eval_term(f->t1, U, envId);
      Value c = eval_term(f->t2, U, envId);
      if (c.kind != Value::Kind::Sub) throw SortError("'in' needs a subsheaf on the right");
      int uIdx = X.index_of(U);
      int sec;
      if (el.kind == Value::Kind::Section) {
        sec = el.section;
      } else if (el.kind == Value::Kind::Open) {
        sec = omega_index(U, el.open);
      } else {
        throw SortError("'in' needs a section on the left");
      }
      return c.sub->contains(uIdx, sec);
    }
    case Formula::Kind::Prop: {
      Value v = eval_term(f->t1, U, envId);
      if (v.kind != Value::Kind::Open) throw SortError("propositional atom must have sort Omega");
      return v.open == U;
    }
    case Formula::Kind::And: return force(U, f->a, envId) && force(U, f->b, envId);
    case Formula::Kind::BigAnd: {
      for (auto& k : f->kids)
        if (!force(U, k, envId)) return false;
      return true;
    }
    case Formula::Kind::BigAndSchema: {
      int hiB = schema_hi(*f);
      for (int n = f->lo; n <= hiB; ++n)
        if (!force(U, f->a, bind(envId, f->var, U, Value::of_int(n)))) return false;
      return true;
    }
    case Formula::Kind::Or:
    case Formula::Kind::BigOr:
    case Formula::Kind::BigOrSchema: {
      // pointwise on minimal neighborhoods (equivalent to the covering clause
      // by locality; the cover formulation is the cross-check oracle)
      for (int p = 0; p < X.point_count(); ++p) {
        if (!has(U, p)) continue;
        Mask Up = X.min_open(p);
        bool any = false;
        if (f->kind == Formula::Kind::Or) {
          any = force(Up, f->a, envId) || force(Up, f->b, envId);
        } else if (f->kind == Formula::Kind::BigOr) {
          for (auto& k : f->kids)
            if (force(Up, k, envId)) {
              any = true;
              break;
            }
        } else {
          int hiB = schema_hi(*f);
          for (int n = f->lo; n <= hiB && !any; ++n)
            any = force(Up, f->a, bind(envId, f->var, Up, Value::of_int(n)));
        }
        if (!any) return false;
      }
      return true;
    }
    case Formula::Kind::Implies: {
      for (Mask V : X.opens()) {
        if (V & ~U) continue;
        if (force(V, f->a, envId) && !force(V, f->b, envId)) return false;
      }
      return true;
    }
    case Formula::Kind::Forall: {
      for (Mask V : X.opens()) {
        if (V & ~U) continue;
        for (const Value& val : sort_values(f->sort, V))
          if (!force(V, f->a, bind(envId, f->var, V, val))) return false;
      }
      return true;
    }
    case Formula::Kind::Exists: {
      for (int p = 0; p < X.point_count(); ++p) {
        if (!has(U, p)) continue;
        Mask Up = X.min_open(p);
        bool any = false;
        for (const Value& val : sort_values(f->sort, Up)) {
          if (force(Up, f->a, bind(envId, f->var, Up, val))) {
            any = true;
            break;
          }
        }
        if (!any) return false;
      }
      return true;
    }
    case Formula::Kind::Modal: {
      auto it = base_->nuclei.find(f->nucleus);
      if (it == base_->nuclei.end()) throw ResolveError("unknown nucleus '" + f->nucleus + "'");
      const Nucleus& j = *it->second;
      Mask tv = truth_value(f->a, envId);
      Mask jtv = X.open_at(j.apply(X.index_of(tv)));
      return (U & ~jtv) == 0;
    }
  }
  throw SortError("internal: bad formula");
}

Mask Forcer::truth_value(const FormulaPtr& f, int envId) {
  Mask dom = domain_of(f, envId);
  Mask tv = 0;
  for (Mask W : X_->opens()) {
    if (W & ~dom) continue;
    if (force(W, f, envId)) tv |= W;
  }
  return tv;
}

bool Forcer::classical_at(int point, const FormulaPtr& f, int envId) {
  return classical(X_->index_of(X_->min_open(point)), f, envId);
}

bool Forcer::classical(int minIdx, const FormulaPtr& f, int envId) {
  Mask Ux = X_->open_at(minIdx);
  switch (f->kind) {
    case Formula::Kind::Top: return true;
    case Formula::Kind::Bot: return false;
    case Formula::Kind::Eq:
    case Formula::Kind::Member:
    case Formula::Kind::Prop:
      return force_uncached(Ux, f, envId);  // atoms agree with the stalk model
    case Formula::Kind::And:
      return classical(minIdx, f->a, envId) && classical(minIdx, f->b, envId);
    case Formula::Kind::Or:
      return classical(minIdx, f->a, envId) || classical(minIdx, f->b, envId);
    case Formula::Kind::BigAnd: {
      for (auto& k : f->kids)
        if (!classical(minIdx, k, envId)) return false;
      return true;
    }
    case Formula::Kind::BigOr: {
      for (auto& k : f->kids)
        if (classical(minIdx, k, envId)) return true;
      return false;
    }
    case Formula::Kind::BigAndSchema: {
      int hiB = schema_hi(*f);
      for (int n = f->lo; n <= hiB; ++n)
        if (!classical(minIdx, f->a, bind(envId, f->var, Ux, Value::of_int(n)))) return false;
      return true;
    }
    case Formula::Kind::BigOrSchema: {
      int hiB = schema_hi(*f);
      for (int n = f->lo; n <= hiB; ++n)
        if (classical(minIdx, f->a, bind(envId, f->var, Ux, Value::of_int(n)))) return true;
      return false;
    }
    case Formula::Kind::Implies:
      return !classical(minIdx, f->a, envId) || classical(minIdx, f->b, envId);
    case Formula::Kind::Forall: {
      for (const Value& val : sort_values(f->sort, Ux))
        if (!classical(minIdx, f->a, bind(envId, f->var, Ux, val))) return false;
      return true;
    }
    case Formula::Kind::Exists: {
      for (const Value& val : sort_values(f->sort, Ux))
        if (classical(minIdx, f->a, bind(envId, f->var, Ux, val))) return true;
      return false;
    }
    case Formula::Kind::Modal:
      throw SortError("classical stalk evaluation does not interpret modal operators");
  }
  throw SortError("internal: bad formula");
}

// ---------------------------------------------------------------- FrameForcer

FrameContext frame_context_of_space(const BaseEnv& env) {
  const FiniteSpace& X = *env.space;
  const Frame& L = X.opens_frame();
  FrameContext ctx;
  ctx.L = &L;
  ctx.schemaBound = env.schemaBound;

  auto sort_name = [&](const Sheaf* F) -> std::string {
    for (auto& [n, s] : env.sheaves)
      if (s == F) return n;
    throw ResolveError("sheaf not registered");
  };

  for (auto& [n, F] : env.sheaves) {
    FrameSheaf fs;
    fs.sortName = n;
    fs.card.resize(L.size());
    fs.restr.assign(L.size(), std::vector<std::vector<int>>(L.size()));
    for (int u = 0; u < L.size(); ++u) fs.card[u] = F->card(u);
    for (int u = 0; u < L.size(); ++u)
      for (int v = 0; v < L.size(); ++v) {
        if (!L.leq(v, u)) continue;
        std::vector<int> t(F->card(u));
        for (int s = 0; s < F->card(u); ++s) t[s] = F->restrict_idx(u, v, s);
        fs.restr[u][v] = std::move(t);
      }
    ctx.sheaves[n] = std::move(fs);
  }
  for (auto& [n, S] : env.subsheaves) {
    FrameSubsheaf fsub;
    fsub.parentSort = sort_name(S->parent);
    fsub.selected.resize(L.size());
    for (int u = 0; u < L.size(); ++u)
      if ((X.open_at(u) & ~S->domain) == 0) fsub.selected[u] = S->selected[u];
    ctx.subsheaves[n] = std::move(fsub);
  }
  for (auto& [n, fns] : env.functions)
    for (auto* m : fns) {
      FrameMorphism fm;
      for (auto* a : m->args) fm.argSorts.push_back(sort_name(a));
      fm.resultSort = sort_name(m->result);
      fm.table = m->table;
      ctx.functions[n].push_back(std::move(fm));
    }
  for (auto& [n, j] : env.nuclei) ctx.nuclei[n] = j->map;
  for (auto& [n, W] : env.propConstants) ctx.propConstants[n] = X.index_of(W);
  for (auto& [n, sc] : env.sectionConstants)
    ctx.sectionConstants[n] = {sort_name(sc.sheaf), X.index_of(sc.defOpen), sc.section};
  for (auto& [n, r] : env.rings) ctx.ringConsts[n] = {r.zeroGlobal, r.oneGlobal};
  return ctx;
}

FrameForcer::FrameForcer(const FrameContext& ctx) : ctx_(&ctx), L_(ctx.L) {
  envs_.push_back({-1, "", 0, FValue{}});
}

int FrameForcer::bind(int envId, const std::string& var, int defElem, FValue v) {
  std::size_t h = std::hash<int>{}(envId);
  h = hash_mix(h, std::hash<std::string>{}(var));
  h = hash_mix(h, std::hash<int>{}(defElem));
  h = hash_mix(h, static_cast<std::size_t>(v.kind));
  h = hash_mix(h, std::hash<std::string>{}(v.sortName));
  h = hash_mix(h, std::hash<int>{}(v.a));
  for (int cand : envIndex_[h]) {
    const EnvNode& n = envs_[cand];
    if (n.parent == envId && n.var == var && n.defElem == defElem && n.val.kind == v.kind &&
        n.val.sortName == v.sortName && n.val.a == v.a)
      return cand;
  }
  envs_.push_back({envId, var, defElem, v});
  int id = static_cast<int>(envs_.size()) - 1;
  envIndex_[h].push_back(id);
  return id;
}

const FrameForcer::EnvNode* FrameForcer::lookup(int envId, const std::string& var) const {
  while (envId > 0) {
    const EnvNode& n = envs_[envId];
    if (n.var == var) return &n;
    envId = n.parent;
  }
  return nullptr;
}

int FrameForcer::schema_hi(const Formula& f) const {
  if (!f.hi.symbolic) return f.hi.value;
  if (ctx_->schemaBound) return *ctx_->schemaBound;
  throw ResolveError("unbounded schema over a frame context");
}

FrameForcer::FValue FrameForcer::eval_term(const TermPtr& t, int u, int envId) {
  switch (t->kind) {
    case Term::Kind::Var: {
      const EnvNode* n = lookup(envId, t->name);
      if (!n) throw ResolveError("unbound variable '" + t->name + "'");
      FValue v = n->val;
      if (v.kind == FValue::Kind::Section) {
        const FrameSheaf& F = ctx_->sheaves.at(v.sortName);
        v.a = F.restr[n->defElem][u][v.a];
      } else if (v.kind == FValue::Kind::Open) {
        v.a = L_->meet(v.a, u);
      }
      return v;
    }
    case Term::Kind::Const: {
      if (auto it = ctx_->sectionConstants.find(t->name); it != ctx_->sectionConstants.end()) {
        const FrameSheaf& F = ctx_->sheaves.at(it->second.sortName);
        FValue v;
        v.kind = FValue::Kind::Section;
        v.sortName = it->second.sortName;
        v.a = F.restr[it->second.defElem][u][it->second.section];
        return v;
      }
      if (auto it = ctx_->propConstants.find(t->name); it != ctx_->propConstants.end()) {
        FValue v;
        v.kind = FValue::Kind::Open;
        v.a = L_->meet(it->second, u);
        return v;
      }
      throw ResolveError("unbound constant '" + t->name + "' over the frame context");
    }
    case Term::Kind::Num: {
      auto it = ctx_->ringConsts.find(t->sort->name);
      if (it == ctx_->ringConsts.end()) throw ResolveError("numeral over a non-ring frame sort");
      const FrameSheaf& F = ctx_->sheaves.at(t->sort->name);
      // add k ones, using the registered 'add' table
      const FrameMorphism* add = nullptr;
      for (auto& m : ctx_->functions.at("add"))
        if (m.argSorts.size() == 2 && m.argSorts[0] == t->sort->name) add = &m;
      if (!add) throw ResolveError("no 'add' table for numerals");
      int top = L_->top();
      int acc = it->second.first;
      for (int i = 0; i < t->num; ++i)
        acc = add->table[top][acc * F.card[top] + it->second.second];
      FValue v;
      v.kind = FValue::Kind::Section;
      v.sortName = t->sort->name;
      v.a = F.restr[top][u][acc];
      return v;
    }
    case Term::Kind::App: {
      std::vector<FValue> args;
      for (auto& a : t->args) args.push_back(eval_term(a, u, envId));
      auto it = ctx_->functions.find(t->name);
      if (it == ctx_->functions.end()) throw ResolveError("unknown function '" + t->name + "'");
      const FrameMorphism* match = nullptr;
      for (auto& m : it->second) {
        if (m.argSorts.size() != args.size()) continue;
        bool ok = true;
        for (std::size_t i = 0; i < args.size(); ++i)
          if (m.argSorts[i] != args[i].sortName) ok = false;
        if (ok) match = &m;
      }
      if (!match) throw ResolveError("no overload of '" + t->name + "' over the frame context");
      int idx = 0;
      for (std::size_t i = 0; i < args.size(); ++i)
        idx = idx * ctx_->sheaves.at(match->argSorts[i]).card[u] + args[i].a;
      FValue v;
      v.kind = FValue::Kind::Section;
      v.sortName = match->resultSort;
      v.a = match->table[u][idx];
      return v;
    }
    case Term::Kind::Pow: {
      FValue b = eval_term(t->base, u, envId);
      int k;
      if (t->exp.symbolic) {
        const EnvNode* n = lookup(envId, t->exp.var);
        if (!n || n->val.kind != FValue::Kind::Int)
          throw ResolveError("schema variable '" + t->exp.var + "' is not bound");
        k = n->val.a;
      } else {
        k = t->exp.value;
      }
      auto rc = ctx_->ringConsts.find(t->sort->name);
      if (rc == ctx_->ringConsts.end()) throw ResolveError("power over a non-ring frame sort");
      const FrameSheaf& F = ctx_->sheaves.at(t->sort->name);
      const FrameMorphism* mul = nullptr;
      for (auto& m : ctx_->functions.at("mul"))
        if (m.argSorts.size() == 2 && m.argSorts[0] == t->sort->name) mul = &m;
      if (!mul) throw ResolveError("no 'mul' table for powers");
      int acc = F.restr[L_->top()][u][rc->second.second];
      for (int i = 0; i < k; ++i) acc = mul->table[u][acc * F.card[u] + b.a];
      FValue v;
      v.kind = FValue::Kind::Section;
      v.sortName = t->sort->name;
      v.a = acc;
      return v;
    }
  }
  throw SortError("internal: bad term");
}

int FrameForcer::domain_of(const FormulaPtr& f, int envId) {
  int dom = L_->top();
  std::function<void(const TermPtr&)> walkT = [&](const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var:
        if (const EnvNode* n = lookup(envId, t->name)) dom = L_->meet(dom, n->defElem);
        break;
      case Term::Kind::Const:
        if (auto it = ctx_->sectionConstants.find(t->name); it != ctx_->sectionConstants.end())
          dom = L_->meet(dom, it->second.defElem);
        break;
      case Term::Kind::App:
        for (auto& a : t->args) walkT(a);
        break;
      case Term::Kind::Pow:
        walkT(t->base);
        break;
      default: break;
    }
  };
  std::function<void(const Formula&)> walkF = [&](const Formula& g) {
    if (g.t1) walkT(g.t1);
    if (g.t2) walkT(g.t2);
    if (g.a) walkF(*g.a);
    if (g.b) walkF(*g.b);
    for (auto& k : g.kids) walkF(*k);
  };
  walkF(*f);
  return dom;
}

bool FrameForcer::force(int u, const FormulaPtr& f, int envId) {
  std::size_t h = std::hash<const void*>{}(f.get());
  h = hash_mix(h, std::hash<int>{}(u));
  h = hash_mix(h, std::hash<int>{}(envId));
  {
    auto it = memo_.find(h);
    if (it != memo_.end())
      for (auto& [key, res] : it->second)
        if (key.node.get() == f.get() && key.elem == u && key.env == envId) return res;
  }
  bool r = force_uncached(u, f, envId);
  memo_[h].push_back({{f, u, envId}, r});
  return r;
}

bool FrameForcer::force_uncached(int u, const FormulaPtr& f, int envId) {
  const Frame& L = *L_;
  auto subelems = [&](int v) {
    std::vector<int> out;
    for (int w = 0; w < L.size(); ++w)
      if (L.leq(w, v)) out.push_back(w);
    return out;
  };
  switch (f->kind) {
    case Formula::Kind::Top: return true;
    case Formula::Kind::Bot: return u == L.bottom();
    case Formula::Kind::Eq: {
      FValue a = eval_term(f->t1, u, envId);
      FValue b = eval_term(f->t2, u, envId);
      return a.kind == b.kind && a.a == b.a;
    }
    case Formula::Kind::Member: {
      FValue el = eval_term(f->t1, u, envId);
      if (f->t2->kind != Term::Kind::Const)
        throw SortError("frame semantics supports membership in named subsheaves only");
      auto it = ctx_->subsheaves.find(f->t2->name);
      if (it == ctx_->subsheaves.end())
        throw ResolveError("unknown subsheaf '" + f->t2->name + "'");
      return it->second.selected[u].test(el.a);
    }
    case Formula::Kind::Prop: {
      FValue v = eval_term(f->t1, u, envId);
      if (v.kind != FValue::Kind::Open) throw SortError("propositional atom must have sort Omega");
      return v.a == u;
    }
    case Formula::Kind::And: return force(u, f->a, envId) && force(u, f->b, envId);
    case Formula::Kind::BigAnd: {
      for (auto& k : f->kids)
        if (!force(u, k, envId)) return false;
      return true;
    }
    case Formula::Kind::BigAndSchema: {
      int hiB = schema_hi(*f);
      for (int n = f->lo; n <= hiB; ++n) {
        FValue v;
        v.kind = FValue::Kind::Int;
        v.a = n;
        if (!force(u, f->a, bind(envId, f->var, u, v))) return false;
      }
      return true;
    }
    case Formula::Kind::Or:
    case Formula::Kind::BigOr:
    case Formula::Kind::BigOrSchema: {
      // u ⊨ ⋁ᵢ φᵢ iff the qualifying subelements of u cover u
      int s = L.bottom();
      for (int v : subelems(u)) {
        bool any = false;
        if (f->kind == Formula::Kind::Or) {
          any = force(v, f->a, envId) || force(v, f->b, envId);
        } else if (f->kind == Formula::Kind::BigOr) {
          for (auto& k : f->kids)
            if (force(v, k, envId)) {
              any = true;
              break;
            }
        } else {
          int hiB = schema_hi(*f);
          for (int n = f->lo; n <= hiB && !any; ++n) {
            FValue val;
            val.kind = FValue::Kind::Int;
            val.a = n;
            any = force(v, f->a, bind(envId, f->var, v, val));
          }
        }
        if (any) s = L.join(s, v);
      }
      return s == u;
    }
    case Formula::Kind::Implies: {
      for (int v : subelems(u))
        if (force(v, f->a, envId) && !force(v, f->b, envId)) return false;
      return true;
    }
    case Formula::Kind::Forall: {
      for (int v : subelems(u)) {
        if (f->sort->kind == Sort::Kind::Omega) {
          for (int w : subelems(v)) {
            FValue val;
            val.kind = FValue::Kind::Open;
            val.a = w;
            if (!force(v, f->a, bind(envId, f->var, v, val))) return false;
          }
        } else if (f->sort->kind == Sort::Kind::Sheaf) {
          const FrameSheaf& F = ctx_->sheaves.at(f->sort->name);
          for (int s = 0; s < F.card[v]; ++s) {
            FValue val;
            val.kind = FValue::Kind::Section;
            val.sortName = f->sort->name;
            val.a = s;
            if (!force(v, f->a, bind(envId, f->var, v, val))) return false;
          }
        } else {
          throw SortError("frame semantics does not quantify over power sorts");
        }
      }
      return true;
    }
    case Formula::Kind::Exists: {
      int s = L.bottom();
      for (int v : subelems(u)) {
        bool any = false;
        if (f->sort->kind == Sort::Kind::Omega) {
          for (int w : subelems(v)) {
            FValue val;
            val.kind = FValue::Kind::Open;
            val.a = w;
            if (force(v, f->a, bind(envId, f->var, v, val))) {
              any = true;
              break;
            }
          }
        } else if (f->sort->kind == Sort::Kind::Sheaf) {
          const FrameSheaf& F = ctx_->sheaves.at(f->sort->name);
          for (int sec = 0; sec < F.card[v] && !any; ++sec) {
            FValue val;
            val.kind = FValue::Kind::Section;
            val.sortName = f->sort->name;
            val.a = sec;
            any = force(v, f->a, bind(envId, f->var, v, val));
          }
        } else {
          throw SortError("frame semantics does not quantify over power sorts");
        }
        if (any) s = L.join(s, v);
      }
      return s == u;
    }
    case Formula::Kind::Modal: {
      auto it = ctx_->nuclei.find(f->nucleus);
      if (it == ctx_->nuclei.end()) throw ResolveError("unknown nucleus '" + f->nucleus + "'");
      int tv = truth_value(f->a, envId);
      return L.leq(u, it->second[tv]);
    }
  }
  throw SortError("internal: bad formula");
}

int FrameForcer::truth_value(const FormulaPtr& f, int envId) {
  int dom = domain_of(f, envId);
  int tv = L_->bottom();
  for (int v = 0; v < L_->size(); ++v) {
    if (!L_->leq(v, dom)) continue;
    if (force(v, f, envId)) tv = L_->join(tv, v);
  }
  return tv;
}

}  // namespace toposforge
