#include "toposforge/sheaf.hpp"

#include <algorithm>
#include <sstream>

namespace toposforge {

// ---------------------------------------------------------------- Sheaf

void Sheaf::check() const {
  const FiniteSpace& X = *space_;
  int emptyIdx = X.index_of(0);
  if (card(emptyIdx) != 1)
    throw ValidationError("sheaf " + name_ + ": sections over the empty open must be a singleton");

  // table shapes and functoriality
  for (int u = 0; u < X.open_count(); ++u) {
    for (int v = 0; v < X.open_count(); ++v) {
      bool sub = (X.open_at(v) & ~X.open_at(u)) == 0;
      if (!sub) continue;
      const auto& t = restr_[u][v];
      if (static_cast<int>(t.size()) != card(u))
        throw ValidationError("sheaf " + name_ + ": missing or malformed restriction " +
                              std::to_string(u) + "->" + std::to_string(v));
      for (int s : t)
        if (s < 0 || s >= card(v))
          throw ValidationError("sheaf " + name_ + ": restriction out of range");
      if (u == v)
        for (int s = 0; s < card(u); ++s)
          if (t[s] != s)
            throw ValidationError("sheaf " + name_ + ": identity restriction expected on " +
                                  X.format_mask(X.open_at(u)));
    }
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if ((X.open_at(v) & ~X.open_at(u)) != 0) continue;
      for (int w = 0; w < X.open_count(); ++w) {
        if ((X.open_at(w) & ~X.open_at(v)) != 0) continue;
        for (int s = 0; s < card(u); ++s)
          if (restr_[v][w][restr_[u][v][s]] != restr_[u][w][s])
            throw ValidationError("sheaf " + name_ + ": restriction not functorial via " +
                                  X.format_mask(X.open_at(v)));
      }
    }

  // gluing against the finest cover {min_open(x)}_{x∈U} of every open
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    if (U == 0) continue;
    std::vector<int> pts;
    for (int p = 0; p < X.point_count(); ++p)
      if (has(U, p)) pts.push_back(p);
    std::vector<int> minIdx;
    for (int p : pts) minIdx.push_back(X.index_of(X.min_open(p)));

    // injectivity (separation)
    std::map<std::vector<int>, int> seen;
    for (int s = 0; s < card(u); ++s) {
      std::vector<int> tup;
      for (int mi : minIdx) tup.push_back(restr_[u][mi][s]);
      auto [it, fresh] = seen.emplace(tup, s);
      if (!fresh)
        throw ValidationError("sheaf " + name_ + ": gluing-failure (separation) on cover of " +
                              X.format_mask(U) + " by minimal opens: sections '" +
                              secNames_[u][it->second] + "' and '" + secNames_[u][s] +
                              "' agree on the cover");
    }

    // surjectivity onto matching families
    std::vector<int> tup(pts.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == pts.size()) {
        if (!seen.count(tup)) {
          std::string fam;
          for (std::size_t k = 0; k < pts.size(); ++k)
            fam += (k ? ", " : "") + X.points()[pts[k]] + ":" + secNames_[minIdx[k]][tup[k]];
          throw ValidationError("sheaf " + name_ + ": gluing-failure on cover of " +
                                X.format_mask(U) +
                                " by minimal opens: unmatched family {" + fam + "}");
        }
        return;
      }
      int mi = minIdx[i];
      for (int s = 0; s < card(mi); ++s) {
        // matching with already chosen components
        bool ok = true;
        for (std::size_t k = 0; k < i && ok; ++k) {
          Mask inter = X.min_open(pts[i]) & X.min_open(pts[k]);
          int ii = X.index_of(inter);
          if (restr_[mi][ii][s] != restr_[minIdx[k]][ii][tup[k]]) ok = false;
        }
        if (!ok) continue;
        tup[i] = s;
        rec(i + 1);
      }
    };
    rec(0);
  }
}

// ---------------------------------------------------------------- Subsheaf

Subsheaf Subsheaf::restricted(Mask newDomain) const {
  const FiniteSpace& X = parent->space();
  if (newDomain & ~domain) throw ValidationError("subsheaf restriction beyond its domain");
  Subsheaf r;
  r.parent = parent;
  r.domain = newDomain;
  r.selected.assign(X.open_count(), DynBitset());
  for (int u = 0; u < X.open_count(); ++u)
    if ((X.open_at(u) & ~newDomain) == 0) r.selected[u] = selected[u];
  return r;
}

void Subsheaf::check() const {
  const FiniteSpace& X = parent->space();
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    if (U & ~domain) continue;
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~U) continue;
      for (int s = 0; s < parent->card(u); ++s)
        if (selected[u].test(s) && !selected[v].test(parent->restrict_idx(u, v, s)))
          throw ValidationError("subsheaf not closed under restriction");
    }
    for (int s = 0; s < parent->card(u); ++s) {
      bool loc = true;
      for (int p = 0; p < X.point_count() && loc; ++p) {
        if (!has(U, p)) continue;
        int mi = X.index_of(X.min_open(p));
        if (!selected[mi].test(parent->restrict_idx(u, mi, s))) loc = false;
      }
      if (loc != selected[u].test(s)) throw ValidationError("subsheaf violates locality");
    }
  }
}

bool Subsheaf::equals_on(const Subsheaf& o, Mask m) const {
  const FiniteSpace& X = parent->space();
  for (int u = 0; u < X.open_count(); ++u)
    if ((X.open_at(u) & ~m) == 0 && !(selected[u] == o.selected[u])) return false;
  return true;
}

std::size_t Subsheaf::hash() const {
  std::size_t h = std::hash<const void*>{}(parent);
  h = hash_mix(h, std::hash<Mask>{}(domain));
  const FiniteSpace& X = parent->space();
  for (int u = 0; u < X.open_count(); ++u)
    if ((X.open_at(u) & ~domain) == 0) h = hash_mix(h, selected[u].hash());
  return h;
}

bool subsheaf_less(const Subsheaf& a, const Subsheaf& b) {
  const FiniteSpace& X = a.parent->space();
  for (int u = 0; u < X.open_count(); ++u) {
    if (X.open_at(u) & ~a.domain) continue;
    if (a.selected[u] == b.selected[u]) continue;
    return a.selected[u] < b.selected[u];
  }
  return false;
}

Subsheaf subsheaf_from_stalks(const Sheaf& F, Mask domain,
                              const std::vector<DynBitset>& perPoint) {
  const FiniteSpace& X = F.space();
  Subsheaf S;
  S.parent = &F;
  S.domain = domain;
  S.selected.assign(X.open_count(), DynBitset());
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    if (U & ~domain) continue;
    DynBitset sel(F.card(u));
    for (int s = 0; s < F.card(u); ++s) {
      bool in = true;
      for (int p = 0; p < X.point_count() && in; ++p) {
        if (!has(U, p)) continue;
        int mi = X.index_of(X.min_open(p));
        if (!perPoint[p].test(F.restrict_idx(u, mi, s))) in = false;
      }
      if (in) sel.set(s);
    }
    S.selected[u] = sel;
  }
  return S;
}

std::vector<Subsheaf> enumerate_subsheaves(const Sheaf& F, Mask domain) {
  const FiniteSpace& X = F.space();
  std::vector<int> pts;
  for (int p = 0; p < X.point_count(); ++p)
    if (has(domain, p)) pts.push_back(p);
  // super-opens first: constraints flow from coarser stalks to finer ones
  std::sort(pts.begin(), pts.end(), [&](int a, int b) {
    int ca = popcount(X.min_open(a)), cb = popcount(X.min_open(b));
    if (ca != cb) return ca > cb;
    return a < b;
  });

  for (int p : pts)
    if (F.stalk_card(p) > 16)
      throw ValidationError("subsheaf enumeration: stalk too large (" +
                            std::to_string(F.stalk_card(p)) + " sections)");

  std::vector<Subsheaf> out;
  std::vector<DynBitset> perPoint(X.point_count());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pts.size()) {
      out.push_back(subsheaf_from_stalks(F, domain, perPoint));
      return;
    }
    int p = pts[i];
    int mi = X.index_of(X.min_open(p));
    int c = F.card(mi);
    for (Mask choice = 0; choice < (Mask{1} << c); ++choice) {
      DynBitset sel(c);
      for (int s = 0; s < c; ++s)
        if (has(choice, s)) sel.set(s);
      // compatibility with already fixed points q: if U_q ⊆ U_p, the image of
      // sel must land in sel_q; if U_p ⊆ U_q, the image of sel_q must land here.
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        int q = pts[k];
        int mq = X.index_of(X.min_open(q));
        if ((X.min_open(q) & ~X.min_open(p)) == 0) {
          for (int s = 0; s < c && ok; ++s)
            if (sel.test(s) && !perPoint[q].test(F.restrict_idx(mi, mq, s))) ok = false;
        }
        if ((X.min_open(p) & ~X.min_open(q)) == 0) {
          for (int s = 0; s < F.card(mq) && ok; ++s)
            if (perPoint[q].test(s) && !sel.test(F.restrict_idx(mq, mi, s))) ok = false;
        }
      }
      if (!ok) continue;
      perPoint[p] = sel;
      rec(i + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), subsheaf_less);
  return out;
}

Subsheaf singleton_subsheaf(const Sheaf& F, Mask defOpen, int section) {
  const FiniteSpace& X = F.space();
  std::vector<DynBitset> perPoint(X.point_count());
  int from = X.index_of(defOpen);
  for (int p = 0; p < X.point_count(); ++p) {
    if (!has(defOpen, p)) continue;
    int mi = X.index_of(X.min_open(p));
    DynBitset b(F.card(mi));
    b.set(F.restrict_idx(from, mi, section));
    perPoint[p] = b;
  }
  return subsheaf_from_stalks(F, defOpen, perPoint);
}

Sheaf subsheaf_to_sheaf(const Subsheaf& S, std::string name) {
  const FiniteSpace& X = S.parent->space();
  Sheaf G(X, std::move(name));
  // selected sections inside the domain, nothing (but the forced singleton at
  // ∅) outside
  std::vector<std::vector<int>> secOf(X.open_count());  // parent section -> index in G
  for (int u = 0; u < X.open_count(); ++u) {
    Mask U = X.open_at(u);
    std::vector<std::string> names;
    secOf[u].assign(S.parent->card(u), -1);
    if ((U & ~S.domain) == 0) {
      for (int s = 0; s < S.parent->card(u); ++s)
        if (S.selected[u].test(s)) {
          secOf[u][s] = static_cast<int>(names.size());
          names.push_back(S.parent->section_name(u, s));
        }
    }
    G.set_sections(u, std::move(names));
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(G.card(u));
      if ((X.open_at(u) & ~S.domain) == 0) {
        for (int s = 0; s < S.parent->card(u); ++s) {
          if (secOf[u][s] < 0) continue;
          t[secOf[u][s]] = secOf[v][S.parent->restrict_idx(u, v, s)];
        }
      }
      G.set_restriction(u, v, std::move(t));
    }
  G.check();
  return G;
}

// ---------------------------------------------------------------- morphisms

int SheafMorphism::tuple_index(int openIdx, const std::vector<int>& sections) const {
  int idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) idx = idx * args[i]->card(openIdx) + sections[i];
  return idx;
}

void SheafMorphism::check_natural() const {
  const FiniteSpace& X = result->space();
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> tup(args.size(), 0);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == args.size()) {
          std::vector<int> rtup(args.size());
          for (std::size_t k = 0; k < args.size(); ++k)
            rtup[k] = args[k]->restrict_idx(u, v, tup[k]);
          if (result->restrict_idx(u, v, apply(u, tup)) != apply(v, rtup))
            throw ValidationError("morphism " + name + " is not natural");
          return;
        }
        for (int s = 0; s < args[i]->card(u); ++s) {
          tup[i] = s;
          rec(i + 1);
        }
      };
      rec(0);
    }
}

SheafMorphism make_morphism(std::string name, std::vector<const Sheaf*> args, const Sheaf* result,
                            const std::function<int(int, const std::vector<int>&)>& fn) {
  SheafMorphism m;
  m.name = std::move(name);
  m.args = std::move(args);
  m.result = result;
  const FiniteSpace& X = result->space();
  m.table.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    int total = 1;
    for (auto* a : m.args) total *= a->card(u);
    m.table[u].assign(total, 0);
    std::vector<int> tup(m.args.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == m.args.size()) {
        m.table[u][m.tuple_index(u, tup)] = fn(u, tup);
        return;
      }
      for (int s = 0; s < m.args[i]->card(u); ++s) {
        tup[i] = s;
        rec(i + 1);
      }
    };
    rec(0);
  }
  m.check_natural();
  return m;
}

// ---------------------------------------------------------------- standard sheaves

Sheaf constant_sheaf(const FiniteSpace& X, std::vector<std::string> elems, std::string name) {
  Sheaf F(X, std::move(name));
  int m = static_cast<int>(elems.size());
  std::vector<std::vector<Mask>> comps(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) comps[u] = X.components(X.open_at(u));

  for (int u = 0; u < X.open_count(); ++u) {
    int k = static_cast<int>(comps[u].size());
    int total = 1;
    for (int i = 0; i < k; ++i) total *= m;
    std::vector<std::string> names;
    for (int code = 0; code < total; ++code) {
      if (k == 0) {
        names.push_back("*");
        continue;
      }
      std::vector<int> vals(k);
      int c = code;
      for (int i = k - 1; i >= 0; --i) {
        vals[i] = c % m;
        c /= m;
      }
      std::string n;
      for (int i = 0; i < k; ++i) n += (i ? "|" : "") + elems[vals[i]];
      names.push_back(n);
    }
    F.set_sections(u, std::move(names));
  }

  auto decode = [&](int u, int code) {
    int k = static_cast<int>(comps[u].size());
    std::vector<int> vals(k);
    for (int i = k - 1; i >= 0; --i) {
      vals[i] = code % m;
      code /= m;
    }
    return vals;
  };

  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(F.card(u));
      for (int s = 0; s < F.card(u); ++s) {
        auto vals = decode(u, s);
        int code = 0;
        for (auto cv : comps[v]) {
          int owner = -1;
          for (std::size_t i = 0; i < comps[u].size(); ++i)
            if ((cv & ~comps[u][i]) == 0) owner = static_cast<int>(i);
          code = code * m + (owner >= 0 ? vals[owner] : 0);
        }
        t[s] = code;
      }
      F.set_restriction(u, v, std::move(t));
    }
  F.check();
  return F;
}

Sheaf terminal_sheaf(const FiniteSpace& X) { return constant_sheaf(X, {"*"}, "1"); }

Sheaf omega_sheaf(const FiniteSpace& X) {
  Sheaf F(X, "Omega");
  std::vector<std::vector<Mask>> secs(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    for (Mask w : X.opens())
      if ((w & ~X.open_at(u)) == 0) secs[u].push_back(w);
    std::vector<std::string> names;
    for (Mask w : secs[u]) names.push_back(X.format_mask(w));
    F.set_sections(u, std::move(names));
  }
  auto index_in = [&](int u, Mask w) {
    for (std::size_t i = 0; i < secs[u].size(); ++i)
      if (secs[u][i] == w) return static_cast<int>(i);
    throw ValidationError("internal: Omega section lookup");
  };
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(F.card(u));
      for (int s = 0; s < F.card(u); ++s) t[s] = index_in(v, secs[u][s] & X.open_at(v));
      F.set_restriction(u, v, std::move(t));
    }
  F.check();
  return F;
}

ConstantCodec::ConstantCodec(const FiniteSpace& space, int elemCount) : X(&space), m(elemCount) {
  comps.resize(space.open_count());
  for (int u = 0; u < space.open_count(); ++u) comps[u] = space.components(space.open_at(u));
}

std::vector<int> ConstantCodec::decode(int openIdx, int code) const {
  int k = static_cast<int>(comps[openIdx].size());
  std::vector<int> vals(k);
  for (int i = k - 1; i >= 0; --i) {
    vals[i] = code % m;
    code /= m;
  }
  return vals;
}

int ConstantCodec::encode(int openIdx, const std::vector<int>& vals) const {
  (void)openIdx;
  int code = 0;
  for (int v : vals) code = code * m + v;
  return code;
}

int ConstantCodec::constant(int openIdx, int val) const {
  int k = static_cast<int>(comps[openIdx].size());
  int code = 0;
  for (int i = 0; i < k; ++i) code = code * m + val;
  return code;
}

SheafMorphism constant_binop(const Sheaf& F, const ConstantCodec& codec, std::string name,
                             const std::function<int(int, int)>& op) {
  return make_morphism(std::move(name), {&F, &F}, &F, [&F, &codec, op](int u, const std::vector<int>& s) {
    (void)F;
    auto a = codec.decode(u, s[0]);
    auto b = codec.decode(u, s[1]);
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = op(a[i], b[i]);
    return codec.encode(u, r);
  });
}

SheafMorphism constant_unop(const Sheaf& F, const ConstantCodec& codec, std::string name,
                            const std::function<int(int)>& op) {
  return make_morphism(std::move(name), {&F}, &F, [&codec, op](int u, const std::vector<int>& s) {
    auto a = codec.decode(u, s[0]);
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = op(a[i]);
    return codec.encode(u, r);
  });
}

// ---------------------------------------------------------------- power object

PowerObject power_object(const Sheaf& F) {
  const FiniteSpace& X = F.space();
  PowerObject P;
  P.sheaf = Sheaf(X, "P(" + F.name() + ")");
  P.bySection.resize(X.open_count());
  for (int u = 0; u < X.open_count(); ++u) {
    P.bySection[u] = enumerate_subsheaves(F, X.open_at(u));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < P.bySection[u].size(); ++i)
      names.push_back("S" + std::to_string(i));
    P.sheaf.set_sections(u, std::move(names));
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(P.sheaf.card(u));
      for (int s = 0; s < P.sheaf.card(u); ++s)
        t[s] = P.index_of(v, P.bySection[u][s].restricted(X.open_at(v)));
      P.sheaf.set_restriction(u, v, std::move(t));
    }
  P.sheaf.check();
  return P;
}

int PowerObject::index_of(int openIdx, const Subsheaf& S) const {
  const auto& list = bySection[openIdx];
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i].equals_on(S, S.domain)) return static_cast<int>(i);
  throw ValidationError("internal: subsheaf not found in power object");
}

// ---------------------------------------------------------------- ring structure

int RingStructure::numeral(int k, int fullOpenIdx) const {
  if (k < 0) throw SortError("negative numerals are not supported");
  int acc = zeroGlobal;
  for (int i = 0; i < k; ++i) acc = add->apply(fullOpenIdx, {acc, oneGlobal});
  return acc;
}

// ---------------------------------------------------------------- BaseEnv

const Sheaf* BaseEnv::sheaf(const std::string& n) const {
  auto it = sheaves.find(n);
  if (it == sheaves.end()) throw ResolveError("unknown sheaf '" + n + "'");
  return it->second;
}

const SheafMorphism* BaseEnv::find_function(const std::string& name,
                                            const std::vector<const Sheaf*>& argSheaves) const {
  auto it = functions.find(name);
  if (it == functions.end()) throw ResolveError("unknown function symbol '" + name + "'");
  for (auto* m : it->second) {
    if (m->args.size() != argSheaves.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < argSheaves.size(); ++i)
      if (m->args[i] != argSheaves[i]) ok = false;
    if (ok) return m;
  }
  throw ResolveError("no overload of '" + name + "' matches the argument sheaves");
}

SymbolTable BaseEnv::symbols() const {
  SymbolTable st;
  auto sort_name = [&](const Sheaf* F) -> std::string {
    for (auto& [n, s] : sheaves)
      if (s == F) return n;
    throw ResolveError("sheaf '" + F->name() + "' is not registered in the environment");
  };
  for (auto& [n, s] : sheaves) {
    (void)s;
    st.sheafSorts.insert(n);
  }
  for (auto& [n, sc] : sectionConstants) st.constants[n] = Sort::sheaf(sort_name(sc.sheaf));
  for (auto& [n, m] : propConstants) {
    (void)m;
    st.constants[n] = Sort::omega();
  }
  for (auto& [n, sub] : subsheaves)
    st.constants[n] = Sort::power(Sort::sheaf(sort_name(sub->parent)));
  for (auto& [n, fns] : functions)
    for (auto* f : fns) {
      SymbolTable::FnSig sig;
      for (auto* a : f->args) sig.args.push_back(Sort::sheaf(sort_name(a)));
      sig.result = Sort::sheaf(sort_name(f->result));
      st.functions[n].push_back(std::move(sig));
    }
  for (auto& [n, j] : nuclei) {
    (void)j;
    st.nuclei.insert(n);
  }
  for (auto& [n, r] : rings) {
    (void)r;
    st.ringSorts.insert(n);
  }
  if (rings.count("O"))
    st.defaultRingSort = "O";
  else if (rings.size() == 1)
    st.defaultRingSort = rings.begin()->first;
  st.schemaBoundDefault = schemaBound;
  return st;
}

// ---------------------------------------------------------------- sheaf files

SheafFile parse_sheaf_file(const std::string& text, const FiniteSpace& X) {
  std::istringstream in(text);
  std::string line;
  std::string name = "sheaf";
  std::vector<std::vector<std::string>> secs(X.open_count());
  std::vector<bool> haveSecs(X.open_count(), false);
  std::map<std::pair<int, int>, std::map<std::string, std::string>> restr;
  SheafFile out;

  auto section_index = [&](int u, const std::string& s) {
    for (std::size_t i = 0; i < secs[u].size(); ++i)
      if (secs[u][i] == s) return static_cast<int>(i);
    throw ValidationError("sheaf file: unknown section '" + s + "' on open " + std::to_string(u));
  };

  std::map<std::string, std::vector<std::tuple<int, std::string, std::string, std::string>>> rawOps;

  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') continue;
    if (head == "sheaf") {
      std::string on;
      ls >> name >> on;  // "sheaf NAME on SPACE"; the space is supplied by the caller
    } else if (head == "sections") {
      std::string idx;
      ls >> idx;
      if (!idx.empty() && idx.back() == ':') idx.pop_back();
      int u = std::stoi(idx);
      if (u < 0 || u >= X.open_count()) throw ValidationError("sheaf file: bad open index " + idx);
      std::string s;
      while (ls >> s) secs[u].push_back(s);
      haveSecs[u] = true;
    } else if (head == "restrict") {
      std::string spec;
      ls >> spec;
      if (!spec.empty() && spec.back() == ':') spec.pop_back();
      auto arrow = spec.find("->");
      if (arrow == std::string::npos) throw ValidationError("sheaf file: bad restrict line");
      int u = std::stoi(spec.substr(0, arrow));
      int v = std::stoi(spec.substr(arrow + 2));
      std::string pair;
      while (ls >> pair) {
        auto a = pair.find("->");
        if (a == std::string::npos) throw ValidationError("sheaf file: bad restriction pair");
        restr[{u, v}][pair.substr(0, a)] = pair.substr(a + 2);
      }
    } else if (head == "op") {
      std::string opName, idx;
      ls >> opName >> idx;
      if (!idx.empty() && idx.back() == ':') idx.pop_back();
      int u = std::stoi(idx);
      std::string a, b, arrow, c;
      while (ls >> a >> b >> arrow >> c) {
        if (arrow != "->") throw ValidationError("sheaf file: bad op entry");
        rawOps[opName].emplace_back(u, a, b, c);
      }
    } else if (head == "const") {
      std::string cname, val;
      ls >> cname >> val;
      if (!cname.empty() && cname.back() == ':') cname.pop_back();
      out.constants[cname] = val;
    } else {
      throw ValidationError("sheaf file: unexpected line '" + line + "'");
    }
  }

  for (int u = 0; u < X.open_count(); ++u) {
    if (!haveSecs[u] && X.open_at(u) == 0) {
      secs[u] = {"*"};
      haveSecs[u] = true;
    }
    if (!haveSecs[u])
      throw ValidationError("sheaf file: missing sections for open " + std::to_string(u));
  }

  Sheaf F(X, name);
  for (int u = 0; u < X.open_count(); ++u) F.set_sections(u, secs[u]);
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (X.open_at(v) & ~X.open_at(u)) continue;
      std::vector<int> t(secs[u].size());
      if (u == v) {
        for (std::size_t s = 0; s < secs[u].size(); ++s) t[s] = static_cast<int>(s);
      } else if (secs[v].size() == 1) {
        std::fill(t.begin(), t.end(), 0);
      } else {
        auto it = restr.find({u, v});
        if (it == restr.end())
          throw ValidationError("sheaf file: missing restriction " + std::to_string(u) + "->" +
                                std::to_string(v));
        for (std::size_t s = 0; s < secs[u].size(); ++s) {
          auto jt = it->second.find(secs[u][s]);
          if (jt == it->second.end())
            throw ValidationError("sheaf file: restriction " + std::to_string(u) + "->" +
                                  std::to_string(v) + " misses section '" + secs[u][s] + "'");
          t[s] = section_index(v, jt->second);
        }
      }
      F.set_restriction(u, v, std::move(t));
    }
  F.check();
  out.sheaf = std::move(F);

  for (auto& [opName, entries] : rawOps) {
    std::vector<std::vector<int>> tables(X.open_count());
    for (int u = 0; u < X.open_count(); ++u)
      tables[u].assign(secs[u].size() * secs[u].size(), -1);
    for (auto& [u, a, b, c] : entries)
      tables[u][section_index(u, a) * secs[u].size() + section_index(u, b)] =
          section_index(u, c);
    for (int u = 0; u < X.open_count(); ++u)
      for (int e : tables[u])
        if (e < 0)
          throw ValidationError("sheaf file: op '" + opName + "' table incomplete on open " +
                                std::to_string(u));
    out.ops[opName] = std::move(tables);
  }
  return out;
}

}  // namespace toposforge
