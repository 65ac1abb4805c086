#include "toposforge/finring.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace toposforge {

// ---------------------------------------------------------------- FinRing

void FinRing::check_axioms() const {
  auto fail = [&](const std::string& m) { throw ValidationError("ring axioms: " + m); };
  for (int a = 0; a < n_; ++a) {
    if (add_[a][zero_] != a) fail("additive identity");
    if (mul_[a][one_] != a) fail("multiplicative identity");
    if (add_[a][neg_[a]] != zero_) fail("additive inverse");
    for (int b = 0; b < n_; ++b) {
      if (add_[a][b] != add_[b][a]) fail("addition not commutative");
      if (mul_[a][b] != mul_[b][a]) fail("multiplication not commutative");
      for (int c = 0; c < n_; ++c) {
        if (add_[add_[a][b]][c] != add_[a][add_[b][c]]) fail("addition not associative");
        if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) fail("multiplication not associative");
        if (mul_[a][add_[b][c]] != add_[mul_[a][b]][mul_[a][c]]) fail("distributivity");
      }
    }
  }
}

FinRing FinRing::from_tables(std::vector<std::string> names, std::vector<std::vector<int>> add,
                             std::vector<std::vector<int>> mul) {
  FinRing R;
  R.n_ = static_cast<int>(names.size());
  if (R.n_ == 0 || R.n_ > 64) throw ValidationError("ring size out of range");
  R.names_ = std::move(names);
  R.add_ = std::move(add);
  R.mul_ = std::move(mul);
  // locate zero and one
  int zero = -1, one = -1;
  for (int e = 0; e < R.n_; ++e) {
    bool isZero = true, isOne = true;
    for (int a = 0; a < R.n_; ++a) {
      if (R.add_[a][e] != a) isZero = false;
      if (R.mul_[a][e] != a) isOne = false;
    }
    if (isZero) zero = e;
    if (isOne) one = e;
  }
  if (zero < 0 || one < 0) throw ValidationError("ring has no zero or no one");
  R.zero_ = zero;
  R.one_ = one;
  R.neg_.assign(R.n_, -1);
  for (int a = 0; a < R.n_; ++a)
    for (int b = 0; b < R.n_; ++b)
      if (R.add_[a][b] == zero) R.neg_[a] = b;
  R.check_axioms();
  return R;
}

FinRing FinRing::zmod(int n) {
  if (n < 1 || n > 64) throw ValidationError("zmod size out of range");
  std::vector<std::string> names;
  std::vector<std::vector<int>> add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      add[a][b] = (a + b) % n;
      mul[a][b] = (a * b) % n;
    }
  FinRing R = from_tables(std::move(names), std::move(add), std::move(mul));
  R.spec_ = "zmod " + std::to_string(n);
  return R;
}

FinRing FinRing::zero_ring() {
  FinRing R = zmod(1);
  R.spec_ = "zmod 1";
  return R;
}

FinRing FinRing::product(const FinRing& A, const FinRing& B) {
  int n = A.size() * B.size();
  if (n > 64) throw ValidationError("product ring too large");
  std::vector<std::string> names;
  std::vector<std::vector<int>> add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  auto code = [&](int a, int b) { return a * B.size() + b; };
  for (int a = 0; a < A.size(); ++a)
    for (int b = 0; b < B.size(); ++b)
      names.push_back("(" + A.elem_name(a) + "," + B.elem_name(b) + ")");
  for (int a = 0; a < A.size(); ++a)
    for (int b = 0; b < B.size(); ++b)
      for (int c = 0; c < A.size(); ++c)
        for (int d = 0; d < B.size(); ++d) {
          add[code(a, b)][code(c, d)] = code(A.add(a, c), B.add(b, d));
          mul[code(a, b)][code(c, d)] = code(A.mul(a, c), B.mul(b, d));
        }
  FinRing R = from_tables(std::move(names), std::move(add), std::move(mul));
  R.spec_ = "product (" + A.spec() + ") (" + B.spec() + ")";
  return R;
}

namespace {

std::string poly_name(const std::vector<int>& coeffs, const FinRing& base) {
  std::string s;
  for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d) {
    int c = coeffs[d];
    if (c == base.zero()) continue;
    std::string t;
    if (d == 0) {
      t = base.elem_name(c);
    } else {
      if (c != base.one()) t = base.elem_name(c) + "*";
      t += "x";
      if (d > 1) t += "^" + std::to_string(d);
    }
    if (!s.empty()) s += "+";
    s += t;
  }
  return s.empty() ? base.elem_name(base.zero()) : s;
}

std::string format_poly_spec(const std::vector<int>& coeffs) {
  std::string s;
  for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d) {
    if (coeffs[d] == 0) continue;
    std::string t;
    if (d == 0)
      t = std::to_string(coeffs[d]);
    else {
      if (coeffs[d] != 1) t = std::to_string(coeffs[d]) + "*";
      t += "x";
      if (d > 1) t += "^" + std::to_string(d);
    }
    if (!s.empty()) s += "+";
    s += t;
  }
  return s.empty() ? "0" : s;
}

}  // namespace

FinRing FinRing::polyquot(const FinRing& base, const std::vector<int>& monic) {
  int deg = static_cast<int>(monic.size()) - 1;
  if (deg < 1) throw ValidationError("polyquot: modulus must have degree >= 1");
  if (monic[deg] != base.one()) throw ValidationError("polyquot: modulus must be monic");
  int n = 1;
  for (int i = 0; i < deg; ++i) {
    n *= base.size();
    if (n > 64) throw ValidationError("polyquot ring too large");
  }
  // elements: coefficient tuples low-to-high, degree < deg
  auto decode = [&](int code) {
    std::vector<int> c(deg);
    for (int i = 0; i < deg; ++i) {
      c[i] = code % base.size();
      code /= base.size();
    }
    return c;
  };
  auto encode = [&](const std::vector<int>& c) {
    int code = 0;
    for (int i = deg - 1; i >= 0; --i) code = code * base.size() + c[i];
    return code;
  };
  auto reduce = [&](std::vector<int> c) {
    for (int d = static_cast<int>(c.size()) - 1; d >= deg; --d) {
      int lead = c[d];
      if (lead == base.zero()) continue;
      for (int i = 0; i <= deg; ++i)
        c[d - deg + i] = base.sub(c[d - deg + i], base.mul(lead, monic[i]));
    }
    c.resize(deg);
    return c;
  };
  std::vector<std::string> names;
  for (int code = 0; code < n; ++code) names.push_back(poly_name(decode(code), base));
  std::vector<std::vector<int>> add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto ca = decode(a), cb = decode(b);
      std::vector<int> s(deg), p(2 * deg - 1, base.zero());
      for (int i = 0; i < deg; ++i) s[i] = base.add(ca[i], cb[i]);
      for (int i = 0; i < deg; ++i)
        for (int k = 0; k < deg; ++k) p[i + k] = base.add(p[i + k], base.mul(ca[i], cb[k]));
      add[a][b] = encode(s);
      mul[a][b] = encode(reduce(p));
    }
  FinRing R = from_tables(std::move(names), std::move(add), std::move(mul));
  std::vector<int> specPoly;
  for (int c : monic) specPoly.push_back(c);  // base is zmod p, names are digits
  R.spec_ = "polyquot (" + base.spec() + ") " + format_poly_spec(specPoly);
  return R;
}

namespace {

struct SpecParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit SpecParser(const std::string& str) : s(str) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }
  int integer() {
    skip();
    std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (b == pos) throw ValidationError("ring spec: expected integer");
    return std::stoi(s.substr(b, pos - b));
  }

  FinRing parse() {
    skip();
    if (eat("ring")) skip();
    return parse_ring();
  }

  FinRing parse_ring() {
    skip();
    if (eat("(")) {
      FinRing r = parse_ring();
      if (!eat(")")) throw ValidationError("ring spec: expected ')'");
      return r;
    }
    if (eat("zmod")) return FinRing::zmod(integer());
    if (eat("product")) {
      if (!eat("(")) throw ValidationError("ring spec: expected '('");
      FinRing a = parse_ring();
      if (!eat(")")) throw ValidationError("ring spec: expected ')'");
      if (!eat("(")) throw ValidationError("ring spec: expected '('");
      FinRing b = parse_ring();
      if (!eat(")")) throw ValidationError("ring spec: expected ')'");
      return FinRing::product(a, b);
    }
    if (eat("polyquot")) {
      if (!eat("(")) throw ValidationError("ring spec: expected '('");
      FinRing base = parse_ring();
      if (!eat(")")) throw ValidationError("ring spec: expected ')'");
      // polynomial: terms c*x^k, x^k, x, c joined by '+'
      skip();
      std::map<int, int> coeffs;
      int maxDeg = 0;
      while (true) {
        skip();
        int c = 1, d = 0;
        bool sawCoeff = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          c = integer();
          sawCoeff = true;
          if (pos < s.size() && s[pos] == '*') ++pos;
        }
        if (pos < s.size() && s[pos] == 'x') {
          ++pos;
          d = 1;
          if (pos < s.size() && s[pos] == '^') {
            ++pos;
            d = integer();
          }
        } else if (!sawCoeff) {
          throw ValidationError("ring spec: malformed polynomial");
        }
        coeffs[d] = (coeffs[d] + c);
        maxDeg = std::max(maxDeg, d);
        skip();
        if (pos < s.size() && s[pos] == '+')
          ++pos;
        else
          break;
      }
      std::vector<int> poly(maxDeg + 1, base.zero());
      for (auto& [d, c] : coeffs) {
        int e = base.zero();
        for (int i = 0; i < c; ++i) e = base.add(e, base.one());
        poly[d] = e;
      }
      return FinRing::polyquot(base, poly);
    }
    throw ValidationError("ring spec: expected zmod / product / polyquot");
  }
};

}  // namespace

FinRing FinRing::from_spec(const std::string& spec) {
  // accept the compact form zmodN
  std::string t = spec;
  if (t.rfind("zmod", 0) == 0 && t.size() > 4 &&
      std::all_of(t.begin() + 4, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    t = "zmod " + t.substr(4);
  SpecParser p(t);
  FinRing r = p.parse();
  p.skip();
  if (p.pos != t.size()) throw ValidationError("ring spec: trailing input");
  return r;
}

int FinRing::pow(int a, int k) const {
  int r = one_;
  for (int i = 0; i < k; ++i) r = mul_[r][a];
  return r;
}

int FinRing::elem_by_name(const std::string& n) const {
  for (int i = 0; i < n_; ++i)
    if (names_[i] == n) return i;
  throw ResolveError("unknown ring element '" + n + "'");
}

bool FinRing::is_nilpotent(int x) const {
  int p = x;
  for (int k = 1; k <= n_; ++k) {
    if (p == zero_) return true;
    p = mul_[p][x];
  }
  return false;
}

bool FinRing::is_invertible(int x) const {
  for (int y = 0; y < n_; ++y)
    if (mul_[x][y] == one_) return true;
  return false;
}

bool FinRing::is_reduced() const {
  for (int x = 0; x < n_; ++x)
    if (x != zero_ && is_nilpotent(x)) return false;
  return true;
}

Mask FinRing::units() const {
  Mask m = 0;
  for (int x = 0; x < n_; ++x)
    if (is_invertible(x)) m |= bit(x);
  return m;
}

bool FinRing::is_local() const {
  if (n_ == 1) return false;
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y)
      if (is_invertible(add_[x][y]) && !is_invertible(x) && !is_invertible(y)) return false;
  return true;
}

// ---------------------------------------------------------------- RingHom

RingHom RingHom::make(const FinRing& d, const FinRing& c, std::vector<int> m) {
  RingHom h;
  h.dom = &d;
  h.cod = &c;
  h.map = std::move(m);
  if (static_cast<int>(h.map.size()) != d.size()) throw ValidationError("ring hom: bad map size");
  if (h.map[d.one()] != c.one()) throw ValidationError("ring hom: 1 not preserved");
  for (int a = 0; a < d.size(); ++a)
    for (int b = 0; b < d.size(); ++b) {
      if (h.map[d.add(a, b)] != c.add(h.map[a], h.map[b]))
        throw ValidationError("ring hom: addition not preserved");
      if (h.map[d.mul(a, b)] != c.mul(h.map[a], h.map[b]))
        throw ValidationError("ring hom: multiplication not preserved");
    }
  return h;
}

RingHom RingHom::identity(const FinRing& r) {
  std::vector<int> m(r.size());
  std::iota(m.begin(), m.end(), 0);
  return make(r, r, std::move(m));
}

// ---------------------------------------------------------------- ideals

Mask ideal_closure(const FinRing& R, Mask gens) {
  Mask s = gens | bit(R.zero());
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < R.size(); ++a) {
      if (!has(s, a)) continue;
      for (int b = 0; b < R.size(); ++b) {
        if (has(s, b)) {
          int c = R.add(a, b);
          if (!has(s, c)) {
            s |= bit(c);
            grew = true;
          }
        }
        int d = R.mul(b, a);
        if (!has(s, d)) {
          s |= bit(d);
          grew = true;
        }
      }
    }
  }
  return s;
}

bool is_ideal(const FinRing& R, Mask m) {
  if (!has(m, R.zero())) return false;
  for (int a = 0; a < R.size(); ++a) {
    if (!has(m, a)) continue;
    for (int b = 0; b < R.size(); ++b) {
      if (has(m, b) && !has(m, R.add(a, b))) return false;
      if (!has(m, R.mul(b, a))) return false;
    }
  }
  return true;
}

bool is_prime_ideal(const FinRing& R, Mask m) {
  if (!is_ideal(R, m)) return false;
  if (has(m, R.one())) return false;
  for (int a = 0; a < R.size(); ++a)
    for (int b = 0; b < R.size(); ++b)
      if (has(m, R.mul(a, b)) && !has(m, a) && !has(m, b)) return false;
  return true;
}

Mask radical(const FinRing& R, Mask idealMembers) {
  Mask r = 0;
  for (int x = 0; x < R.size(); ++x) {
    int p = R.one();
    for (int k = 1; k <= R.size(); ++k) {
      p = R.mul(p, x);
      if (has(idealMembers, p)) {
        r |= bit(x);
        break;
      }
    }
  }
  if (!is_ideal(R, r)) throw ValidationError("radical is not an ideal (input not an ideal?)");
  return r;
}

bool is_radical_ideal(const FinRing& R, Mask m) {
  return is_ideal(R, m) && radical(R, m) == m;
}

std::vector<Mask> enumerate_ideals(const FinRing& R) {
  std::vector<Mask> out = {ideal_closure(R, 0)};
  std::size_t head = 0;
  while (head < out.size()) {
    Mask base = out[head++];
    for (int a = 0; a < R.size(); ++a) {
      if (has(base, a)) continue;
      Mask j = ideal_closure(R, base | bit(a));
      if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end(), mask_less);
  return out;
}

std::vector<Mask> enumerate_radical_ideals(const FinRing& R) {
  std::vector<Mask> out;
  for (Mask i : enumerate_ideals(R)) {
    Mask r = radical(R, i);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), mask_less);
  return out;
}

std::vector<Mask> enumerate_prime_ideals(const FinRing& R) {
  std::vector<Mask> out;
  for (Mask i : enumerate_ideals(R))
    if (is_prime_ideal(R, i)) out.push_back(i);
  std::sort(out.begin(), out.end(), mask_less);
  return out;
}

// ---------------------------------------------------------------- filters

bool filter_axioms(const FinRing& R, Mask m) {
  if (has(m, R.zero())) return false;
  if (!has(m, R.one())) return false;
  for (int x = 0; x < R.size(); ++x)
    for (int y = 0; y < R.size(); ++y) {
      bool inx = has(m, x), iny = has(m, y);
      if (has(m, R.mul(x, y)) != (inx && iny)) return false;
      if (has(m, R.add(x, y)) && !inx && !iny) return false;
    }
  return true;
}

std::vector<Mask> enumerate_filters(const FinRing& R) {
  const int UNKNOWN = 0, IN = 1, OUT = 2;
  std::vector<Mask> out;
  std::vector<int> st(R.size(), UNKNOWN);
  if (R.size() == 1) return out;  // 0 = 1 admits no filter
  st[R.zero()] = OUT;
  st[R.one()] = IN;

  std::function<bool(std::vector<int>&)> propagate = [&](std::vector<int>& s) {
    bool changed = true;
    auto set = [&](int e, int v) {
      if (s[e] == v) return true;
      if (s[e] != UNKNOWN) return false;
      s[e] = v;
      changed = true;
      return true;
    };
    while (changed) {
      changed = false;
      for (int x = 0; x < R.size(); ++x)
        for (int y = x; y < R.size(); ++y) {
          int p = R.mul(x, y);
          if (s[x] == IN && s[y] == IN && !set(p, IN)) return false;
          if (s[p] == IN && (!set(x, IN) || !set(y, IN))) return false;
          if ((s[x] == OUT || s[y] == OUT) && !set(p, OUT)) return false;
          int q = R.add(x, y);
          if (s[x] == OUT && s[y] == OUT && !set(q, OUT)) return false;
        }
    }
    return true;
  };

  std::function<void(std::vector<int>)> dfs = [&](std::vector<int> s) {
    if (!propagate(s)) return;
    int pick = -1;
    for (int e = 0; e < R.size(); ++e)
      if (s[e] == UNKNOWN) {
        pick = e;
        break;
      }
    if (pick < 0) {
      Mask m = 0;
      for (int e = 0; e < R.size(); ++e)
        if (s[e] == IN) m |= bit(e);
      if (filter_axioms(R, m) && std::find(out.begin(), out.end(), m) == out.end())
        out.push_back(m);
      return;
    }
    std::vector<int> s1 = s;
    s1[pick] = IN;
    dfs(std::move(s1));
    s[pick] = OUT;
    dfs(std::move(s));
  };
  dfs(st);
  std::sort(out.begin(), out.end(), mask_less);
  return out;
}

// ---------------------------------------------------------------- localization

LocRing localize(const FinRing& R, Mask S) {
  if (!has(S, R.one())) throw ValidationError("localization: 1 must be in S");
  for (int a = 0; a < R.size(); ++a)
    for (int b = 0; b < R.size(); ++b)
      if (has(S, a) && has(S, b) && !has(S, R.mul(a, b)))
        throw ValidationError("localization: S not multiplicatively closed");

  std::vector<int> svals;
  for (int s = 0; s < R.size(); ++s)
    if (has(S, s)) svals.push_back(s);

  auto related = [&](int a, int s, int b, int t) {
    int lhs = R.sub(R.mul(a, t), R.mul(b, s));
    for (int u : svals)
      if (R.mul(u, lhs) == R.zero()) return true;
    return false;
  };

  // union-find over pairs (a, s)
  std::map<std::pair<int, int>, int> pairId;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < R.size(); ++a)
    for (int s : svals) {
      pairId[{a, s}] = static_cast<int>(pairs.size());
      pairs.emplace_back(a, s);
    }
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t k = i + 1; k < pairs.size(); ++k)
      if (related(pairs[i].first, pairs[i].second, pairs[k].first, pairs[k].second)) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(k));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<int> classIdx(pairs.size(), -1);
  std::vector<std::pair<int, int>> reps;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (classIdx[r] < 0) {
      classIdx[r] = static_cast<int>(reps.size());
      reps.push_back(pairs[r]);
    }
    classIdx[i] = classIdx[r];
  }

  int n = static_cast<int>(reps.size());
  std::vector<std::string> names;
  for (auto& [a, s] : reps)
    names.push_back(s == R.one() ? R.elem_name(a) : R.elem_name(a) + "/" + R.elem_name(s));
  std::vector<std::vector<int>> add(n, std::vector<int>(n)), mul(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      auto [a, s] = reps[i];
      auto [b, t] = reps[k];
      add[i][k] = classIdx[pairId[{R.add(R.mul(a, t), R.mul(b, s)), R.mul(s, t)}]];
      mul[i][k] = classIdx[pairId[{R.mul(a, b), R.mul(s, t)}]];
    }

  LocRing out;
  out.ring = FinRing::from_tables(std::move(names), std::move(add), std::move(mul));
  out.map.resize(R.size());
  for (int a = 0; a < R.size(); ++a) out.map[a] = classIdx[pairId[{a, R.one()}]];
  out.classOf.assign(R.size(), std::vector<int>(R.size(), -1));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.classOf[pairs[i].first][pairs[i].second] = classIdx[i];
  return out;
}

// ---------------------------------------------------------------- FinModule

void FinModule::check_axioms() const {
  const FinRing& R = ring_;
  auto fail = [&](const std::string& m) { throw ValidationError("module axioms: " + m); };
  for (int a = 0; a < n_; ++a) {
    if (add_[a][zero_] != a) fail("additive identity");
    bool hasInv = false;
    for (int b = 0; b < n_; ++b)
      if (add_[a][b] == zero_) hasInv = true;
    if (!hasInv) fail("additive inverse");
    if (smul_[R.one()][a] != a) fail("unit action");
    for (int b = 0; b < n_; ++b) {
      if (add_[a][b] != add_[b][a]) fail("addition not commutative");
      for (int c = 0; c < n_; ++c)
        if (add_[add_[a][b]][c] != add_[a][add_[b][c]]) fail("addition not associative");
    }
  }
  for (int r = 0; r < R.size(); ++r)
    for (int s = 0; s < R.size(); ++s)
      for (int a = 0; a < n_; ++a) {
        if (smul_[R.mul(r, s)][a] != smul_[r][smul_[s][a]]) fail("action not associative");
        if (smul_[R.add(r, s)][a] != add_[smul_[r][a]][smul_[s][a]]) fail("action not additive");
        for (int b = 0; b < n_; ++b)
          if (smul_[r][add_[a][b]] != add_[smul_[r][a]][smul_[r][b]]) fail("action not linear");
      }
}

FinModule FinModule::from_tables(const FinRing& R, std::vector<std::string> names,
                                 std::vector<std::vector<int>> add,
                                 std::vector<std::vector<int>> smul) {
  FinModule M;
  M.ring_ = R;
  M.n_ = static_cast<int>(names.size());
  M.names_ = std::move(names);
  M.add_ = std::move(add);
  M.smul_ = std::move(smul);
  int zero = -1;
  for (int e = 0; e < M.n_; ++e) {
    bool isZero = true;
    for (int a = 0; a < M.n_; ++a)
      if (M.add_[a][e] != a) isZero = false;
    if (isZero) zero = e;
  }
  if (zero < 0) throw ValidationError("module has no zero");
  M.zero_ = zero;
  M.check_axioms();
  return M;
}

FinModule FinModule::ring_as_module(const FinRing& R) {
  std::vector<std::string> names;
  for (int i = 0; i < R.size(); ++i) names.push_back(R.elem_name(i));
  std::vector<std::vector<int>> add(R.size(), std::vector<int>(R.size()));
  std::vector<std::vector<int>> smul(R.size(), std::vector<int>(R.size()));
  for (int a = 0; a < R.size(); ++a)
    for (int b = 0; b < R.size(); ++b) {
      add[a][b] = R.add(a, b);
      smul[a][b] = R.mul(a, b);
    }
  return from_tables(R, std::move(names), std::move(add), std::move(smul));
}

FinModule FinModule::zero_module(const FinRing& R) {
  return from_tables(R, {"0"}, {{0}}, std::vector<std::vector<int>>(R.size(), {0}));
}

FinModule FinModule::quotient_by_ideal(const FinRing& R, Mask ideal) {
  if (!is_ideal(R, ideal)) throw ValidationError("quotient: not an ideal");
  std::vector<int> cls(R.size(), -1);
  std::vector<int> reps;
  for (int a = 0; a < R.size(); ++a) {
    if (cls[a] >= 0) continue;
    int c = static_cast<int>(reps.size());
    for (int i = 0; i < R.size(); ++i)
      if (has(ideal, R.sub(a, i))) cls[i] = c;
    reps.push_back(a);
  }
  int n = static_cast<int>(reps.size());
  std::vector<std::string> names;
  for (int r : reps) names.push_back(R.elem_name(r));
  std::vector<std::vector<int>> add(n, std::vector<int>(n));
  std::vector<std::vector<int>> smul(R.size(), std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) add[i][k] = cls[R.add(reps[i], reps[k])];
  for (int r = 0; r < R.size(); ++r)
    for (int i = 0; i < n; ++i) smul[r][i] = cls[R.mul(r, reps[i])];
  return from_tables(R, std::move(names), std::move(add), std::move(smul));
}

int FinModule::elem_by_name(const std::string& n) const {
  for (int i = 0; i < n_; ++i)
    if (names_[i] == n) return i;
  throw ResolveError("unknown module element '" + n + "'");
}

Mask FinModule::submodule_closure(Mask gens) const {
  Mask s = gens | bit(zero_);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < n_; ++a) {
      if (!has(s, a)) continue;
      for (int b = 0; b < n_; ++b)
        if (has(s, b) && !has(s, add_[a][b])) {
          s |= bit(add_[a][b]);
          grew = true;
        }
      for (int r = 0; r < ring_.size(); ++r)
        if (!has(s, smul_[r][a])) {
          s |= bit(smul_[r][a]);
          grew = true;
        }
    }
  }
  return s;
}

bool FinModule::generated_by_at_most(int k) const {
  Mask full = n_ == 64 ? ~Mask{0} : bit(n_) - 1;
  std::function<bool(Mask, int, int)> rec = [&](Mask gens, int start, int left) {
    if (submodule_closure(gens) == full) return true;
    if (left == 0) return false;
    for (int e = start; e < n_; ++e)
      if (rec(gens | bit(e), e + 1, left - 1)) return true;
    return false;
  };
  return rec(0, 0, k);
}

FinModule FinModule::from_file(const std::string& text, const FinRing& R) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  std::string zeroName;
  std::vector<std::tuple<std::string, std::string, std::string>> addRaw;
  std::vector<std::tuple<std::string, std::string, std::string>> smulRaw;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') continue;
    if (head == "module") {
      // "module NAME over SPEC" is informational; the ring is supplied
    } else if (head == "elems:") {
      std::string e;
      while (ls >> e) names.push_back(e);
    } else if (head == "add:") {
      std::string a, b, arrow, c;
      while (ls >> a >> b >> arrow >> c) addRaw.emplace_back(a, b, c);
    } else if (head == "smul:") {
      std::string r, m, arrow, c;
      while (ls >> r >> m >> arrow >> c) smulRaw.emplace_back(r, m, c);
    } else {
      throw ValidationError("module file: unexpected line '" + line + "'");
    }
  }
  if (names.empty()) throw ValidationError("module file: no elements");
  auto idxOf = [&](const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw ValidationError("module file: unknown element '" + n + "'");
  };
  int n = static_cast<int>(names.size());
  std::vector<std::vector<int>> add(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> smul(R.size(), std::vector<int>(n, -1));
  for (auto& [a, b, c] : addRaw) add[idxOf(a)][idxOf(b)] = idxOf(c);
  for (auto& [r, m, c] : smulRaw) smul[R.elem_by_name(r)][idxOf(m)] = idxOf(c);
  for (auto& row : add)
    for (int e : row)
      if (e < 0) throw ValidationError("module file: incomplete add table");
  for (auto& row : smul)
    for (int e : row)
      if (e < 0) throw ValidationError("module file: incomplete smul table");
  return from_tables(R, std::move(names), std::move(add), std::move(smul));
}

// ---------------------------------------------------------------- ModuleHom

ModuleHom ModuleHom::make(const FinModule& d, const FinModule& c, std::vector<int> m) {
  ModuleHom h;
  h.dom = &d;
  h.cod = &c;
  h.map = std::move(m);
  if (static_cast<int>(h.map.size()) != d.size()) throw ValidationError("module hom: bad size");
  for (int a = 0; a < d.size(); ++a)
    for (int b = 0; b < d.size(); ++b)
      if (h.map[d.add(a, b)] != c.add(h.map[a], h.map[b]))
        throw ValidationError("module hom: not additive");
  for (int r = 0; r < d.ring().size(); ++r)
    for (int a = 0; a < d.size(); ++a)
      if (h.map[d.smul(r, a)] != c.smul(r, h.map[a]))
        throw ValidationError("module hom: not linear");
  return h;
}

bool ModuleHom::injective() const {
  std::vector<bool> seen(cod->size(), false);
  for (int a = 0; a < dom->size(); ++a) {
    if (seen[map[a]]) return false;
    seen[map[a]] = true;
  }
  return true;
}

bool ModuleHom::surjective() const {
  std::vector<bool> seen(cod->size(), false);
  for (int a = 0; a < dom->size(); ++a) seen[map[a]] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

LocModule localize_module(const FinRing& R, const FinModule& M, Mask S, const LocRing& RS) {
  std::vector<int> svals;
  for (int s = 0; s < R.size(); ++s)
    if (has(S, s)) svals.push_back(s);

  auto related = [&](int m, int s, int m2, int s2) {
    int lhs = M.add(M.smul(s2, m), M.smul(R.neg(s), m2));
    for (int u : svals)
      if (M.smul(u, lhs) == M.zero()) return true;
    return false;
  };

  std::map<std::pair<int, int>, int> pairId;
  std::vector<std::pair<int, int>> pairs;
  for (int m = 0; m < M.size(); ++m)
    for (int s : svals) {
      pairId[{m, s}] = static_cast<int>(pairs.size());
      pairs.emplace_back(m, s);
    }
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t k = i + 1; k < pairs.size(); ++k)
      if (related(pairs[i].first, pairs[i].second, pairs[k].first, pairs[k].second)) {
        int a = find(static_cast<int>(i)), b = find(static_cast<int>(k));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<int> classIdx(pairs.size(), -1);
  std::vector<std::pair<int, int>> reps;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    int r = find(static_cast<int>(i));
    if (classIdx[r] < 0) {
      classIdx[r] = static_cast<int>(reps.size());
      reps.push_back(pairs[r]);
    }
    classIdx[i] = classIdx[r];
  }

  LocModule out;
  out.size = static_cast<int>(reps.size());
  for (auto& [m, s] : reps)
    out.names.push_back(s == R.one() ? M.elem_name(m) : M.elem_name(m) + "/" + R.elem_name(s));
  out.classOf.assign(M.size(), std::vector<int>(R.size(), -1));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    out.classOf[pairs[i].first][pairs[i].second] = classIdx[i];
  out.zero = out.classOf[M.zero()][R.one()];
  out.add.assign(out.size, std::vector<int>(out.size));
  for (int i = 0; i < out.size; ++i)
    for (int k = 0; k < out.size; ++k) {
      auto [m, s] = reps[i];
      auto [m2, s2] = reps[k];
      out.add[i][k] = classIdx[pairId[{M.add(M.smul(s2, m), M.smul(s, m2)), R.mul(s, s2)}]];
    }
  out.smul.assign(RS.ring.size(), std::vector<int>(out.size));
  // scalars of the localized ring: pick any representative (a, t)
  for (int r = 0; r < RS.ring.size(); ++r) {
    int ra = -1, rt = -1;
    for (int a = 0; a < R.size() && ra < 0; ++a)
      for (int t : svals)
        if (RS.cls(a, t) == r) {
          ra = a;
          rt = t;
          break;
        }
    for (int i = 0; i < out.size; ++i) {
      auto [m, s] = reps[i];
      out.smul[r][i] = classIdx[pairId[{M.smul(ra, m), R.mul(rt, s)}]];
    }
  }
  return out;
}

// ---------------------------------------------------------------- Krull dimension

bool complementary_sequence_ok(const FinRing& R, const std::vector<int>& a,
                               const std::vector<int>& b) {
  int n = static_cast<int>(a.size()) - 1;
  Mask one = radical(R, ideal_closure(R, bit(R.one())));
  Mask first = radical(R, ideal_closure(R, bit(a[0]) | bit(b[0])));
  if (one & ~first) return false;
  for (int k = 0; k + 1 <= n; ++k) {
    Mask lhs = radical(R, ideal_closure(R, bit(R.mul(a[k], b[k]))));
    Mask rhs = radical(R, ideal_closure(R, bit(a[k + 1]) | bit(b[k + 1])));
    if (lhs & ~rhs) return false;
  }
  Mask last = radical(R, ideal_closure(R, bit(R.mul(a[n], b[n]))));
  Mask nil = radical(R, ideal_closure(R, 0));
  return (last & ~nil) == 0;
}

KrullResult krull_dim_leq(const FinRing& R, int n) {
  KrullResult res;
  if (n < -1) throw ValidationError("krull_dim_leq: n must be >= -1");
  if (n == -1) {
    res.ok = R.is_trivial();
    if (!res.ok) res.counterexample = std::vector<int>{};
    return res;
  }
  std::vector<int> a(n + 1, 0), b(n + 1, 0);
  std::function<bool(int)> searchB = [&](int i) {
    if (i == n + 1) return complementary_sequence_ok(R, a, b);
    for (int e = 0; e < R.size(); ++e) {
      b[i] = e;
      if (searchB(i + 1)) return true;
    }
    return false;
  };
  std::function<bool(int)> loopA = [&](int i) {
    if (i == n + 1) {
      if (searchB(0)) {
        res.witnesses.push_back({a, b});
        return true;
      }
      res.counterexample = a;
      return false;
    }
    for (int e = 0; e < R.size(); ++e) {
      a[i] = e;
      if (!loopA(i + 1)) return false;
    }
    return true;
  };
  res.ok = loopA(0);
  if (!res.ok) res.witnesses.clear();
  return res;
}

int classical_krull_dim(const FinRing& R) {
  auto primes = enumerate_prime_ideals(R);
  int best = -1;
  std::function<int(std::size_t)> chain = [&](std::size_t i) {
    int len = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (k == i) continue;
      if ((primes[i] & ~primes[k]) == 0 && primes[i] != primes[k])
        len = std::max(len, 1 + chain(k));
    }
    return len;
  };
  for (std::size_t i = 0; i < primes.size(); ++i) best = std::max(best, chain(i));
  return best;
}

std::optional<std::vector<int>> find_ring_isomorphism(const FinRing& A, const FinRing& B) {
  if (A.size() != B.size()) return std::nullopt;
  int n = A.size();
  std::vector<int> map(n, -1), used(n, 0);
  map[A.zero()] = B.zero();
  used[B.zero()] = 1;
  if (A.zero() != A.one()) {
    if (B.zero() == B.one()) return std::nullopt;
    map[A.one()] = B.one();
    used[B.one()] = 1;
  }
  std::function<bool()> consistent = [&]() {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (map[a] < 0 || map[b] < 0) continue;
        int s = A.add(a, b), p = A.mul(a, b);
        if (map[s] >= 0 && map[s] != B.add(map[a], map[b])) return false;
        if (map[p] >= 0 && map[p] != B.mul(map[a], map[b])) return false;
      }
    return true;
  };
  std::function<bool(int)> rec = [&](int a) {
    while (a < n && map[a] >= 0) ++a;
    if (a == n) return consistent();
    for (int t = 0; t < n; ++t) {
      if (used[t]) continue;
      map[a] = t;
      used[t] = 1;
      if (consistent() && rec(a + 1)) return true;
      map[a] = -1;
      used[t] = 0;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return map;
}

}  // namespace toposforge
