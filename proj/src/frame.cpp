#include "toposforge/frame.hpp"

#include <algorithm>
#include <sstream>

namespace toposforge {

// ---------------------------------------------------------------- FiniteSpace

FiniteSpace FiniteSpace::validate(std::vector<std::string> points, std::vector<Mask> opens) {
  if (points.size() > 64) throw ValidationError("at most 64 points supported");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = i + 1; k < points.size(); ++k)
      if (points[i] == points[k]) throw ValidationError("duplicate point name '" + points[i] + "'");

  FiniteSpace X;
  X.points_ = std::move(points);
  X.full_ = X.points_.empty() ? 0 : (X.points_.size() == 64 ? ~Mask{0} : bit(X.points_.size()) - 1);

  std::sort(opens.begin(), opens.end(), mask_less);
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());

  auto fmt = [&](Mask m) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < static_cast<int>(X.points_.size()); ++i)
      if (has(m, i)) {
        if (!first) s += " ";
        s += X.points_[i];
        first = false;
      }
    return s + "}";
  };

  for (Mask m : opens)
    if (m & ~X.full_) throw ValidationError("open " + fmt(m & X.full_) + " mentions unknown points");
  if (opens.empty() || opens.front() != 0)
    throw ValidationError("not a topology: empty set missing");
  if (opens.back() != X.full_) throw ValidationError("not a topology: full set missing");
  for (std::size_t i = 0; i < opens.size(); ++i)
    for (std::size_t k = i + 1; k < opens.size(); ++k) {
      Mask u = opens[i] | opens[k];
      Mask v = opens[i] & opens[k];
      if (!std::binary_search(opens.begin(), opens.end(), u, mask_less))
        throw ValidationError("not a topology: union of " + fmt(opens[i]) + " and " + fmt(opens[k]) +
                              " missing");
      if (!std::binary_search(opens.begin(), opens.end(), v, mask_less))
        throw ValidationError("not a topology: intersection of " + fmt(opens[i]) + " and " +
                              fmt(opens[k]) + " missing");
    }

  X.opens_ = std::move(opens);
  for (int i = 0; i < static_cast<int>(X.opens_.size()); ++i) X.open_index_[X.opens_[i]] = i;

  X.min_open_.resize(X.points_.size());
  for (int p = 0; p < X.point_count(); ++p) {
    Mask m = X.full_;
    for (Mask u : X.opens_)
      if (has(u, p)) m &= u;
    X.min_open_[p] = m;
  }
  return X;
}

FiniteSpace FiniteSpace::from_file_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> points;
  std::vector<Mask> opens;
  std::map<std::string, int> idx;
  bool sawPoints = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') continue;
    if (head == "points:") {
      std::string p;
      while (ls >> p) {
        idx[p] = static_cast<int>(points.size());
        points.push_back(p);
      }
      sawPoints = true;
    } else if (head == "open:") {
      if (!sawPoints) throw ValidationError("space file: 'points:' line must come first");
      Mask m = 0;
      std::string p;
      while (ls >> p) {
        auto it = idx.find(p);
        if (it == idx.end()) throw ValidationError("space file: unknown point '" + p + "'");
        m |= bit(it->second);
      }
      opens.push_back(m);
    } else {
      throw ValidationError("space file: unexpected line '" + line + "'");
    }
  }
  if (!sawPoints) throw ValidationError("space file: missing 'points:' line");
  return validate(std::move(points), std::move(opens));
}

FiniteSpace FiniteSpace::discrete(std::vector<std::string> points) {
  int n = static_cast<int>(points.size());
  std::vector<Mask> opens;
  for (Mask m = 0;; ++m) {
    opens.push_back(m);
    if (m == (n == 0 ? 0 : bit(n) - 1)) break;
  }
  return validate(std::move(points), std::move(opens));
}

FiniteSpace FiniteSpace::indiscrete(std::vector<std::string> points) {
  int n = static_cast<int>(points.size());
  std::vector<Mask> opens = {0};
  if (n > 0) opens.push_back(bit(n) - 1);
  return validate(std::move(points), std::move(opens));
}

FiniteSpace FiniteSpace::sierpinski() {
  return validate({"eta", "sigma"}, {0, 1, 3});
}

int FiniteSpace::index_of(Mask m) const {
  auto it = open_index_.find(m);
  if (it == open_index_.end())
    throw ValidationError("not an open of the space: " + format_mask(m));
  return it->second;
}

int FiniteSpace::point_index(const std::string& name) const {
  for (int i = 0; i < point_count(); ++i)
    if (points_[i] == name) return i;
  throw ResolveError("unknown point '" + name + "'");
}

Mask FiniteSpace::interior(Mask m) const {
  Mask r = 0;
  for (Mask u : opens_)
    if ((u & ~m) == 0) r |= u;
  return r;
}

Mask FiniteSpace::closure(Mask m) const { return full_ & ~interior(full_ & ~m); }

Mask FiniteSpace::heyting(Mask u, Mask v) const { return interior((full_ & ~u) | v); }

std::vector<Mask> FiniteSpace::components(Mask u) const {
  std::vector<Mask> comps;
  Mask left = u;
  while (left) {
    int seed = __builtin_ctzll(left);
    Mask comp = bit(seed);
    bool grew = true;
    while (grew) {
      grew = false;
      for (int p = 0; p < point_count(); ++p) {
        if (!has(u, p) || has(comp, p)) continue;
        // attach p when its minimal open meets the minimal opens of the component
        for (int q = 0; q < point_count(); ++q) {
          if (!has(comp, q)) continue;
          if (min_open_[p] & min_open_[q]) {
            comp |= bit(p);
            grew = true;
            break;
          }
        }
      }
    }
    comps.push_back(comp);
    left &= ~comp;
  }
  std::sort(comps.begin(), comps.end(),
            [](Mask a, Mask b) { return __builtin_ctzll(a) < __builtin_ctzll(b); });
  return comps;
}

std::string FiniteSpace::format_mask(Mask m) const {
  if (m == full_ && !points_.empty()) return "X";
  if (m == 0) return "{}";
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < point_count(); ++i)
    if (has(m, i)) {
      if (!first) s += " ";
      s += points_[i];
      first = false;
    }
  return s + "}";
}

const Frame& FiniteSpace::opens_frame() const {
  if (!opens_frame_) opens_frame_ = std::make_shared<Frame>(Frame::opens_of(*this));
  return *opens_frame_;
}

// ---------------------------------------------------------------- Frame

Frame Frame::from_leq(int n, const std::vector<std::vector<bool>>& leq,
                      std::vector<std::string> labels) {
  Frame L;
  L.n_ = n;
  L.leq_.assign(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) L.leq_[a][b] = leq[a][b];
  for (int a = 0; a < n; ++a) {
    if (!L.leq_[a][a]) throw ValidationError("order not reflexive");
    for (int b = 0; b < n; ++b) {
      if (a != b && L.leq_[a][b] && L.leq_[b][a]) throw ValidationError("order not antisymmetric");
      for (int c = 0; c < n; ++c)
        if (L.leq_[a][b] && L.leq_[b][c] && !L.leq_[a][c])
          throw ValidationError("order not transitive");
    }
  }
  auto the_meet = [&](int a, int b) {
    int best = -1;
    for (int c = 0; c < n; ++c) {
      if (!L.leq_[c][a] || !L.leq_[c][b]) continue;
      if (best < 0 || L.leq_[best][c]) best = c;
    }
    if (best < 0) throw ValidationError("lattice has no meet");
    for (int c = 0; c < n; ++c)
      if (L.leq_[c][a] && L.leq_[c][b] && !L.leq_[c][best])
        throw ValidationError("meet not unique: not a lattice");
    return best;
  };
  auto the_join = [&](int a, int b) {
    int best = -1;
    for (int c = 0; c < n; ++c) {
      if (!L.leq_[a][c] || !L.leq_[b][c]) continue;
      if (best < 0 || L.leq_[c][best]) best = c;
    }
    if (best < 0) throw ValidationError("lattice has no join");
    for (int c = 0; c < n; ++c)
      if (L.leq_[a][c] && L.leq_[b][c] && !L.leq_[best][c])
        throw ValidationError("join not unique: not a lattice");
    return best;
  };
  L.meet_.assign(n, std::vector<int>(n, 0));
  L.join_.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      L.meet_[a][b] = the_meet(a, b);
      L.join_[a][b] = the_join(a, b);
    }
  // bottom/top
  L.bottom_ = 0;
  L.top_ = 0;
  for (int a = 0; a < n; ++a) {
    if (L.leq_[a][L.bottom_]) L.bottom_ = a;
    if (L.leq_[L.top_][a]) L.top_ = a;
  }
  for (int a = 0; a < n; ++a)
    if (!L.leq_[L.bottom_][a] || !L.leq_[a][L.top_])
      throw ValidationError("lattice not bounded");
  // distributivity; finite distributive lattices are frames
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (L.meet_[a][L.join_[b][c]] != L.join_[L.meet_[a][b]][L.meet_[a][c]])
          throw ValidationError("lattice not distributive");
  L.labels_ = std::move(labels);
  if (L.labels_.empty())
    for (int a = 0; a < n; ++a) L.labels_.push_back("e" + std::to_string(a));
  return L;
}

Frame Frame::opens_of(const FiniteSpace& X) {
  int n = X.open_count();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) leq[a][b] = (X.open_at(a) & ~X.open_at(b)) == 0;
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) labels.push_back(X.format_mask(X.open_at(a)));
  return from_leq(n, leq, std::move(labels));
}

int Frame::sup(const std::vector<int>& xs) const {
  int r = bottom_;
  for (int x : xs) r = join_[r][x];
  return r;
}

int Frame::heyting(int a, int b) const {
  int r = bottom_;
  for (int c = 0; c < n_; ++c)
    if (leq_[meet_[c][a]][b]) r = join_[r][c];
  return r;
}

// ---------------------------------------------------------------- nuclei

bool check_nucleus(const Nucleus& j) {
  const Frame& L = *j.frame;
  if (static_cast<int>(j.map.size()) != L.size()) return false;
  for (int a = 0; a < L.size(); ++a) {
    if (!L.leq(a, j.map[a])) return false;
    if (j.map[j.map[a]] != j.map[a]) return false;
    for (int b = 0; b < L.size(); ++b)
      if (j.map[L.meet(a, b)] != L.meet(j.map[a], j.map[b])) return false;
  }
  return true;
}

Nucleus nucleus_identity(const Frame& L) {
  Nucleus j;
  j.frame = &L;
  j.map.resize(L.size());
  for (int a = 0; a < L.size(); ++a) j.map[a] = a;
  j.label = "identity";
  return j;
}

static Nucleus spatial(const FiniteSpace& X, const std::string& label,
                       const std::function<Mask(Mask)>& f) {
  const Frame& L = X.opens_frame();
  Nucleus j;
  j.frame = &L;
  j.label = label;
  j.map.resize(L.size());
  for (int a = 0; a < L.size(); ++a) j.map[a] = X.index_of(f(X.open_at(a)));
  return j;
}

Nucleus nucleus_open(const FiniteSpace& X, Mask u0) {
  X.index_of(u0);
  return spatial(X, "open " + X.format_mask(u0),
                 [&](Mask v) { return X.interior((X.full() & ~u0) | v); });
}

Nucleus nucleus_closed(const FiniteSpace& X, Mask complementOpen) {
  X.index_of(complementOpen);
  return spatial(X, "closed ~" + X.format_mask(complementOpen),
                 [&](Mask v) { return v | complementOpen; });
}

Nucleus nucleus_negneg(const FiniteSpace& X) {
  return spatial(X, "negneg", [&](Mask v) { return X.interior(X.closure(v)); });
}

Nucleus nucleus_point(const FiniteSpace& X, int point) {
  return spatial(X, "point " + X.points()[point], [&](Mask v) {
    if (has(v, point)) return X.full();
    return X.full() & ~X.closure(bit(point));
  });
}

Sublocale sublocale_frame(const Nucleus& j) {
  const Frame& L = *j.frame;
  Sublocale S;
  S.parent = &L;
  for (int a = 0; a < L.size(); ++a)
    if (j.map[a] == a) S.fixed.push_back(a);
  int m = static_cast<int>(S.fixed.size());
  std::vector<std::vector<bool>> leq(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) leq[a][b] = L.leq(S.fixed[a], S.fixed[b]);
  std::vector<std::string> labels;
  for (int a : S.fixed) labels.push_back(L.label(a));
  S.frame = Frame::from_leq(m, leq, std::move(labels));
  S.parent_to_sub.assign(L.size(), -1);
  for (int a = 0; a < L.size(); ++a) {
    int ja = j.map[a];
    for (int s = 0; s < m; ++s)
      if (S.fixed[s] == ja) S.parent_to_sub[a] = s;
  }
  return S;
}

std::vector<int> points_of_frame(const Frame& L) {
  // A completely prime filter of a finite frame is the up-set of an element m
  // with m ≰ sup{u : m ≰ u}.
  std::vector<int> pts;
  for (int m = 0; m < L.size(); ++m) {
    std::vector<int> below;
    for (int u = 0; u < L.size(); ++u)
      if (!L.leq(m, u)) below.push_back(u);
    int s = L.sup(below);
    if (!L.leq(m, s)) pts.push_back(m);
  }
  return pts;
}

}  // namespace toposforge
