#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposforge/common.hpp"

namespace toposforge {

class Frame;

/// A finite topological space: points with a family of opens closed under
/// union and intersection. Opens are kept in canonical order (size, then
/// lexicographic point list) so every derived structure is deterministic.
class FiniteSpace {
public:
  static FiniteSpace validate(std::vector<std::string> points, std::vector<Mask> opens);
  static FiniteSpace from_file_text(const std::string& text);
  static FiniteSpace discrete(std::vector<std::string> points);
  static FiniteSpace indiscrete(std::vector<std::string> points);
  static FiniteSpace sierpinski();  // points {eta, sigma}, opens {∅, {eta}, X}

  int point_count() const { return static_cast<int>(points_.size()); }
  int open_count() const { return static_cast<int>(opens_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::vector<Mask>& opens() const { return opens_; }
  Mask full() const { return full_; }
  bool is_open(Mask m) const { return open_index_.count(m) > 0; }
  int index_of(Mask m) const;
  Mask open_at(int idx) const { return opens_[idx]; }
  Mask min_open(int point) const { return min_open_[point]; }
  int point_index(const std::string& name) const;

  Mask interior(Mask m) const;
  Mask closure(Mask m) const;
  Mask heyting(Mask u, Mask v) const;  // largest open W with W ∩ U ⊆ V
  bool is_dense(Mask v) const { return closure(v) == full_; }

  /// Connected components of an open in the subspace topology, canonically
  /// ordered by smallest member point.
  std::vector<Mask> components(Mask u) const;

  /// Specialization-closed covers are not needed: {min_open(x)}_{x∈U} is the
  /// finest cover of U and is what the gluing checks quantify over.
  std::string format_mask(Mask m) const;

  const Frame& opens_frame() const;

private:
  std::vector<std::string> points_;
  std::vector<Mask> opens_;
  std::map<Mask, int> open_index_;
  std::vector<Mask> min_open_;
  Mask full_ = 0;
  mutable std::shared_ptr<Frame> opens_frame_;
};

/// A finite frame: a bounded distributive lattice (hence a complete Heyting
/// algebra). Spatial frames index the opens of a space; abstract frames arise
/// as radical-ideal lattices. No operation here assumes spatiality.
class Frame {
public:
  static Frame from_leq(int n, const std::vector<std::vector<bool>>& leq,
                        std::vector<std::string> labels);
  static Frame opens_of(const FiniteSpace& X);

  int size() const { return n_; }
  bool leq(int a, int b) const { return leq_[a][b]; }
  int meet(int a, int b) const { return meet_[a][b]; }
  int join(int a, int b) const { return join_[a][b]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }
  int sup(const std::vector<int>& xs) const;
  int heyting(int a, int b) const;  // largest c with c ∧ a ≤ b
  const std::string& label(int a) const { return labels_[a]; }

private:
  int n_ = 0;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> meet_, join_;
  int bottom_ = 0, top_ = 0;
  std::vector<std::string> labels_;
};

/// A nucleus on a frame: inflationary, idempotent, meet-preserving.
/// Spatial nuclei act on the opens frame of a space.
struct Nucleus {
  const Frame* frame = nullptr;
  std::vector<int> map;
  std::string label;

  int apply(int a) const { return map[a]; }
};

bool check_nucleus(const Nucleus& j);

Nucleus nucleus_identity(const Frame& L);
Nucleus nucleus_open(const FiniteSpace& X, Mask u0);
/// The closed subset is given as the complement of an open.
Nucleus nucleus_closed(const FiniteSpace& X, Mask complementOpen);
Nucleus nucleus_negneg(const FiniteSpace& X);
Nucleus nucleus_point(const FiniteSpace& X, int point);

/// The fixed-point frame of a nucleus, with joins j(parent join).
struct Sublocale {
  const Frame* parent = nullptr;
  std::vector<int> fixed;          // parent indices of fixed elements, canonical order
  std::vector<int> parent_to_sub;  // parent index -> sub index of j(element)
  Frame frame;

  int project(int parentElem) const { return parent_to_sub[parentElem]; }
};

Sublocale sublocale_frame(const Nucleus& j);

/// Completely prime filters, each represented by its minimal element.
std::vector<int> points_of_frame(const Frame& L);

}  // namespace toposforge
