#pragma once

#include <deque>
#include <memory>

#include "toposforge/finring.hpp"
#include "toposforge/forcing.hpp"
#include "toposforge/frame.hpp"
#include "toposforge/sheaf.hpp"

namespace toposforge {

/// The frame of radical ideals of a finite ring: bottom √(0), top (1),
/// meet = intersection, join = radical of sum.
struct SpecFrame {
  const FinRing* ring = nullptr;
  std::vector<Mask> radicals;  // canonical order
  Frame frame;

  int index_of(Mask radicalIdeal) const;
  /// A small generating set of the radical ideal (for display).
  std::vector<int> generators(int idx) const;
};

SpecFrame spec_frame(const FinRing& A);

/// The spectrum as a finite space: points are the filters of A, opens the
/// unions of basic opens D(f), together with the isomorphism to the frame of
/// radical ideals (asserted on construction).
struct SpecSpace {
  const FinRing* ring = nullptr;
  std::vector<Mask> filters;  // canonical order; point i <-> filters[i]
  FiniteSpace space;
  std::vector<int> openOfRadical;  // spec-frame index -> open index
  std::vector<int> radicalOfOpen;  // open index -> spec-frame index

  Mask basic_open(int f) const;  // D(f) as a point mask
};

SpecSpace spec_space_of(const FinRing& A, const SpecFrame& SF);

/// Everything the forcing engine needs over Spec(A): the space, the constant
/// sheaf A, the structure sheaf O (localization of A at the generic filter,
/// open by open), the generic filter F, ring operations, and tilde modules.
/// Owns all of it with stable addresses.
class SpectrumContext {
public:
  explicit SpectrumContext(const FinRing& A);

  const FinRing& ring() const { return ring_; }
  const SpecFrame& frame() const { return specFrame_; }
  const SpecSpace& points() const { return specSpace_; }
  const FiniteSpace& space() const { return specSpace_.space; }
  const Sheaf& structure_sheaf() const { return *structureSheaf_; }
  const Sheaf& ring_constant_sheaf() const { return *constSheaf_; }
  const Subsheaf& generic_filter() const { return *genericFilter_; }
  const BaseEnv& env() const { return env_; }
  const LocRing& localization(int openIdx) const { return locs_[openIdx]; }

  /// Section of O over the full open that a ring element maps to.
  int global_section_of(int ringElem) const;
  /// Section of the constant sheaf over an open whose components all carry
  /// the same ring element.
  int constant_section(int openIdx, int ringElem) const;

  /// The quasicoherent module sheaf of M, registered under `name` with
  /// `add`/`smul` function symbols. M is copied and owned by the context.
  const Sheaf& tilde(const FinModule& M, const std::string& name);
  /// The subsheaf of tilde(M) induced by a submodule (given by its carrier).
  SubsheafPtr tilde_submodule(const std::string& tildeName, Mask submoduleCarrier);
  /// tilde of a module hom as a function symbol tildeDom -> tildeCod.
  const SheafMorphism& tilde_hom(const ModuleHom& h, const std::string& fnName,
                                 const std::string& tildeDom, const std::string& tildeCod);

  const FinModule& tilde_module(const std::string& tildeName) const;
  const LocModule& tilde_localization(const std::string& tildeName, int openIdx) const;

private:
  FinRing ring_;
  SpecFrame specFrame_;
  SpecSpace specSpace_;
  std::vector<Mask> sectionSets_;  // S_U per open: elements invertible on U
  std::vector<LocRing> locs_;
  std::unique_ptr<Sheaf> structureSheaf_, constSheaf_;
  SubsheafPtr genericFilter_;
  std::deque<SheafMorphism> morphisms_;
  BaseEnv env_;

  struct TildeData {
    std::unique_ptr<FinModule> module;
    std::vector<LocModule> locs;
    std::unique_ptr<Sheaf> sheaf;
  };
  std::map<std::string, TildeData> tildes_;
};

/// D(f) ⊨ "I ∩ F inhabited" implies f^n ∈ I on D(f) for some n ≤ |A|.
/// The ideal family is a comprehension formula in one free variable over the
/// constant sheaf A (constant parameters only; sorts beyond A are rejected).
struct GenericMetaReport {
  bool ok = true;
  std::string detail;
};

GenericMetaReport check_generic_metaproperty(SpectrumContext& ctx, const FormulaPtr& phi,
                                             const std::string& var);

/// The local spectrum of A over a local base R: the sub-poset of radical
/// ideals satisfying the forcing-evaluated membership condition, with joins
/// recomputed by the quasicoherator.
struct LocalSpecFrame {
  const FinRing* base = nullptr;
  const FinRing* algebra = nullptr;
  SpecFrame parent;
  std::vector<int> members;  // indices into parent.radicals
  Frame frame;
  Nucleus quasicoherator;  // on parent.frame

  int index_of(Mask radicalIdeal) const;
};

/// Evaluates the membership condition of a radical ideal over Spec(base).
bool local_spectrum_condition(const FinRing& R, const RingHom& phi, Mask radicalIdeal);

/// The quasicoherence condition in its disjunctive form over Spec(base):
/// ∀f:R ∀s:A. (f inv ⇒ s ∈ I) ⇒ ⋁_{n ≤ |A|} φ(f)ⁿ s ∈ I. For radical ideals
/// this is equivalent to the membership condition (tested, not assumed).
bool local_quasicoherence_condition(const FinRing& R, const RingHom& phi, Mask radicalIdeal);

LocalSpecFrame local_spectrum_frame(const FinRing& R, const RingHom& phi);

/// The quasicoherator: least fixed point of the generator iteration
/// I ↦ radical ideal generated by I ∪ { φ(f)·s : (f inv ⇒ s ∈ I) forced }.
Mask quasicoherator(const FinRing& R, const RingHom& phi, Mask radicalIdeal);

/// Forces the internal quasicoherence condition of a submodule subsheaf:
/// ∀f ∀s. (f inv ⇒ s ∈ G) ⇒ ⋁_{n ≤ |A|} fⁿ s ∈ G.
bool check_internal_quasicoherence(SpectrumContext& ctx, const std::string& tildeName,
                                   const SubsheafPtr& G);

}  // namespace toposforge
