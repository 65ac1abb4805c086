#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toposforge/common.hpp"
#include "toposforge/formula.hpp"
#include "toposforge/frame.hpp"

namespace toposforge {

/// A sheaf of finite sets on a finite space. Sections are indexed per open;
/// restriction tables exist for every inclusion of opens.
class Sheaf {
public:
  Sheaf() = default;
  Sheaf(const FiniteSpace& X, std::string name) : space_(&X), name_(std::move(name)) {
    secNames_.resize(X.open_count());
    restr_.assign(X.open_count(), std::vector<std::vector<int>>(X.open_count()));
  }

  const FiniteSpace& space() const { return *space_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int card(int openIdx) const { return static_cast<int>(secNames_[openIdx].size()); }
  const std::string& section_name(int openIdx, int s) const { return secNames_[openIdx][s]; }
  void set_sections(int openIdx, std::vector<std::string> names) {
    secNames_[openIdx] = std::move(names);
  }
  void set_restriction(int fromIdx, int toIdx, std::vector<int> table) {
    restr_[fromIdx][toIdx] = std::move(table);
  }

  int restrict_idx(int fromIdx, int toIdx, int s) const { return restr_[fromIdx][toIdx][s]; }
  int restrict_mask(Mask from, Mask to, int s) const {
    if (from == to) return s;
    return restrict_idx(space_->index_of(from), space_->index_of(to), s);
  }

  /// Functoriality and the gluing condition over the finest covers; throws
  /// ValidationError naming the violating cover or family.
  void check() const;

  int stalk_card(int point) const { return card(space_->index_of(space_->min_open(point))); }

private:
  const FiniteSpace* space_ = nullptr;
  std::string name_;
  std::vector<std::vector<std::string>> secNames_;
  std::vector<std::vector<std::vector<int>>> restr_;  // [from][to], to ⊆ from
};

/// A subsheaf of F|domain, stored per open with the locality invariant.
struct Subsheaf {
  const Sheaf* parent = nullptr;
  Mask domain = 0;
  std::vector<DynBitset> selected;  // indexed by open index; meaningful for opens ⊆ domain

  bool contains(int openIdx, int s) const { return selected[openIdx].test(s); }
  Subsheaf restricted(Mask newDomain) const;
  void check() const;  // closed under restriction + locality
  bool equals_on(const Subsheaf& o, Mask m) const;
  std::size_t hash() const;
};

using SubsheafPtr = std::shared_ptr<const Subsheaf>;

bool subsheaf_less(const Subsheaf& a, const Subsheaf& b);

/// All subsheaves of F|domain in canonical order.
std::vector<Subsheaf> enumerate_subsheaves(const Sheaf& F, Mask domain);

/// From per-point stalk subsets (compatible under restriction) to a subsheaf.
Subsheaf subsheaf_from_stalks(const Sheaf& F, Mask domain,
                              const std::vector<DynBitset>& perPoint);

/// The subsheaf generated by one section.
Subsheaf singleton_subsheaf(const Sheaf& F, Mask defOpen, int section);

/// Realize a subsheaf as a sheaf in its own right (sections = selected sets,
/// with the empty open forced to a singleton).
Sheaf subsheaf_to_sheaf(const Subsheaf& S, std::string name);

/// A morphism of sheaves F1 × … × Fk → G, given by per-open tables.
/// Argument tuples are encoded most-significant-first.
struct SheafMorphism {
  std::string name;
  std::vector<const Sheaf*> args;
  const Sheaf* result = nullptr;
  std::vector<std::vector<int>> table;  // [openIdx][tupleIdx] -> section of result

  int tuple_index(int openIdx, const std::vector<int>& sections) const;
  int apply(int openIdx, const std::vector<int>& sections) const {
    return table[openIdx][tuple_index(openIdx, sections)];
  }
  void check_natural() const;  // commutes with restrictions
};

SheafMorphism make_morphism(std::string name, std::vector<const Sheaf*> args, const Sheaf* result,
                            const std::function<int(int, const std::vector<int>&)>& fn);

Sheaf constant_sheaf(const FiniteSpace& X, std::vector<std::string> elems, std::string name);
Sheaf terminal_sheaf(const FiniteSpace& X);
Sheaf omega_sheaf(const FiniteSpace& X);

/// Encoding of constant-sheaf sections: a section over U assigns an element
/// to each component of U, most significant first in canonical order.
struct ConstantCodec {
  const FiniteSpace* X;
  int m;
  std::vector<std::vector<Mask>> comps;

  ConstantCodec(const FiniteSpace& space, int elemCount);
  std::vector<int> decode(int openIdx, int code) const;
  int encode(int openIdx, const std::vector<int>& vals) const;
  int constant(int openIdx, int val) const;
};

SheafMorphism constant_binop(const Sheaf& F, const ConstantCodec& codec, std::string name,
                             const std::function<int(int, int)>& op);
SheafMorphism constant_unop(const Sheaf& F, const ConstantCodec& codec, std::string name,
                            const std::function<int(int)>& op);

/// Power object P(F): sections over U are the subsheaves of F|U.
struct PowerObject {
  Sheaf sheaf;
  std::vector<std::vector<Subsheaf>> bySection;  // [openIdx][sectionIdx]
  int index_of(int openIdx, const Subsheaf& S) const;
};

PowerObject power_object(const Sheaf& F);

/// Ring structure on a sheaf, registered as designated morphisms.
struct RingStructure {
  const Sheaf* carrier = nullptr;
  const SheafMorphism* add = nullptr;
  const SheafMorphism* mul = nullptr;
  int zeroGlobal = 0, oneGlobal = 0;  // sections over the full open

  int numeral(int k, int fullOpenIdx) const;  // k·1 via the add table
};

/// Module structure over a ring-structured sheaf.
struct ModuleStructure {
  const Sheaf* carrier = nullptr;
  const Sheaf* ring = nullptr;
  const SheafMorphism* add = nullptr;   // M × M → M
  const SheafMorphism* smul = nullptr;  // R × M → M
  int zeroGlobal = 0;
};

/// The evaluation environment: named sheaves, subsheaves, morphisms, nuclei,
/// propositional constants and section constants over one space.
struct BaseEnv {
  const FiniteSpace* space = nullptr;

  std::map<std::string, const Sheaf*> sheaves;
  std::map<std::string, SubsheafPtr> subsheaves;
  std::map<std::string, std::vector<const SheafMorphism*>> functions;  // overloaded
  std::map<std::string, const Nucleus*> nuclei;
  std::map<std::string, Mask> propConstants;

  const SheafMorphism* find_function(const std::string& name,
                                     const std::vector<const Sheaf*>& argSheaves) const;

  struct SectionConst {
    const Sheaf* sheaf;
    Mask defOpen;
    int section;
  };
  std::map<std::string, SectionConst> sectionConstants;

  std::map<std::string, RingStructure> rings;      // keyed by sheaf-sort name
  std::map<std::string, ModuleStructure> modules;  // keyed by sheaf-sort name
  std::optional<int> schemaBound;

  SymbolTable symbols() const;
  const Sheaf* sheaf(const std::string& n) const;
};

/// Parsed sheaf file: the sheaf plus raw op/constant declarations.
struct SheafFile {
  Sheaf sheaf;
  std::map<std::string, std::vector<std::vector<int>>> ops;  // binary op tables per open
  std::map<std::string, std::string> constants;              // e.g. zero/one -> global section name
};

SheafFile parse_sheaf_file(const std::string& text, const FiniteSpace& X);

// --- constructions that evaluate internal formulas (implemented with the
// --- forcing engine; see forcing.hpp)

Subsheaf comprehend(const Sheaf& F, const FormulaPtr& phi, const std::string& var,
                    const BaseEnv& env);

struct PlusResult {
  Sheaf sheaf;
  std::vector<std::vector<int>> canonical;  // [openIdx][sectionIdx of F] -> section of F⁺
};

PlusResult plus_construction(const Sheaf& F, const Nucleus& j);
PlusResult sheafify(const Sheaf& F, const Nucleus& j);

bool is_box_separated(const Sheaf& F, const Nucleus& j);
bool is_box_sheaf(const Sheaf& F, const Nucleus& j);

bool is_flabby(const Sheaf& F);

}  // namespace toposforge
