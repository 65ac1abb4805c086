#pragma once

#include <optional>
#include <unordered_map>

#include "toposforge/formula.hpp"
#include "toposforge/frame.hpp"
#include "toposforge/sheaf.hpp"

namespace toposforge {

/// A value bound to a variable: a section, a truth value (open), a subsheaf,
/// or a schema integer.
struct Value {
  enum class Kind { Section, Open, Sub, Int };
  Kind kind = Kind::Int;
  const Sheaf* sheaf = nullptr;  // Section
  int section = 0;               // Section
  Mask open = 0;                 // Open: the value as a subopen of the binding open
  SubsheafPtr sub;               // Sub
  int intval = 0;                // Int

  static Value of_section(const Sheaf* F, int s);
  static Value of_open(Mask m);
  static Value of_sub(SubsheafPtr s);
  static Value of_int(int v);

  bool operator==(const Value& o) const;
  std::size_t hash() const;
};

/// The Kripke–Joyal evaluator over a finite space. Disjunctions and
/// existentials are decided pointwise on minimal open neighborhoods;
/// implication and universal quantification range over all subopens.
/// Environments are hash-consed and evaluation is memoized per
/// (formula node, open, environment).
class Forcer {
public:
  explicit Forcer(const BaseEnv& base);

  const BaseEnv& base() const { return *base_; }
  const FiniteSpace& space() const { return *X_; }

  static constexpr int kRootEnv = 0;

  int bind(int envId, const std::string& var, Mask defOpen, Value v);

  bool force(Mask U, const FormulaPtr& f, int envId = kRootEnv);
  Mask truth_value(const FormulaPtr& f, int envId = kRootEnv);

  /// Classical (Boolean) evaluation of f on the stalk model at a point:
  /// quantifiers range over sections on the minimal open, connectives are
  /// truth-functional. For geometric formulas this agrees with forcing on the
  /// minimal open; the agreement is a tested theorem, not an assumption.
  bool classical_at(int point, const FormulaPtr& f, int envId = kRootEnv);

  Value eval_term(const TermPtr& t, Mask U, int envId);

  /// The open where a formula's bound parameters live (evaluation domain).
  Mask domain_of(const FormulaPtr& f, int envId);

  /// The sheaf interpreting a sort (named sheaf, Omega, or power object).
  const Sheaf* sheaf_of_sort(const SortPtr& s);
  const std::vector<Subsheaf>& power_sections(const Sheaf* F, int openIdx);

  /// All sections of a sort over an open (the quantifier domain).
  std::vector<Value> sort_values(const SortPtr& s, Mask V);

private:
  struct EnvNode {
    int parent;
    std::string var;
    Mask defOpen;
    Value val;
  };

  struct MemoKey {
    FormulaPtr node;  // retained: memo entries must keep their nodes alive
    Mask open;
    int env;
  };

  const BaseEnv* base_;
  const FiniteSpace* X_;
  std::vector<EnvNode> envs_;
  std::unordered_map<std::size_t, std::vector<int>> envIndex_;
  std::unordered_map<std::size_t, std::vector<std::pair<MemoKey, bool>>> memo_;

  std::map<std::string, std::shared_ptr<Sheaf>> sortSheaves_;       // Omega and power sorts
  std::map<const Sheaf*, std::shared_ptr<PowerObject>> powerObjs_;  // by element sheaf

  const EnvNode* lookup(int envId, const std::string& var) const;
  bool force_uncached(Mask U, const FormulaPtr& f, int envId);
  bool classical(int minIdx, const FormulaPtr& f, int envId);
  int schema_hi(const Formula& f) const;
  int omega_index(Mask U, Mask w) const;
};

// ------------------------------------------------------------------
// Kripke–Joyal over an abstract finite frame (cover semantics).
// Used both as the cross-check oracle for the spatial evaluator and as the
// semantics over sublocale frames for the box-translation theorem.

struct FrameSheaf {
  std::string sortName;
  std::vector<int> card;                        // per frame element
  std::vector<std::vector<std::vector<int>>> restr;  // [u][v] for v ≤ u
};

struct FrameSubsheaf {
  std::string parentSort;
  std::vector<DynBitset> selected;  // per frame element
};

struct FrameMorphism {
  std::vector<std::string> argSorts;
  std::string resultSort;
  std::vector<std::vector<int>> table;  // [elem][tupleIdx]
};

struct FrameContext {
  const Frame* L = nullptr;
  std::map<std::string, FrameSheaf> sheaves;
  std::map<std::string, FrameSubsheaf> subsheaves;
  std::map<std::string, std::vector<FrameMorphism>> functions;
  std::map<std::string, std::vector<int>> nuclei;  // nucleus maps on L
  std::map<std::string, int> propConstants;        // frame elements
  struct SectionConst {
    std::string sortName;
    int defElem;
    int section;
  };
  std::map<std::string, SectionConst> sectionConstants;
  std::map<std::string, std::pair<int, int>> ringConsts;  // sort -> global (zero, one)
  std::optional<int> schemaBound;
};

/// The opens-frame context of a spatial environment (the cover-semantics
/// oracle evaluates the very same formulas against it).
FrameContext frame_context_of_space(const BaseEnv& env);

class FrameForcer {
public:
  explicit FrameForcer(const FrameContext& ctx);

  static constexpr int kRootEnv = 0;

  struct FValue {
    enum class Kind { Section, Open, Int };
    Kind kind = Kind::Int;
    std::string sortName;
    int a = 0;  // section index / frame element / integer
  };

  int bind(int envId, const std::string& var, int defElem, FValue v);
  bool force(int u, const FormulaPtr& f, int envId = kRootEnv);
  int truth_value(const FormulaPtr& f, int envId = kRootEnv);  // frame element

private:
  struct EnvNode {
    int parent;
    std::string var;
    int defElem;
    FValue val;
  };
  struct MemoKey {
    FormulaPtr node;  // retained: memo entries must keep their nodes alive
    int elem;
    int env;
  };
  const FrameContext* ctx_;
  const Frame* L_;
  std::vector<EnvNode> envs_;
  std::unordered_map<std::size_t, std::vector<int>> envIndex_;
  std::unordered_map<std::size_t, std::vector<std::pair<MemoKey, bool>>> memo_;

  const EnvNode* lookup(int envId, const std::string& var) const;
  bool force_uncached(int u, const FormulaPtr& f, int envId);
  FValue eval_term(const TermPtr& t, int u, int envId);
  int domain_of(const FormulaPtr& f, int envId);
  int schema_hi(const Formula& f) const;
};

}  // namespace toposforge
