#pragma once

#include <deque>
#include <random>

#include "toposforge/forcing.hpp"
#include "toposforge/spectrum.hpp"

namespace toposforge {

struct CheckLine {
  bool pass;
  std::string name;
  std::string detail;
};

struct Report {
  std::string suite;
  std::vector<CheckLine> lines;

  void add(bool pass, std::string name, std::string detail = "");
  bool all_pass() const;
  int fail_count() const;
  std::string to_text() const;  // one PASS/FAIL line per check
};

struct VerifyOptions {
  std::uint64_t seed = 20260809;
  int maxPoints = 6;
  int maxDepth = 3;
  int spaceCount = 20;
  int instanceCount = 10;            // per rule / per family
  std::string ringSpec;              // restrict ring-flavored suites to one ring
  std::vector<FiniteSpace> spaces;   // restrict space-flavored suites, when nonempty
};

/// suite ∈ {inference-rules, locality, geometric-spreading, box-theorem,
/// sheafification, metaproperties, spectrum, generic-filter, quasicoherator,
/// dimension}
Report verify_suite(const std::string& suite, const VerifyOptions& opt);
std::vector<std::string> suite_names();

/// The acceptance criteria (1-11), at their stated corpus sizes.
Report acceptance_criterion(int k, std::uint64_t seed);

// ------------------------------------------------------------------ corpus

std::vector<FiniteSpace> corpus_spaces(int count, int maxPoints, std::mt19937_64& rng);
FiniteSpace random_space(std::mt19937_64& rng, int maxPoints, int maxOpens = 12);
std::vector<FinRing> corpus_rings();

/// A forcing environment over a space: the constant sheaf M = Z/2 with ring
/// structure, an endomorphism f, propositional constants for every open, the
/// four nucleus constructors, global sections as constants, and a named
/// subsheaf G (extension by zero from the largest proper open).
struct SpaceEnv {
  FiniteSpace space;
  std::unique_ptr<Sheaf> M;
  std::deque<SheafMorphism> morphisms;
  std::deque<Nucleus> nuclei;
  SubsheafPtr G;
  BaseEnv env;

  explicit SpaceEnv(const FiniteSpace& X, bool withSubsheaf = true);
  SpaceEnv(const SpaceEnv&) = delete;
  SpaceEnv& operator=(const SpaceEnv&) = delete;
};

/// Random formulas over a SpaceEnv-style environment.
class FormulaGen {
public:
  FormulaGen(const BaseEnv& env, std::mt19937_64& rng);

  struct Config {
    bool geometricOnly = false;
    bool frameSafe = false;  // target language of the frame semantics
    bool allowModal = true;
  };

  FormulaPtr gen(int depth, const Config& cfg);
  TermPtr gen_term(int depth, const std::string& sheafSort, bool simpleOnly = false);

  void push_context(const std::string& var, SortPtr s) { scope_.emplace_back(var, std::move(s)); }
  void pop_context() { scope_.pop_back(); }
  const std::string& sheaf_sort() const { return msort_; }

private:
  const BaseEnv* env_;
  std::mt19937_64* rng_;
  std::vector<std::string> props_, consts_, nucs_, subs_, fns_;
  std::string msort_;
  std::vector<std::pair<std::string, SortPtr>> scope_;
  int varCounter_ = 0;

  int pick(int n) { return static_cast<int>((*rng_)() % n); }
  FormulaPtr atom(const Config& cfg);
};

/// φ ⊢_{ctx} ψ over a space: for all opens and all context bindings, the
/// premise forces only where the conclusion does.
bool sequent_holds(Forcer& forcer, const std::vector<std::pair<std::string, SortPtr>>& ctx,
                   const FormulaPtr& prem, const FormulaPtr& concl, std::string* where = nullptr);

bool check_locality(Forcer& forcer, const FormulaPtr& phi, Mask U, const std::vector<Mask>& cover);

struct SpreadReport {
  bool ok = true;
  std::string detail;
};
SpreadReport check_geometric_spreading(Forcer& forcer, const FormulaPtr& phi);

bool check_box_theorem(const SpaceEnv& se, const std::string& nucName, const FormulaPtr& phi,
                       bool elideGray, std::string* detail = nullptr);

enum class MetaKind { Quasicompact, Local, Irreducible };
struct MetaReport {
  bool topological;   // the space-level property
  bool metaproperty;  // the internal-language metaproperty on the instances
  std::string counterexample;
};
MetaReport check_metaproperty(Forcer& forcer, MetaKind kind,
                              const std::vector<std::vector<FormulaPtr>>& instances);

bool space_is_local(const FiniteSpace& X);
bool space_is_irreducible(const FiniteSpace& X);
bool space_is_boolean(const FiniteSpace& X);

}  // namespace toposforge
