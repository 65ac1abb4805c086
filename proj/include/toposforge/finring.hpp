#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toposforge/common.hpp"

namespace toposforge {

/// A finite commutative unital ring, at most 64 elements, given by full
/// operation tables. Element subsets are Masks.
class FinRing {
public:
  static FinRing zmod(int n);
  static FinRing product(const FinRing& a, const FinRing& b);
  /// Quotient of (zmod p)[x] by a monic polynomial (coefficients low-to-high).
  static FinRing polyquot(const FinRing& base, const std::vector<int>& monic);
  static FinRing zero_ring();
  static FinRing from_tables(std::vector<std::string> names, std::vector<std::vector<int>> add,
                             std::vector<std::vector<int>> mul);
  /// `zmod 12`, `zmod12`, `product (zmod 2) (zmod 3)`, `polyquot (zmod 2) x^2+x+1`,
  /// optionally prefixed by `ring`.
  static FinRing from_spec(const std::string& spec);

  int size() const { return n_; }
  int add(int a, int b) const { return add_[a][b]; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add_[a][neg_[b]]; }
  int zero() const { return zero_; }
  int one() const { return one_; }
  int pow(int a, int k) const;
  const std::string& elem_name(int i) const { return names_[i]; }
  int elem_by_name(const std::string& n) const;
  const std::string& spec() const { return spec_; }

  bool is_nilpotent(int x) const;   // xⁿ = 0 for some n ≤ |A|
  bool is_invertible(int x) const;  // ∃y. xy = 1
  bool is_reduced() const;
  bool is_trivial() const { return n_ == 1; }
  bool is_local() const;  // 1 ≠ 0 and nonunits are closed under addition
  Mask units() const;

  void check_axioms() const;

private:
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> add_, mul_;
  std::vector<int> neg_;
  int zero_ = 0, one_ = 0;
  std::string spec_;
};

/// Ring homomorphism given by its element map; validated on construction.
struct RingHom {
  const FinRing* dom = nullptr;
  const FinRing* cod = nullptr;
  std::vector<int> map;

  static RingHom make(const FinRing& d, const FinRing& c, std::vector<int> m);
  static RingHom identity(const FinRing& r);
  int operator()(int a) const { return map[a]; }
};

Mask ideal_closure(const FinRing& R, Mask gens);
bool is_ideal(const FinRing& R, Mask m);
bool is_prime_ideal(const FinRing& R, Mask m);
bool is_radical_ideal(const FinRing& R, Mask m);
Mask radical(const FinRing& R, Mask idealMembers);

/// All ideals, canonically ordered; generator saturation (adding one
/// generator at a time reaches every ideal).
std::vector<Mask> enumerate_ideals(const FinRing& R);
std::vector<Mask> enumerate_radical_ideals(const FinRing& R);
std::vector<Mask> enumerate_prime_ideals(const FinRing& R);

bool filter_axioms(const FinRing& R, Mask m);
/// All filters by pruned search over membership assignments.
std::vector<Mask> enumerate_filters(const FinRing& R);

/// Localization at a multiplicative subset, built literally on pairs (a, s)
/// with (a,s) ~ (b,t) iff u(at - bs) = 0 for some u in S.
struct LocRing {
  FinRing ring;
  std::vector<int> map;                   // A -> A_S, a ↦ a/1
  std::vector<std::vector<int>> classOf;  // [a][s] -> element of A_S (s ∈ S only)

  int cls(int a, int s) const { return classOf[a][s]; }
};

LocRing localize(const FinRing& R, Mask S);

/// A finite module over a finite ring, by full tables.
class FinModule {
public:
  static FinModule ring_as_module(const FinRing& R);
  static FinModule zero_module(const FinRing& R);
  static FinModule quotient_by_ideal(const FinRing& R, Mask ideal);
  static FinModule from_tables(const FinRing& R, std::vector<std::string> names,
                               std::vector<std::vector<int>> add,
                               std::vector<std::vector<int>> smul);
  static FinModule from_file(const std::string& text, const FinRing& R);

  const FinRing& ring() const { return ring_; }
  int size() const { return n_; }
  int add(int a, int b) const { return add_[a][b]; }
  int smul(int r, int m) const { return smul_[r][m]; }
  int zero() const { return zero_; }
  const std::string& elem_name(int i) const { return names_[i]; }
  int elem_by_name(const std::string& n) const;

  Mask submodule_closure(Mask gens) const;
  bool generated_by_at_most(int k) const;

  void check_axioms() const;

private:
  FinRing ring_;  // owned copy: modules are self-contained values
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> add_;
  std::vector<std::vector<int>> smul_;  // [ringElem][modElem]
  int zero_ = 0;
};

/// Module homomorphism (A-linear map), validated on construction.
struct ModuleHom {
  const FinModule* dom = nullptr;
  const FinModule* cod = nullptr;
  std::vector<int> map;

  static ModuleHom make(const FinModule& d, const FinModule& c, std::vector<int> m);
  int operator()(int a) const { return map[a]; }
  bool injective() const;
  bool surjective() const;
};

/// Module localization at a multiplicative subset, on pairs (m, s) with
/// (m,s) ~ (m',s') iff u(s'm - sm') = 0 for some u in S.
struct LocModule {
  int size = 0;
  std::vector<std::string> names;
  std::vector<std::vector<int>> classOf;  // [m][s]
  std::vector<std::vector<int>> add;
  std::vector<std::vector<int>> smul;  // [locRingElem][locModElem]
  int zero = 0;

  int cls(int m, int s) const { return classOf[m][s]; }
};

LocModule localize_module(const FinRing& R, const FinModule& M, Mask S, const LocRing& RS);

/// Constructive Krull-dimension test by complementary-sequence search.
struct KrullWitness {
  std::vector<int> seq;         // the probed sequence (a_0 … a_n)
  std::vector<int> complement;  // a complementary sequence, when found
};

struct KrullResult {
  bool ok = false;
  std::vector<KrullWitness> witnesses;        // one per sequence when ok
  std::optional<std::vector<int>> counterexample;  // sequence with no complement
};

KrullResult krull_dim_leq(const FinRing& R, int n);

/// Whether b is a complementary sequence for a (the chain of radical-ideal
/// inclusions of the constructive dimension test).
bool complementary_sequence_ok(const FinRing& R, const std::vector<int>& a,
                               const std::vector<int>& b);

/// Classical Krull dimension by chains of prime ideals (test oracle).
int classical_krull_dim(const FinRing& R);

std::optional<std::vector<int>> find_ring_isomorphism(const FinRing& A, const FinRing& B);

}  // namespace toposforge
