#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toposforge {

// Subsets of points (or ring elements); all carriers are capped at 64 elements.
using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline Mask bit(int i) { return Mask{1} << i; }
inline bool has(Mask m, int i) { return (m >> i) & 1; }

// Ascending-index lexicographic order on equal-size sets; smaller sets first.
// Used wherever a family of subsets needs a canonical order.
bool mask_less(Mask a, Mask b);

// Bitset over section indices; sections per open may exceed 64.
class DynBitset {
public:
  DynBitset() = default;
  explicit DynBitset(int n) : n_(n), w_((n + 63) / 64, 0) {}
  int size() const { return n_; }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  int count() const;
  bool subset_of(const DynBitset& o) const;
  bool operator==(const DynBitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator<(const DynBitset& o) const;  // by count, then lexicographic on indices
  std::size_t hash() const;

private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct SortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace toposforge
