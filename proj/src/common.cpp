#include "toposforge/common.hpp"

namespace toposforge {

bool mask_less(Mask a, Mask b) {
  if (a == b) return false;
  int ca = popcount(a), cb = popcount(b);
  if (ca != cb) return ca < cb;
  // Compare ascending index sequences lexicographically.
  while (a && b) {
    int ia = __builtin_ctzll(a), ib = __builtin_ctzll(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0;
}

int DynBitset::count() const {
  int c = 0;
  for (auto w : w_) c += __builtin_popcountll(w);
  return c;
}

bool DynBitset::subset_of(const DynBitset& o) const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & ~o.w_[i]) return false;
  return true;
}

bool DynBitset::operator<(const DynBitset& o) const {
  int ca = count(), cb = o.count();
  if (ca != cb) return ca < cb;
  for (int i = 0; i < n_; ++i) {
    bool a = test(i), b = o.test(i);
    if (a != b) return a;  // the one containing the smaller index comes first
  }
  return false;
}

std::size_t DynBitset::hash() const {
  std::size_t h = std::hash<int>{}(n_);
  for (auto w : w_) h = hash_mix(h, std::hash<std::uint64_t>{}(w));
  return h;
}

}  // namespace toposforge
