#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace xfam {

/// Low a bits set: the mask of the prefix [a].  a in [0,64].
constexpr std::uint64_t prefix_mask(int a) {
  return a >= 64 ? ~0ULL : (1ULL << a) - 1;
}

// A subset of [n] as a bitmask; element i lives at bit i-1.  Masks alone work
// up to n = 64; family-level structures cap n lower.
struct Subset {
  int n = 0;
  std::uint64_t mask = 0;

  static Subset of(int n, std::initializer_list<int> elems) {
    Subset s{n, 0};
    for (int e : elems) {
      if (e < 1 || e > n) throw std::invalid_argument("Subset: element out of [n]");
      s.mask |= 1ULL << (e - 1);
    }
    return s;
  }

  int size() const { return std::popcount(mask); }
  bool contains(int e) const { return e >= 1 && e <= n && (mask >> (e - 1)) & 1; }
  bool operator==(const Subset&) const = default;
};

inline Subset prefix_intersection(const Subset& s, int a) {
  if (a < 0 || a > s.n) throw std::invalid_argument("prefix_intersection: a out of [0,n]");
  return Subset{s.n, s.mask & prefix_mask(a)};
}

/// t-th smallest element (1-based) of mask, or 0 if popcount < t.
int nth_smallest(std::uint64_t mask, int t);

}  // namespace xfam
