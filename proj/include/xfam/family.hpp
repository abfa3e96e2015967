#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "xfam/subset.hpp"

namespace xfam {

inline constexpr int kMaxFamilyN = 24;

// A family of subsets of [n] as an indicator bit vector over all 2^n masks.
// Immutable in spirit: operations return new values; the few mutators exist
// for construction.  n <= 24.
class Family {
 public:
  Family() : Family(1) {}
  explicit Family(int n);
  static Family of(int n, std::initializer_list<std::initializer_list<int>> sets);

  int n() const { return n_; }
  bool contains(std::uint64_t mask) const {
    return (bits_[mask >> 6] >> (mask & 63)) & 1;
  }
  void insert(std::uint64_t mask);
  void erase(std::uint64_t mask);

  std::uint64_t count() const;
  bool empty() const;

  /// Member masks in ascending order.
  std::vector<std::uint64_t> members() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        int b = std::countr_zero(word);
        word &= word - 1;
        fn((static_cast<std::uint64_t>(w) << 6) | static_cast<unsigned>(b));
      }
    }
  }

  /// counts[s] = number of members of size s; length n+1.
  std::vector<std::uint64_t> level_counts() const;

  bool operator==(const Family&) const = default;

  Family& operator|=(const Family& o);
  Family& operator&=(const Family& o);
  /// Remove all members of o.
  Family& subtract(const Family& o);
  bool intersects(const Family& o) const;
  /// True if every member of this is a member of o.
  bool subset_of(const Family& o) const;

 private:
  int n_;
  std::vector<std::uint64_t> bits_;  // 2^n indicator bits, packed

  friend Family up_closure(const Family& f);
};

/// { F in f : lo <= |F| <= hi }.
Family slice(const Family& f, int lo, int hi);

/// { T : exists F in f with F subseteq T }.  Idempotent, contains f.
Family up_closure(const Family& f);

}  // namespace xfam
