#include "xfam/family.hpp"

#include <stdexcept>

namespace xfam {

int nth_smallest(std::uint64_t mask, int t) {
  int seen = 0;
  while (mask) {
    int b = std::countr_zero(mask);
    mask &= mask - 1;
    if (++seen == t) return b + 1;
  }
  return 0;
}

Family::Family(int n) : n_(n) {
  if (n < 1 || n > kMaxFamilyN) throw std::invalid_argument("Family: n out of [1,24]");
  std::size_t words = n >= 6 ? (1ULL << (n - 6)) : 1;
  bits_.assign(words, 0);
}

Family Family::of(int n, std::initializer_list<std::initializer_list<int>> sets) {
  Family f(n);
  for (const auto& set : sets) {
    std::uint64_t mask = 0;
    for (int e : set) {
      if (e < 1 || e > n) throw std::invalid_argument("Family::of: element out of [n]");
      mask |= 1ULL << (e - 1);
    }
    f.insert(mask);
  }
  return f;
}

void Family::insert(std::uint64_t mask) {
  if (mask >> n_) throw std::invalid_argument("Family::insert: mask has bits beyond n");
  bits_[mask >> 6] |= 1ULL << (mask & 63);
}

void Family::erase(std::uint64_t mask) {
  if (mask >> n_) throw std::invalid_argument("Family::erase: mask has bits beyond n");
  bits_[mask >> 6] &= ~(1ULL << (mask & 63));
}

std::uint64_t Family::count() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool Family::empty() const {
  for (auto w : bits_) if (w) return false;
  return true;
}

std::vector<std::uint64_t> Family::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  for_each([&](std::uint64_t m) { out.push_back(m); });
  return out;
}

std::vector<std::uint64_t> Family::level_counts() const {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_) + 1, 0);
  for_each([&](std::uint64_t m) { ++counts[static_cast<std::size_t>(std::popcount(m))]; });
  return counts;
}

static void check_same_n(const Family& a, const Family& b) {
  if (a.n() != b.n()) throw std::invalid_argument("Family: ground-set size mismatch");
}

Family& Family::operator|=(const Family& o) {
  check_same_n(*this, o);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= o.bits_[w];
  return *this;
}

Family& Family::operator&=(const Family& o) {
  check_same_n(*this, o);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= o.bits_[w];
  return *this;
}

Family& Family::subtract(const Family& o) {
  check_same_n(*this, o);
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= ~o.bits_[w];
  return *this;
}

bool Family::intersects(const Family& o) const {
  check_same_n(*this, o);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & o.bits_[w]) return true;
  return false;
}

bool Family::subset_of(const Family& o) const {
  check_same_n(*this, o);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w] & ~o.bits_[w]) return false;
  return true;
}

Family slice(const Family& f, int lo, int hi) {
  if (lo < 0 || hi > f.n() || lo > hi) throw std::invalid_argument("slice: bad size range");
  Family out(f.n());
  f.for_each([&](std::uint64_t m) {
    int s = std::popcount(m);
    if (s >= lo && s <= hi) out.insert(m);
  });
  return out;
}

// In-word lane masks: positions whose bit i is clear, i < 6.
static constexpr std::uint64_t kLane[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
    0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL};

Family up_closure(const Family& f) {
  Family out = f;
  int n = f.n();
  auto& bits = out.bits_;
  // Superset-sum transform: one pass per ground-set element.
  for (int i = 0; i < n && i < 6; ++i)
    for (auto& w : bits) w |= (w & kLane[i]) << (1 << i);
  for (int i = 6; i < n; ++i) {
    std::size_t stride = 1ULL << (i - 6);
    for (std::size_t w = 0; w < bits.size(); ++w)
      if (w & stride) bits[w] |= bits[w ^ stride];
  }
  return out;
}

}  // namespace xfam
