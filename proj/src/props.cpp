#include "xfam/props.hpp"

#include <stdexcept>

namespace xfam {

void CrossInstance::validate(bool require_nonempty) const {
  if (families.empty()) throw std::invalid_argument("CrossInstance: no families");
  if (t < 1) throw std::invalid_argument("CrossInstance: t < 1");
  int nn = families.front().n();
  for (const auto& f : families)
    if (f.n() != nn) throw std::invalid_argument("CrossInstance: mixed ground sets");
  if (!caps.empty()) {
    if (caps.size() != families.size())
      throw std::invalid_argument("CrossInstance: caps size mismatch");
    for (std::size_t j = 0; j < families.size(); ++j) {
      if (caps[j] < 1 || caps[j] > nn)
        throw std::invalid_argument("CrossInstance: cap out of [1,n]");
      bool ok = true;
      families[j].for_each([&](std::uint64_t m) {
        if (std::popcount(m) > caps[j]) ok = false;
      });
      if (!ok) throw std::invalid_argument("CrossInstance: member exceeds its cap");
    }
  }
  if (!measures.empty() && measures.size() != families.size())
    throw std::invalid_argument("CrossInstance: measures size mismatch");
  for (const auto& mu : measures)
    if (mu.n != nn) throw std::invalid_argument("CrossInstance: measure dimension mismatch");
  if (!ks.empty() && ks.size() != families.size())
    throw std::invalid_argument("CrossInstance: ks size mismatch");
  if (require_nonempty)
    for (const auto& f : families)
      if (f.empty()) throw std::invalid_argument("CrossInstance: empty family");
}

Family meet_closure(std::span<const Family> families) {
  if (families.empty()) throw std::invalid_argument("meet_closure: empty family list");
  int n = families.front().n();
  for (const auto& f : families)
    if (f.n() != n) throw std::invalid_argument("meet_closure: mixed ground sets");
  Family closure = families.front();
  for (std::size_t i = 1; i < families.size(); ++i) {
    Family next(n);
    auto ys = families[i].members();
    closure.for_each([&](std::uint64_t x) {
      for (auto y : ys) next.insert(x & y);
    });
    closure = std::move(next);
  }
  return closure;
}

bool is_cross_t_intersecting(const CrossInstance& inst) {
  inst.validate(false);
  for (const auto& f : inst.families)
    if (f.empty()) return true;  // no tuples
  Family closure = meet_closure(inst.families);
  bool ok = true;
  closure.for_each([&](std::uint64_t x) {
    if (std::popcount(x) < inst.t) ok = false;
  });
  return ok;
}

bool is_t_intersecting(const Family& f, int t) {
  if (t < 1) throw std::invalid_argument("is_t_intersecting: t < 1");
  auto ms = f.members();
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i; j < ms.size(); ++j)
      if (std::popcount(ms[i] & ms[j]) < t) return false;
  return true;
}

static void check_shift_pair(int i, int j, int n) {
  if (i == j) throw std::invalid_argument("shift: i == j");
  if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("shift: element out of [n]");
}

static std::uint64_t shift_mask(std::uint64_t m, int i, int j) {
  std::uint64_t bi = 1ULL << (i - 1), bj = 1ULL << (j - 1);
  if ((m & bj) && !(m & bi)) return (m & ~bj) | bi;
  return m;
}

Subset shift_set(const Subset& s, int i, int j) {
  check_shift_pair(i, j, s.n);
  return Subset{s.n, shift_mask(s.mask, i, j)};
}

Family shift_family(const Family& f, int i, int j) {
  check_shift_pair(i, j, f.n());
  Family out(f.n());
  f.for_each([&](std::uint64_t m) {
    std::uint64_t sm = shift_mask(m, i, j);
    if (sm == m || !f.contains(sm)) {
      out.insert(sm);
    } else {
      out.insert(m);  // image already present, keep both
    }
  });
  return out;
}

bool is_shifted(const Family& f) {
  int n = f.n();
  bool ok = true;
  f.for_each([&](std::uint64_t m) {
    for (int j = 2; j <= n && ok; ++j) {
      if (!((m >> (j - 1)) & 1)) continue;
      for (int i = 1; i < j; ++i)
        if (!f.contains(shift_mask(m, i, j))) { ok = false; break; }
    }
  });
  return ok;
}

std::vector<Family> shift_to_fixpoint(std::vector<Family> families) {
  if (families.empty()) return families;
  int n = families.front().n();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (auto& f : families) {
          Family shifted = shift_family(f, i, j);
          if (!(shifted == f)) {
            f = std::move(shifted);
            changed = true;
          }
        }
  }
  return families;
}

}  // namespace xfam
