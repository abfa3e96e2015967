#pragma once

#include <span>
#include <vector>

#include "xfam/family.hpp"
#include "xfam/measures.hpp"

namespace xfam {

// r families over a common ground set with the cross-intersection threshold t.
// caps/ks/measures are optional (empty) unless an operation needs them:
// caps[j] = khat_j bounds member sizes, ks[j] is the start of the window on
// which measures[j] is non-increasing.
struct CrossInstance {
  int t = 1;
  std::vector<Family> families;
  std::vector<int> caps;
  std::vector<int> ks;
  std::vector<MeasureTable> measures;

  int r() const { return static_cast<int>(families.size()); }
  int n() const { return families.empty() ? 0 : families.front().n(); }

  /// Shared n, t >= 1, caps respected; optionally every family non-empty.
  void validate(bool require_nonempty) const;
};

/// All distinct meets f_1 & ... & f_r over tuples, by iterated pairwise meets.
Family meet_closure(std::span<const Family> families);

/// Every tuple intersects in >= t elements.  Vacuously true if some family is
/// empty (no tuples); a member with fewer than t elements always fails.
bool is_cross_t_intersecting(const CrossInstance& inst);

/// Every ordered pair, including F = F', meets in >= t elements (so every
/// member has size >= t).
bool is_t_intersecting(const Family& f, int t);

/// sigma_ij: replace j by i when j in F, i not in F; identity otherwise.
Subset shift_set(const Subset& s, int i, int j);

/// sigma_ij(F) = {sigma_ij(F)} cup {F : sigma_ij(F) in F}; preserves |F| and
/// all level sizes.
Family shift_family(const Family& f, int i, int j);

bool is_shifted(const Family& f);

/// Lexicographic (i,j) sweeps, the same pair applied to all families at each
/// step, repeated until a full sweep changes nothing.
std::vector<Family> shift_to_fixpoint(std::vector<Family> families);

}  // namespace xfam
