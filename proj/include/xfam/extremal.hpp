#pragma once

#include <utility>
#include <vector>

#include "xfam/measures.hpp"

namespace xfam {

/// A_{n,a,t} = { F : |F cap [a]| >= t }.  Requires t <= a <= n.
Family scatter_family(int n, int a, int t);

/// B_{n,a} = { F : [a] subseteq F } = A_{n,a,a}.
Family block_family(int n, int a);

/// |A_{n,a,t}| = 2^(n-a) * sum_{m=t..a} C(a,m), computed in closed form.
Int scatter_count(int n, int a, int t);

/// mu(A_{n,a,t}^{<=khat}) = sum_{s=t..khat} mu(s) sum_{m=t..min(a,s)} C(a,m) C(n-a,s-m).
Rational measure_scatter_trunc(const MeasureTable& mu, int n, int a, int t, int khat);

/// mu(B_{n,a}^{<=khat}) = sum_{s=a..khat} mu(s) C(n-a, s-a).
Rational measure_block_trunc(const MeasureTable& mu, int n, int a, int khat);

struct BoundReport {
  Rational value;
  std::vector<std::pair<int, int>> argmax;  // all maximizing (ell, a)
  std::vector<Family> witness;              // empty when n > kMaxFamilyN
  int n = 0, r = 0, t = 0;
  std::vector<int> caps, ks;
};

/// Maximum of mu_ell(A_{n,a,t}^{<=khat_ell}) + sum_{j != ell} mu_j(B_{n,a}^{<=khat_j})
/// over ell in [r], a in [t, min_{i != ell} khat_i].  Refuses out-of-hypothesis
/// parameters with a named inequality.
BoundReport bound_main(int n, int r, int t, const std::vector<int>& caps,
                       const std::vector<MeasureTable>& mus, const std::vector<int>& ks);

/// k-uniform specialisation: max_{i in [t,k]} { sum_m C(i,m) C(n-i,k-m) + (r-1) C(n-i,k-i) }.
BoundReport bound_uniform(int n, int k, int r, int t);

/// Counting specialisation over all of P([n]).
BoundReport bound_nonuniform(int n, int r, int t);

/// mu(B_{n,1}^{<=khat}) = sum_{s=1..khat} mu(s) C(n-1, s-1); requires n >= k + khat
/// and mu non-increasing on [k, khat].
Rational bound_single(int n, int k, int khat, const MeasureTable& mu);

/// C(n-1, k-1) for 2k <= n.
Int ekr_bound(int n, int k);

/// Smallest r0 >= 2 such that for all r >= r0 the expression
/// mu(A_{n,a,t}) + (r-1) mu(B_{n,a}) has its unique maximum over a in [t,n] at a = t.
int argmax_stabilization_r0(int n, int t, const MeasureTable& mu);

/// (mu(B_{n,t}))^r for r >= r0; equal measures.
Rational product_bound_large_r(int n, int t, const MeasureTable& mu, int r);

}  // namespace xfam
