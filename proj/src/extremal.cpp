#include "xfam/extremal.hpp"

#include <algorithm>
#include <stdexcept>

#include "xfam/errors.hpp"

namespace xfam {

Rational measure_scatter_trunc(const MeasureTable& mu, int n, int a, int t, int khat) {
  Rational sum = 0;
  for (int s = t; s <= khat; ++s) {
    if (mu.weight(s) == 0) continue;
    Int ways = 0;
    for (int m = t; m <= std::min(a, s); ++m) ways += binom(a, m) * binom(n - a, s - m);
    sum += mu.weight(s) * Rational(ways);
  }
  return sum;
}

Rational measure_block_trunc(const MeasureTable& mu, int n, int a, int khat) {
  Rational sum = 0;
  for (int s = a; s <= khat; ++s)
    sum += mu.weight(s) * Rational(binom(n - a, s - a));
  return sum;
}

namespace {

Int floor_rational(const Rational& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  Int fl = num / den;
  if (num < 0 && fl * den != num) --fl;
  return fl;
}

}  // namespace

Family scatter_family(int n, int a, int t) {
  if (!(1 <= t && t <= a && a <= n))
    throw std::invalid_argument("scatter_family: need 1 <= t <= a <= n");
  Family f(n);
  std::uint64_t prefix = prefix_mask(a);
  for (std::uint64_t m = 0; m < (1ULL << n); ++m)
    if (std::popcount(m & prefix) >= t) f.insert(m);
  return f;
}

Family block_family(int n, int a) {
  if (!(1 <= a && a <= n)) throw std::invalid_argument("block_family: need 1 <= a <= n");
  Family f(n);
  std::uint64_t prefix = prefix_mask(a);
  for (std::uint64_t m = 0; m < (1ULL << n); ++m)
    if ((m & prefix) == prefix) f.insert(m);
  return f;
}

Int scatter_count(int n, int a, int t) {
  if (!(1 <= t && t <= a && a <= n))
    throw std::invalid_argument("scatter_count: need 1 <= t <= a <= n");
  Int sum = 0;
  for (int m = t; m <= a; ++m) sum += binom(a, m);
  return sum * (Int(1) << (n - a));
}

BoundReport bound_main(int n, int r, int t, const std::vector<int>& caps,
                       const std::vector<MeasureTable>& mus, const std::vector<int>& ks) {
  if (r < 2) throw std::invalid_argument("bound_main: r < 2");
  if (t < 1 || n < 1) throw std::invalid_argument("bound_main: need n, t >= 1");
  auto ru = static_cast<std::size_t>(r);
  if (caps.size() != ru || mus.size() != ru || ks.size() != ru)
    throw std::invalid_argument("bound_main: caps/mus/ks must have r entries");
  for (int i = 0; i < r; ++i) {
    auto iu = static_cast<std::size_t>(i);
    if (mus[iu].n != n) throw std::invalid_argument("bound_main: measure dimension mismatch");
    if (!(1 <= ks[iu] && ks[iu] <= caps[iu] && caps[iu] <= n))
      throw std::invalid_argument("bound_main: need 1 <= k_i <= khat_i <= n");
    if (!non_increasing_on(mus[iu], ks[iu], caps[iu]))
      throw hypothesis_error("bound_main: mu_" + std::to_string(i + 1) +
                             " not non-increasing on [k_" + std::to_string(i + 1) + ", khat_" +
                             std::to_string(i + 1) + "]");
    if (t > caps[iu])
      throw hypothesis_error("bound_main: t <= khat_" + std::to_string(i + 1) +
                             " violated (family " + std::to_string(i + 1) + " cannot intersect in t points)");
  }
  int worst = 0;
  for (int i = 0; i < r; ++i) {
    int mincap = n;
    for (int j = 0; j < r; ++j)
      if (j != i) mincap = std::min(mincap, caps[static_cast<std::size_t>(j)]);
    worst = std::max(worst, ks[static_cast<std::size_t>(i)] + mincap);
  }
  if (!(n > worst - t))
    throw hypothesis_error("bound_main: n > max_i(k_i + min_{j!=i} khat_j) - t violated (" +
                           std::to_string(n) + " <= " + std::to_string(worst - t) + ")");

  BoundReport rep;
  rep.n = n;
  rep.r = r;
  rep.t = t;
  rep.caps = caps;
  rep.ks = ks;
  bool have = false;
  for (int ell = 0; ell < r; ++ell) {
    int amax = n;
    for (int i = 0; i < r; ++i)
      if (i != ell) amax = std::min(amax, caps[static_cast<std::size_t>(i)]);
    for (int a = t; a <= amax; ++a) {
      Rational v = measure_scatter_trunc(mus[static_cast<std::size_t>(ell)], n, a, t,
                                   caps[static_cast<std::size_t>(ell)]);
      for (int j = 0; j < r; ++j)
        if (j != ell) v += measure_block_trunc(mus[static_cast<std::size_t>(j)], n, a,
                                         caps[static_cast<std::size_t>(j)]);
      if (!have || v > rep.value) {
        rep.value = v;
        rep.argmax.clear();
        have = true;
      }
      if (v == rep.value) rep.argmax.emplace_back(ell + 1, a);
    }
  }
  if (!have) throw hypothesis_error("bound_main: empty (ell, a) grid");

  if (n <= kMaxFamilyN) {
    auto [ell, a] = rep.argmax.front();
    Rational recomputed = 0;
    for (int j = 1; j <= r; ++j) {
      Family fam = (j == ell) ? scatter_family(n, a, t) : block_family(n, a);
      fam = slice(fam, 0, caps[static_cast<std::size_t>(j - 1)]);
      recomputed += measure_family(mus[static_cast<std::size_t>(j - 1)], fam);
      rep.witness.push_back(std::move(fam));
    }
    if (recomputed != rep.value)
      throw std::logic_error("bound_main: witness measure does not recompute to the bound");
  }
  return rep;
}

BoundReport bound_uniform(int n, int k, int r, int t) {
  if (r < 2) throw std::invalid_argument("bound_uniform: r < 2");
  if (!(1 <= t && t <= k && k <= n)) throw std::invalid_argument("bound_uniform: need 1 <= t <= k <= n");
  if (!(n > 2 * k - t))
    throw hypothesis_error("bound_uniform: n > 2k - t violated (" + std::to_string(n) +
                           " <= " + std::to_string(2 * k - t) + ")");
  BoundReport rep;
  rep.n = n;
  rep.r = r;
  rep.t = t;
  rep.caps.assign(static_cast<std::size_t>(r), k);
  rep.ks.assign(static_cast<std::size_t>(r), k);
  bool have = false;
  for (int i = t; i <= k; ++i) {
    Int v = 0;
    for (int m = t; m <= k; ++m) v += binom(i, m) * binom(n - i, k - m);
    v += Int(r - 1) * binom(n - i, k - i);
    Rational rv(v);
    if (!have || rv > rep.value) {
      rep.value = rv;
      rep.argmax.clear();
      have = true;
    }
    if (rv == rep.value) rep.argmax.emplace_back(1, i);
  }
  if (n <= kMaxFamilyN) {
    int a = rep.argmax.front().second;
    Rational total = 0;
    for (int j = 1; j <= r; ++j) {
      Family fam = (j == 1) ? scatter_family(n, a, t) : block_family(n, a);
      fam = slice(fam, k, k);
      total += Rational(Int(fam.count()));
      rep.witness.push_back(std::move(fam));
    }
    if (total != rep.value)
      throw std::logic_error("bound_uniform: witness does not recompute to the bound");
  }
  return rep;
}

BoundReport bound_nonuniform(int n, int r, int t) {
  if (r < 2) throw std::invalid_argument("bound_nonuniform: r < 2");
  if (!(1 <= t && t <= n)) throw std::invalid_argument("bound_nonuniform: need 1 <= t <= n");
  BoundReport rep;
  rep.n = n;
  rep.r = r;
  rep.t = t;
  rep.caps.assign(static_cast<std::size_t>(r), n);
  rep.ks.assign(static_cast<std::size_t>(r), 1);
  bool have = false;
  for (int i = t; i <= n; ++i) {
    Int v = 0;
    for (int m = t; m <= i; ++m) v += binom(i, m);
    v = (v + Int(r - 1)) << (n - i);
    Rational rv(v);
    if (!have || rv > rep.value) {
      rep.value = rv;
      rep.argmax.clear();
      have = true;
    }
    if (rv == rep.value) rep.argmax.emplace_back(1, i);
  }
  if (n <= kMaxFamilyN) {
    int a = rep.argmax.front().second;
    Rational total = 0;
    for (int j = 1; j <= r; ++j) {
      Family fam = (j == 1) ? scatter_family(n, a, t) : block_family(n, a);
      total += Rational(Int(fam.count()));
      rep.witness.push_back(std::move(fam));
    }
    if (total != rep.value)
      throw std::logic_error("bound_nonuniform: witness does not recompute to the bound");
  }
  return rep;
}

Rational bound_single(int n, int k, int khat, const MeasureTable& mu) {
  if (mu.n != n) throw std::invalid_argument("bound_single: measure dimension mismatch");
  if (!(1 <= k && k <= khat && khat <= n))
    throw std::invalid_argument("bound_single: need 1 <= k <= khat <= n");
  if (n < k + khat)
    throw hypothesis_error("bound_single: n >= k + khat violated (" + std::to_string(n) + " < " +
                           std::to_string(k + khat) + ")");
  if (!non_increasing_on(mu, k, khat))
    throw hypothesis_error("bound_single: mu not non-increasing on [k, khat]");
  Rational sum = 0;
  for (int s = 1; s <= khat; ++s) sum += mu.weight(s) * Rational(binom(n - 1, s - 1));
  return sum;
}

Int ekr_bound(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("ekr_bound: k out of [1,n]");
  if (2 * k > n)
    throw hypothesis_error("ekr_bound: 2k <= n violated (" + std::to_string(2 * k) + " > " +
                           std::to_string(n) + ")");
  return binom(n - 1, k - 1);
}

int argmax_stabilization_r0(int n, int t, const MeasureTable& mu) {
  if (mu.n != n) throw std::invalid_argument("argmax_stabilization_r0: dimension mismatch");
  if (!(1 <= t && t <= n)) throw std::invalid_argument("argmax_stabilization_r0: t out of [1,n]");
  if (t == n) return 2;  // singleton candidate range

  Rational a_t = measure_scatter_trunc(mu, n, t, t, n);
  Rational b_t = measure_block_trunc(mu, n, t, n);
  Int r0 = 2;
  for (int a = t + 1; a <= n; ++a) {
    Rational a_a = measure_scatter_trunc(mu, n, a, t, n);
    Rational b_a = measure_block_trunc(mu, n, a, n);
    if (b_t == b_a)
      throw std::domain_error("argmax_stabilization_r0: block coefficients tie at a = " +
                              std::to_string(a) + "; a = t never dominates strictly");
    // smallest r with (r-1)(b_t - b_a) > a_a - a_t
    Int ra = floor_rational((a_a - a_t) / (b_t - b_a)) + 2;
    r0 = std::max(r0, ra);
  }
  if (r0 > 1'000'000'000) throw std::domain_error("argmax_stabilization_r0: r0 out of int range");
  int r0i = static_cast<int>(r0);

  // Direct verification around the crossover.
  for (int r = 2; r <= r0i + 2; ++r) {
    Rational best;
    int best_a = 0;
    bool unique = true, have = false;
    for (int a = t; a <= n; ++a) {
      Rational v = measure_scatter_trunc(mu, n, a, t, n) + Rational(r - 1) * measure_block_trunc(mu, n, a, n);
      if (!have || v > best) {
        best = v;
        best_a = a;
        unique = true;
        have = true;
      } else if (v == best) {
        unique = false;
      }
    }
    bool stable = unique && best_a == t;
    if (stable != (r >= r0i))
      throw std::logic_error("argmax_stabilization_r0: verification mismatch at r = " +
                             std::to_string(r));
  }
  return r0i;
}

Rational product_bound_large_r(int n, int t, const MeasureTable& mu, int r) {
  if (mu.n != n) throw std::invalid_argument("product_bound_large_r: dimension mismatch");
  if (!validate_window(mu))
    throw hypothesis_error("product_bound_large_r: mu violates its declared window");
  int r0 = argmax_stabilization_r0(n, t, mu);
  if (r < r0)
    throw hypothesis_error("product_bound_large_r: outside the paper's special case, r = " +
                           std::to_string(r) + " < r0 = " + std::to_string(r0));
  bool window_ok = false;
  for (int k = 1; k <= n && !window_ok; ++k)
    for (int khat = k; khat <= n && !window_ok; ++khat)
      if (n > k + khat - t && non_increasing_on(mu, k, khat)) window_ok = true;
  if (!window_ok)
    throw hypothesis_error(
        "product_bound_large_r: no (k, khat) with mu non-increasing and n > k + khat - t");
  return rational_pow(measure_block_trunc(mu, n, t, n), static_cast<unsigned>(r));
}

}  // namespace xfam
