#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "xfam/family.hpp"
#include "xfam/rational.hpp"

namespace xfam {

// Size-indexed measure: weight(F) = weights[|F|].  weights has n+1 entries
// (index 0 is a convention extension for the empty set).  window = (k, khat)
// declares where the weights are non-increasing.
struct MeasureTable {
  int n = 0;
  std::vector<Rational> weights;                 // size n+1
  std::optional<std::pair<int, int>> window;     // (k, khat), 1 <= k <= khat <= n

  const Rational& weight(int size) const { return weights.at(static_cast<std::size_t>(size)); }
};

/// mu == 1 on [0,n]; window (1,n).
MeasureTable counting_measure(int n);

/// weights[s] = p^s (1-p)^(n-s); window (1,n) when p <= 1/2.
MeasureTable product_measure(int n, const Rational& p);

/// weight 1/C(n,k) at size k, 0 elsewhere; window (k,n).
MeasureTable uniform_measure(int n, int k);

/// True iff weights are non-increasing across the declared window
/// (vacuously true when no window is declared).
bool validate_window(const MeasureTable& mu);

/// True iff weights[lo] >= weights[lo+1] >= ... >= weights[hi].
bool non_increasing_on(const MeasureTable& mu, int lo, int hi);

/// Exact sum of weights[|F|] over members of f.
Rational measure_family(const MeasureTable& mu, const Family& f);

}  // namespace xfam
