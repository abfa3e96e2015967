#include "xfam/measures.hpp"

#include <stdexcept>

namespace xfam {

MeasureTable counting_measure(int n) {
  MeasureTable mu;
  mu.n = n;
  mu.weights.assign(static_cast<std::size_t>(n) + 1, Rational(1));
  mu.window = {1, n};
  return mu;
}

MeasureTable product_measure(int n, const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("product_measure: p out of [0,1]");
  MeasureTable mu;
  mu.n = n;
  mu.weights.resize(static_cast<std::size_t>(n) + 1);
  Rational q = 1 - p;
  for (int s = 0; s <= n; ++s)
    mu.weights[static_cast<std::size_t>(s)] =
        rational_pow(p, static_cast<unsigned>(s)) * rational_pow(q, static_cast<unsigned>(n - s));
  if (p <= Rational(1, 2)) mu.window = {1, n};
  return mu;
}

MeasureTable uniform_measure(int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("uniform_measure: k out of [1,n]");
  MeasureTable mu;
  mu.n = n;
  mu.weights.assign(static_cast<std::size_t>(n) + 1, Rational(0));
  mu.weights[static_cast<std::size_t>(k)] = Rational(1, binom(n, k));
  mu.window = {k, n};
  return mu;
}

bool non_increasing_on(const MeasureTable& mu, int lo, int hi) {
  if (lo < 0 || hi > mu.n || lo > hi) throw std::invalid_argument("non_increasing_on: bad range");
  for (int s = lo; s < hi; ++s)
    if (mu.weight(s) < mu.weight(s + 1)) return false;
  return true;
}

bool validate_window(const MeasureTable& mu) {
  if (!mu.window) return true;
  auto [k, khat] = *mu.window;
  return non_increasing_on(mu, k, khat);
}

Rational measure_family(const MeasureTable& mu, const Family& f) {
  if (mu.n != f.n()) throw std::invalid_argument("measure_family: dimension mismatch");
  auto counts = f.level_counts();
  Rational sum = 0;
  for (int s = 0; s <= mu.n; ++s) {
    auto c = counts[static_cast<std::size_t>(s)];
    if (c) sum += mu.weight(s) * Rational(Int(c));
  }
  return sum;
}

}  // namespace xfam
