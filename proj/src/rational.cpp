#include "xfam/rational.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace xfam {

Int binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  static std::vector<std::vector<Int>> rows{{1}};  // rows[m][j] = C(m,j)
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  while (static_cast<int>(rows.size()) <= n) {
    const auto& prev = rows.back();
    std::vector<Int> row(prev.size() + 1, 1);
    for (std::size_t j = 1; j < prev.size(); ++j) row[j] = prev[j - 1] + prev[j];
    rows.push_back(std::move(row));
  }
  return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

Rational rational_pow(const Rational& base, unsigned e) {
  Rational acc = 1, b = base;
  while (e) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

std::string rational_str(const Rational& r) {
  return r.str();  // cpp_rational prints reduced, "/1" omitted
}

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Int(std::string(s)));
    Int num(std::string(s.substr(0, slash)));
    Int den(std::string(s.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational: '" + std::string(s) + "'");
  }
}

}  // namespace xfam
