#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace xfam {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C(n,k) via Pascal's rule, exact; 0 outside 0 <= k <= n.
Int binom(int n, int k);

/// base^e for e >= 0.
Rational rational_pow(const Rational& base, unsigned e);

/// Canonical string: "p/q" reduced, "/1" omitted, e.g. "3/4", "6", "0".
std::string rational_str(const Rational& r);

/// Accepts "p", "p/q", optional leading '-'.  Throws std::invalid_argument.
Rational parse_rational(std::string_view s);

}  // namespace xfam
