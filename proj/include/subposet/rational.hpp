#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace subposet {

// Every Lubell value, bound and average in this library is an exact
// rational; comparisons like 241/105 < 2.2953 must never go through
// floating point.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// C(n,k) as an exact integer; 0 outside 0 <= k <= n.
Int binomial(int n, int k);

/// C(n,k) in 64 bits. Requires n <= 61.
std::uint64_t binomial_u64(int n, int k);

std::string to_string(const Int& v);

/// Canonical "p/q" with q > 0 and gcd(|p|,q) = 1; integers render as "p/1".
std::string rat_string(const Rat& v);

/// Parses "p/q" or a bare integer. Throws std::invalid_argument on junk.
Rat parse_rational(const std::string& text);

inline Rat make_rat(long long num, long long den) { return Rat(Int(num), Int(den)); }

}  // namespace subposet
