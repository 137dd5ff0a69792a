#pragma once
// Exact arithmetic: arbitrary-precision integers and rationals, plus the
// factorial helpers used throughout the counting formulas.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "treelim/errors.hpp"

namespace treelim {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt factorial(long long n) {
    if (n < 0) throw Error("factorial: negative argument");
    BigInt f = 1;
    for (long long i = 2; i <= n; ++i) f *= i;
    return f;
}

// n (n-1) ... (n-k+1)
inline BigInt falling_factorial(long long n, long long k) {
    BigInt f = 1;
    for (long long i = 0; i < k; ++i) f *= BigInt(n - i);
    return f;
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// Canonical "num/den" rendering; integers render without the "/1".
inline std::string rat_string(const Rat& x) {
    const BigInt num = numerator(x);
    const BigInt den = denominator(x);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "3", "-3", "1/2"; normalizes sign and gcd via cpp_rational.
inline Rat parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        const BigInt num(s.substr(0, slash));
        const BigInt den(s.substr(slash + 1));
        if (den == 0) throw Error("parse_rational: zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw Error("parse_rational: cannot parse '" + s + "'");
    }
}

}  // namespace treelim
