#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace asep {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return static_cast<double>(r); }
inline double to_double(double x) { return x; }

/// Parse a decimal literal ("0.3", "-4", "7/10") into an exact rational.
Rat rat_from_decimal(const std::string& s);

template <class T>
T ipow(const T& base, long n) {
    if (n < 0) throw std::invalid_argument("ipow: negative exponent");
    T acc(1), b(base);
    long e = n;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace asep
