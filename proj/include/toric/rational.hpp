#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace toric {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

/// Small integer lattice vector (exponent vectors, rays).
using VecZ = std::vector<std::int64_t>;

inline double to_double(const Int& v) { return v.convert_to<double>(); }

inline double to_double(const Rat& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rat rat_from_double(double d) {
    if (d == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(d, &exp);  // d = m * 2^exp, |m| in [1/2,1)
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    Rat r{Int(mant)};
    if (exp >= 0)
        r *= Rat(Int(1) << exp);
    else
        r /= Rat(Int(1) << (-exp));
    return r;
}

inline Int gcd_int(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace toric
