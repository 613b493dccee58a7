#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace ujn {

// Exact scalar field: arbitrary-precision rationals, kept in lowest terms
// with positive denominator by the backend.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline bool is_power_of_two(const Int& x) {
    if (x <= 0) return false;
    Int y = x & (x - 1);
    return y == 0;
}

// True iff r == 2^p for some integer p (negative p allowed).
inline bool is_integral_power_of_two(const Rat& r) {
    if (r <= 0) return false;
    return is_power_of_two(numerator(r)) && is_power_of_two(denominator(r));
}

inline Rat pow2(int p) {
    if (p >= 0) return Rat(Int(1) << p, 1);
    return Rat(1, Int(1) << (-p));
}

inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_from_string(const std::string& s) {
    try {
        Rat r(s);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational literal: " + s);
    }
}

} // namespace ujn
