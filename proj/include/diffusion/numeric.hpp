#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include "diffusion/errors.hpp"

// Checked integer helpers shared by the fixed-width and arbitrary-precision
// label types. For std::int64_t every add/sub/mul is overflow-checked and
// throws ArithmeticOverflow; a wider type (e.g. boost cpp_int) passes through.

namespace diffusion::num {

template <class Int>
inline Int checked_add(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r))
            throw ArithmeticOverflow("int64 addition overflow; retry in bigint mode");
        return r;
    } else {
        return a + b;
    }
}

template <class Int>
inline Int checked_sub(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        std::int64_t r;
        if (__builtin_sub_overflow(a, b, &r))
            throw ArithmeticOverflow("int64 subtraction overflow; retry in bigint mode");
        return r;
    } else {
        return a - b;
    }
}

template <class Int>
inline Int checked_mul(const Int& a, const Int& b) {
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            throw ArithmeticOverflow("int64 multiplication overflow; retry in bigint mode");
        return r;
    } else {
        return a * b;
    }
}

template <class Int>
inline Int checked_neg(const Int& a) {
    return checked_sub(Int(0), a);
}

// Sign of (a - b) without forming the difference, so it never overflows.
template <class Int>
inline int sgn_diff(const Int& a, const Int& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

template <class Int>
inline Int abs_checked(const Int& a) {
    return a < Int(0) ? checked_neg(a) : a;
}

template <class Int>
inline Int gcd_int(Int a, Int b) {
    a = abs_checked(a);
    b = abs_checked(b);
    while (b != Int(0)) {
        Int r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

template <class Int>
inline Int lcm_int(const Int& a, const Int& b) {
    if (a == Int(0) || b == Int(0)) return Int(0);
    Int g = gcd_int(a, b);
    Int l = checked_mul(Int(a / g), b);
    return abs_checked(l);
}

template <class Int>
inline std::string int_str(const Int& v) {
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        return std::to_string(v);
    } else {
        std::ostringstream os;
        os << v;
        return os.str();
    }
}

} // namespace diffusion::num
