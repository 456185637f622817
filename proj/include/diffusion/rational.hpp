#pragma once

#include <string>

#include "diffusion/errors.hpp"
#include "diffusion/numeric.hpp"

namespace diffusion {

// Exact rational, always stored normalized: den >= 1 and gcd(num, den) == 1.
template <class Int>
struct BasicRational {
    Int num{0};
    Int den{1};

    static BasicRational make(Int n, Int d) {
        if (d == Int(0)) throw InvalidParams("rational with zero denominator");
        if (d < Int(0)) {
            n = num::checked_neg(n);
            d = num::checked_neg(d);
        }
        Int g = num::gcd_int(n, d);
        if (g > Int(1)) {
            n = Int(n / g);
            d = Int(d / g);
        }
        BasicRational r;
        r.num = std::move(n);
        r.den = std::move(d);
        return r;
    }

    bool operator==(const BasicRational& o) const { return num == o.num && den == o.den; }

    // den is positive on both sides, so cross-multiplication preserves order.
    bool operator<(const BasicRational& o) const {
        return num::checked_mul(num, o.den) < num::checked_mul(o.num, den);
    }
    bool operator<=(const BasicRational& o) const { return *this == o || *this < o; }
    bool operator>(const BasicRational& o) const { return o < *this; }
    bool operator>=(const BasicRational& o) const { return o <= *this; }

    // "p" when integral, "p/q" otherwise.
    std::string str() const {
        if (den == Int(1)) return num::int_str(num);
        return num::int_str(num) + "/" + num::int_str(den);
    }

    // Always "p/q", for machine-readable records.
    std::string pq() const { return num::int_str(num) + "/" + num::int_str(den); }
};

using Rational64 = BasicRational<std::int64_t>;

} // namespace diffusion
