#pragma once

#include <charconv>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffusion/errors.hpp"
#include "diffusion/numeric.hpp"

namespace diffusion {

// Label vector of one configuration. The label of vertex v is num[v] / den,
// with one shared denominator for the whole vector (den == 1 in integer
// mode). Firing moves whole chips, i.e. changes numerators by multiples of
// den, so den stays constant along an entire run.
template <class Int>
struct BasicConfig {
    std::vector<Int> num;
    Int den{1};

    std::size_t size() const noexcept { return num.size(); }

    bool operator==(const BasicConfig& o) const { return den == o.den && num == o.num; }
};

using Config = BasicConfig<std::int64_t>;

namespace detail {

template <class Int>
Int parse_scalar(std::string_view tok) {
    if (tok.empty()) throw MalformedLine("empty numeric token");
    std::size_t i = tok[0] == '-' || tok[0] == '+' ? 1 : 0;
    if (i == tok.size()) throw MalformedLine("sign without digits in '" + std::string(tok) + "'");
    for (std::size_t k = i; k < tok.size(); ++k)
        if (tok[k] < '0' || tok[k] > '9')
            throw MalformedLine("non-integer token '" + std::string(tok) + "'");
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec == std::errc::result_out_of_range)
            throw ArithmeticOverflow("token '" + std::string(tok) +
                                     "' does not fit in 64 bits; retry in bigint mode");
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw MalformedLine("non-integer token '" + std::string(tok) + "'");
        return value;
    } else {
        return Int(std::string(tok));
    }
}

} // namespace detail

// Parses one configuration line: n whitespace-separated integers, or "p/q"
// tokens. All tokens are brought to one shared denominator (the lcm of the
// reduced per-token denominators), so the result is canonical.
template <class Int>
BasicConfig<Int> parse_config(std::string_view text) {
    std::vector<Int> nums;
    std::vector<Int> dens;
    std::size_t i = 0;
    bool any_fraction = false;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                                   text[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n' &&
               text[j] != '\r')
            ++j;
        if (j > i) {
            std::string_view tok = text.substr(i, j - i);
            auto slash = tok.find('/');
            Int p, q;
            if (slash == std::string_view::npos) {
                p = detail::parse_scalar<Int>(tok);
                q = Int(1);
            } else {
                any_fraction = true;
                p = detail::parse_scalar<Int>(tok.substr(0, slash));
                q = detail::parse_scalar<Int>(tok.substr(slash + 1));
                if (q <= Int(0))
                    throw MalformedLine("denominator must be positive in '" + std::string(tok) +
                                        "'");
                Int g = num::gcd_int(p, q);
                if (g > Int(1)) {
                    p = Int(p / g);
                    q = Int(q / g);
                }
            }
            nums.push_back(std::move(p));
            dens.push_back(std::move(q));
        }
        i = j;
    }
    if (nums.empty()) throw MalformedLine("empty configuration");

    Int d(1);
    if (any_fraction)
        for (const auto& q : dens) d = num::lcm_int(d, q);
    BasicConfig<Int> cfg;
    cfg.den = d;
    cfg.num.reserve(nums.size());
    for (std::size_t k = 0; k < nums.size(); ++k)
        cfg.num.push_back(num::checked_mul(nums[k], Int(d / dens[k])));
    return cfg;
}

// Writes labels reduced per token: "p" when integral, "p/q" otherwise.
template <class Int>
std::string serialize_config(const BasicConfig<Int>& cfg) {
    std::string out;
    for (std::size_t v = 0; v < cfg.num.size(); ++v) {
        if (v) out += ' ';
        Int g = num::gcd_int(cfg.num[v], cfg.den);
        Int p = g > Int(1) ? Int(cfg.num[v] / g) : cfg.num[v];
        Int q = g > Int(1) ? Int(cfg.den / g) : cfg.den;
        out += num::int_str(p);
        if (q != Int(1)) {
            out += '/';
            out += num::int_str(q);
        }
    }
    return out;
}

// Adds c chips to every vertex (c is a whole-chip count, not a label unit).
template <class Int>
BasicConfig<Int> shift_config(const BasicConfig<Int>& cfg, const Int& c) {
    BasicConfig<Int> out;
    out.den = cfg.den;
    out.num.reserve(cfg.num.size());
    Int delta = num::checked_mul(c, cfg.den);
    for (const auto& x : cfg.num) out.num.push_back(num::checked_add(x, delta));
    return out;
}

// Relabels vertices with the same convention as permute_graph: perm[old] = new.
template <class Int>
BasicConfig<Int> permute_config(const BasicConfig<Int>& cfg, std::span<const std::int32_t> perm) {
    if (perm.size() != cfg.num.size()) throw LengthMismatch("permutation length != config length");
    BasicConfig<Int> out;
    out.den = cfg.den;
    out.num.resize(cfg.num.size());
    for (std::size_t v = 0; v < cfg.num.size(); ++v)
        out.num[static_cast<std::size_t>(perm[v])] = cfg.num[v];
    return out;
}

template <class Int>
Int min_numerator(const BasicConfig<Int>& cfg) {
    if (cfg.num.empty()) throw InvalidParams("empty configuration");
    Int m = cfg.num[0];
    for (const auto& x : cfg.num)
        if (x < m) m = x;
    return m;
}

template <class Int>
Int sum_numerators(const BasicConfig<Int>& cfg) {
    Int s(0);
    for (const auto& x : cfg.num) s = num::checked_add(s, x);
    return s;
}

} // namespace diffusion
