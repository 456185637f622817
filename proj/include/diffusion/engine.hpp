#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "diffusion/configuration.hpp"
#include "diffusion/errors.hpp"
#include "diffusion/multigraph.hpp"
#include "diffusion/numeric.hpp"
#include "diffusion/rational.hpp"

// The synchronous diffusion update: at every step each vertex sends one chip
// along each incident edge whose far endpoint holds a strictly smaller label,
// and receives one chip along each edge whose far endpoint holds a strictly
// larger one. Parallel edges fire independently; equal labels exchange
// nothing. Everything here is exact integer arithmetic on numerators over one
// shared denominator.

namespace diffusion {

// Per-edge sign pair: x compares the endpoint labels before a step, y after
// it. Parallel edges of one vertex pair share a single label because the
// comparison is identical for each of them.
struct EdgeLabel {
    std::int8_t x{0};
    std::int8_t y{0};

    bool operator==(const EdgeLabel&) const = default;
};

// Aligned index-for-index with MultiGraph::edges().
using EdgeLabeling = std::vector<EdgeLabel>;

// The four labels whose presence forces a strict potential drop.
inline bool is_strict_decrease(EdgeLabel l) {
    return (l.x == 1 && l.y == 1) || (l.x == -1 && l.y == -1) ||
           (l.x == 0 && (l.y == 1 || l.y == -1));
}

// Labels possible once the potential has stopped decreasing.
inline bool in_settled_five(EdgeLabel l) {
    return (l.x == 1 && l.y == -1) || (l.x == -1 && l.y == 1) || (l.x == 0 && l.y == 0) ||
           (l.x == 1 && l.y == 0) || (l.x == -1 && l.y == 0);
}

// Labels of the eventual orbit: back-and-forth or no transfer at all.
inline bool in_final_three(EdgeLabel l) {
    return (l.x == 1 && l.y == -1) || (l.x == -1 && l.y == 1) || (l.x == 0 && l.y == 0);
}

namespace detail {

template <class Int>
void check_belongs(const MultiGraph& g, const BasicConfig<Int>& w) {
    if (w.num.size() != static_cast<std::size_t>(g.vertex_count()))
        throw LengthMismatch("configuration length " + std::to_string(w.num.size()) +
                             " != vertex count " + std::to_string(g.vertex_count()));
    if (w.den < Int(1)) throw InvalidParams("denominator must be >= 1");
}

} // namespace detail

// One synchronous step. Input is untouched; the result shares its denominator.
template <class Int>
BasicConfig<Int> step(const MultiGraph& g, const BasicConfig<Int>& w) {
    detail::check_belongs(g, w);
    // Net chip flow per vertex. Bounded by the degree, so plain adds suffice
    // up to the checked totals below.
    std::vector<std::int64_t> flow(w.num.size(), 0);
    for (const auto& e : g.edges()) {
        const auto u = static_cast<std::size_t>(e.u);
        const auto v = static_cast<std::size_t>(e.v);
        int s = num::sgn_diff(w.num[u], w.num[v]);
        if (s > 0) { // u richer: u fires mult chips to v
            flow[u] = num::checked_sub(flow[u], e.mult);
            flow[v] = num::checked_add(flow[v], e.mult);
        } else if (s < 0) {
            flow[u] = num::checked_add(flow[u], e.mult);
            flow[v] = num::checked_sub(flow[v], e.mult);
        }
    }
    BasicConfig<Int> out;
    out.den = w.den;
    out.num.resize(w.num.size());
    for (std::size_t v = 0; v < w.num.size(); ++v)
        out.num[v] = num::checked_add(w.num[v], num::checked_mul(Int(flow[v]), w.den));
    return out;
}

// Raw potential numerator: sum over v of num_t[v] * num_t1[v]. The implied
// denominator is den^2, constant along a run, so consecutive potentials can
// be compared on this value directly.
template <class Int>
Int potential_num(const BasicConfig<Int>& w_t, const BasicConfig<Int>& w_t1) {
    if (w_t.num.size() != w_t1.num.size())
        throw LengthMismatch("potential of configurations with different lengths");
    if (w_t.den != w_t1.den)
        throw LengthMismatch("potential of configurations with different denominators");
    Int s(0);
    for (std::size_t v = 0; v < w_t.num.size(); ++v)
        s = num::checked_add(s, num::checked_mul(w_t.num[v], w_t1.num[v]));
    return s;
}

// Exact potential sum_v w_v(t) * w_v(t+1).
template <class Int>
BasicRational<Int> potential(const BasicConfig<Int>& w_t, const BasicConfig<Int>& w_t1) {
    Int s = potential_num(w_t, w_t1);
    return BasicRational<Int>::make(std::move(s), num::checked_mul(w_t.den, w_t.den));
}

template <class Int>
void edge_labels_into(const MultiGraph& g, const BasicConfig<Int>& w_t,
                      const BasicConfig<Int>& w_t1, EdgeLabeling& out) {
    detail::check_belongs(g, w_t);
    detail::check_belongs(g, w_t1);
    if (w_t.den != w_t1.den)
        throw LengthMismatch("edge labels of configurations with different denominators");
    out.resize(g.pair_count());
    std::size_t i = 0;
    for (const auto& e : g.edges()) {
        const auto u = static_cast<std::size_t>(e.u);
        const auto v = static_cast<std::size_t>(e.v);
        out[i].x = static_cast<std::int8_t>(num::sgn_diff(w_t.num[u], w_t.num[v]));
        out[i].y = static_cast<std::int8_t>(num::sgn_diff(w_t1.num[u], w_t1.num[v]));
        ++i;
    }
}

template <class Int>
EdgeLabeling edge_labels(const MultiGraph& g, const BasicConfig<Int>& w_t,
                         const BasicConfig<Int>& w_t1) {
    EdgeLabeling out;
    edge_labels_into(g, w_t, w_t1, out);
    return out;
}

// Lower-bound numerator B in "potential >= -B/4". For simple graphs
// B = n(n-1)^2; with parallel edges the same pairing argument gives the
// degree form B = sum_v deg(v)^2, since a vertex moves at most deg(v) chips
// per step.
inline std::int64_t lower_bound_quarters(const MultiGraph& g) {
    const std::int64_t n = g.vertex_count();
    if (g.is_simple()) return num::checked_mul(n, num::checked_mul(n - 1, n - 1));
    std::int64_t b = 0;
    for (std::int32_t v = 0; v < g.vertex_count(); ++v)
        b = num::checked_add(b, num::checked_mul(g.degree(v), g.degree(v)));
    return b;
}

// The potential of any run on g never goes below this value.
inline Rational64 lower_bound(const MultiGraph& g) {
    return Rational64::make(-lower_bound_quarters(g), 4);
}

struct RecordOptions {
    bool configs{true};
    bool potentials{true};
    bool labelings{false};
};

template <class Int>
struct BasicTrace {
    const MultiGraph* graph{nullptr};
    std::vector<BasicConfig<Int>> configs;      // w(0..k) when recorded
    std::vector<BasicRational<Int>> potentials; // P(0..k-1) when recorded
    std::vector<EdgeLabeling> labelings;        // L(0..k-1) when recorded
    std::uint64_t steps_recorded{0};            // k = number of steps applied
};

using Trace = BasicTrace<std::int64_t>;

// Stop predicate sees (t, w(t), w(t+1)) right after step t was applied and
// returns true to end the run there.
template <class Int>
using StopCondition =
    std::function<bool(std::uint64_t, const BasicConfig<Int>&, const BasicConfig<Int>&)>;

template <class Int>
BasicTrace<Int> trace(const MultiGraph& g, const BasicConfig<Int>& w0, std::uint64_t max_steps,
                      RecordOptions opts = {}, const StopCondition<Int>& stop = nullptr) {
    if (max_steps < 1) throw InvalidParams("trace requires max_steps >= 1");
    detail::check_belongs(g, w0);
    BasicTrace<Int> tr;
    tr.graph = &g;
    BasicConfig<Int> cur = w0;
    if (opts.configs) tr.configs.push_back(cur);
    for (std::uint64_t t = 0; t < max_steps; ++t) {
        BasicConfig<Int> next = step(g, cur);
        if (opts.potentials) tr.potentials.push_back(potential(cur, next));
        if (opts.labelings) {
            EdgeLabeling l;
            edge_labels_into(g, cur, next, l);
            tr.labelings.push_back(std::move(l));
        }
        bool done = stop && stop(t, cur, next);
        cur = std::move(next);
        if (opts.configs) tr.configs.push_back(cur);
        ++tr.steps_recorded;
        if (done) break;
    }
    return tr;
}

} // namespace diffusion
