#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffusion/engine.hpp"

// Detection and verification layer. Every run of the diffusion process
// settles into an orbit of length 1 or 2; detect_period exploits that with a
// two-step window, detect_period_generic assumes nothing and serves as an
// independent oracle, and verify_theorem re-checks the supporting invariants
// (monotone bounded potential, label transitions) at every recorded step.

namespace diffusion {

template <class Int>
struct BasicPeriodReport {
    std::uint64_t transient{0};              // first index of the orbit
    int period{1};                           // always 1 or 2
    std::uint64_t potential_stabilization{0}; // T: potential constant from here on
    std::uint64_t label_stabilization{0};     // T': labels final from here on
    BasicRational<Int> final_potential{};

    bool operator==(const BasicPeriodReport&) const = default;
};

using PeriodReport = BasicPeriodReport<std::int64_t>;

struct GenericPeriod {
    std::uint64_t transient{0};
    std::uint64_t period{0};

    bool operator==(const GenericPeriod&) const = default;
};

struct CheckResult {
    std::string name;
    bool passed{true};
    std::optional<std::uint64_t> first_failure;
};

template <class Int>
struct BasicVerificationReport {
    BasicPeriodReport<Int> period_report;
    std::vector<CheckResult> checks;
    Int min_label_num{0}; // smallest numerator seen anywhere in the run

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

using VerificationReport = BasicVerificationReport<std::int64_t>;

// Step budget: 16 * (P(0) - lower bound) scaled to the integer potential
// grid, plus slack for constant-potential stretches, clamped to >= 1024.
// Saturates instead of overflowing. Hitting this cap means either an engine
// bug or a deliberately tiny override, never normal behaviour.
template <class Int>
std::uint64_t default_cap(const MultiGraph& g, const BasicConfig<Int>& w0) {
    constexpr std::uint64_t kFloor = 1024;
    try {
        BasicConfig<Int> w1 = step(g, w0);
        Int s0 = potential_num(w0, w1);
        Int d2 = num::checked_mul(w0.den, w0.den);
        Int bq(lower_bound_quarters(g));
        // 16*(P0 - LB)*D^2 = 16*S0 + 4*Bq*D^2
        Int v = num::checked_mul(Int(16), s0);
        v = num::checked_add(v, num::checked_mul(Int(4), num::checked_mul(bq, d2)));
        v = num::checked_add(v, num::checked_mul(Int(16), Int(g.edge_total())));
        v = num::checked_add(v, Int(256));
        Int lim(std::numeric_limits<std::int64_t>::max());
        if (v > lim) return static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
        auto c = static_cast<std::int64_t>(v);
        return c < static_cast<std::int64_t>(kFloor) ? kFloor : static_cast<std::uint64_t>(c);
    } catch (const ArithmeticOverflow&) {
        return static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    }
}

namespace detail {

[[noreturn]] inline void throw_cap(std::uint64_t cap) {
    throw CapExceeded("no repeat within " + std::to_string(cap) +
                      " steps: the process is guaranteed to become periodic, so this is "
                      "either an engine bug or a cap set too low");
}

inline std::uint64_t resolve_cap(std::uint64_t cap) {
    if (cap == 0) return 0; // caller substitutes default_cap
    if (cap < 2) throw InvalidParams("cap must be >= 2");
    return cap;
}

} // namespace detail

template <class Int>
struct RunObservation {
    BasicPeriodReport<Int> report;
    Int min_label_num{0};       // over every configuration of the run
    std::uint64_t detected_at{0}; // transient + period
};

// Streaming run keeping only a two-step window; O(n + m) memory independent
// of the transient length.
template <class Int>
RunObservation<Int> observe_run(const MultiGraph& g, const BasicConfig<Int>& w0,
                                std::uint64_t cap = 0) {
    detail::check_belongs(g, w0);
    cap = detail::resolve_cap(cap);
    if (cap == 0) cap = default_cap(g, w0);

    RunObservation<Int> obs;
    obs.min_label_num = w0.num.empty() ? Int(0) : min_numerator(w0);

    BasicConfig<Int> prev2, prev1, cur = w0;
    Int s_prev{};
    bool have_s_prev = false;
    Int s_cur{};
    std::uint64_t t = 0;
    std::uint64_t T = 0, Tp = 0;
    int period = 0;

    for (;;) {
        if (t >= cap) detail::throw_cap(cap);
        BasicConfig<Int> next = step(g, cur);
        s_cur = potential_num(cur, next);
        bool nonfinal = false;
        for (const auto& e : g.edges()) {
            EdgeLabel l{
                static_cast<std::int8_t>(num::sgn_diff(cur.num[static_cast<std::size_t>(e.u)],
                                                       cur.num[static_cast<std::size_t>(e.v)])),
                static_cast<std::int8_t>(num::sgn_diff(next.num[static_cast<std::size_t>(e.u)],
                                                       next.num[static_cast<std::size_t>(e.v)]))};
            if (!in_final_three(l)) {
                nonfinal = true;
                break;
            }
        }
        if (nonfinal) Tp = t + 1;
        if (have_s_prev && s_cur < s_prev) T = t;
        s_prev = s_cur;
        have_s_prev = true;
        for (const auto& x : next.num)
            if (x < obs.min_label_num) obs.min_label_num = x;

        prev2 = std::move(prev1);
        prev1 = std::move(cur);
        cur = std::move(next);
        ++t;
        if (cur == prev1) {
            period = 1;
            break;
        }
        if (t >= 2 && cur == prev2) {
            period = 2;
            break;
        }
    }

    obs.report.period = period;
    obs.report.transient = t - static_cast<std::uint64_t>(period);
    obs.report.potential_stabilization = T;
    obs.report.label_stabilization = Tp;
    obs.report.final_potential =
        BasicRational<Int>::make(s_cur, num::checked_mul(w0.den, w0.den));
    obs.detected_at = t;
    return obs;
}

// Runs until the first t with w(t) = w(t-1) (period 1, checked first) or
// w(t) = w(t-2) (period 2). cap = 0 picks the default budget.
template <class Int>
BasicPeriodReport<Int> detect_period(const MultiGraph& g, const BasicConfig<Int>& w0,
                                     std::uint64_t cap = 0) {
    return observe_run(g, w0, cap).report;
}

// Independent oracle: first repeated configuration via a seen-state index,
// with no assumption on the period length.
template <class Int>
GenericPeriod detect_period_generic(const MultiGraph& g, const BasicConfig<Int>& w0,
                                    std::uint64_t cap = 0) {
    detail::check_belongs(g, w0);
    cap = detail::resolve_cap(cap);
    if (cap == 0) cap = default_cap(g, w0);
    std::map<std::vector<Int>, std::uint64_t> seen;
    BasicConfig<Int> cur = w0;
    for (std::uint64_t t = 0;; ++t) {
        auto [it, inserted] = seen.try_emplace(cur.num, t);
        if (!inserted) return {it->second, t - it->second};
        if (t >= cap) detail::throw_cap(cap);
        cur = step(g, cur);
    }
}

namespace detail {

// Shared full-history runner: configs w(0..E), raw potentials S(0..E-1) and
// labelings L(0..E-1), where E = transient + period + extra.
template <class Int>
struct History {
    std::vector<BasicConfig<Int>> configs;
    std::vector<Int> pots;
    std::vector<EdgeLabeling> labels;
    std::uint64_t detected_at{0};
    int period{0};
};

template <class Int>
History<Int> run_history(const MultiGraph& g, const BasicConfig<Int>& w0, std::uint64_t cap,
                         std::uint64_t extra) {
    cap = resolve_cap(cap);
    if (cap == 0) cap = default_cap(g, w0);
    History<Int> h;
    h.configs.push_back(w0);
    for (std::uint64_t t = 0;; ++t) {
        const auto& cur = h.configs.back();
        BasicConfig<Int> next = step(g, cur);
        h.pots.push_back(potential_num(cur, next));
        EdgeLabeling l;
        edge_labels_into(g, cur, next, l);
        h.labels.push_back(std::move(l));
        h.configs.push_back(std::move(next));
        std::uint64_t now = t + 1;
        if (h.period == 0) {
            if (h.configs[now] == h.configs[now - 1]) {
                h.period = 1;
                h.detected_at = now;
            } else if (now >= 2 && h.configs[now] == h.configs[now - 2]) {
                h.period = 2;
                h.detected_at = now;
            } else if (now >= cap) {
                throw_cap(cap);
            }
        }
        if (h.period != 0 && now >= h.detected_at + extra) return h;
    }
}

} // namespace detail

// Runs to periodicity (plus two extra steps) and re-checks every invariant
// of the potential/label argument on the recorded history. A failed check is
// a report entry, not an exception.
template <class Int>
BasicVerificationReport<Int> verify_theorem(const MultiGraph& g, const BasicConfig<Int>& w0,
                                            std::uint64_t cap = 0) {
    detail::check_belongs(g, w0);
    auto h = detail::run_history(g, w0, cap, 2);
    const std::size_t e = h.pots.size(); // number of recorded steps

    BasicVerificationReport<Int> rep;
    rep.period_report.period = h.period;
    rep.period_report.transient = h.detected_at - static_cast<std::uint64_t>(h.period);
    rep.period_report.final_potential =
        BasicRational<Int>::make(h.pots.back(), num::checked_mul(w0.den, w0.den));

    std::uint64_t T = 0, Tp = 0;
    for (std::size_t t = 1; t < e; ++t)
        if (h.pots[t] < h.pots[t - 1]) T = t;
    for (std::size_t t = 0; t < e; ++t)
        for (const auto& l : h.labels[t])
            if (!in_final_three(l)) {
                Tp = t + 1;
                break;
            }
    rep.period_report.potential_stabilization = T;
    rep.period_report.label_stabilization = Tp;

    rep.min_label_num = w0.num.empty() ? Int(0) : min_numerator(h.configs[0]);
    for (const auto& c : h.configs)
        for (const auto& x : c.num)
            if (x < rep.min_label_num) rep.min_label_num = x;

    auto check = [&rep](const std::string& name, std::optional<std::uint64_t> fail) {
        rep.checks.push_back({name, !fail.has_value(), fail});
    };

    // (a) P(t+1) <= P(t) everywhere
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = 1; t < e && !fail; ++t)
            if (h.pots[t - 1] < h.pots[t]) fail = t;
        check("monotonicity", fail);
    }
    // (b) P(t) >= -B/4, i.e. 4*S(t) + B*D^2 >= 0
    {
        Int bd2 = num::checked_mul(Int(lower_bound_quarters(g)),
                                   num::checked_mul(w0.den, w0.den));
        std::optional<std::uint64_t> fail;
        for (std::size_t t = 0; t < e && !fail; ++t)
            if (num::checked_add(num::checked_mul(Int(4), h.pots[t]), bd2) < Int(0)) fail = t;
        check("boundedness", fail);
    }
    // (c) P(t+1) = P(t) forbids the four strict-decrease labels at t
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = 0; t + 1 < e && !fail; ++t) {
            if (h.pots[t + 1] != h.pots[t]) continue;
            for (const auto& l : h.labels[t])
                if (is_strict_decrease(l)) {
                    fail = t;
                    break;
                }
        }
        check("strictness_contrapositive", fail);
    }
    // (d) consecutive labels chain: (i,j) then (k,l) forces j = k
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = 0; t + 1 < e && !fail; ++t)
            for (std::size_t i = 0; i < h.labels[t].size(); ++i)
                if (h.labels[t][i].y != h.labels[t + 1][i].x) {
                    fail = t;
                    break;
                }
        check("label_chaining", fail);
    }
    // (e)+(f) from T on: membership in the settled five and the allowed moves
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = T; t < e && !fail; ++t) {
            for (std::size_t i = 0; i < h.labels[t].size(); ++i) {
                const EdgeLabel l = h.labels[t][i];
                if (!in_settled_five(l)) {
                    fail = t;
                    break;
                }
                if (t + 1 >= e) continue;
                const EdgeLabel nx = h.labels[t + 1][i];
                bool ok;
                if (l.y == 0) // (1,0), (-1,0), (0,0) all settle to (0,0)
                    ok = nx.x == 0 && nx.y == 0;
                else if (l.x == -1 && l.y == 1)
                    ok = nx.x == 1 && (nx.y == -1 || nx.y == 0);
                else // (1,-1)
                    ok = nx.x == -1 && (nx.y == 1 || nx.y == 0);
                if (!ok) {
                    fail = t;
                    break;
                }
            }
        }
        check("transition_rules", fail);
    }
    // (g) from T' on: only back-and-forth or idle labels
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = Tp; t < e && !fail; ++t)
            for (const auto& l : h.labels[t])
                if (!in_final_three(l)) {
                    fail = t;
                    break;
                }
        check("final_label_set", fail);
    }
    // (g) from T' on: w(t+2) = w(t)
    {
        std::optional<std::uint64_t> fail;
        for (std::size_t t = Tp; t + 2 < h.configs.size() && !fail; ++t)
            if (!(h.configs[t + 2] == h.configs[t])) fail = t;
        check("period_orbit", fail);
    }
    return rep;
}

struct StabilizationTimes {
    std::uint64_t potential_stabilization{0}; // T
    std::uint64_t label_stabilization{0};     // T'

    bool operator==(const StabilizationTimes&) const = default;
};

// Retrospective T and T' from a recorded trace. The trace must reach
// periodicity within its recorded configurations (one full period past the
// transient), otherwise the retrospective reading would be premature.
template <class Int>
StabilizationTimes stabilization_times(const BasicTrace<Int>& tr) {
    if (tr.configs.empty())
        throw TraceTooShort("stabilization_times needs recorded configurations");
    const auto& c = tr.configs;
    bool periodic = false;
    for (std::size_t t = 1; t < c.size() && !periodic; ++t)
        periodic = c[t] == c[t - 1] || (t >= 2 && c[t] == c[t - 2]);
    if (!periodic)
        throw TraceTooShort("trace does not extend one full period past periodicity");

    StabilizationTimes st;
    const std::size_t e = c.size() - 1;
    if (tr.potentials.size() == e) {
        for (std::size_t t = 1; t < e; ++t)
            if (tr.potentials[t] < tr.potentials[t - 1]) st.potential_stabilization = t;
    } else {
        Int s_prev = potential_num(c[0], c[1]);
        for (std::size_t t = 1; t < e; ++t) {
            Int s = potential_num(c[t], c[t + 1]);
            if (s < s_prev) st.potential_stabilization = t;
            s_prev = std::move(s);
        }
    }
    if (tr.labelings.size() == e) {
        for (std::size_t t = 0; t < e; ++t)
            for (const auto& l : tr.labelings[t])
                if (!in_final_three(l)) {
                    st.label_stabilization = t + 1;
                    break;
                }
    } else {
        if (!tr.graph) throw TraceTooShort("trace has no graph to recompute labelings from");
        EdgeLabeling buf;
        for (std::size_t t = 0; t < e; ++t) {
            edge_labels_into(*tr.graph, c[t], c[t + 1], buf);
            for (const auto& l : buf)
                if (!in_final_three(l)) {
                    st.label_stabilization = t + 1;
                    break;
                }
        }
    }
    return st;
}

} // namespace diffusion
