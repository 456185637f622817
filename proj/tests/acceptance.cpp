// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Everything is seeded, so rerunning reproduces identical numbers.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "diffusion/analysis.hpp"
#include "diffusion/engine.hpp"
#include "diffusion/experiments.hpp"
#include "diffusion/rng.hpp"

using namespace diffusion;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Failure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

MultiGraph graph_of_mask(std::int64_t n,
                         const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                         std::uint64_t mask) {
    std::vector<std::array<std::int64_t, 3>> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) edges.push_back({pairs[i].first, pairs[i].second, 1});
    return MultiGraph(n, edges);
}

// 1. Every graph on n <= 5 vertices x every configuration in {0,1,2}^n:
//    detect_period terminates with period 1 or 2 and the generic oracle
//    agrees exactly. Budget: 60 s.
std::string criterion_exhaustive_small() {
    auto start = Clock::now();
    std::uint64_t instances = 0;
    for (std::int64_t n = 1; n <= 5; ++n) {
        std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
        for (std::int32_t u = 1; u <= n; ++u)
            for (std::int32_t v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);
        const std::uint64_t masks = std::uint64_t{1} << pairs.size();
        for (std::uint64_t mask = 0; mask < masks; ++mask) {
            MultiGraph g = graph_of_mask(n, pairs, mask);
            std::vector<std::int64_t> digits(static_cast<std::size_t>(n), 0);
            for (;;) {
                Config w{digits, 1};
                auto fast = detect_period(g, w);
                auto generic = detect_period_generic(g, w);
                expect(fast.period == 1 || fast.period == 2,
                       "period " + std::to_string(fast.period));
                expect(generic.transient == fast.transient &&
                           generic.period == static_cast<std::uint64_t>(fast.period),
                       "oracle disagreement at n=" + std::to_string(n) +
                           " mask=" + std::to_string(mask));
                ++instances;
                std::size_t pos = 0;
                while (pos < digits.size() && digits[pos] == 2) digits[pos++] = 0;
                if (pos == digits.size()) break;
                ++digits[pos];
            }
        }
    }
    double elapsed = seconds_since(start);
    expect(elapsed < 60.0, "took " + std::to_string(elapsed) + "s (budget 60s)");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%llu instances, %.1fs",
                  static_cast<unsigned long long>(instances), elapsed);
    return buf;
}

// 2. 10,000 random simple instances (n <= 50, labels in [-100,100]) pass the
//    full invariant battery. Budget: 300 s, zero failures tolerated.
std::string criterion_lemma_suite() {
    auto start = Clock::now();
    SplitMix64 rng(20202);
    const int total = 10000;
    for (int it = 0; it < total; ++it) {
        GenParams gp{.n = 2 + static_cast<std::int64_t>(rng.bounded(49)), .p = rng.uniform01()};
        MultiGraph g = generate(Family::gnp, gp, rng.next());
        Config w;
        for (std::int64_t v = 0; v < gp.n; ++v) w.num.push_back(rng.uniform_int(-100, 100));
        auto rep = verify_theorem(g, w);
        if (!rep.all_passed()) {
            for (const auto& c : rep.checks)
                if (!c.passed)
                    expect(false, "instance " + std::to_string(it) + ": check '" + c.name +
                                      "' failed at t=" + std::to_string(*c.first_failure));
        }
    }
    double elapsed = seconds_since(start);
    expect(elapsed < 300.0, "took " + std::to_string(elapsed) + "s (budget 300s)");
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d instances, 7 checks each, %.1fs", total, elapsed);
    return buf;
}

// 3. Conservation and equivariance, exact equality on 1,000 instances.
std::string criterion_conservation_equivariance() {
    SplitMix64 rng(30303);
    const int total = 1000;
    for (int it = 0; it < total; ++it) {
        GenParams gp{.n = 2 + static_cast<std::int64_t>(rng.bounded(39)), .p = rng.uniform01()};
        MultiGraph g = generate(Family::gnp, gp, rng.next());
        Config w;
        for (std::int64_t v = 0; v < gp.n; ++v) w.num.push_back(rng.uniform_int(-100, 100));

        auto tr = trace(g, w, 24);
        std::int64_t total_chips = sum_numerators(tr.configs[0]);
        for (const auto& c : tr.configs)
            expect(sum_numerators(c) == total_chips, "conservation violated");

        for (std::int64_t c : {-10, 1, 1000})
            expect(step(g, shift_config(w, c)) == shift_config(step(g, w), c),
                   "shift equivariance violated for c=" + std::to_string(c));

        for (int rep = 0; rep < 10; ++rep) {
            std::vector<std::int32_t> perm(static_cast<std::size_t>(gp.n));
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::int32_t>(i);
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng.bounded(i)]);
            expect(step(permute_graph(g, perm), permute_config(w, perm)) ==
                       permute_config(step(g, w), perm),
                   "permutation equivariance violated");
        }
    }
    return std::to_string(total) + " instances, shifts {-10,1,1000}, 10 permutations each";
}

// 4. Multigraph and rational extensions: period 1 or 2 and the degree-form
//    bound P(t) >= -sum deg(v)^2 / 4 on every recorded step.
std::string criterion_extensions() {
    SplitMix64 rng(40404);
    const int total = 1000;

    auto degree_bound_check = [](const MultiGraph& g, const Config& w,
                                 const BasicPeriodReport<std::int64_t>& rep) {
        std::int64_t deg_sq = 0;
        for (std::int32_t v = 0; v < g.vertex_count(); ++v)
            deg_sq = num::checked_add(deg_sq, num::checked_mul(g.degree(v), g.degree(v)));
        auto bound = Rational64::make(-deg_sq, 4);
        auto tr = trace(g, w, rep.transient + static_cast<std::uint64_t>(rep.period) + 1);
        for (const auto& p : tr.potentials)
            expect(p >= bound, "generalized bound violated: P=" + p.str());
    };

    for (int it = 0; it < total; ++it) {
        GenParams gp{.n = 2 + static_cast<std::int64_t>(rng.bounded(29)),
                     .p = rng.uniform01(),
                     .max_mult = 1 + static_cast<std::int64_t>(rng.bounded(4))};
        MultiGraph g = generate(Family::random_multi, gp, rng.next());
        Config w;
        for (std::int64_t v = 0; v < gp.n; ++v) w.num.push_back(rng.uniform_int(-50, 50));
        auto rep = detect_period(g, w);
        expect(rep.period == 1 || rep.period == 2, "multigraph period " +
                                                       std::to_string(rep.period));
        degree_bound_check(g, w, rep);
        expect(verify_theorem(g, w).all_passed(), "multigraph lemma failure");
    }

    for (int it = 0; it < total; ++it) {
        GenParams gp{.n = 2 + static_cast<std::int64_t>(rng.bounded(24)), .p = rng.uniform01()};
        MultiGraph g = generate(Family::gnp, gp, rng.next());
        Config w;
        w.den = 2 + static_cast<std::int64_t>(rng.bounded(11)); // denominators 2..12
        for (std::int64_t v = 0; v < gp.n; ++v)
            w.num.push_back(rng.uniform_int(-30 * w.den, 30 * w.den));
        auto rep = detect_period(g, w);
        expect(rep.period == 1 || rep.period == 2,
               "rational period " + std::to_string(rep.period));
        degree_bound_check(g, w, rep);
        expect(verify_theorem(g, w).all_passed(), "rational lemma failure");
    }
    return "1000 multigraph + 1000 rational instances";
}

// 5. star_offset(n) = n - 2 for 3 <= n <= 100, each value produced by
//    simulating the run rather than evaluating a closed form.
std::string criterion_star() {
    for (std::int64_t n = 3; n <= 100; ++n)
        expect(star_offset(n) == n - 2, "star_offset(" + std::to_string(n) +
                                            ") = " + std::to_string(star_offset(n)));
    return "star_offset(n) = n-2 for all 3 <= n <= 100";
}

// 6. Exhaustive probe at n=4, K=2 reaches at least the star bound and its
//    witness reproduces the claimed offset.
std::string criterion_fn_probe() {
    SearchOptions so{.n = 4, .strategy = SearchStrategy::exhaustive, .label_bound = 2};
    auto res = fn_lower_bound_search(so);
    expect(res.best_offset >= 2, "best offset " + std::to_string(res.best_offset));
    expect(required_offset(res.best_graph, res.best_profile) == res.best_offset,
           "witness does not reproduce its offset");
    char buf[128];
    std::snprintf(buf, sizeof buf, "best offset %lld over %llu instances",
                  static_cast<long long>(res.best_offset),
                  static_cast<unsigned long long>(res.explored));
    return buf;
}

// 7. Byte-identical record streams on reruns, including jobs > 1.
std::string criterion_determinism() {
    ScanSpec spec;
    spec.family = Family::gnp;
    spec.params = {.n = 20, .p = 0.3};
    spec.labels.lo = -50;
    spec.labels.hi = 50;
    spec.count = 200;
    spec.seed = 7;

    std::ostringstream r1, r2, r3, c1, c2;
    spec.jobs = 1;
    scan_transients(spec, &r1, &c1);
    spec.jobs = 4;
    scan_transients(spec, &r2, &c2);
    scan_transients(spec, &r3, nullptr);
    expect(!r1.str().empty(), "empty record stream");
    expect(r1.str() == r2.str(), "scan records differ between jobs=1 and jobs=4");
    expect(r2.str() == r3.str(), "scan records differ between identical reruns");
    expect(c1.str() == c2.str(), "summary CSVs differ");

    SearchOptions so{.n = 5,
                     .strategy = SearchStrategy::random,
                     .label_bound = 3,
                     .budget = 300,
                     .seed = 11,
                     .jobs = 1};
    std::ostringstream s1, s2;
    fn_lower_bound_search(so, &s1);
    so.jobs = 4;
    fn_lower_bound_search(so, &s2);
    expect(s1.str() == s2.str(), "search streams differ between jobs=1 and jobs=4");
    return "scan(200) and search(300) streams byte-identical across reruns and job counts";
}

// 8. Engineering throughput: one checked-64-bit step on n=10^4, m~10^5 in
//    under 10 ms (median of 5), and a 1000-step trace in under 2 s.
std::string criterion_performance() {
    const std::int64_t n = 10000;
    const double p = 100000.0 / (static_cast<double>(n) * (n - 1) / 2.0);
    MultiGraph g = generate(Family::gnp, {.n = n, .p = p}, 808);
    SplitMix64 rng(80808);
    Config w;
    for (std::int64_t v = 0; v < n; ++v) w.num.push_back(rng.uniform_int(-100, 100));

    auto warm = step(g, w); // touch everything once
    (void)warm;
    std::vector<double> times;
    for (int rep = 0; rep < 5; ++rep) {
        auto t0 = Clock::now();
        auto next = step(g, w);
        times.push_back(seconds_since(t0) * 1000.0);
        w = std::move(next);
    }
    std::sort(times.begin(), times.end());
    double median_ms = times[2];
    expect(median_ms < 10.0, "single step took " + std::to_string(median_ms) + "ms");

    auto t0 = Clock::now();
    auto tr = trace(g, w, 1000);
    double trace_s = seconds_since(t0);
    expect(tr.steps_recorded == 1000, "trace stopped early");
    expect(trace_s < 2.0, "1000-step trace took " + std::to_string(trace_s) + "s");

    char buf[160];
    std::snprintf(buf, sizeof buf, "n=%lld m=%lld: step %.3fms (median of 5), 1000 steps %.2fs",
                  static_cast<long long>(n), static_cast<long long>(g.edge_total()), median_ms,
                  trace_s);
    return buf;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria{
        {"exhaustive small-instance theorem check (n <= 5)", criterion_exhaustive_small},
        {"lemma suite on 10,000 random instances", criterion_lemma_suite},
        {"conservation and equivariance", criterion_conservation_equivariance},
        {"multigraph and rational extensions", criterion_extensions},
        {"star lower bound star_offset(n) = n-2", criterion_star},
        {"exhaustive f(n) probe at n=4, K=2", criterion_fn_probe},
        {"deterministic record streams under --jobs", criterion_determinism},
        {"single-step and trace performance", criterion_performance},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            std::string detail = criteria[i].run();
            std::printf("PASS  %zu. %s — %s\n", i + 1, criteria[i].name, detail.c_str());
        } catch (const Failure& f) {
            ++failures;
            std::printf("FAIL  %zu. %s — %s\n", i + 1, criteria[i].name, f.detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL  %zu. %s — unexpected error: %s\n", i + 1, criteria[i].name,
                        e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
