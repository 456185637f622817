#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "diffusion/bignum.hpp"
#include "diffusion/engine.hpp"
#include "diffusion/rng.hpp"
#include "oracle.hpp"

using namespace diffusion;

namespace {

Config cfg(std::vector<std::int64_t> nums, std::int64_t den = 1) {
    return Config{std::move(nums), den};
}

MultiGraph random_instance(SplitMix64& rng, std::int64_t max_n, std::int64_t max_mult) {
    GenParams gp{.n = 1 + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(max_n))),
                 .p = rng.uniform01(),
                 .max_mult = max_mult};
    return generate(max_mult > 1 ? Family::random_multi : Family::gnp, gp, rng.next());
}

Config random_config(SplitMix64& rng, std::int32_t n, std::int64_t lo, std::int64_t hi,
                     std::int64_t den = 1) {
    Config w;
    w.den = den;
    for (std::int32_t v = 0; v < n; ++v) w.num.push_back(rng.uniform_int(lo, hi));
    return w;
}

} // namespace

TEST_CASE("step: middle vertex of a path fires to both ends") {
    auto g = MultiGraph::parse_edge_list("3 2\n1 2\n2 3");
    CHECK(step(g, cfg({0, 5, 0})) == cfg({1, 3, 1}));
}

TEST_CASE("step: constant configurations are fixed points") {
    auto g = generate(Family::gnp, {.n = 6, .p = 0.7}, 3);
    CHECK(step(g, cfg({4, 4, 4, 4, 4, 4})) == cfg({4, 4, 4, 4, 4, 4}));
}

TEST_CASE("step: a parallel pair fires one chip per edge") {
    auto g = MultiGraph::parse_edge_list("2 1\n1 2 2");
    CHECK(step(g, cfg({0, 3})) == cfg({2, 1}));
    CHECK(step(g, cfg({0, 3})) == oracle::naive_step(g, cfg({0, 3})));
}

TEST_CASE("step: length and denominator validation") {
    auto g = MultiGraph::parse_edge_list("3 2\n1 2\n2 3");
    CHECK_THROWS_AS(step(g, cfg({1, 2})), LengthMismatch);
    CHECK_THROWS_AS(step(g, Config{{1, 2, 3}, 0}), InvalidParams);
}

TEST_CASE("step: checked 64-bit arithmetic overflows loudly") {
    // centre one below max with three richer leaves gains 3 and overflows
    auto g = generate(Family::star, {.n = 4}, 0);
    const std::int64_t big = std::numeric_limits<std::int64_t>::max();
    CHECK_THROWS_AS(step(g, cfg({big - 1, big, big, big})), ArithmeticOverflow);
    // the same labels pass in bigint mode
    BigConfig w;
    w.num = {BigInt(big - 1), BigInt(big), BigInt(big), BigInt(big)};
    auto next = step(g, w);
    CHECK(next.num[0] == BigInt(big) + 2);
    CHECK(next.num[1] == BigInt(big) - 1);
}

TEST_CASE("potential: frozen examples") {
    CHECK(potential(cfg({0, 5, 0}), cfg({1, 3, 1})) == Rational64::make(15, 1));
    CHECK(potential(cfg({0, 0, 0}), cfg({0, 0, 0})) == Rational64::make(0, 1));
    CHECK(potential(cfg({0, 1}), cfg({1, 0})) == Rational64::make(0, 1));
    CHECK_THROWS_AS(potential(cfg({0, 1}), cfg({1, 0, 2})), LengthMismatch);
}

TEST_CASE("potential: overflow is detected") {
    const std::int64_t big = std::numeric_limits<std::int64_t>::max();
    CHECK_THROWS_AS(potential(cfg({big, big}), cfg({big, big})), ArithmeticOverflow);
}

TEST_CASE("edge labels: frozen examples") {
    auto k2 = MultiGraph::parse_edge_list("2 1\n1 2");
    auto l = edge_labels(k2, cfg({0, 1}), cfg({1, 0}));
    REQUIRE(l.size() == 1);
    CHECK(l[0] == EdgeLabel{-1, 1});

    auto g = MultiGraph::parse_edge_list("3 2\n1 2\n2 3");
    auto l2 = edge_labels(g, cfg({0, 5, 0}), cfg({1, 3, 1}));
    REQUIRE(l2.size() == 2);
    CHECK(l2[0] == EdgeLabel{-1, -1}); // edge {1,2}
    CHECK(l2[1] == EdgeLabel{1, 1});   // edge {2,3}

    auto l3 = edge_labels(g, cfg({2, 2, 2}), cfg({2, 2, 2}));
    for (auto lab : l3) CHECK(lab == EdgeLabel{0, 0});
}

TEST_CASE("label set predicates") {
    CHECK(is_strict_decrease({1, 1}));
    CHECK(is_strict_decrease({-1, -1}));
    CHECK(is_strict_decrease({0, 1}));
    CHECK(is_strict_decrease({0, -1}));
    CHECK_FALSE(is_strict_decrease({1, -1}));
    CHECK(in_final_three({1, -1}));
    CHECK(in_final_three({-1, 1}));
    CHECK(in_final_three({0, 0}));
    CHECK_FALSE(in_final_three({1, 0}));
    CHECK(in_settled_five({1, 0}));
    CHECK(in_settled_five({-1, 0}));
    CHECK_FALSE(in_settled_five({0, 1}));
    // every label is exactly one of: strict-decrease or settled-five
    for (std::int8_t x = -1; x <= 1; ++x)
        for (std::int8_t y = -1; y <= 1; ++y)
            CHECK(is_strict_decrease({x, y}) != in_settled_five({x, y}));
}

TEST_CASE("lower bound: frozen examples") {
    CHECK(lower_bound(MultiGraph::parse_edge_list("3 2\n1 2\n2 3")) == Rational64::make(-3, 1));
    CHECK(lower_bound(MultiGraph(1, {})) == Rational64::make(0, 1));
    CHECK(lower_bound(MultiGraph::parse_edge_list("2 1\n1 2 3")) == Rational64::make(-9, 2));
}

TEST_CASE("trace: path example, configurations and potentials") {
    auto g = MultiGraph::parse_edge_list("3 2\n1 2\n2 3");
    auto tr = trace(g, cfg({0, 5, 0}), 4);
    REQUIRE(tr.steps_recorded == 4);
    REQUIRE(tr.configs.size() == 5);
    CHECK(tr.configs[0] == cfg({0, 5, 0}));
    CHECK(tr.configs[1] == cfg({1, 3, 1}));
    CHECK(tr.configs[2] == cfg({2, 1, 2}));
    CHECK(tr.configs[3] == cfg({1, 3, 1}));
    CHECK(tr.configs[4] == cfg({2, 1, 2}));
    REQUIRE(tr.potentials.size() == 4);
    CHECK(tr.potentials[0] == Rational64::make(15, 1));
    CHECK(tr.potentials[1] == Rational64::make(7, 1));
    CHECK(tr.potentials[2] == Rational64::make(7, 1));
    CHECK(tr.potentials[3] == Rational64::make(7, 1));
}

TEST_CASE("trace: fixed point stays constant") {
    auto g = MultiGraph::parse_edge_list("2 1\n1 2");
    auto tr = trace(g, cfg({7, 7}), 3);
    for (const auto& c : tr.configs) CHECK(c == cfg({7, 7}));
}

TEST_CASE("trace: stop condition and bad max_steps") {
    auto g = MultiGraph::parse_edge_list("3 2\n1 2\n2 3");
    CHECK_THROWS_AS(trace(g, cfg({0, 5, 0}), 0), InvalidParams);
    StopCondition<std::int64_t> stop = [](std::uint64_t t, const Config&, const Config&) {
        return t == 1;
    };
    auto tr = trace(g, cfg({0, 5, 0}), 100, {}, stop);
    CHECK(tr.steps_recorded == 2);
}

TEST_CASE("rational mode: half-chip swap on an edge") {
    auto g = MultiGraph::parse_edge_list("2 1\n1 2");
    auto w = parse_config<std::int64_t>("1/2 0");
    CHECK(w.den == 2);
    auto w1 = step(g, w);
    CHECK(w1 == Config{{-1, 2}, 2}); // labels -1/2 and 1
    auto w2 = step(g, w1);
    CHECK(w2 == w);
    CHECK(potential(w, w1) == Rational64::make(-1, 4)); // (1/2)(-1/2) + 0*1
}

TEST_CASE("property: step agrees with the neighbour-counting oracle") {
    SplitMix64 rng(1001);
    for (int it = 0; it < 300; ++it) {
        auto g = random_instance(rng, 14, it % 3 == 0 ? 3 : 1);
        std::int64_t den = it % 4 == 0 ? 1 + static_cast<std::int64_t>(rng.bounded(6)) : 1;
        auto w = random_config(rng, g.vertex_count(), -20, 20, den);
        CHECK(step(g, w) == oracle::naive_step(g, w));
    }
}

TEST_CASE("property: potential agrees with the arbitrary-precision oracle") {
    SplitMix64 rng(1002);
    for (int it = 0; it < 200; ++it) {
        auto g = random_instance(rng, 10, 1);
        auto a = random_config(rng, g.vertex_count(), -50, 50);
        auto b = random_config(rng, g.vertex_count(), -50, 50);
        auto p = potential(a, b);
        CHECK(oracle::naive_potential_num(a, b) == boost::multiprecision::cpp_int(p.num) * p.den);
    }
}

TEST_CASE("property: chip conservation along traces") {
    SplitMix64 rng(1003);
    for (int it = 0; it < 100; ++it) {
        auto g = random_instance(rng, 12, 2);
        auto w = random_config(rng, g.vertex_count(), -30, 30);
        std::int64_t total = sum_numerators(w);
        auto tr = trace(g, w, 20);
        for (const auto& c : tr.configs) CHECK(sum_numerators(c) == total);
    }
}

TEST_CASE("property: shift equivariance") {
    SplitMix64 rng(1004);
    for (int it = 0; it < 100; ++it) {
        auto g = random_instance(rng, 12, 1);
        auto w = random_config(rng, g.vertex_count(), -30, 30);
        for (std::int64_t c : {-10, 1, 1000}) {
            CHECK(step(g, shift_config(w, c)) == shift_config(step(g, w), c));
        }
    }
}

TEST_CASE("property: permutation equivariance") {
    SplitMix64 rng(1005);
    for (int it = 0; it < 100; ++it) {
        auto g = random_instance(rng, 10, 2);
        auto w = random_config(rng, g.vertex_count(), -20, 20);
        std::vector<std::int32_t> perm(static_cast<std::size_t>(g.vertex_count()));
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i)
            std::swap(perm[i - 1], perm[rng.bounded(i)]);
        auto gp = permute_graph(g, perm);
        CHECK(step(gp, permute_config(w, perm)) == permute_config(step(g, w), perm));
    }
}

TEST_CASE("property: one step moves each vertex by at most its degree") {
    SplitMix64 rng(1006);
    for (int it = 0; it < 100; ++it) {
        auto g = random_instance(rng, 12, 3);
        auto w = random_config(rng, g.vertex_count(), -40, 40);
        auto w1 = step(g, w);
        for (std::int32_t v = 0; v < g.vertex_count(); ++v) {
            std::int64_t diff = w1.num[static_cast<std::size_t>(v)] -
                                w.num[static_cast<std::size_t>(v)];
            CHECK(std::abs(diff) <= g.degree(v) * w.den);
        }
    }
}

TEST_CASE("property: recorded potentials never increase and respect the bound") {
    SplitMix64 rng(1007);
    for (int it = 0; it < 60; ++it) {
        auto g = random_instance(rng, 10, 2);
        auto w = random_config(rng, g.vertex_count(), -25, 25);
        auto tr = trace(g, w, 40);
        auto bound = lower_bound(g);
        for (std::size_t t = 0; t < tr.potentials.size(); ++t) {
            if (t > 0) CHECK(tr.potentials[t] <= tr.potentials[t - 1]);
            CHECK(tr.potentials[t] >= bound);
        }
    }
}

TEST_CASE("config parsing and serialization") {
    auto c = parse_config<std::int64_t>(" 0  5 0 ");
    CHECK(c == cfg({0, 5, 0}));
    CHECK(serialize_config(c) == "0 5 0");

    auto r = parse_config<std::int64_t>("1/2 -3/4 2");
    CHECK(r.den == 4);
    CHECK(r.num == std::vector<std::int64_t>{2, -3, 8});
    CHECK(serialize_config(r) == "1/2 -3/4 2");

    CHECK(parse_config<std::int64_t>("2/4") == Config{{1}, 2});
    CHECK_THROWS_AS(parse_config<std::int64_t>(""), MalformedLine);
    CHECK_THROWS_AS(parse_config<std::int64_t>("1/0"), MalformedLine);
    CHECK_THROWS_AS(parse_config<std::int64_t>("1/-2"), MalformedLine);
    CHECK_THROWS_AS(parse_config<std::int64_t>("abc"), MalformedLine);
    CHECK_THROWS_AS(parse_config<std::int64_t>("99999999999999999999"), ArithmeticOverflow);

    auto big = parse_config<BigInt>("99999999999999999999 1");
    CHECK(big.num[0] == BigInt("99999999999999999999"));
}

TEST_CASE("rational: bigint tokens parse in big mode") {
    auto r = parse_config<BigInt>("1/3 1/2");
    CHECK(r.den == BigInt(6));
    CHECK(r.num == std::vector<BigInt>{BigInt(2), BigInt(3)});
}
