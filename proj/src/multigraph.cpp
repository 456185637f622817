#include "diffusion/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>

#include "diffusion/numeric.hpp"
#include "diffusion/rng.hpp"

namespace diffusion {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::int64_t parse_i64(std::string_view tok, std::size_t line_no) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw MalformedLine("line " + std::to_string(line_no) + ": non-integer token '" +
                            std::string(tok) + "'");
    return value;
}

} // namespace

MultiGraph::MultiGraph(std::int64_t n, const std::vector<std::array<std::int64_t, 3>>& edges) {
    if (n < 0 || n > std::numeric_limits<std::int32_t>::max())
        throw InvalidParams("vertex count out of range: " + std::to_string(n));
    n_ = static_cast<std::int32_t>(n);

    std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> acc;
    for (const auto& e : edges) {
        std::int64_t u = e[0], v = e[1], mult = e[2];
        if (u < 1 || u > n || v < 1 || v > n)
            throw IndexOutOfRange("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                  "} outside vertex range 1.." + std::to_string(n));
        if (u == v) throw SelfLoop("self-loop at vertex " + std::to_string(u));
        if (mult < 1) throw InvalidParams("edge multiplicity must be >= 1");
        auto a = static_cast<std::int32_t>(u - 1);
        auto b = static_cast<std::int32_t>(v - 1);
        if (a > b) std::swap(a, b);
        auto& slot = acc[{a, b}];
        slot = num::checked_add(slot, mult);
    }

    edges_.reserve(acc.size());
    for (const auto& [pair, mult] : acc) edges_.push_back({pair.first, pair.second, mult});
    build_adjacency();
}

void MultiGraph::build_adjacency() {
    degree_.assign(static_cast<std::size_t>(n_), 0);
    std::vector<std::size_t> fanout(static_cast<std::size_t>(n_), 0);
    edge_total_ = 0;
    simple_ = true;
    for (const auto& e : edges_) {
        degree_[static_cast<std::size_t>(e.u)] =
            num::checked_add(degree_[static_cast<std::size_t>(e.u)], e.mult);
        degree_[static_cast<std::size_t>(e.v)] =
            num::checked_add(degree_[static_cast<std::size_t>(e.v)], e.mult);
        edge_total_ = num::checked_add(edge_total_, e.mult);
        ++fanout[static_cast<std::size_t>(e.u)];
        ++fanout[static_cast<std::size_t>(e.v)];
        if (e.mult > 1) simple_ = false;
    }
    adj_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (std::int32_t v = 0; v < n_; ++v)
        adj_start_[static_cast<std::size_t>(v) + 1] =
            adj_start_[static_cast<std::size_t>(v)] + fanout[static_cast<std::size_t>(v)];
    adj_.assign(adj_start_.back(), Neighbor{});
    std::vector<std::size_t> cursor(adj_start_.begin(), adj_start_.end() - 1);
    for (const auto& e : edges_) {
        adj_[cursor[static_cast<std::size_t>(e.u)]++] = Neighbor{e.v, e.mult};
        adj_[cursor[static_cast<std::size_t>(e.v)]++] = Neighbor{e.u, e.mult};
    }
    // edges_ is sorted, so each vertex's slice comes out sorted by neighbor.
}

std::span<const Neighbor> MultiGraph::neighbors(std::int32_t v) const {
    if (v < 0 || v >= n_) throw IndexOutOfRange("vertex index " + std::to_string(v));
    auto s = adj_start_[static_cast<std::size_t>(v)];
    auto e = adj_start_[static_cast<std::size_t>(v) + 1];
    return {adj_.data() + s, e - s};
}

std::int64_t MultiGraph::degree(std::int32_t v) const {
    if (v < 0 || v >= n_) throw IndexOutOfRange("vertex index " + std::to_string(v));
    return degree_[static_cast<std::size_t>(v)];
}

MultiGraph MultiGraph::parse_edge_list(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines; // (line number, content)
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++line_no;
        if (!split_ws(line).empty()) lines.emplace_back(line_no, line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    if (lines.empty()) throw MalformedLine("empty edge-list input");
    auto header = split_ws(lines[0].second);
    if (header.size() != 2)
        throw MalformedLine("line " + std::to_string(lines[0].first) +
                            ": header must be 'n m'");
    std::int64_t n = parse_i64(header[0], lines[0].first);
    std::int64_t m = parse_i64(header[1], lines[0].first);
    if (n < 0) throw MalformedLine("negative vertex count");
    if (m < 0) throw MalformedLine("negative edge count");

    if (static_cast<std::int64_t>(lines.size()) - 1 != m)
        throw CountMismatch("header declares " + std::to_string(m) + " edge lines, found " +
                            std::to_string(lines.size() - 1));

    std::vector<std::array<std::int64_t, 3>> triples;
    triples.reserve(static_cast<std::size_t>(m));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto toks = split_ws(lines[i].second);
        if (toks.size() != 2 && toks.size() != 3)
            throw MalformedLine("line " + std::to_string(lines[i].first) +
                                ": expected 'u v [mult]'");
        std::int64_t u = parse_i64(toks[0], lines[i].first);
        std::int64_t v = parse_i64(toks[1], lines[i].first);
        std::int64_t mult = toks.size() == 3 ? parse_i64(toks[2], lines[i].first) : 1;
        if (mult < 1)
            throw MalformedLine("line " + std::to_string(lines[i].first) +
                                ": multiplicity must be >= 1");
        triples.push_back({u, v, mult});
    }
    return MultiGraph(n, triples);
}

std::string MultiGraph::serialize_edge_list() const {
    std::ostringstream os;
    os << n_ << ' ' << edges_.size() << '\n';
    for (const auto& e : edges_) {
        os << (e.u + 1) << ' ' << (e.v + 1);
        if (e.mult > 1) os << ' ' << e.mult;
        os << '\n';
    }
    return os.str();
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParams(msg);
}

} // namespace

MultiGraph generate(Family family, const GenParams& params, std::uint64_t seed) {
    const std::int64_t n = params.n;
    require(n >= 1, "generator requires n >= 1");
    std::vector<std::array<std::int64_t, 3>> edges;
    SplitMix64 rng(seed);

    switch (family) {
    case Family::path:
        for (std::int64_t i = 1; i < n; ++i) edges.push_back({i, i + 1, 1});
        break;
    case Family::cycle:
        require(n >= 3, "cycle requires n >= 3");
        for (std::int64_t i = 1; i < n; ++i) edges.push_back({i, i + 1, 1});
        edges.push_back({n, 1, 1});
        break;
    case Family::star:
        for (std::int64_t k = 2; k <= n; ++k) edges.push_back({1, k, 1});
        break;
    case Family::complete:
        for (std::int64_t u = 1; u <= n; ++u)
            for (std::int64_t v = u + 1; v <= n; ++v) edges.push_back({u, v, 1});
        break;
    case Family::gnp:
        require(params.p >= 0.0 && params.p <= 1.0, "gnp requires 0 <= p <= 1");
        for (std::int64_t u = 1; u <= n; ++u)
            for (std::int64_t v = u + 1; v <= n; ++v)
                if (rng.uniform01() < params.p) edges.push_back({u, v, 1});
        break;
    case Family::random_multi:
        require(params.p >= 0.0 && params.p <= 1.0, "random_multi requires 0 <= p <= 1");
        require(params.max_mult >= 1, "random_multi requires max multiplicity >= 1");
        for (std::int64_t u = 1; u <= n; ++u)
            for (std::int64_t v = u + 1; v <= n; ++v)
                if (rng.uniform01() < params.p) {
                    std::int64_t mult =
                        1 + static_cast<std::int64_t>(
                                rng.bounded(static_cast<std::uint64_t>(params.max_mult)));
                    edges.push_back({u, v, mult});
                }
        break;
    }
    return MultiGraph(n, edges);
}

const char* family_name(Family family) {
    switch (family) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::star: return "star";
    case Family::complete: return "complete";
    case Family::gnp: return "gnp";
    case Family::random_multi: return "random_multi";
    }
    return "?";
}

Family family_from_name(std::string_view name) {
    if (name == "path") return Family::path;
    if (name == "cycle") return Family::cycle;
    if (name == "star") return Family::star;
    if (name == "complete") return Family::complete;
    if (name == "gnp") return Family::gnp;
    if (name == "random_multi" || name == "multi") return Family::random_multi;
    throw InvalidParams("unknown graph family '" + std::string(name) + "'");
}

MultiGraph permute_graph(const MultiGraph& g, std::span<const std::int32_t> perm) {
    const auto n = g.vertex_count();
    if (static_cast<std::int32_t>(perm.size()) != n)
        throw InvalidParams("permutation length does not match vertex count");
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (auto p : perm) {
        if (p < 0 || p >= n || hit[static_cast<std::size_t>(p)])
            throw InvalidParams("not a permutation");
        hit[static_cast<std::size_t>(p)] = true;
    }
    std::vector<std::array<std::int64_t, 3>> edges;
    edges.reserve(g.pair_count());
    for (const auto& e : g.edges())
        edges.push_back({perm[static_cast<std::size_t>(e.u)] + 1,
                         perm[static_cast<std::size_t>(e.v)] + 1, e.mult});
    return MultiGraph(n, edges);
}

} // namespace diffusion
