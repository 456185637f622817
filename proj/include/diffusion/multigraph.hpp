#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diffusion/errors.hpp"

namespace diffusion {

// One unordered vertex pair with multiplicity. Vertices are 0-based in memory;
// all external I/O (edge-list files, reports, the CLI) is 1-based.
struct EdgePair {
    std::int32_t u{0}; // u < v
    std::int32_t v{0};
    std::int64_t mult{1};

    bool operator==(const EdgePair&) const = default;
};

struct Neighbor {
    std::int32_t vertex{0};
    std::int64_t mult{0};

    bool operator==(const Neighbor&) const = default;
};

// Finite multigraph without self-loops. Immutable after construction, so a
// single instance can be shared across concurrent runs freely.
class MultiGraph {
public:
    MultiGraph() = default;

    // Edge triples {u, v, mult} use 1-based vertices. Repeated pairs
    // accumulate multiplicity. Throws SelfLoop, IndexOutOfRange, or
    // InvalidParams (mult < 1, n < 0).
    MultiGraph(std::int64_t n, const std::vector<std::array<std::int64_t, 3>>& edges);

    // Text format: first line "n m", then m lines "u v [mult]".
    static MultiGraph parse_edge_list(std::string_view text);

    // Inverse of parse_edge_list; one line per distinct pair, ascending,
    // multiplicity written only when > 1.
    std::string serialize_edge_list() const;

    std::int32_t vertex_count() const noexcept { return n_; }

    // Number of edges counted with multiplicity.
    std::int64_t edge_total() const noexcept { return edge_total_; }

    // Number of distinct vertex pairs carrying an edge.
    std::size_t pair_count() const noexcept { return edges_.size(); }

    // Distinct pairs, sorted by (u, v), u < v, 0-based.
    const std::vector<EdgePair>& edges() const noexcept { return edges_; }

    // (neighbor, multiplicity) list of 0-based vertex v, sorted by neighbor.
    std::span<const Neighbor> neighbors(std::int32_t v) const;

    // Multiplicity-weighted degree.
    std::int64_t degree(std::int32_t v) const;

    bool is_simple() const noexcept { return simple_; }

    bool operator==(const MultiGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    std::int32_t n_{0};
    std::vector<EdgePair> edges_;
    std::vector<Neighbor> adj_;         // CSR payload
    std::vector<std::size_t> adj_start_; // size n_ + 1
    std::vector<std::int64_t> degree_;
    std::int64_t edge_total_{0};
    bool simple_{true};

    void build_adjacency();
};

enum class Family { path, cycle, star, complete, gnp, random_multi };

struct GenParams {
    std::int64_t n{0};
    double p{0.0};          // gnp, random_multi
    std::int64_t max_mult{1}; // random_multi
};

// Deterministic for a fixed (family, params, seed). The star places vertex 1
// at the centre. Throws InvalidParams on bad parameter combinations.
MultiGraph generate(Family family, const GenParams& params, std::uint64_t seed);

const char* family_name(Family family);
Family family_from_name(std::string_view name);

// Relabels vertices: perm[old] = new (0-based); perm must be a permutation.
MultiGraph permute_graph(const MultiGraph& g, std::span<const std::int32_t> perm);

} // namespace diffusion
