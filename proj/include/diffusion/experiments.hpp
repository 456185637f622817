#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "diffusion/analysis.hpp"
#include "diffusion/configuration.hpp"
#include "diffusion/multigraph.hpp"

// Batch experiments: transient/period scans over instance families and the
// empirical hunt for initial-label offsets that keep runs non-negative.

namespace diffusion {

// Smallest uniform chip boost that makes the whole run from w0 non-negative.
// w0 is normalized internally so its minimum label is 0 (the dynamics are
// invariant under uniform shifts, so only the difference profile matters).
// Integer mode only (den == 1).
std::int64_t required_offset(const MultiGraph& g, const Config& w0, std::uint64_t cap = 0);

// required_offset of the star on n vertices with one chip at the centre and
// none on the leaves; grows linearly in n, which lower-bounds any uniform
// non-negativity threshold. Requires n >= 3.
std::int64_t star_offset(std::int64_t n, std::uint64_t cap = 0);

enum class SearchStrategy { exhaustive, random };

struct SearchOptions {
    std::int64_t n{3};
    SearchStrategy strategy{SearchStrategy::exhaustive};
    std::int64_t label_bound{2}; // K: profiles range over {0..K}^n with min 0
    std::uint64_t budget{0};     // number of samples (random strategy)
    std::uint64_t seed{0};
    int jobs{1};
    std::uint64_t cap{0};
};

struct SearchResult {
    MultiGraph best_graph;
    Config best_profile;
    std::int64_t best_offset{-1};
    std::uint64_t explored{0};
};

// Maximizes required_offset over the searched family. Exhaustive strategy
// enumerates every edge subset of K_n crossed with every profile in
// {0..K}^n having minimum 0 (requires n <= 6, K <= 4); random strategy
// samples `budget` (graph, profile) pairs. Deterministic for fixed options,
// including jobs > 1. Improvements stream to `improvements` as they are
// found, in enumeration order.
SearchResult fn_lower_bound_search(const SearchOptions& opts,
                                   std::ostream* improvements = nullptr);

struct LabelSpec {
    std::int64_t lo{0};
    std::int64_t hi{0};
    std::vector<std::int64_t> fixed; // non-empty: every instance gets exactly these labels
};

struct ScanSpec {
    Family family{Family::gnp};
    GenParams params{};
    LabelSpec labels{};
    std::uint64_t count{1};
    std::uint64_t seed{0};
    int jobs{1};
    std::uint64_t cap{0};
};

struct ScanRecord {
    std::string instance_id;
    std::string family;
    std::string params;
    std::uint64_t seed{0};
    std::int32_t n{0};
    std::int64_t m{0};
    std::uint64_t transient{0};
    int period{1};
    std::uint64_t potential_stabilization{0};
    std::uint64_t label_stabilization{0};
    std::int64_t min_label_over_run{0};
    std::int64_t required_offset{0};
    bool checks_passed{true};
};

struct ScanSummary {
    std::uint64_t count{0};
    double m_mean{0.0};
    std::uint64_t max_transient{0};
    int max_period{0};
    std::map<std::uint64_t, std::uint64_t> transient_histogram;
    std::uint64_t period1_count{0};
    std::uint64_t period2_count{0};
    std::int64_t offset_max{0};
    bool theorem_violation{false}; // any failed check: treat as build-failing
};

// Generates `count` instances, runs the full invariant battery on each,
// writes one record line per instance to `records` (ordered by instance id)
// and returns the aggregates. Instances run in parallel across `jobs`
// workers; output bytes do not depend on the job count.
ScanSummary scan_transients(const ScanSpec& spec, std::ostream* records,
                            std::ostream* summary_csv = nullptr);

// "key = value" lines, blank lines and '#' comments allowed. Keys: family,
// n, p, max_mult, label_min, label_max, labels, count, seed, jobs, cap.
ScanSpec parse_family_config(std::string_view text);

} // namespace diffusion
