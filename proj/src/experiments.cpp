#include "diffusion/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "diffusion/records.hpp"
#include "diffusion/rng.hpp"

namespace diffusion {

namespace {

// Dynamic scheduling over [begin, end); f(i) must only touch state owned by
// index i, so the schedule cannot influence results. The first exception is
// rethrown on the calling thread.
template <class F>
void parallel_for(std::uint64_t begin, std::uint64_t end, int jobs, F&& f) {
    if (end <= begin) return;
    const std::uint64_t total = end - begin;
    const auto nt = static_cast<unsigned>(
        std::min<std::uint64_t>(jobs < 1 ? 1 : static_cast<std::uint64_t>(jobs), total));
    if (nt <= 1) {
        for (std::uint64_t i = begin; i < end; ++i) f(i);
        return;
    }
    std::atomic<std::uint64_t> next{begin};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (unsigned k = 0; k < nt; ++k) {
        workers.emplace_back([&] {
            for (;;) {
                std::uint64_t i = next.fetch_add(1);
                if (i >= end) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

void write_line(std::ostream& os, const std::string& line) {
    os << line << '\n';
    if (!os) throw SinkWriteFailure("failed to write record to output sink");
}

} // namespace

std::int64_t required_offset(const MultiGraph& g, const Config& w0, std::uint64_t cap) {
    if (w0.den != 1) throw InvalidParams("required_offset needs an integer-mode configuration");
    if (w0.num.empty()) return 0;
    std::int64_t base = min_numerator(w0);
    Config normalized;
    normalized.den = 1;
    normalized.num.reserve(w0.num.size());
    for (auto x : w0.num) normalized.num.push_back(num::checked_sub(x, base));
    auto obs = observe_run(g, normalized, cap);
    return obs.min_label_num < 0 ? num::checked_neg(obs.min_label_num) : 0;
}

std::int64_t star_offset(std::int64_t n, std::uint64_t cap) {
    if (n < 3) throw InvalidParams("star_offset requires n >= 3");
    MultiGraph g = generate(Family::star, {.n = n}, 0);
    Config w0;
    w0.num.assign(static_cast<std::size_t>(n), 0);
    w0.num[0] = 1; // vertex 1 is the centre
    return required_offset(g, w0, cap);
}

namespace {

std::vector<std::pair<std::int32_t, std::int32_t>> vertex_pairs(std::int64_t n) {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    for (std::int32_t u = 1; u <= n; ++u)
        for (std::int32_t v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);
    return pairs;
}

MultiGraph graph_of_mask(std::int64_t n,
                         const std::vector<std::pair<std::int32_t, std::int32_t>>& pairs,
                         std::uint64_t mask) {
    std::vector<std::array<std::int64_t, 3>> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) edges.push_back({pairs[i].first, pairs[i].second, 1});
    return MultiGraph(n, edges);
}

struct MaskBest {
    std::int64_t offset{-1};
    std::vector<std::int64_t> profile;
    std::uint64_t ordinal{0}; // index among the mask's evaluated profiles
};

// Best profile for one fixed graph, scanning {0..K}^n profiles with min 0 in
// odometer order (vertex 1 is the least significant digit).
MaskBest eval_mask(const MultiGraph& g, std::int64_t n, std::int64_t k, std::uint64_t cap) {
    MaskBest best;
    std::vector<std::int64_t> digits(static_cast<std::size_t>(n), 0);
    std::uint64_t ordinal = 0;
    for (;;) {
        if (std::find(digits.begin(), digits.end(), 0) != digits.end()) {
            Config w0;
            w0.num = digits;
            std::int64_t off = required_offset(g, w0, cap);
            if (off > best.offset) best = {off, digits, ordinal};
            ++ordinal;
        }
        std::size_t pos = 0;
        while (pos < digits.size() && digits[pos] == k) digits[pos++] = 0;
        if (pos == digits.size()) break;
        ++digits[pos];
    }
    return best;
}

struct SampleResult {
    std::int64_t offset{-1};
    MultiGraph graph;
    std::vector<std::int64_t> profile;
};

SampleResult eval_sample(const SearchOptions& opts, std::uint64_t index) {
    SplitMix64 rng(mix_seed(opts.seed, index));
    double p = rng.uniform01();
    std::uint64_t graph_seed = rng.next();
    MultiGraph g = generate(Family::gnp, {.n = opts.n, .p = p}, graph_seed);
    std::vector<std::int64_t> digits(static_cast<std::size_t>(opts.n));
    for (auto& d : digits) d = rng.uniform_int(0, opts.label_bound);
    std::int64_t lo = *std::min_element(digits.begin(), digits.end());
    for (auto& d : digits) d -= lo;
    Config w0;
    w0.num = digits;
    std::int64_t off = required_offset(g, w0, opts.cap);
    return {off, std::move(g), std::move(digits)};
}

std::uint64_t pow_u64(std::uint64_t base, std::int64_t exp) {
    std::uint64_t r = 1;
    for (std::int64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

SearchResult fn_lower_bound_search(const SearchOptions& opts, std::ostream* improvements) {
    if (opts.n < 1) throw InvalidParams("search requires n >= 1");
    if (opts.label_bound < 0) throw InvalidParams("label bound K must be >= 0");
    const int jobs = opts.jobs < 1 ? 1 : opts.jobs;

    SearchResult result;

    if (opts.strategy == SearchStrategy::exhaustive) {
        if (opts.n > 6) throw InvalidParams("exhaustive search requires n <= 6");
        if (opts.label_bound > 4) throw InvalidParams("exhaustive search requires K <= 4");
        const auto pairs = vertex_pairs(opts.n);
        const std::uint64_t mask_count = std::uint64_t{1} << pairs.size();
        // profiles in {0..K}^n with min 0
        const std::uint64_t profiles_per_mask =
            pow_u64(static_cast<std::uint64_t>(opts.label_bound) + 1, opts.n) -
            pow_u64(static_cast<std::uint64_t>(opts.label_bound), opts.n);

        const std::uint64_t chunk = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(jobs) * 8);
        std::vector<MaskBest> slots;
        for (std::uint64_t lo = 0; lo < mask_count; lo += chunk) {
            const std::uint64_t hi = std::min(mask_count, lo + chunk);
            slots.assign(hi - lo, {});
            parallel_for(lo, hi, jobs, [&](std::uint64_t mask) {
                MultiGraph g = graph_of_mask(opts.n, pairs, mask);
                slots[mask - lo] = eval_mask(g, opts.n, opts.label_bound, opts.cap);
            });
            // Fold sequentially in mask order so improvement records are
            // reproducible regardless of the worker schedule.
            for (std::uint64_t mask = lo; mask < hi; ++mask) {
                const MaskBest& mb = slots[mask - lo];
                if (mb.offset > result.best_offset) {
                    result.best_offset = mb.offset;
                    result.best_graph = graph_of_mask(opts.n, pairs, mask);
                    result.best_profile = Config{mb.profile, 1};
                    std::uint64_t explored = mask * profiles_per_mask + mb.ordinal + 1;
                    if (improvements)
                        write_line(*improvements,
                                   search_improvement_line(explored, result.best_graph,
                                                           result.best_profile, mb.offset));
                }
            }
        }
        result.explored = mask_count * profiles_per_mask;
        return result;
    }

    // random strategy
    if (opts.budget < 1) throw InvalidParams("random search requires budget >= 1");
    const std::uint64_t chunk = std::max<std::uint64_t>(64, static_cast<std::uint64_t>(jobs) * 8);
    std::vector<SampleResult> slots;
    for (std::uint64_t lo = 0; lo < opts.budget; lo += chunk) {
        const std::uint64_t hi = std::min(opts.budget, lo + chunk);
        slots.assign(hi - lo, {});
        parallel_for(lo, hi, jobs,
                     [&](std::uint64_t i) { slots[i - lo] = eval_sample(opts, i); });
        for (std::uint64_t i = lo; i < hi; ++i) {
            SampleResult& sr = slots[i - lo];
            if (sr.offset > result.best_offset) {
                result.best_offset = sr.offset;
                result.best_graph = std::move(sr.graph);
                result.best_profile = Config{std::move(sr.profile), 1};
                if (improvements)
                    write_line(*improvements,
                               search_improvement_line(i + 1, result.best_graph,
                                                       result.best_profile, result.best_offset));
            }
        }
    }
    result.explored = opts.budget;
    return result;
}

namespace {

std::string format_params(const ScanSpec& spec) {
    char buf[160];
    std::string labels;
    if (!spec.labels.fixed.empty()) {
        labels = "fixed";
    } else {
        labels = "[" + std::to_string(spec.labels.lo) + "," + std::to_string(spec.labels.hi) + "]";
    }
    switch (spec.family) {
    case Family::gnp:
        std::snprintf(buf, sizeof buf, "n=%lld p=%.6g labels=%s",
                      static_cast<long long>(spec.params.n), spec.params.p, labels.c_str());
        break;
    case Family::random_multi:
        std::snprintf(buf, sizeof buf, "n=%lld p=%.6g max_mult=%lld labels=%s",
                      static_cast<long long>(spec.params.n), spec.params.p,
                      static_cast<long long>(spec.params.max_mult), labels.c_str());
        break;
    default:
        std::snprintf(buf, sizeof buf, "n=%lld labels=%s", static_cast<long long>(spec.params.n),
                      labels.c_str());
        break;
    }
    return buf;
}

std::string instance_id_of(std::uint64_t index, const ScanSpec& spec) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
    return std::string(buf) + "-" + family_name(spec.family) + "-n" +
           std::to_string(spec.params.n);
}

} // namespace

ScanSummary scan_transients(const ScanSpec& spec, std::ostream* records,
                            std::ostream* summary_csv) {
    if (spec.count < 1) throw InvalidParams("scan requires at least one instance");
    if (!spec.labels.fixed.empty() &&
        spec.labels.fixed.size() != static_cast<std::size_t>(spec.params.n))
        throw InvalidParams("fixed labels length does not match n");
    if (spec.labels.fixed.empty() && spec.labels.lo > spec.labels.hi)
        throw InvalidParams("label range is empty");

    const std::string params_str = format_params(spec);
    std::vector<ScanRecord> out(spec.count);

    parallel_for(0, spec.count, spec.jobs, [&](std::uint64_t i) {
        const std::uint64_t instance_seed = mix_seed(spec.seed, i);
        MultiGraph g = generate(spec.family, spec.params, mix_seed(instance_seed, 1));
        Config w0;
        w0.num.reserve(static_cast<std::size_t>(spec.params.n));
        if (!spec.labels.fixed.empty()) {
            w0.num = spec.labels.fixed;
        } else {
            SplitMix64 rng(mix_seed(instance_seed, 2));
            for (std::int64_t v = 0; v < spec.params.n; ++v)
                w0.num.push_back(rng.uniform_int(spec.labels.lo, spec.labels.hi));
        }

        auto rep = verify_theorem(g, w0, spec.cap);
        ScanRecord r;
        r.instance_id = instance_id_of(i, spec);
        r.family = family_name(spec.family);
        r.params = params_str;
        r.seed = instance_seed;
        r.n = g.vertex_count();
        r.m = g.edge_total();
        r.transient = rep.period_report.transient;
        r.period = rep.period_report.period;
        r.potential_stabilization = rep.period_report.potential_stabilization;
        r.label_stabilization = rep.period_report.label_stabilization;
        r.min_label_over_run = rep.min_label_num;
        std::int64_t w0_min = min_numerator(w0);
        r.required_offset =
            rep.min_label_num < w0_min ? num::checked_sub(w0_min, rep.min_label_num) : 0;
        r.checks_passed = rep.all_passed() && (r.period == 1 || r.period == 2);

        // 1% re-check against the generic cycle oracle.
        if (i % 100 == 0) {
            GenericPeriod gp = detect_period_generic(g, w0, spec.cap);
            if (gp.transient != r.transient ||
                gp.period != static_cast<std::uint64_t>(r.period))
                r.checks_passed = false;
        }
        out[i] = std::move(r);
    });

    ScanSummary summary;
    summary.count = spec.count;
    double m_sum = 0.0;
    for (const auto& r : out) {
        m_sum += static_cast<double>(r.m);
        summary.max_transient = std::max(summary.max_transient, r.transient);
        summary.max_period = std::max(summary.max_period, r.period);
        ++summary.transient_histogram[r.transient];
        if (r.period == 1) ++summary.period1_count;
        else if (r.period == 2) ++summary.period2_count;
        summary.offset_max = std::max(summary.offset_max, r.required_offset);
        if (!r.checks_passed) summary.theorem_violation = true;
        if (records) write_line(*records, scan_record_line(r));
    }
    summary.m_mean = m_sum / static_cast<double>(spec.count);
    if (records) {
        records->flush();
        if (!*records) throw SinkWriteFailure("failed to flush record sink");
    }
    if (summary_csv) {
        *summary_csv << scan_summary_csv(spec.params.n, summary);
        summary_csv->flush();
        if (!*summary_csv) throw SinkWriteFailure("failed to write summary CSV");
    }
    return summary;
}

namespace {

std::int64_t parse_int_value(const std::string& key, std::string_view value) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw InvalidParams("config key '" + key + "': bad integer '" + std::string(value) + "'");
    return out;
}

double parse_double_value(const std::string& key, std::string_view value) {
    try {
        std::size_t used = 0;
        std::string s(value);
        double d = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw InvalidParams("config key '" + key + "': bad number '" + std::string(value) + "'");
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

ScanSpec parse_family_config(std::string_view text) {
    ScanSpec spec;
    bool saw_lo = false, saw_hi = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidParams("config line without '=': '" + std::string(line) + "'");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));

        if (key == "family") {
            spec.family = family_from_name(value);
        } else if (key == "n") {
            spec.params.n = parse_int_value(key, value);
        } else if (key == "p") {
            spec.params.p = parse_double_value(key, value);
        } else if (key == "max_mult") {
            spec.params.max_mult = parse_int_value(key, value);
        } else if (key == "label_min") {
            spec.labels.lo = parse_int_value(key, value);
            saw_lo = true;
        } else if (key == "label_max") {
            spec.labels.hi = parse_int_value(key, value);
            saw_hi = true;
        } else if (key == "labels") {
            spec.labels.fixed.clear();
            std::size_t i = 0;
            while (i < value.size()) {
                while (i < value.size() && (value[i] == ' ' || value[i] == '\t')) ++i;
                std::size_t j = i;
                while (j < value.size() && value[j] != ' ' && value[j] != '\t') ++j;
                if (j > i)
                    spec.labels.fixed.push_back(parse_int_value(key, value.substr(i, j - i)));
                i = j;
            }
        } else if (key == "count") {
            spec.count = static_cast<std::uint64_t>(parse_int_value(key, value));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(parse_int_value(key, value));
        } else if (key == "jobs") {
            spec.jobs = static_cast<int>(parse_int_value(key, value));
        } else if (key == "cap") {
            spec.cap = static_cast<std::uint64_t>(parse_int_value(key, value));
        } else {
            throw InvalidParams("unknown config key '" + key + "'");
        }
    }
    if (saw_lo != saw_hi) throw InvalidParams("label_min and label_max must be given together");
    return spec;
}

} // namespace diffusion
