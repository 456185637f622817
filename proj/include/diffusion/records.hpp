#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "diffusion/analysis.hpp"
#include "diffusion/experiments.hpp"

// Line-delimited machine-readable output. Key order is fixed so repeated
// runs with identical seeds produce byte-identical streams.

namespace diffusion {

using ojson = nlohmann::ordered_json;

template <class Int>
std::string period_report_line(const std::string& instance_id, const MultiGraph& g,
                               const BasicPeriodReport<Int>& r,
                               std::optional<bool> checks_passed) {
    ojson j;
    j["instance_id"] = instance_id;
    j["n"] = g.vertex_count();
    j["m"] = g.edge_total();
    j["transient"] = r.transient;
    j["period"] = r.period;
    j["T"] = r.potential_stabilization;
    j["T_prime"] = r.label_stabilization;
    j["final_potential"] = r.final_potential.pq();
    if (checks_passed.has_value())
        j["checks_passed"] = *checks_passed;
    else
        j["checks_passed"] = nullptr;
    return j.dump();
}

inline std::string scan_record_line(const ScanRecord& r) {
    ojson j;
    j["instance_id"] = r.instance_id;
    j["family"] = r.family;
    j["params"] = r.params;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["m"] = r.m;
    j["transient"] = r.transient;
    j["period"] = r.period;
    j["T"] = r.potential_stabilization;
    j["T_prime"] = r.label_stabilization;
    j["min_label_over_run"] = r.min_label_over_run;
    j["required_offset"] = r.required_offset;
    j["checks_passed"] = r.checks_passed;
    return j.dump();
}

inline std::string scan_summary_csv(std::int64_t n, const ScanSummary& s) {
    std::string out = "n,m_mean,transient_max,period_counts,offset_max\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", s.m_mean);
    out += std::to_string(n) + "," + buf + "," + std::to_string(s.max_transient) + "," +
           "1:" + std::to_string(s.period1_count) + ";2:" + std::to_string(s.period2_count) +
           "," + std::to_string(s.offset_max) + "\n";
    return out;
}

template <class Int>
std::string trace_record_line(std::uint64_t t, const MultiGraph& g, const BasicConfig<Int>& w,
                              const BasicRational<Int>& p, const EdgeLabeling* labels) {
    ojson j;
    j["t"] = t;
    if constexpr (std::is_same_v<Int, std::int64_t>) {
        if (w.den == 1) {
            j["w"] = w.num;
        } else {
            ojson arr = ojson::array();
            for (const auto& x : w.num)
                arr.push_back(BasicRational<Int>::make(x, w.den).str());
            j["w"] = std::move(arr);
        }
    } else {
        ojson arr = ojson::array();
        for (const auto& x : w.num) {
            if (w.den == Int(1))
                arr.push_back(num::int_str(x));
            else
                arr.push_back(BasicRational<Int>::make(x, w.den).str());
        }
        j["w"] = std::move(arr);
    }
    j["P"] = p.pq();
    if (labels) {
        ojson arr = ojson::array();
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < labels->size(); ++i)
            arr.push_back({edges[i].u + 1, edges[i].v + 1, (*labels)[i].x, (*labels)[i].y});
        j["labels"] = std::move(arr);
    }
    return j.dump();
}

inline std::string search_improvement_line(std::uint64_t explored, const MultiGraph& g,
                                           const Config& profile, std::int64_t offset) {
    ojson j;
    j["explored"] = explored;
    j["best_offset"] = offset;
    j["n"] = g.vertex_count();
    ojson edges = ojson::array();
    for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1, e.mult});
    j["edges"] = std::move(edges);
    j["profile"] = profile.num;
    return j.dump();
}

} // namespace diffusion
