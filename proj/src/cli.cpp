#include "diffusion/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "diffusion/analysis.hpp"
#include "diffusion/bignum.hpp"
#include "diffusion/engine.hpp"
#include "diffusion/experiments.hpp"
#include "diffusion/records.hpp"
#include "diffusion/rng.hpp"

namespace diffusion {

namespace {

constexpr const char* kExitTable =
    "Exit codes:\n"
    "  0   success (verify/scan: all checks passed)\n"
    "  1   unexpected internal error\n"
    "  2   command-line usage error\n"
    "  3   invalid parameters\n"
    "  4   malformed input line\n"
    "  5   self-loop in edge list\n"
    "  6   vertex index out of range\n"
    "  7   edge count mismatch\n"
    "  8   64-bit overflow (retry with --mode bigint)\n"
    "  9   length mismatch\n"
    "  10  step cap exceeded\n"
    "  11  trace too short\n"
    "  12  output sink write failure\n"
    "  13  verification check failed\n";

constexpr int kExitCheckFailure = 13;

int default_jobs() {
    if (const char* env = std::getenv("DIFFUSION_JOBS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidParams("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        auto c = s.find(':', pos);
        if (c == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, c - pos));
        pos = c + 1;
    }
}

std::int64_t spec_int(const std::string& what, const std::string& tok) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw InvalidParams(what + ": bad integer '" + tok + "'");
    return v;
}

double spec_double(const std::string& what, const std::string& tok) {
    try {
        std::size_t used = 0;
        double d = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw InvalidParams(what + ": bad number '" + tok + "'");
    }
}

// --graph accepts "file:PATH" or generator shorthand: path:N, cycle:N,
// star:N, complete:N, gnp:N:P[:SEED], multi:N:P:MAXMULT[:SEED].
MultiGraph graph_from_spec(const std::string& spec) {
    auto parts = split_colon(spec);
    const std::string& kind = parts[0];
    if (kind == "file") {
        if (parts.size() != 2) throw InvalidParams("--graph file spec must be file:PATH");
        return MultiGraph::parse_edge_list(read_file(parts[1]));
    }
    if (kind == "path" || kind == "cycle" || kind == "star" || kind == "complete") {
        if (parts.size() != 2) throw InvalidParams("--graph " + kind + " spec must be " + kind + ":N");
        return generate(family_from_name(kind), {.n = spec_int("--graph n", parts[1])}, 0);
    }
    if (kind == "gnp") {
        if (parts.size() != 3 && parts.size() != 4)
            throw InvalidParams("--graph gnp spec must be gnp:N:P[:SEED]");
        GenParams gp{.n = spec_int("--graph n", parts[1]), .p = spec_double("--graph p", parts[2])};
        std::uint64_t seed =
            parts.size() == 4 ? static_cast<std::uint64_t>(spec_int("--graph seed", parts[3])) : 0;
        return generate(Family::gnp, gp, seed);
    }
    if (kind == "multi") {
        if (parts.size() != 4 && parts.size() != 5)
            throw InvalidParams("--graph multi spec must be multi:N:P:MAXMULT[:SEED]");
        GenParams gp{.n = spec_int("--graph n", parts[1]),
                     .p = spec_double("--graph p", parts[2]),
                     .max_mult = spec_int("--graph max_mult", parts[3])};
        std::uint64_t seed =
            parts.size() == 5 ? static_cast<std::uint64_t>(spec_int("--graph seed", parts[4])) : 0;
        return generate(Family::random_multi, gp, seed);
    }
    throw InvalidParams("unknown --graph spec '" + spec + "'");
}

enum class Mode { int64, bigint, rational };

Mode mode_from_name(const std::string& name) {
    if (name == "int64") return Mode::int64;
    if (name == "bigint") return Mode::bigint;
    if (name == "rational") return Mode::rational;
    throw InvalidParams("unknown --mode '" + name + "' (int64|bigint|rational)");
}

// --init accepts "file:PATH", "random:LO:HI:SEED", "const:C", or an inline
// whitespace-separated label list.
template <class Int>
BasicConfig<Int> init_from_spec(const std::string& spec, std::int32_t n, Mode mode) {
    std::string text;
    bool synthesized = false;
    if (spec.rfind("file:", 0) == 0) {
        text = read_file(spec.substr(5));
    } else if (spec.rfind("random:", 0) == 0) {
        auto parts = split_colon(spec);
        if (parts.size() != 4) throw InvalidParams("--init random spec must be random:LO:HI:SEED");
        std::int64_t lo = spec_int("--init lo", parts[1]);
        std::int64_t hi = spec_int("--init hi", parts[2]);
        if (lo > hi) throw InvalidParams("--init random range is empty");
        SplitMix64 rng(static_cast<std::uint64_t>(spec_int("--init seed", parts[3])));
        std::ostringstream ss;
        for (std::int32_t v = 0; v < n; ++v) ss << (v ? " " : "") << rng.uniform_int(lo, hi);
        text = ss.str();
        synthesized = true;
    } else if (spec.rfind("const:", 0) == 0) {
        std::int64_t c = spec_int("--init const", spec.substr(6));
        std::ostringstream ss;
        for (std::int32_t v = 0; v < n; ++v) ss << (v ? " " : "") << c;
        text = ss.str();
        synthesized = true;
    } else {
        text = spec;
    }

    const bool has_fraction = text.find('/') != std::string::npos;
    if (mode == Mode::rational && !has_fraction)
        throw InvalidParams(synthesized
                                ? "--mode rational needs denominator-bearing labels; random:/const: "
                                  "specs produce integers"
                                : "--mode rational needs denominator-bearing labels like 1/2");
    if (mode != Mode::rational && has_fraction)
        throw InvalidParams("fractional labels require --mode rational");
    return parse_config<Int>(text);
}

struct RunFlags {
    std::string graph_spec;
    std::string init_spec;
    std::string mode_name{"int64"};
    std::uint64_t cap{0};
    std::string record; // comma list: configs,potentials,labels
    std::string output;
};

void print_report(std::ostream& out, const MultiGraph& g, std::uint64_t transient, int period,
                  std::uint64_t t_pot, std::uint64_t t_lab, const std::string& final_pot) {
    out << "n: " << g.vertex_count() << "  m: " << g.edge_total()
        << (g.is_simple() ? "" : "  (multigraph)") << "\n"
        << "transient: " << transient << "\n"
        << "period: " << period << "\n"
        << "T (potential stable): " << t_pot << "\n"
        << "T' (labels final): " << t_lab << "\n"
        << "final potential: " << final_pot << "\n";
}

template <class Int>
int do_run(const RunFlags& flags, Mode mode, std::ostream& out) {
    MultiGraph g = graph_from_spec(flags.graph_spec);
    BasicConfig<Int> w0 = init_from_spec<Int>(flags.init_spec, g.vertex_count(), mode);
    auto report = detect_period(g, w0, flags.cap);
    print_report(out, g, report.transient, report.period, report.potential_stabilization,
                 report.label_stabilization, report.final_potential.str());

    if (!flags.output.empty()) {
        std::ofstream os(flags.output, std::ios::binary);
        if (!os) throw SinkWriteFailure("cannot open output file '" + flags.output + "'");
        os << period_report_line(flags.graph_spec, g, report, std::nullopt) << '\n';
        if (!flags.record.empty()) {
            RecordOptions opts{.configs = true, .potentials = true, .labelings = false};
            opts.labelings = flags.record.find("labels") != std::string::npos;
            std::uint64_t steps = report.transient + static_cast<std::uint64_t>(report.period);
            auto tr = trace(g, w0, steps, opts);
            for (std::uint64_t t = 0; t < tr.steps_recorded; ++t)
                os << trace_record_line(t, g, tr.configs[t], tr.potentials[t],
                                        opts.labelings ? &tr.labelings[t] : nullptr)
                   << '\n';
        }
        if (!os) throw SinkWriteFailure("failed writing '" + flags.output + "'");
    }
    return 0;
}

template <class Int>
int do_verify(const RunFlags& flags, Mode mode, std::ostream& out) {
    MultiGraph g = graph_from_spec(flags.graph_spec);
    BasicConfig<Int> w0 = init_from_spec<Int>(flags.init_spec, g.vertex_count(), mode);
    auto report = verify_theorem(g, w0, flags.cap);

    for (const auto& c : report.checks) {
        out << std::left << std::setw(28) << c.name;
        if (c.passed)
            out << "pass\n";
        else
            out << "FAIL (first at t=" << *c.first_failure << ")\n";
    }
    const auto& pr = report.period_report;
    out << "period " << pr.period << ", transient " << pr.transient << ", T "
        << pr.potential_stabilization << ", T' " << pr.label_stabilization << "\n";
    bool ok = report.all_passed();
    out << (ok ? "all checks passed\n" : "CHECKS FAILED\n");

    if (!flags.output.empty()) {
        std::ofstream os(flags.output, std::ios::binary);
        if (!os) throw SinkWriteFailure("cannot open output file '" + flags.output + "'");
        os << period_report_line(flags.graph_spec, g, pr, ok) << '\n';
        if (!os) throw SinkWriteFailure("failed writing '" + flags.output + "'");
    }
    return ok ? 0 : kExitCheckFailure;
}

int dispatch_mode(const RunFlags& flags, bool verify, std::ostream& out) {
    Mode mode = mode_from_name(flags.mode_name);
    switch (mode) {
    case Mode::int64:
    case Mode::rational:
        return verify ? do_verify<std::int64_t>(flags, mode, out)
                      : do_run<std::int64_t>(flags, mode, out);
    case Mode::bigint:
        return verify ? do_verify<BigInt>(flags, mode, out) : do_run<BigInt>(flags, mode, out);
    }
    return 1;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"diffusion: simulate and verify synchronous chip diffusion on multigraphs"};
    app.footer(kExitTable);
    app.require_subcommand(1);

    RunFlags rf;
    auto add_run_flags = [&rf](CLI::App* cmd, bool with_record) {
        cmd->add_option("--graph", rf.graph_spec,
                        "file:PATH or generator shorthand (path:N, cycle:N, star:N, complete:N, "
                        "gnp:N:P[:SEED], multi:N:P:MAXMULT[:SEED])")
            ->required();
        cmd->add_option("--init", rf.init_spec,
                        "inline labels (\"0 5 0\" or \"1/2 0\"), file:PATH, random:LO:HI:SEED, "
                        "const:C")
            ->required();
        cmd->add_option("--mode", rf.mode_name, "int64 (default), bigint, or rational");
        cmd->add_option("--cap", rf.cap, "step budget override (0 = automatic)");
        cmd->add_option("--output", rf.output, "write machine-readable records to this file");
        if (with_record)
            cmd->add_option("--record", rf.record,
                            "with --output, also write the trace; comma list of "
                            "configs,potentials,labels");
    };

    auto* cmd_run = app.add_subcommand("run", "run one instance to periodicity and report");
    add_run_flags(cmd_run, true);
    auto* cmd_verify =
        app.add_subcommand("verify", "run one instance and check every invariant");
    add_run_flags(cmd_verify, false);

    auto* cmd_gen = app.add_subcommand("gen", "generate a graph and write its edge list");
    std::string gen_family{"gnp"};
    GenParams gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    cmd_gen->add_option("--family", gen_family, "path|cycle|star|complete|gnp|random_multi")
        ->required();
    cmd_gen->add_option("--n", gen_params.n, "vertex count")->required();
    cmd_gen->add_option("--p", gen_params.p, "edge probability (gnp, random_multi)");
    cmd_gen->add_option("--max-mult", gen_params.max_mult, "max multiplicity (random_multi)");
    cmd_gen->add_option("--seed", gen_seed, "generator seed");
    cmd_gen->add_option("--out", gen_out, "output file (default: stdout)");

    auto* cmd_scan = app.add_subcommand("scan", "scan an instance family, verifying every run");
    std::string scan_config;
    std::string scan_family;
    GenParams scan_params{.n = 0, .p = 0.0, .max_mult = 1};
    std::int64_t scan_label_min = 0, scan_label_max = 0;
    bool scan_saw_label_min = false, scan_saw_label_max = false;
    std::string scan_labels;
    std::uint64_t scan_count = 0;
    std::uint64_t scan_seed = 0;
    int scan_jobs = 0;
    std::uint64_t scan_cap = 0;
    std::string scan_output, scan_summary;
    cmd_scan->add_option("--config", scan_config, "key=value family spec file");
    cmd_scan->add_option("--family", scan_family, "graph family");
    cmd_scan->add_option("--n", scan_params.n, "vertex count");
    cmd_scan->add_option("--p", scan_params.p, "edge probability");
    cmd_scan->add_option("--max-mult", scan_params.max_mult, "max multiplicity");
    cmd_scan->add_option("--label-min", scan_label_min, "uniform label lower bound")
        ->each([&](const std::string&) { scan_saw_label_min = true; });
    cmd_scan->add_option("--label-max", scan_label_max, "uniform label upper bound")
        ->each([&](const std::string&) { scan_saw_label_max = true; });
    cmd_scan->add_option("--labels", scan_labels, "fixed labels for every instance");
    cmd_scan->add_option("--count", scan_count, "number of instances");
    cmd_scan->add_option("--seed", scan_seed, "master seed");
    cmd_scan->add_option("--jobs", scan_jobs, "parallel workers (default: DIFFUSION_JOBS or cores)");
    cmd_scan->add_option("--cap", scan_cap, "step budget override (0 = automatic)");
    cmd_scan->add_option("--output", scan_output, "record stream file (JSON lines)");
    cmd_scan->add_option("--summary", scan_summary, "summary CSV file");

    auto* cmd_search = app.add_subcommand("search-fn", "search for large required offsets");
    SearchOptions so;
    std::string search_strategy{"exhaustive"};
    std::string search_output;
    int search_jobs = 0;
    cmd_search->add_option("--n", so.n, "vertex count")->required();
    cmd_search->add_option("--strategy", search_strategy, "exhaustive|random");
    cmd_search->add_option("--K", so.label_bound, "profile label bound (labels in 0..K)");
    cmd_search->add_option("--budget", so.budget, "sample count (random strategy)");
    cmd_search->add_option("--seed", so.seed, "sampling seed (random strategy)");
    cmd_search->add_option("--jobs", search_jobs, "parallel workers");
    cmd_search->add_option("--cap", so.cap, "step budget override (0 = automatic)");
    cmd_search->add_option("--output", search_output, "improvement stream file (JSON lines)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_run->parsed()) return dispatch_mode(rf, false, out);
        if (cmd_verify->parsed()) return dispatch_mode(rf, true, out);

        if (cmd_gen->parsed()) {
            MultiGraph g = generate(family_from_name(gen_family), gen_params, gen_seed);
            std::string text = g.serialize_edge_list();
            if (gen_out.empty()) {
                out << text;
            } else {
                std::ofstream os(gen_out, std::ios::binary);
                if (!os) throw SinkWriteFailure("cannot open output file '" + gen_out + "'");
                os << text;
                if (!os) throw SinkWriteFailure("failed writing '" + gen_out + "'");
                out << "wrote " << gen_out << "\n";
            }
            return 0;
        }

        if (cmd_scan->parsed()) {
            ScanSpec spec;
            spec.jobs = 0;
            if (!scan_config.empty()) spec = parse_family_config(read_file(scan_config));
            if (!scan_family.empty()) spec.family = family_from_name(scan_family);
            if (scan_params.n != 0) spec.params.n = scan_params.n;
            if (cmd_scan->count("--p") != 0) spec.params.p = scan_params.p;
            if (cmd_scan->count("--max-mult") != 0) spec.params.max_mult = scan_params.max_mult;
            if (scan_saw_label_min) spec.labels.lo = scan_label_min;
            if (scan_saw_label_max) spec.labels.hi = scan_label_max;
            if (!scan_labels.empty()) {
                spec.labels.fixed.clear();
                std::istringstream ss(scan_labels);
                std::int64_t v;
                while (ss >> v) spec.labels.fixed.push_back(v);
            }
            if (scan_count != 0) spec.count = scan_count;
            if (cmd_scan->count("--seed") != 0) spec.seed = scan_seed;
            if (scan_jobs != 0) spec.jobs = scan_jobs;
            if (spec.jobs == 0) spec.jobs = default_jobs();
            if (scan_cap != 0) spec.cap = scan_cap;

            std::ofstream record_file;
            std::ostream* records = nullptr;
            if (!scan_output.empty()) {
                record_file.open(scan_output, std::ios::binary);
                if (!record_file)
                    throw SinkWriteFailure("cannot open output file '" + scan_output + "'");
                records = &record_file;
            }
            std::ofstream summary_file;
            std::ostream* summary = nullptr;
            if (!scan_summary.empty()) {
                summary_file.open(scan_summary, std::ios::binary);
                if (!summary_file)
                    throw SinkWriteFailure("cannot open summary file '" + scan_summary + "'");
                summary = &summary_file;
            }

            ScanSummary s = scan_transients(spec, records, summary);
            out << "instances: " << s.count << "\n"
                << "mean edges: " << s.m_mean << "\n"
                << "max transient: " << s.max_transient << "\n"
                << "periods: 1 x" << s.period1_count << ", 2 x" << s.period2_count << "\n"
                << "max required offset: " << s.offset_max << "\n";
            if (s.theorem_violation) {
                out << "THEOREM VIOLATION DETECTED\n";
                return kExitCheckFailure;
            }
            out << "all checks passed\n";
            return 0;
        }

        if (cmd_search->parsed()) {
            so.strategy = search_strategy == "random" ? SearchStrategy::random
                          : search_strategy == "exhaustive"
                              ? SearchStrategy::exhaustive
                              : throw InvalidParams("unknown --strategy '" + search_strategy + "'");
            so.jobs = search_jobs != 0 ? search_jobs : default_jobs();

            std::ofstream improvement_file;
            std::ostream* improvements = nullptr;
            if (!search_output.empty()) {
                improvement_file.open(search_output, std::ios::binary);
                if (!improvement_file)
                    throw SinkWriteFailure("cannot open output file '" + search_output + "'");
                improvements = &improvement_file;
            }

            SearchResult res = fn_lower_bound_search(so, improvements);
            out << "explored: " << res.explored << "\n"
                << "best offset: " << res.best_offset << "\n"
                << "witness graph: n=" << res.best_graph.vertex_count() << " edges";
            for (const auto& e : res.best_graph.edges()) {
                out << " " << (e.u + 1) << "-" << (e.v + 1);
                if (e.mult > 1) out << "x" << e.mult;
            }
            out << "\nwitness profile: " << serialize_config(res.best_profile) << "\n";
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace diffusion
