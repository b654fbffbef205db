#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "hybridlink/cli/config.hpp"
#include "hybridlink/mc/estimate.hpp"
#include "hybridlink/mc/trace.hpp"
#include "hybridlink/metrics/system.hpp"

namespace hybridlink::cli {

struct Row {
    double sweep_value = 0.0;
    std::string metric;
    std::string method;
    double value = 0.0;
    std::optional<double> ci_lo, ci_hi;
    std::string flags;
};

inline const char* csv_header = "sweep_value,metric,method,value,ci_lo,ci_hi,flags";

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<Row>& rows) {
    os << csv_header << '\n';
    for (const auto& r : rows) {
        os << format_number(r.sweep_value) << ',' << r.metric << ',' << r.method << ',' << format_number(r.value) << ','
           << (r.ci_lo ? format_number(*r.ci_lo) : "") << ',' << (r.ci_hi ? format_number(*r.ci_hi) : "") << ','
           << r.flags << '\n';
    }
}

enum class Command { outage, capacity, aber, diversity, trace };

inline Command parse_command(const std::string& s) {
    if (s == "outage") return Command::outage;
    if (s == "capacity") return Command::capacity;
    if (s == "aber") return Command::aber;
    if (s == "diversity") return Command::diversity;
    if (s == "trace") return Command::trace;
    throw config_error("unknown command '" + s + "'", 0, "command");
}

// Overrides from the command line; unset fields keep the config values.
struct RunOptions {
    std::string method;  // empty: the command's first method
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<double> rho;
    std::optional<int> threads;
};

inline void apply_overrides(ScenarioConfig& c, const RunOptions& o) {
    if (o.seed) c.simulation.seed = *o.seed;
    if (o.samples) c.simulation.samples = *o.samples;
    if (o.rho) c.simulation.rho = *o.rho;
    if (o.threads) c.simulation.threads = *o.threads;
}

namespace detail {

inline const std::vector<std::string>& methods_for(Command c) {
    static const std::vector<std::string> out{"analytical", "asymptotic", "quadrature", "mc"};
    static const std::vector<std::string> cap{"analytical", "log_approx", "quadrature", "mc"};
    static const std::vector<std::string> ber{"analytical", "quadrature", "mc"};
    static const std::vector<std::string> div{"analytical"};
    static const std::vector<std::string> tr{"mc"};
    switch (c) {
        case Command::outage: return out;
        case Command::capacity: return cap;
        case Command::aber: return ber;
        case Command::diversity: return div;
        case Command::trace: return tr;
    }
    return out;
}

// "all" expands to the families a command supports among analytical/asymptotic/mc.
inline std::vector<std::string> expand_methods(Command c, const std::string& m) {
    const auto& ok = methods_for(c);
    if (m.empty()) return {ok.front()};
    if (m == "all") {
        std::vector<std::string> r;
        for (const char* k : {"analytical", "asymptotic", "mc"})
            if (std::find(ok.begin(), ok.end(), k) != ok.end()) r.push_back(k);
        return r;
    }
    if (std::find(ok.begin(), ok.end(), m) == ok.end())
        throw config_error("method '" + m + "' is not available for this command", 0, "method");
    return {m};
}

struct Flags {
    std::string fso, thz;  // validity warnings per backhaul link

    explicit Flags(const SystemSpec& s) {
        if (!s.fso.pointing.approximation_valid) fso = "fso_pointing_approx_invalid";
        if (!s.thz.pointing.approximation_valid) thz = "thz_pointing_approx_invalid";
    }

    std::string for_metric(const std::string& m, std::vector<std::string> extra = {}) const {
        const bool f = m.rfind("fso", 0) == 0 || m.rfind("hybrid", 0) == 0 || m.rfind("e2e", 0) == 0;
        const bool t = m.rfind("thz", 0) == 0 || m.rfind("hybrid", 0) == 0 || m.rfind("e2e", 0) == 0;
        if (f && !fso.empty()) extra.push_back(fso);
        if (t && !thz.empty()) extra.push_back(thz);
        std::sort(extra.begin(), extra.end());
        extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
        std::string r;
        for (const auto& e : extra) r += (r.empty() ? "" : ";") + e;
        return r;
    }
};

inline mc::McOptions mc_options(const ScenarioConfig& c, std::size_t point, unsigned threads) {
    mc::McOptions o;
    o.seed = mc::splitmix64(c.simulation.seed ^ mc::splitmix64(point + 1));
    o.samples = c.simulation.samples;
    o.threads = threads;
    return o;
}

inline Row analytic_row(double x, const std::string& metric, const std::string& method, double v, const Flags& f,
                        std::vector<std::string> extra = {}) {
    return {x, metric, method, v, std::nullopt, std::nullopt, f.for_metric(metric, std::move(extra))};
}

inline Row mc_row(double x, const std::string& metric, const mc::EstimateResult& e, const Flags& f) {
    std::vector<std::string> extra;
    if (e.value == 0.0) extra.push_back("no_events");
    return {x, metric, "mc", e.value, e.ci_lo, e.ci_hi, f.for_metric(metric, extra)};
}

inline void outage_rows(std::vector<Row>& out, double x, const SystemSpec& s, const std::string& method,
                        const ScenarioConfig& c, std::size_t point, unsigned threads, const Flags& f) {
    auto push = [&](const OutageBreakdown& o) {
        for (auto [name, v] : {std::pair{"fso", o.fso}, {"thz", o.thz}, {"hybrid", o.hybrid}, {"access", o.access}, {"e2e", o.e2e}}) {
            std::vector<std::string> extra;
            if (!(v >= 0.0 && v <= 1.0)) extra.push_back("outside_unit_interval");
            out.push_back(analytic_row(x, name, method, v, f, extra));
        }
    };
    if (method == "analytical") push(outage(s));
    else if (method == "asymptotic") push(asymptotic_outage(s));
    else if (method == "quadrature") push(outage_quad(s));
    else {
        auto e = mc::estimate_outage(s, mc_options(c, point, threads));
        for (auto [name, v] : {std::pair{"fso", e.fso}, {"thz", e.thz}, {"hybrid", e.hybrid}, {"access", e.access}, {"e2e", e.e2e}})
            out.push_back(mc_row(x, name, v, f));
    }
}

inline void capacity_rows(std::vector<Row>& out, double x, const SystemSpec& s, const std::string& method,
                          const ScenarioConfig& c, std::size_t point, unsigned threads, const Flags& f) {
    if (method == "mc") {
        auto e = mc::estimate_capacity(s, mc_options(c, point, threads));
        for (auto [name, v] : {std::pair{"fso", e.fso}, {"thz", e.thz}, {"hybrid", e.hybrid}, {"access", e.access}, {"e2e", e.e2e}})
            out.push_back(mc_row(x, name, v, f));
        return;
    }
    CapacityBreakdown b;
    if (method == "quadrature") {
        b = capacity_quad(s);
    } else {
        AnalyticOptions o;
        if (method == "log_approx") o.lower_tail = LowerTail::log_approx;
        b = capacity(s, o);
    }
    const std::pair<const char*, const MetricValue*> items[] = {
        {"fso", &b.fso}, {"thz", &b.thz}, {"hybrid", &b.hybrid}, {"access", &b.access}, {"e2e", &b.e2e}};
    for (const auto& [name, v] : items) out.push_back(analytic_row(x, name, method, v->value, f, v->flags));
}

inline ModulationSet modulations(const ScenarioConfig& c) { return ModulationSet::uniform(modulation_of(c)); }

inline void aber_rows(std::vector<Row>& out, double x, const SystemSpec& s, const std::string& method,
                      const ScenarioConfig& c, std::size_t point, unsigned threads, const Flags& f) {
    const ModulationSet mods = modulations(c);
    if (method == "mc") {
        auto e = mc::estimate_aber(s, mods, mc_options(c, point, threads));
        for (auto [name, v] : {std::pair{"fso", e.fso}, {"thz", e.thz}, {"access", e.access}, {"hybrid", e.hybrid},
                               {"hybrid_unconditional", e.hybrid_unconditional}, {"e2e", e.e2e},
                               {"e2e_unconditional", e.e2e_unconditional}})
            out.push_back(mc_row(x, name, v, f));
        return;
    }
    const AberBreakdown b = method == "quadrature" ? aber_quad(s, mods) : aber(s, mods);
    const std::pair<const char*, const MetricValue*> items[] = {
        {"fso", &b.fso},       {"thz", &b.thz}, {"access", &b.access}, {"hybrid", &b.hybrid},
        {"hybrid_unconditional", &b.hybrid_unconditional}, {"e2e", &b.e2e}, {"e2e_unconditional", &b.e2e_unconditional}};
    for (const auto& [name, v] : items) out.push_back(analytic_row(x, name, method, v->value, f, v->flags));
}

inline void diversity_rows(std::vector<Row>& out, double x, const SystemSpec& s, const Flags& f) {
    const DiversityOrders d = diversity_order(s);
    for (auto [name, v] : {std::pair{"fso", d.fso}, {"thz", d.thz}, {"hybrid", d.hybrid}, {"access", d.access}, {"e2e", d.e2e}})
        out.push_back(analytic_row(x, name, "analytical", v, f));
}

// Hard and soft switch counts on the same channel draws, one row pair per seed.
inline void trace_rows(std::vector<Row>& out, const ScenarioConfig& c, std::size_t seed_index) {
    ScenarioConfig hc = c;
    hc.switching.policy = "hard";
    const SystemSpec hard = build_system(hc);
    ScenarioConfig sc = c;
    sc.switching.policy = "soft";
    const SwitchPolicy soft = policy_of(sc);
    const auto trace = mc::run_trace(hard, c.simulation.slots, c.simulation.rho, mc::RngStream{c.simulation.seed, seed_index});
    const auto hs = mc::states_of(trace);
    const auto ss = mc::replay(trace, soft);
    const double x = static_cast<double>(seed_index + 1);
    out.push_back({x, "hard_switches", "mc", double(mc::total_switches(count_switch_events(hs))), std::nullopt, std::nullopt, ""});
    out.push_back({x, "soft_switches", "mc", double(mc::total_switches(count_switch_events(ss))), std::nullopt, std::nullopt, ""});
}

// Evaluates fn(i) for i in [0, n) on up to `threads` workers and returns the
// per-index results in index order.
template <class Fn>
inline std::vector<std::vector<Row>> parallel_points(std::size_t n, unsigned threads, Fn&& fn) {
    std::vector<std::vector<Row>> res(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                res[i] = fn(i);
            } catch (...) {
                err[i] = std::current_exception();
            }
        }
    };
    const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return res;
}

inline std::vector<Row> flatten_sorted(std::vector<std::vector<Row>> parts) {
    std::vector<Row> rows;
    for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.sweep_value < b.sweep_value; });
    return rows;
}

}  // namespace detail

inline std::vector<Row> run(ScenarioConfig c, Command cmd, const RunOptions& opt) {
    apply_overrides(c, opt);
    if (c.simulation.threads < 0) throw config_error("threads must be >= 0", 0, "threads");
    const unsigned threads = mc::resolve_threads(static_cast<unsigned>(c.simulation.threads));
    const auto methods = detail::expand_methods(cmd, opt.method);

    if (cmd == Command::trace) {
        if (c.simulation.seeds < 1) throw config_error("seeds must be >= 1", 0, "seeds");
        auto parts = detail::parallel_points(c.simulation.seeds, threads, [&](std::size_t k) {
            std::vector<Row> r;
            detail::trace_rows(r, c, k);
            return r;
        });
        return detail::flatten_sorted(std::move(parts));
    }

    std::vector<double> xs = sweep_values(c.sweep);
    // diversity orders do not depend on the SNR
    if (cmd == Command::diversity && c.sweep.axis == "transmit_snr_dB") xs = {c.simulation.transmit_snr_dB};
    const unsigned inner = xs.size() > 1 ? 1u : threads;

    auto parts = detail::parallel_points(xs.size(), threads, [&](std::size_t i) {
        ScenarioConfig pc = c;
        apply_axis(pc, c.sweep.axis, xs[i]);
        const SystemSpec s = build_system(pc);
        const detail::Flags f(s);
        std::vector<Row> r;
        for (const auto& m : methods) {
            switch (cmd) {
                case Command::outage: detail::outage_rows(r, xs[i], s, m, pc, i, inner, f); break;
                case Command::capacity: detail::capacity_rows(r, xs[i], s, m, pc, i, inner, f); break;
                case Command::aber: detail::aber_rows(r, xs[i], s, m, pc, i, inner, f); break;
                case Command::diversity: detail::diversity_rows(r, xs[i], s, f); break;
                case Command::trace: break;
            }
        }
        return r;
    });
    return detail::flatten_sorted(std::move(parts));
}

}  // namespace hybridlink::cli
