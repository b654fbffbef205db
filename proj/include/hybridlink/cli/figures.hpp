#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "hybridlink/cli/config.hpp"
#include "hybridlink/cli/run.hpp"

namespace hybridlink::cli {

struct FigureCase {
    std::string label;
    ScenarioConfig config;
    Command command = Command::outage;
    std::vector<std::string> extra_methods;  // run alongside the requested method
};

namespace presets {

inline void strong_a(ScenarioConfig& c) {
    c.fso.cn2 = 1e-12;
    c.thz.alpha = 2.0;
    c.thz.mu = 3.0;
    c.thz.n_rx = 2;
}

inline void moderate_b(ScenarioConfig& c) {
    c.fso.cn2 = 5e-13;
    c.thz.alpha = 2.0;
    c.thz.mu = 3.0;
    c.thz.n_rx = 3;
}

inline void access(ScenarioConfig& c, double m, int n_tx) {
    c.access.m = m;
    c.access.n_tx = n_tx;
}

inline void soft(ScenarioConfig& c, double eps_dB) {
    c.switching.policy = "soft";
    c.switching.epsilon_dB = eps_dB;
}

inline void hard(ScenarioConfig& c) { c.switching.policy = "hard"; }

inline void sweep(ScenarioConfig& c, const char* axis, double start, double stop, double step) {
    c.sweep.axis = axis;
    c.sweep.start = start;
    c.sweep.stop = stop;
    c.sweep.steps = static_cast<int>(std::lround((stop - start) / step)) + 1;
}

inline std::string access_label(double m, int n) {
    char b[32];
    std::snprintf(b, sizeof b, "m%g_nt%d", m, n);
    return b;
}

}  // namespace presets

// Hysteresis half-width used for the soft curves of the hard/soft outage comparison.
inline constexpr double fig5_epsilon_dB = 0.4;
// Same for the ABER comparison and every other soft-switching figure.
inline constexpr double default_epsilon_dB = 1.0;

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"fig5",  "fig6a", "fig6b", "fig7",  "fig8",   "fig9",
                                              "fig10", "fig11", "fig12", "fig13", "fig14a", "fig14b"};
    return ids;
}

inline std::vector<FigureCase> figure_cases(const std::string& id) {
    using namespace presets;
    std::vector<FigureCase> cases;
    const ScenarioConfig base;

    if (id == "fig5" || id == "fig12") {
        const bool ber = id == "fig12";
        const double eps = ber ? default_epsilon_dB : fig5_epsilon_dB;
        for (auto [turb, fn] : {std::pair{"strong_a", &strong_a}, {"moderate_b", &moderate_b}}) {
            for (bool is_soft : {false, true}) {
                ScenarioConfig c = base;
                fn(c);
                if (is_soft) soft(c, eps);
                else hard(c);
                sweep(c, "transmit_snr_dB", 0, 60, 1);
                cases.push_back({std::string(turb) + (is_soft ? "/soft" : "/hard"), c, ber ? Command::aber : Command::outage, {}});
            }
        }
    } else if (id == "fig6a" || id == "fig6b" || id == "fig7") {
        struct Acc { double m; int n; };
        std::vector<std::pair<void (*)(ScenarioConfig&), std::vector<Acc>>> groups;
        if (id == "fig6a") groups = {{&strong_a, {{2, 2}}}};
        if (id == "fig6b") groups = {{&moderate_b, {{2, 3}, {3, 5}}}};
        if (id == "fig7") groups = {{&strong_a, {{2, 2}}}, {&moderate_b, {{3, 5}}}};
        for (auto& [fn, accs] : groups) {
            for (auto a : accs) {
                ScenarioConfig c = base;
                fn(c);
                access(c, a.m, a.n);
                soft(c, default_epsilon_dB);
                sweep(c, "transmit_snr_dB", 0, 70, 5);
                if (id == "fig7") c.simulation.source_power_offset_dB = -10.0;
                const std::string turb = fn == &strong_a ? "strong_a" : "moderate_b";
                cases.push_back({turb + "/" + access_label(a.m, a.n), c, Command::outage, {}});
            }
        }
    } else if (id == "fig8") {
        struct C { const char* name; double cn2; double mu; int nr; };
        for (C k : {C{"c1", 1e-12, 2, 2}, C{"c2", 1e-12, 2, 3}, C{"c3", 5e-13, 3, 2}, C{"c4", 5e-13, 3, 3}}) {
            for (const char* det : {"imdd", "heterodyne"}) {
                ScenarioConfig c = base;
                c.fso.cn2 = k.cn2;
                c.thz.mu = k.mu;
                c.thz.n_rx = k.nr;
                c.fso.detection = det;
                soft(c, default_epsilon_dB);
                sweep(c, "transmit_snr_dB", 0, 70, 5);
                cases.push_back({std::string(k.name) + "/" + det, c, Command::outage, {}});
            }
        }
    } else if (id == "fig9") {
        for (auto [m, n] : {std::pair{2.0, 3}, {3.0, 6}}) {
            ScenarioConfig c = base;
            strong_a(c);
            c.thz.mu = 2.0;
            c.thz.n_rx = 3;
            access(c, m, n);
            soft(c, default_epsilon_dB);
            c.simulation.transmit_snr_dB = 30.0;
            sweep(c, "length_m", 50, 500, 50);
            cases.push_back({access_label(m, n), c, Command::outage, {}});
        }
    } else if (id == "fig10") {
        for (double sj : {0.10, 0.15, 0.20, 0.25}) {
            ScenarioConfig c = base;
            moderate_b(c);
            c.fso.aperture_radius_m = 0.10;
            c.thz.aperture_radius_m = 0.10;
            c.fso.jitter_std_m = c.thz.jitter_std_m = sj;
            soft(c, default_epsilon_dB);
            c.simulation.transmit_snr_dB = 30.0;
            sweep(c, "beamwidth_m", 0.20, 1.20, 0.05);
            char b[32];
            std::snprintf(b, sizeof b, "jitter_%.2f", sj);
            cases.push_back({b, c, Command::outage, {}});
        }
    } else if (id == "fig11") {
        ScenarioConfig c = base;
        moderate_b(c);
        soft(c, 0.0);
        c.simulation.transmit_snr_dB = 30.0;
        sweep(c, "epsilon_dB", 0, 3, 0.25);
        cases.push_back({"moderate_b", c, Command::outage, {}});
    } else if (id == "fig13") {
        for (const char* mod : {"OOK", "BPSK", "QPSK", "4-QAM", "16-QAM", "64-QAM", "8-PSK", "16-PSK"}) {
            ScenarioConfig c = base;
            moderate_b(c);
            access(c, 2, 3);
            soft(c, default_epsilon_dB);
            c.simulation.modulation = mod;
            c.fso.detection = std::string(mod) == "OOK" ? "imdd" : "heterodyne";
            sweep(c, "transmit_snr_dB", 0, 60, 1);
            cases.push_back({mod, c, Command::aber, {}});
        }
    } else if (id == "fig14a") {
        ScenarioConfig c = base;
        moderate_b(c);
        soft(c, default_epsilon_dB);
        sweep(c, "transmit_snr_dB", 0, 60, 5);
        cases.push_back({"moderate_b", c, Command::capacity, {"log_approx"}});
    } else if (id == "fig14b") {
        for (auto [turb, fn] : {std::pair{"strong_a", &strong_a}, {"moderate_b", &moderate_b}}) {
            for (auto [m, n] : {std::pair{2.0, 2}, {2.0, 3}, {3.0, 5}}) {
                ScenarioConfig c = base;
                fn(c);
                access(c, m, n);
                soft(c, default_epsilon_dB);
                sweep(c, "transmit_snr_dB", 0, 60, 5);
                cases.push_back({std::string(turb) + "/" + access_label(m, n), c, Command::capacity, {}});
            }
        }
    } else {
        throw config_error("unknown figure id '" + id + "'", 0, "figure");
    }
    return cases;
}

inline std::vector<Row> figure(const std::string& id, const RunOptions& opt) {
    std::vector<Row> rows;
    for (const auto& fc : figure_cases(id)) {
        std::vector<std::string> methods{opt.method};
        for (const auto& m : fc.extra_methods)
            if (opt.method.empty() || opt.method == "analytical" || opt.method == "all") methods.push_back(m);
        for (const auto& m : methods) {
            RunOptions o = opt;
            o.method = m;
            for (auto& r : run(fc.config, fc.command, o)) {
                r.metric = fc.label + "/" + r.metric;
                rows.push_back(std::move(r));
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.sweep_value < b.sweep_value; });
    return rows;
}

}  // namespace hybridlink::cli
