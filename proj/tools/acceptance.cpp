// acceptance: one PASS/FAIL line per acceptance criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hybridlink/cli/figures.hpp"
#include "hybridlink/hybridlink.hpp"

using namespace hybridlink;
namespace cli = hybridlink::cli;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char b[512];
    std::snprintf(b, sizeof b, f, args...);
    return b;
}

// SNR (dB) at which a decreasing metric crosses target, bisected on log10.
double crossing(const std::function<double(double)>& f, double target, double lo = 0.0, double hi = 100.0) {
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        if (std::log10(f(m)) > std::log10(target)) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

SystemSpec system_of(const cli::ScenarioConfig& c, double snr) {
    cli::ScenarioConfig pc = c;
    pc.simulation.transmit_snr_dB = snr;
    return cli::build_system(pc);
}

const cli::ScenarioConfig& case_config(const std::vector<cli::FigureCase>& cs, const std::string& label) {
    for (const auto& c : cs)
        if (c.label == label) return c.config;
    throw config_error("no case " + label);
}

// ------------------------------------------------------------------------

void closed_form_vs_quadrature() {
    const auto t0 = Clock::now();
    int checks = 0, bad = 0;
    double worst_out = 0.0, worst_cap = 0.0, worst_ber = 0.0;
    for (double cn2 : {1e-12, 5e-13})
        for (bool soft : {false, true})
            for (int tau : {1, 2})
                for (double snr = 0.0; snr <= 60.0; snr += 5.0) {
                    SystemSpec s;
                    s.fso.cn2 = cn2;
                    s.thz.n_rx = cn2 > 6e-13 ? 2 : 3;
                    s.fso.tau = tau;
                    if (soft) s.policy = SoftPolicy{db_to_linear(6.0), db_to_linear(4.0), db_to_linear(5.0)};
                    s.set_snr(snr);

                    const auto o = outage(s), oq = outage_quad(s);
                    for (double d : {o.fso - oq.fso, o.thz - oq.thz, o.hybrid - oq.hybrid, o.access - oq.access, o.e2e - oq.e2e}) {
                        ++checks;
                        worst_out = std::max(worst_out, std::abs(d));
                        bad += !(std::abs(d) <= 1e-8);
                    }
                    if (snr >= 20.0) {
                        const auto c = capacity(s), cq = capacity_quad(s);
                        for (double d : {c.fso.value - cq.fso.value, c.thz.value - cq.thz.value, c.hybrid.value - cq.hybrid.value,
                                         c.access.value - cq.access.value, c.e2e.value - cq.e2e.value}) {
                            ++checks;
                            worst_cap = std::max(worst_cap, std::abs(d));
                            bad += !(std::abs(d) <= 1e-3);
                        }
                    }
                    const auto mods = tau == 2 ? std::vector{Modulation::ook()}
                                               : std::vector{Modulation::bpsk(), Modulation::qam(16), Modulation::psk(8)};
                    for (const auto& m : mods) {
                        const auto ms = ModulationSet::uniform(m);
                        const auto b = aber(s, ms), bq = aber_quad(s, ms);
                        const MetricValue* a[] = {&b.fso, &b.thz, &b.access, &b.hybrid, &b.hybrid_unconditional, &b.e2e, &b.e2e_unconditional};
                        const MetricValue* q[] = {&bq.fso, &bq.thz, &bq.access, &bq.hybrid, &bq.hybrid_unconditional, &bq.e2e, &bq.e2e_unconditional};
                        for (int i = 0; i < 7; ++i) {
                            if (!(q[i]->value >= 1e-8)) continue;
                            ++checks;
                            const double r = std::abs(a[i]->value - q[i]->value) / q[i]->value;
                            worst_ber = std::max(worst_ber, r);
                            bad += !(r <= 0.02);
                        }
                    }
                }
    const double t = seconds_since(t0);
    report(1, bad == 0 && t < 300.0,
           fmt("%d checks, %d out of tolerance; worst outage %.1e, capacity %.1e bits, ABER %.1e rel; %.0f s", checks, bad,
               worst_out, worst_cap, worst_ber, t));
}

void monte_carlo_agreement() {
    bool ok = true;
    int checked = 0, missed = 0;
    double slowest = 0.0;
    for (bool soft : {false, true}) {
        const auto t0 = Clock::now();
        for (double snr = 0.0; snr <= 60.0; snr += 5.0) {
            SystemSpec s;
            if (soft) s.policy = SoftPolicy{db_to_linear(6.0), db_to_linear(4.0), db_to_linear(5.0)};
            s.set_snr(snr);
            const auto a = outage(s);
            if (std::max({a.fso, a.thz, a.hybrid, a.access, a.e2e}) < 1e-4) continue;
            mc::McOptions o;
            o.samples = 10'000'000;
            o.seed = 2024 + static_cast<std::uint64_t>(snr);
            const auto e = mc::estimate_outage(s, o);
            const std::pair<double, const mc::EstimateResult*> pairs[] = {
                {a.fso, &e.fso}, {a.thz, &e.thz}, {a.hybrid, &e.hybrid}, {a.access, &e.access}, {a.e2e, &e.e2e}};
            for (auto [an, est] : pairs) {
                if (an < 1e-4) continue;
                ++checked;
                const auto ci = mc::wilson_interval(est->value, est->n_effective, 3.0);
                if (!(an >= ci.lo && an <= ci.hi)) {
                    ++missed;
                    std::printf("  %s %g dB: analytical %.5e outside [%.5e, %.5e]\n", soft ? "soft" : "hard", snr, an, ci.lo, ci.hi);
                }
            }
        }
        slowest = std::max(slowest, seconds_since(t0));
    }
    ok = missed == 0 && slowest < 120.0;
    report(2, ok, fmt("%d points with P_out >= 1e-4 over hard and soft curves, %d outside the 99.7%% CI; slowest curve %.0f s",
                      checked, missed, slowest));
}

void diversity_slopes() {
    SystemSpec s;  // strong turbulence, heterodyne, THz alpha 2 mu 3 N_r 2, access m 2 N_t 2
    s.set_snr(55.0);
    const auto lo = outage(s);
    s.set_snr(70.0);
    const auto hi = outage(s);
    const auto d = diversity_order(s);
    auto slope = [](double a, double b) { return -(std::log10(b) - std::log10(a)) / 1.5; };
    struct Item { const char* name; double slope, order; };
    const Item items[] = {{"fso", slope(lo.fso, hi.fso), d.fso},
                          {"thz", slope(lo.thz, hi.thz), d.thz},
                          {"access", slope(lo.access, hi.access), d.access},
                          {"e2e", slope(lo.e2e, hi.e2e), d.e2e}};
    bool ok = std::abs(d.fso - 2.492) < 0.01 && d.thz == 6.0 && d.access == s.access.m * s.access.n_tx &&
              s.thz.pointing.xi2() / 2.0 > 6.0;
    std::string det;
    for (const auto& it : items) {
        ok = ok && std::abs(it.slope - it.order) <= 0.05 * it.order;
        det += fmt("%s %.3f/%.3f ", it.name, it.slope, it.order);
    }
    report(3, ok, "slope/min-rule: " + det);
}

void switching_identities() {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_sys = 0.0;
    for (int i = 0; i < 50; ++i) {
        SystemSpec h;
        h.fso.cn2 = std::pow(10.0, -13.0 + 1.3 * u(g));
        h.fso.tau = u(g) < 0.5 ? 1 : 2;
        h.thz.n_rx = 1 + static_cast<int>(3.0 * u(g));
        h.access.m = 1.0 + 2.0 * u(g);
        const double th = db_to_linear(10.0 * u(g)), tt = db_to_linear(10.0 * u(g));
        h.policy = HardPolicy{th};
        h.set_snr(10.0 + 40.0 * u(g));
        SystemSpec s = h;
        s.policy = SoftPolicy{th, th, th};
        s.update();
        // thresholds on the THz side too
        SystemSpec s2 = s;
        std::get<SoftPolicy>(s2.policy).gamma_t_th = tt;
        s2.update();
        const double ha = outage(h).hybrid, sa = outage(s).hybrid;
        const double hf = fso_snr_cdf(th, h.fso), ht = thz_snr_cdf(tt, h.thz);
        const double hb = hard_combined_outage(hf, ht), sb = outage(s2).hybrid;
        for (auto [a, b] : {std::pair{sa, ha}, {sb, hb}}) worst_sys = std::max(worst_sys, std::abs(a - b) / std::max(b, 1e-300));
    }
    double worst_pair = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double pl = u(g), ph = u(g) * (1.0 - pl), pm = 1.0 - pl - ph;
        if (pl + ph <= 0.0) continue;
        worst_pair = std::max(worst_pair, std::abs(soft_fso_off_probability(pl, pm, ph) - soft_fso_off_probability_reduced(pl, ph)));
    }
    report(4, worst_sys <= 1e-12 && worst_pair <= 1e-12,
           fmt("coincident soft vs hard worst rel diff %.1e over 50 configs; three-band vs reduced worst %.1e over 1e4 pairs",
               worst_sys, worst_pair));
}

void db_gaps() {
    const double target = 1e-6;
    auto gap = [&](const std::string& id, const std::string& turb, bool ber) {
        const auto cs = cli::figure_cases(id);
        const auto& h = case_config(cs, turb + "/hard");
        const auto& s = case_config(cs, turb + "/soft");
        const auto mods = ModulationSet::uniform(cli::modulation_of(h));
        auto metric = [&](const cli::ScenarioConfig& c) {
            return [&, c](double snr) {
                const SystemSpec sys = system_of(c, snr);
                return ber ? aber(sys, mods).hybrid.value : outage(sys).hybrid;
            };
        };
        return crossing(metric(h), target) - crossing(metric(s), target);
    };
    // positive: soft reaches the target earlier
    const double out_strong = gap("fig5", "strong_a", false), out_mod = gap("fig5", "moderate_b", false);
    const double ber_strong = -gap("fig12", "strong_a", true), ber_mod = -gap("fig12", "moderate_b", true);

    const auto cs = cli::figure_cases("fig14b");
    auto cap40 = [&](const std::string& label) { return capacity(system_of(case_config(cs, label), 40.0)).hybrid.value; };
    const double drop = cap40("moderate_b/m2_nt2") - cap40("strong_a/m2_nt2");

    const bool ok = std::abs(out_strong - 0.1) <= 0.2 && std::abs(out_mod - 0.4) <= 0.2 && std::abs(ber_strong - 0.91) <= 0.3 &&
                    std::abs(ber_mod - 0.35) <= 0.3 && std::abs(drop - 0.18) <= 0.05;
    report(5, ok,
           fmt("outage gain %.2f / %.2f dB (eps %.1f dB), ABER loss %.2f / %.2f dB (eps %.1f dB), capacity drop %.3f bits at 40 dB",
               out_strong, out_mod, cli::fig5_epsilon_dB, ber_strong, ber_mod, cli::default_epsilon_dB, drop));
}

void optimum_beamwidth() {
    const std::array<double, 4> expect{0.35, 0.55, 0.65, 0.75};
    bool ok = true;
    double prev = 0.0;
    std::string det;
    const auto cs = cli::figure_cases("fig10");
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto& c = cs[k].config;
        const auto ws = cli::sweep_values(c.sweep);
        std::size_t best = 0;
        double best_v = INFINITY;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            cli::ScenarioConfig pc = c;
            cli::apply_axis(pc, c.sweep.axis, ws[i]);
            const double v = outage(cli::build_system(pc)).hybrid;
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        const double w = ws[best];
        const bool interior = best > 0 && best + 1 < ws.size();
        ok = ok && interior && w >= prev && std::abs(w - expect[k]) <= 0.05 + 1e-9;
        prev = w;
        det += fmt("%s %.2f m ", cs[k].label.c_str(), w);
    }
    report(6, ok, "optima " + det);
}

void hysteresis() {
    const auto t0 = Clock::now();
    const auto cfg = cli::load_config(HYBRIDLINK_CONFIG_DIR "/hysteresis_trace.ini");
    const auto rows = cli::run(cfg, cli::Command::trace, {});
    int wins = 0, seeds = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        ++seeds;
        wins += rows[i + 1].value < rows[i].value;
    }
    const double t = seconds_since(t0);
    report(7, seeds == 20 && wins >= 19 && t < 60.0,
           fmt("soft below hard in %d/%d seeds (rho %.1f, eps %.0f dB, %llu slots), %.1f s", wins, seeds, cfg.simulation.rho,
               cfg.switching.epsilon_dB, static_cast<unsigned long long>(cfg.simulation.slots), t));
}

void modulation_gaps() {
    const auto cs = cli::figure_cases("fig13");
    auto at = [&](const std::string& mod) {
        const auto& c = case_config(cs, mod);
        const auto mods = ModulationSet::uniform(cli::modulation_of(c));
        return crossing([&](double snr) { return aber(system_of(c, snr), mods).e2e.value; }, 1e-4);
    };
    const double ook = at("OOK"), bpsk = at("BPSK"), q16 = at("16-QAM"), p16 = at("16-PSK"), q64 = at("64-QAM");
    const bool ok = ook - bpsk > 10.0 && std::abs((p16 - q16) - 3.7) <= 1.0 && std::abs((q64 - q16) - 5.9) <= 1.0;
    report(8, ok,
           fmt("BPSK over OOK %.2f dB, 16-QAM over 16-PSK %.2f dB, 64-QAM behind 16-QAM %.2f dB", ook - bpsk, p16 - q16, q64 - q16));
}

std::string capture(const std::string& args) {
    const std::string cmd = std::string(HYBRIDLINK_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf;
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
    const int st = pclose(p);
    if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) out += "<exit " + std::to_string(st) + ">";
    return out;
}

void reproducibility() {
    const std::string dir = HYBRIDLINK_CONFIG_DIR;
    const std::vector<std::string> invocations{
        "outage --config " + dir + "/default.ini --method all --samples 200000 --seed 7",
        "aber --config " + dir + "/fig6b.ini --method mc --samples 100000 --seed 11",
        "capacity --config " + dir + "/fig6a.ini --method mc --samples 100000 --seed 3",
        "trace --config " + dir + "/hysteresis_trace.ini --seed 5",
        "figure fig11 --method mc --samples 50000 --seed 9",
    };
    int identical = 0;
    for (const auto& a : invocations) {
        const std::string r1 = capture(a + " --threads 1");
        const std::string r2 = capture(a + " --threads 1");
        const std::string r4 = capture(a + " --threads 4");
        const std::string r0 = capture(a + " --threads 0");
        const bool same = r1.find("<exit") == std::string::npos && r1.size() > 100 && r1 == r2 && r1 == r4 && r1 == r0;
        if (!same) std::printf("  differs: %s\n", a.c_str());
        identical += same;
    }
    report(9, identical == static_cast<int>(invocations.size()),
           fmt("%d/%zu invocations byte-identical over repeated runs and 1/4/all threads", identical, invocations.size()));
}

}  // namespace

int main() {
    const std::vector<std::pair<int, void (*)()>> checks{
        {1, closed_form_vs_quadrature}, {2, monte_carlo_agreement}, {3, diversity_slopes}, {4, switching_identities},
        {5, db_gaps},                   {6, optimum_beamwidth},     {7, hysteresis},       {8, modulation_gaps},
        {9, reproducibility}};
    for (auto [id, fn] : checks) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, false, std::string("error: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
