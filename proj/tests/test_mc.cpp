#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hybridlink/mc/estimate.hpp"
#include "hybridlink/mc/trace.hpp"
#include "hybridlink/metrics/link_metrics.hpp"

using namespace hybridlink;

namespace {

SystemSpec system_at(double snr_db, bool soft = false) {
    SystemSpec s;
    if (soft) s.policy = SoftPolicy{db_to_linear(6.0), db_to_linear(4.0), db_to_linear(5.0)};
    return s.set_snr(snr_db);
}

mc::McOptions opts(std::uint64_t n, unsigned threads = 1, std::uint64_t seed = 7) {
    mc::McOptions o;
    o.samples = n;
    o.threads = threads;
    o.seed = seed;
    o.block_size = 1u << 14;
    return o;
}

// |x − p| within k binomial standard errors
void expect_binomial(double x, double p, std::uint64_t n, double k = 4.0) {
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    EXPECT_NEAR(x, p, k * se + 1e-12);
}

}  // namespace

TEST(Wilson, ContainsEstimate) {
    for (double p : {0.0, 1e-4, 0.3, 1.0}) {
        auto ci = mc::wilson_interval(p, 10000, mc::z95);
        EXPECT_LE(ci.lo, p);
        EXPECT_GE(ci.hi, p);
        EXPECT_GE(ci.lo, 0.0);
        EXPECT_LE(ci.hi, 1.0);
    }
    EXPECT_EQ(mc::wilson_interval(0.0, 100, 3.0).lo, 0.0);
    EXPECT_GT(mc::wilson_interval(0.0, 100, 3.0).hi, 0.0);
}

TEST(Wilson, WidensWithZ) {
    auto a = mc::wilson_interval(0.01, 100000, mc::z95);
    auto b = mc::wilson_interval(0.01, 100000, 3.0);
    EXPECT_LT(b.lo, a.lo);
    EXPECT_GT(b.hi, a.hi);
}

TEST(BatchMeans, EffectiveSamples) {
    std::vector<std::pair<double, double>> flat(30, {100.0, 0.5});
    EXPECT_DOUBLE_EQ(mc::effective_samples(flat, 0.25), 3000.0);
    // block means spread as if each block held 25 independent draws
    std::vector<std::pair<double, double>> wide;
    for (int i = 0; i < 30; ++i) wide.push_back({100.0, i % 2 ? 0.6 : 0.4});
    const double ne = mc::effective_samples(wide, 0.25);
    EXPECT_NEAR(ne, 3000.0 * 0.25 / (100.0 * 0.01 * 30.0 / 29.0), 1e-9);
    // too few blocks: no correction
    EXPECT_DOUBLE_EQ(mc::effective_samples({wide.begin(), wide.begin() + 5}, 0.25), 500.0);
}

TEST(Samplers, FsoMarginalMatchesCdf) {
    for (int tau : {1, 2}) {
        SystemSpec s = system_at(30.0);
        s.fso.tau = tau;
        s.update();
        auto g = mc::RngStream{3, static_cast<std::uint64_t>(tau)}.engine();
        const int n = 200000;
        std::vector<double> x(n);
        for (auto& v : x) v = mc::sample_fso_snr(s.fso, g);
        for (double th : {1.0, 10.0, 100.0, 1000.0}) {
            const double emp = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v < th; })) / n;
            expect_binomial(emp, fso_snr_cdf(th, s.fso), n);
        }
    }
}

TEST(Samplers, ThzAndAccessMarginalsMatchCdf) {
    const SystemSpec s = system_at(40.0);
    auto g = mc::RngStream{5, 0}.engine();
    const int n = 200000;
    int below_t = 0, below_r = 0;
    const double th = db_to_linear(25.0);
    for (int i = 0; i < n; ++i) {
        below_t += mc::sample_thz_snr(s.thz, g) < th;
        below_r += mc::sample_access_snr(s.access, g) < th;
    }
    expect_binomial(static_cast<double>(below_t) / n, thz_snr_cdf(th, s.thz), n);
    expect_binomial(static_cast<double>(below_r) / n, access_snr_cdf(th, s.access), n);
}

TEST(Estimate, OutageAgreesWithClosedForm) {
    for (bool soft : {false, true}) {
        const auto s = system_at(20.0, soft);
        const auto a = outage(s);
        const std::uint64_t n = 200000;
        const auto m = mc::estimate_outage(s, opts(n));
        expect_binomial(m.fso.value, a.fso, n);
        expect_binomial(m.thz.value, a.thz, n);
        expect_binomial(m.access.value, a.access, n);
        expect_binomial(m.hybrid.value, a.hybrid, n);
        expect_binomial(m.e2e.value, a.e2e, n);
    }
}

TEST(Estimate, CapacityAgreesWithClosedForm) {
    const auto s = system_at(30.0, true);
    const auto a = capacity(s);
    const auto m = mc::estimate_capacity(s, opts(200000));
    EXPECT_NEAR(m.fso.value, a.fso.value, 4.0 * m.fso.std_error);
    EXPECT_NEAR(m.thz.value, a.thz.value, 4.0 * m.thz.std_error);
    EXPECT_NEAR(m.access.value, a.access.value, 4.0 * m.access.std_error);
    EXPECT_NEAR(m.hybrid.value, a.hybrid.value, 4.0 * m.hybrid.std_error);
}

TEST(Estimate, AberAgreesWithClosedForm) {
    const auto s = system_at(20.0);
    const auto mods = ModulationSet::uniform(Modulation::qam(16));
    const auto a = aber(s, mods);
    const auto m = mc::estimate_aber(s, mods, opts(200000));
    EXPECT_NEAR(m.fso.value, a.fso.value, 4.0 * m.fso.std_error);
    EXPECT_NEAR(m.access.value, a.access.value, 4.0 * m.access.std_error);
    EXPECT_NEAR(m.e2e.value, a.e2e.value, 4.0 * m.e2e.std_error);
}

TEST(Estimate, IndependentOfThreadCount) {
    const auto s = system_at(25.0, true);
    const auto a = mc::estimate_outage(s, opts(100000, 1));
    const auto b = mc::estimate_outage(s, opts(100000, 4));
    EXPECT_EQ(a.e2e.value, b.e2e.value);
    EXPECT_EQ(a.hybrid.value, b.hybrid.value);
    const auto c = mc::estimate_capacity(s, opts(50000, 1));
    const auto d = mc::estimate_capacity(s, opts(50000, 3));
    EXPECT_EQ(c.hybrid.value, d.hybrid.value);
    EXPECT_EQ(c.access.std_error, d.access.std_error);
}

TEST(Estimate, SoftIntervalAccountsForStateMemory) {
    const auto h = mc::estimate_outage(system_at(10.0), opts(400000));
    EXPECT_EQ(h.hybrid.n_effective, 400000.0);
    const auto s = mc::estimate_outage(system_at(10.0, true), opts(400000));
    EXPECT_LE(s.hybrid.n_effective, 400000.0);
    EXPECT_GT(s.hybrid.n_effective, 0.0);
    EXPECT_LE(s.hybrid.ci_lo, s.hybrid.value);
    EXPECT_GE(s.hybrid.ci_hi, s.hybrid.value);
    // ρ = 0: THz and access draws are still independent from slot to slot
    EXPECT_GT(s.access.n_effective, 0.5 * 400000.0);
}

TEST(Estimate, SeedChangesDraws) {
    const auto s = system_at(20.0);
    EXPECT_NE(mc::estimate_outage(s, opts(50000, 1, 1)).fso.value, mc::estimate_outage(s, opts(50000, 1, 2)).fso.value);
}

TEST(Estimate, RejectsTooFewSamples) {
    const auto s = system_at(20.0);
    EXPECT_THROW(mc::estimate_outage(s, opts(mc::min_samples - 1)), domain_error);
    EXPECT_NO_THROW(mc::estimate_outage(s, opts(mc::min_samples)));
}

TEST(Ar1, LagOneCorrelation) {
    mc::GaussianAr1 ar(0.9);
    auto g = mc::RngStream{11, 0}.engine();
    const int n = 200000;
    double prev = ar.next(g), sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = ar.next(g);
        sxy += z * prev;
        sxx += prev * prev;
        prev = z;
    }
    EXPECT_NEAR(sxy / sxx, 0.9, 0.01);
    EXPECT_NEAR(sxx / n, 1.0, 0.05);
    EXPECT_THROW(mc::GaussianAr1(1.0), domain_error);
}

TEST(Trace, CorrelatedMarginalIsPreserved) {
    const auto s = system_at(30.0);
    const auto t = mc::run_trace(s, 200000, 0.9, mc::RngStream{2, 0});
    const double th = db_to_linear(10.0);
    const double emp =
        static_cast<double>(std::count_if(t.begin(), t.end(), [&](const auto& x) { return x.gamma_f < th; })) / t.size();
    // correlated draws: allow a wider band
    expect_binomial(emp, fso_snr_cdf(th, s.fso), t.size(), 15.0);
}

TEST(Trace, ReplayReproducesRecordedStates) {
    const auto s = system_at(30.0, true);
    const auto t = mc::run_trace(s, 5000, 0.9, mc::RngStream{4, 1});
    const auto r = mc::replay(t, s.policy);
    const auto st = mc::states_of(t);
    ASSERT_EQ(r.size(), st.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_EQ(r[i].active, st[i].active) << i;
        EXPECT_EQ(r[i].fso_was_below_lower, st[i].fso_was_below_lower) << i;
    }
}

TEST(Trace, SameStreamSameTrace) {
    const auto s = system_at(30.0);
    const auto a = mc::run_trace(s, 1000, 0.5, mc::RngStream{9, 3});
    const auto b = mc::run_trace(s, 1000, 0.5, mc::RngStream{9, 3});
    const auto c = mc::run_trace(s, 1000, 0.5, mc::RngStream{9, 4});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].gamma_f, b[i].gamma_f);
    EXPECT_NE(a[0].gamma_f, c[0].gamma_f);
}

TEST(Trace, HysteresisSwitchesLess) {
    SystemSpec s = system_at(30.0);
    const auto t = mc::run_trace(s, 20000, 0.9, mc::RngStream{1, 0});
    const SwitchPolicy hard = HardPolicy{db_to_linear(5.0)};
    const SwitchPolicy soft = SoftPolicy{db_to_linear(6.0), db_to_linear(4.0), db_to_linear(5.0)};
    EXPECT_LT(mc::total_switches(count_switch_events(mc::replay(t, soft))),
              mc::total_switches(count_switch_events(mc::replay(t, hard))));
}
