#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "hybridlink/metrics/system.hpp"

using namespace hybridlink;

namespace {

SystemSpec system_at(double snr_db, bool soft, int tau = 1) {
    SystemSpec s;
    s.fso.tau = tau;
    if (soft) s.policy = SoftPolicy{db_to_linear(6.0), db_to_linear(4.0), db_to_linear(5.0)};
    return s.set_snr(snr_db);
}

AccessLinkSpec rayleigh_access(double snr_db) {
    AccessLinkSpec a;
    a.m = 1.0;
    a.n_tx = 1;
    a.transmit_snr_db = snr_db;
    return a.update();
}

}  // namespace

class ClosedFormVsQuadrature : public ::testing::TestWithParam<std::tuple<double, bool, int>> {};

TEST_P(ClosedFormVsQuadrature, Outage) {
    auto [snr, soft, tau] = GetParam();
    const auto s = system_at(snr, soft, tau);
    const auto a = outage(s), q = outage_quad(s);
    EXPECT_NEAR(a.fso, q.fso, 1e-8);
    EXPECT_NEAR(a.thz, q.thz, 1e-8);
    EXPECT_NEAR(a.hybrid, q.hybrid, 1e-8);
    EXPECT_NEAR(a.access, q.access, 1e-8);
    EXPECT_NEAR(a.e2e, q.e2e, 1e-8);
}

TEST_P(ClosedFormVsQuadrature, Capacity) {
    auto [snr, soft, tau] = GetParam();
    const auto s = system_at(snr, soft, tau);
    const auto a = capacity(s), q = capacity_quad(s);
    EXPECT_NEAR(a.fso.value, q.fso.value, 1e-3);
    EXPECT_NEAR(a.thz.value, q.thz.value, 1e-3);
    EXPECT_NEAR(a.hybrid.value, q.hybrid.value, 1e-3);
    EXPECT_NEAR(a.access.value, q.access.value, 1e-3);
    EXPECT_NEAR(a.e2e.value, q.e2e.value, 1e-3);
}

TEST_P(ClosedFormVsQuadrature, Aber) {
    auto [snr, soft, tau] = GetParam();
    const auto s = system_at(snr, soft, tau);
    const auto mods = ModulationSet::uniform(tau == 2 ? Modulation::ook() : Modulation::qam(16));
    const auto a = aber(s, mods), q = aber_quad(s, mods);
    auto close = [](double x, double y) {
        if (y < 1e-8) return std::abs(x - y) < 1e-9;
        return std::abs(x - y) < 0.02 * y;
    };
    EXPECT_PRED2(close, a.fso.value, q.fso.value);
    EXPECT_PRED2(close, a.thz.value, q.thz.value);
    EXPECT_PRED2(close, a.access.value, q.access.value);
    EXPECT_PRED2(close, a.hybrid.value, q.hybrid.value);
    EXPECT_PRED2(close, a.e2e.value, q.e2e.value);
}

INSTANTIATE_TEST_SUITE_P(Grid, ClosedFormVsQuadrature,
                         ::testing::Combine(::testing::Values(10.0, 30.0, 50.0), ::testing::Bool(), ::testing::Values(1, 2)));

TEST(Outage, SoftWithCoincidentThresholdsIsHard) {
    SystemSpec h = system_at(30.0, false);
    SystemSpec s = h;
    s.policy = SoftPolicy{db_to_linear(5.0), db_to_linear(5.0), db_to_linear(5.0)};
    s.update();
    EXPECT_NEAR(outage(s).hybrid, outage(h).hybrid, 1e-12 * outage(h).hybrid);
    EXPECT_NEAR(outage_e2e_soft(s), outage_e2e_hard(h), 1e-12 * outage(h).e2e);
}

TEST(Outage, EndToEndComposition) {
    EXPECT_DOUBLE_EQ(e2e_outage(0.0, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(e2e_outage(1.0, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(e2e_outage(1e-20, 0.0), 1e-20);
    const auto o = outage(system_at(40.0, true));
    EXPECT_NEAR(o.e2e, 1.0 - (1.0 - o.hybrid) * (1.0 - o.access), 1e-15);
}

TEST(Outage, DecreasesWithSnr) {
    double prev = 1.0;
    for (double snr = 0.0; snr <= 70.0; snr += 10.0) {
        const double v = outage(system_at(snr, true)).e2e;
        if (prev < 1.0) EXPECT_LT(v, prev) << snr;
        else EXPECT_LE(v, prev) << snr;
        prev = v;
    }
}

TEST(Outage, AsymptoteConvergesAtHighSnr) {
    const auto s = system_at(70.0, false);
    const auto e = outage(s), a = asymptotic_outage(s);
    EXPECT_NEAR(a.fso / e.fso, 1.0, 0.02);
    EXPECT_NEAR(a.thz / e.thz, 1.0, 0.05);
    EXPECT_NEAR(a.access / e.access, 1.0, 0.01);
}

TEST(Diversity, MinRule) {
    const auto s = system_at(30.0, false);
    const auto d = diversity_order(s);
    EXPECT_NEAR(d.fso, std::min({s.fso.pointing.xi2(), s.fso.alpha_f, s.fso.beta_f}), 1e-12);
    EXPECT_NEAR(d.fso, 2.493, 1e-3);
    EXPECT_NEAR(d.thz, 6.0, 1e-12);
    EXPECT_NEAR(d.access, 4.0, 1e-12);
    EXPECT_NEAR(d.hybrid, d.fso + d.thz, 1e-12);
    EXPECT_NEAR(d.e2e, std::min(d.hybrid, d.access), 1e-12);
}

TEST(Diversity, ImddHalvesFsoOrder) {
    EXPECT_NEAR(diversity_order(system_at(30.0, false, 2)).fso, diversity_order(system_at(30.0, false, 1)).fso / 2.0, 1e-12);
}

TEST(Capacity, RayleighErgodic) {
    for (double snr : {0.0, 20.0, 40.0}) {
        const auto a = rayleigh_access(snr);
        const double x = 1.0 / a.gamma_bar_r;
        const double expect = std::exp(x) * boost::math::expint(1, x) / std::log(2.0);
        EXPECT_NEAR(capacity_access(0.0, a).value, expect, 1e-9 * expect) << snr;
    }
}

TEST(Capacity, AccessDeepBelowThreshold) {
    // most of the mass sits under the threshold here
    for (double snr : {-5.0, 5.0, 10.0}) {
        const auto a = rayleigh_access(snr);
        const double th = db_to_linear(5.0);
        const double c = capacity_access(th, a).value, q = capacity_access_quad(th, a).value;
        EXPECT_NEAR(c, q, 1e-10 * q) << snr;
        const double b = aber_access(th, a, Modulation::qam(16)).value;
        const double bq = aber_access_quad(th, a, Modulation::qam(16)).value;
        EXPECT_NEAR(b, bq, 1e-10 * bq) << snr;
    }
}

TEST(Capacity, ThresholdRemovesLowerTail) {
    const auto a = rayleigh_access(20.0);
    EXPECT_LT(capacity_access(db_to_linear(5.0), a).value, capacity_access(0.0, a).value);
    EXPECT_NEAR(capacity_access(db_to_linear(5.0), a).value, capacity_access_quad(db_to_linear(5.0), a).value, 1e-8);
}

TEST(Capacity, LogApproximationIsFlaggedWhenOff) {
    const auto s = system_at(30.0, true);
    AnalyticOptions o;
    o.lower_tail = LowerTail::log_approx;
    const auto c = capacity(s, o);
    EXPECT_TRUE(c.thz.has("low_snr_log_approx"));
    EXPECT_GT(std::abs(c.thz.value - capacity_quad(s).thz.value), 0.1);
}

TEST(Capacity, EndToEndIsBottleneck) {
    const auto c = capacity(system_at(40.0, true));
    EXPECT_DOUBLE_EQ(c.e2e.value, std::min(c.hybrid.value, c.access.value));
}

TEST(Aber, RayleighBpsk) {
    for (double snr : {0.0, 10.0, 30.0}) {
        const auto a = rayleigh_access(snr);
        const double g = a.gamma_bar_r;
        const double expect = 0.5 * (1.0 - std::sqrt(g / (1.0 + g)));
        EXPECT_NEAR(aber_access(0.0, a, Modulation::bpsk()).value, expect, 1e-10 * expect) << snr;
    }
}

TEST(Aber, QpskEqualsFourQam) {
    const auto s = system_at(30.0, true);
    const auto p = aber(s, ModulationSet::uniform(Modulation::psk(4)));
    const auto q = aber(s, ModulationSet::uniform(Modulation::qam(4)));
    EXPECT_NEAR(p.e2e.value, q.e2e.value, 1e-12);
    EXPECT_NEAR(p.fso.value, q.fso.value, 1e-12);
}

TEST(Aber, EndToEndComposition) {
    EXPECT_DOUBLE_EQ(e2e_aber(0.0, 0.2), 0.2);
    EXPECT_DOUBLE_EQ(e2e_aber(0.2, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(e2e_aber(0.5, 0.3), 0.5);
}

TEST(Aber, HigherOrderCostsMore) {
    const auto s = system_at(30.0, true);
    const double b16 = aber(s, ModulationSet::uniform(Modulation::qam(16))).e2e.value;
    const double b64 = aber(s, ModulationSet::uniform(Modulation::qam(64))).e2e.value;
    const double p16 = aber(s, ModulationSet::uniform(Modulation::psk(16))).e2e.value;
    EXPECT_LT(b16, b64);
    EXPECT_LT(b16, p16);
}

TEST(Aber, DetectionMustMatchModulation) {
    const auto s = system_at(30.0, false, 1);
    EXPECT_THROW(aber(s, ModulationSet::uniform(Modulation::ook())), domain_error);
}

TEST(Modulation, Parsing) {
    EXPECT_EQ(Modulation::parse("qpsk").name(), "QPSK");
    EXPECT_EQ(Modulation::parse("16-QAM").name(), "16-QAM");
    EXPECT_EQ(Modulation::parse("8-psk").name(), "8-PSK");
    EXPECT_THROW(Modulation::parse("8-QAM"), domain_error);
    EXPECT_THROW(Modulation::parse("3-PSK"), domain_error);
    EXPECT_THROW(Modulation::parse("FSK"), domain_error);
    EXPECT_EQ(ModulationSet::uniform(Modulation::ook()).thz.name(), "BPSK");
}
