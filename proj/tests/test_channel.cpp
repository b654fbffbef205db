#include <cmath>

#include <gtest/gtest.h>

#include "hybridlink/channel/access.hpp"
#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/thz.hpp"
#include "hybridlink/specfun/quadrature.hpp"
#include "oracle_values.hpp"

using namespace hybridlink;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

FsoLinkSpec fso_at(double snr_db, int tau) {
    FsoLinkSpec f;
    f.transmit_snr_db = snr_db;
    f.tau = tau;
    return f.update();
}

ThzLinkSpec thz_at(double snr_db, int n_rx = 2) {
    ThzLinkSpec t;
    t.transmit_snr_db = snr_db;
    t.n_rx = n_rx;
    return t.update();
}

AccessLinkSpec access_at(double snr_db, double m = 2.0, int n_tx = 2) {
    AccessLinkSpec a;
    a.transmit_snr_db = snr_db;
    a.m = m;
    a.n_tx = n_tx;
    return a.update();
}

}  // namespace

TEST(Visibility, ExponentBranches) {
    EXPECT_DOUBLE_EQ(visibility_exponent(60.0), 1.6);
    EXPECT_DOUBLE_EQ(visibility_exponent(50.0), 1.3);
    EXPECT_DOUBLE_EQ(visibility_exponent(10.0), 1.3);
    EXPECT_NEAR(visibility_exponent(6.0), 0.585 * std::cbrt(6.0), 1e-15);
    EXPECT_NEAR(visibility_exponent(1.0), 0.585, 1e-15);
    EXPECT_THROW(visibility_exponent(0.0), domain_error);
}

TEST(Fso, AttenuationMatchesReference) {
    EXPECT_LT(rel(attenuation(10.0, 1550e-9, 200.0), oracle::fso_il), 1e-14);
    EXPECT_DOUBLE_EQ(attenuation(10.0, 1550e-9, 0.0), 1.0);
}

TEST(Fso, TurbulenceParametersFromStructureConstant) {
    auto s = rytov_turbulence_params(1e-12, 1550e-9, 200.0);
    auto m = rytov_turbulence_params(5e-13, 1550e-9, 200.0);
    EXPECT_LT(rel(s.alpha, oracle::alpha_strong), 1e-13);
    EXPECT_LT(rel(s.beta, oracle::beta_strong), 1e-13);
    EXPECT_LT(rel(m.alpha, oracle::alpha_moderate), 1e-13);
    EXPECT_LT(rel(m.beta, oracle::beta_moderate), 1e-13);
    // published strong / moderate pairs
    EXPECT_LT(rel(s.alpha, 4.343), 0.05);
    EXPECT_LT(rel(s.beta, 2.492), 0.05);
    EXPECT_LT(rel(m.alpha, 5.838), 0.05);
    EXPECT_LT(rel(m.beta, 4.249), 0.05);
}

TEST(Fso, WeakTurbulenceGivesLargeParameters) {
    auto w = rytov_turbulence_params(1e-17, 1550e-9, 200.0);
    EXPECT_GT(w.alpha, 100.0);
    EXPECT_GT(w.beta, 100.0);
}

TEST(Fso, OverridesWin) {
    FsoLinkSpec f;
    f.alpha_override = 3.0;
    f.beta_override = 2.0;
    f.update();
    EXPECT_EQ(f.alpha_f, 3.0);
    EXPECT_EQ(f.beta_f, 2.0);
}

TEST(Fso, PointingGeometry) {
    auto p = PointingGeometry::make(0.20, 0.40, 0.05);
    EXPECT_LT(rel(p.a0, oracle::fso_a0), 1e-14);
    EXPECT_LT(rel(p.xi2(), oracle::fso_xi2), 1e-13);
    EXPECT_FALSE(p.approximation_valid);
    EXPECT_TRUE(PointingGeometry::make(0.05, 0.40, 0.05).approximation_valid);
    EXPECT_THROW(PointingGeometry::make(0.0, 0.4, 0.05), domain_error);
}

TEST(Fso, CdfMatchesReference) {
    const double th = db_to_linear(5.0);
    EXPECT_LT(rel(fso_snr_cdf(th, fso_at(30.0, 1)), oracle::fso_cdf_tau1_30db_5db), 1e-9);
    EXPECT_LT(rel(fso_snr_cdf(th, fso_at(30.0, 2)), oracle::fso_cdf_tau2_30db_5db), 1e-9);
}

TEST(Fso, PdfIntegratesToOne) {
    for (int tau : {1, 2}) {
        auto f = fso_at(30.0, tau);
        auto r = specfun::integrate_log_axis([&](double g) { return fso_snr_pdf(g, f); }, 0.0, INFINITY, f.delta_tau);
        EXPECT_NEAR(r.value, 1.0, 1e-8) << tau;
    }
}

TEST(Fso, CdfAgreesWithIntegratedPdf) {
    for (int tau : {1, 2}) {
        auto f = fso_at(25.0, tau);
        for (double x : {1.0, 10.0, 100.0, 1000.0}) {
            auto r = specfun::integrate_log_axis([&](double g) { return fso_snr_pdf(g, f); }, 0.0, x, x);
            EXPECT_NEAR(fso_snr_cdf(x, f), r.value, 1e-9 * std::max(1.0, r.value) + 1e-12) << tau << " " << x;
        }
    }
}

TEST(Fso, CdfIsMonotoneAndBounded) {
    for (int tau : {1, 2}) {
        auto f = fso_at(30.0, tau);
        double prev = 0.0;
        for (double x = 1e-3; x < 1e6; x *= 1.7) {
            const double v = fso_snr_cdf(x, f);
            EXPECT_GE(v, prev - 1e-12) << tau << " " << x;
            EXPECT_LE(v, 1.0);
            prev = v;
        }
        EXPECT_NEAR(prev, 1.0, 1e-9);
    }
}

TEST(Fso, HeterodyneDominatesImdd) {
    auto h = fso_at(30.0, 1), d = fso_at(30.0, 2);
    for (double x : {0.5, 3.16, 30.0, 100.0, 300.0}) EXPECT_LE(fso_snr_cdf(x, h), fso_snr_cdf(x, d)) << x;
}

TEST(Fso, RejectsBadDetection) {
    FsoLinkSpec f;
    f.tau = 3;
    EXPECT_THROW(f.update(), domain_error);
}

TEST(Thz, AbsorptionMatchesReference) {
    ThzEnvironment env;
    const double nu = water_vapor_fraction(env);
    EXPECT_LT(rel(nu, oracle::nu), 1e-13);
    EXPECT_LT(rel(absorption_total(env.frequency_Hz, nu), oracle::kappa_per_m), 1e-12);
    EXPECT_LT(rel(thz_path_gain(env), oracle::thz_path_gain), 1e-12);
}

TEST(Thz, FreeSpaceLimit) {
    ThzEnvironment env;
    const double friis = speed_of_light * std::sqrt(db_to_linear(55.0) * db_to_linear(55.0)) /
                         (4.0 * std::numbers::pi * env.frequency_Hz * env.distance_m);
    EXPECT_LT(rel(thz_path_gain(env, 0.0), friis), 1e-14);
}

TEST(Thz, FrequencyOutsideFittedBand) {
    ThzEnvironment env;
    env.frequency_Hz = 90e9;
    EXPECT_THROW(water_vapor_fraction(env), domain_error);
    EXPECT_THROW(absorption_total(500e9, 0.01), domain_error);
}

TEST(Thz, CdfMatchesReference) {
    const double th = db_to_linear(5.0);
    EXPECT_LT(rel(thz_snr_cdf(th, thz_at(30.0)), oracle::thz_cdf_30db_5db), 1e-10);
    EXPECT_LT(rel(thz_snr_cdf(th, thz_at(50.0, 3)), oracle::thz_cdf_50db_5db_nr3), 1e-8);
}

TEST(Thz, CdfDerivativeIsPdf) {
    auto t = thz_at(50.0);
    for (double x : {0.5, 3.0, 30.0, 300.0}) {
        const double h = 1e-4 * x;
        const double d = (thz_snr_cdf(x + h, t) - thz_snr_cdf(x - h, t)) / (2.0 * h);
        EXPECT_LT(rel(d, thz_snr_pdf(x, t)), 1e-5) << x;
    }
}

TEST(Thz, IncompleteGammaFormAgrees) {
    auto t = thz_at(45.0);
    for (double x : {1.0, 10.0, 100.0}) EXPECT_LT(rel(thz_snr_cdf_incomplete_gamma(x, t), thz_snr_cdf(x, t)), 1e-9) << x;
}

TEST(Thz, MoreAntennasLowerOutage) {
    const double th = db_to_linear(5.0);
    EXPECT_LT(thz_snr_cdf(th, thz_at(50.0, 3)), thz_snr_cdf(th, thz_at(50.0, 2)));
}

TEST(Access, PathLossMatchesReference) {
    EXPECT_NEAR(access_at(30.0).p_l_db, oracle::access_pl_db, 1e-12);
}

TEST(Access, CdfMatchesReference) {
    EXPECT_LT(rel(access_snr_cdf(db_to_linear(5.0), access_at(20.0)), oracle::access_cdf_20db_5db), 1e-13);
}

TEST(Access, RayleighReduction) {
    auto a = access_at(20.0, 1.0, 1);
    for (double x : {0.1, 1.0, 10.0}) {
        EXPECT_NEAR(access_snr_cdf(x, a), -std::expm1(-x / a.gamma_bar_r), 1e-14);
        EXPECT_NEAR(access_snr_pdf(x, a), std::exp(-x / a.gamma_bar_r) / a.gamma_bar_r, 1e-14);
    }
}

TEST(Access, RejectsBadParameters) {
    AccessLinkSpec a;
    a.m = 0.3;
    EXPECT_THROW(a.update(), domain_error);
    a.m = 2.0;
    a.n_tx = 0;
    EXPECT_THROW(a.update(), domain_error);
}
