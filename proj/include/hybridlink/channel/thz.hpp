#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/pointing.hpp"
#include "hybridlink/error.hpp"
#include "hybridlink/specfun/gamma.hpp"
#include "hybridlink/specfun/meijer_g.hpp"

namespace hybridlink {

inline constexpr double speed_of_light = 2.99792458e8;

struct ThzEnvironment {
    double temperature_K = 298.0;
    double pressure_Pa = 101325.0;
    double relative_humidity_pct = 50.0;
    double frequency_Hz = 119e9;
    double distance_m = 200.0;
    double tx_gain_dBi = 55.0;
    double rx_gain_dBi = 55.0;

    void validate() const {
        if (!(temperature_K > 0.0)) throw domain_error("THz temperature must be positive");
        if (!(pressure_Pa > 0.0)) throw domain_error("THz pressure must be positive");
        if (!(relative_humidity_pct >= 0.0 && relative_humidity_pct <= 100.0))
            throw domain_error("THz relative humidity must lie in [0,100]");
        if (!(frequency_Hz >= 0.1e12 && frequency_Hz <= 0.45e12))
            throw domain_error("THz frequency " + std::to_string(frequency_Hz) +
                               " Hz is outside the fitted band [100, 450] GHz");
    }
};

inline double water_vapor_fraction(const ThzEnvironment& env) {
    env.validate();
    const double T = env.temperature_K, p = env.pressure_Pa;
    const double sat = 6.1121 * (1.0007 + 3.46e-6 * p) * std::exp(17.502 * T / (240.97 + T));
    return env.relative_humidity_pct / (100.0 * p) * sat;
}

// Molecular absorption coefficient (1/m) from the six-line polynomial fit.
inline double absorption_total(double frequency_Hz, double nu) {
    if (!(frequency_Hz >= 0.1e12 && frequency_Hz <= 0.45e12))
        throw domain_error("absorption_total: frequency outside the fitted band [100, 450] GHz");
    const double w = frequency_Hz / (100.0 * speed_of_light);  // cm^-1
    const double h1 = 5.159e-5 * (1.0 - nu) * (-6.65e-5 * (1.0 - nu) + 0.0159);
    const double h2 = std::pow(-2.09e-4 * (1.0 - nu) + 0.05, 2);
    const double h3 = 0.1925 * nu * (0.1350 * nu + 0.0318);
    const double h4 = std::pow(0.4241 * nu + 0.0998, 2);
    const double h5 = 0.2251 * nu * (0.1314 * nu + 0.0297);
    const double h6 = std::pow(0.4127 * nu + 0.0932, 2);
    const double h7 = 2.053 * nu * (0.1717 * nu + 0.0306);
    const double h8 = std::pow(0.5394 * nu + 0.0961, 2);
    const double h9 = 0.177 * nu * (0.0832 * nu + 0.0213);
    const double h10 = std::pow(0.2615 * nu + 0.0668, 2);
    const double h11 = 2.146 * nu * (0.1206 * nu + 0.0277);
    const double h12 = std::pow(0.3789 * nu + 0.0871, 2);
    auto line = [w](double num, double den, double centre) { return num / (den + (w - centre) * (w - centre)); };
    const double f = line(h1, h2, 3.96) + line(h3, h4, 6.11) + line(h5, h6, 10.84) + line(h7, h8, 12.68) +
                     line(h9, h10, 14.65) + line(h11, h12, 14.94);
    const double d0 = 0.915e-112, d1 = 9.42;
    const double g = nu / 0.0157 * (2e-4 + d0 * std::pow(frequency_Hz, d1));
    return f + g;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Path amplitude gain; kappa overrides the absorption coefficient when given.
inline double thz_path_gain(const ThzEnvironment& env, std::optional<double> kappa = std::nullopt) {
    if (!(env.distance_m > 0.0)) throw domain_error("thz_path_gain: distance must be positive");
    const double k = kappa ? *kappa : absorption_total(env.frequency_Hz, water_vapor_fraction(env));
    const double spread = speed_of_light * std::sqrt(db_to_linear(env.tx_gain_dBi) * db_to_linear(env.rx_gain_dBi)) /
                          (4.0 * std::numbers::pi * env.frequency_Hz * env.distance_m);
    return spread * std::exp(-0.5 * env.distance_m * k);
}

inline double thz_default_receiver_radius(const ThzEnvironment& env) {
    const double lambda = speed_of_light / env.frequency_Hz;
    return lambda * std::sqrt(db_to_linear(env.tx_gain_dBi)) / (2.0 * std::numbers::pi);
}

struct ThzLinkSpec {
    ThzEnvironment env;
    double alpha = 2.0;
    double mu = 3.0;
    int n_rx = 2;
    double omega = 1.0;
    double noise_variance = 1.0;
    double transmit_snr_db = 30.0;
    PointingGeometry pointing = PointingGeometry::make(thz_default_receiver_radius(ThzEnvironment{}), 0.50, 0.06);

    double nu = 0.0;
    double kappa = 0.0;
    double h_l = 0.0;
    double gamma_bar_t = 0.0;
    double gamma_bar = 0.0;
    double ln_c1 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double mu_total() const { return n_rx * mu; }
    ThzLinkSpec& update();
};

inline ThzLinkSpec& ThzLinkSpec::update() {
    env.validate();
    if (!(alpha > 0.0) || !(mu > 0.0) || n_rx < 1 || !(omega > 0.0))
        throw domain_error("THz fading parameters must be positive and n_rx >= 1");
    nu = water_vapor_fraction(env);
    kappa = absorption_total(env.frequency_Hz, nu);
    h_l = thz_path_gain(env, kappa);
    const double p = noise_variance * std::pow(10.0, transmit_snr_db / 10.0);
    gamma_bar_t = p * h_l * h_l / noise_variance;
    gamma_bar = n_rx * gamma_bar_t;
    const double xi2 = pointing.xi2();
    const double mt = mu_total();
    ln_c1 = std::log(xi2) - xi2 * std::log(pointing.a0) + xi2 / alpha * std::log(mt) - xi2 * std::log(omega) -
            std::lgamma(mt);
    c1 = std::exp(ln_c1);
    c2 = (alpha * mt - xi2) / alpha;
    c3 = mt / std::pow(pointing.a0 * omega, alpha);
    return *this;
}

inline double thz_snr_pdf(double gamma, const ThzLinkSpec& s) {
    if (!(gamma > 0.0)) throw domain_error("thz_snr_pdf: gamma must be positive");
    const double xi2 = s.pointing.xi2();
    const double r = gamma / s.gamma_bar;
    const double x = s.c3 * std::pow(r, s.alpha / 2.0);
    const double g = specfun::upper_incomplete_gamma_extended(s.c2, x);
    return std::exp(s.ln_c1 + 0.5 * xi2 * std::log(r) - std::log(2.0 * gamma)) * g;
}

inline specfun::MeijerGSpec thz_cdf_meijer(double gamma, const ThzLinkSpec& s) {
    const double xi2 = s.pointing.xi2();
    const double x = s.c3 * std::pow(gamma / s.gamma_bar, s.alpha / 2.0);
    return {{1.0 - xi2 / s.alpha}, {1.0}, {0.0, s.c2}, {-xi2 / s.alpha}, x};
}

// Same CDF through incomplete gammas: P(μ',X) + X^{ξ²/α} Γ(C2, X)/Γ(μ').
inline double thz_snr_cdf_incomplete_gamma(double gamma, const ThzLinkSpec& s) {
    if (gamma == 0.0) return 0.0;
    const double xi2 = s.pointing.xi2();
    const double mt = s.mu_total();
    const double x = s.c3 * std::pow(gamma / s.gamma_bar, s.alpha / 2.0);
    const double lower = boost::math::gamma_p(mt, x);
    double upper_part = 0.0;
    if (s.c2 > 0.0) {
        // Γ(C2,X)/Γ(μ') with both large: go through the regularized Q
        upper_part = std::exp(xi2 / s.alpha * std::log(x) + std::lgamma(s.c2) - std::lgamma(mt)) *
                     boost::math::gamma_q(s.c2, x);
    } else {
        upper_part = std::exp(xi2 / s.alpha * std::log(x) - std::lgamma(mt)) *
                     specfun::upper_incomplete_gamma_extended(s.c2, x);
    }
    return lower + upper_part;
}

inline constexpr double thz_meijer_xi2_limit = 400.0;

inline double thz_snr_cdf(double gamma, const ThzLinkSpec& s) {
    if (!(gamma >= 0.0)) throw domain_error("thz_snr_cdf: gamma must be non-negative");
    if (gamma == 0.0) return 0.0;
    const double xi2 = s.pointing.xi2();
    double v;
    if (xi2 > thz_meijer_xi2_limit) {
        v = thz_snr_cdf_incomplete_gamma(gamma, s);
    } else {
        const double g = specfun::meijer_g(thz_cdf_meijer(gamma, s));
        v = std::exp(s.ln_c1 + 0.5 * xi2 * std::log(gamma / s.gamma_bar)) / s.alpha * g;
    }
    return detail::clamp_probability(v, "thz_snr_cdf");
}

}  // namespace hybridlink
