#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/thz.hpp"
#include "hybridlink/error.hpp"

namespace hybridlink {

struct AccessLinkSpec {
    double frequency_Hz = 28e9;
    double length_m = 100.0;
    double tx_gain_dBi = 44.0;
    double rx_gain_dBi = 44.0;
    double oxygen_dB_per_km = 15.1;
    double rain_dB_per_km = 0.0;
    double m = 2.0;
    int n_tx = 2;
    double omega_r = 1.0;
    double noise_variance = 1.0;
    double transmit_snr_db = 30.0;

    double p_l_db = 0.0;
    double p_l = 0.0;
    double gamma_bar_r = 0.0;

    double shape() const { return m * n_tx; }
    AccessLinkSpec& update();
};

inline double mmwave_path_loss_db(const AccessLinkSpec& s) {
    if (!(s.length_m > 0.0)) throw domain_error("mmwave_path_loss_db: length must be positive");
    if (!(s.frequency_Hz > 0.0)) throw domain_error("mmwave_path_loss_db: frequency must be positive");
    const double lambda = speed_of_light / s.frequency_Hz;
    return s.tx_gain_dBi + s.rx_gain_dBi - 20.0 * std::log10(4.0 * std::numbers::pi * s.length_m / lambda) -
           (s.oxygen_dB_per_km + s.rain_dB_per_km) * s.length_m * 1e-3;
}

inline AccessLinkSpec& AccessLinkSpec::update() {
    if (!(m >= 0.5)) throw domain_error("access Nakagami m must be >= 0.5");
    if (n_tx < 1) throw domain_error("access n_tx must be >= 1");
    if (!(omega_r > 0.0) || !(noise_variance > 0.0)) throw domain_error("access omega_r and noise variance must be positive");
    p_l_db = mmwave_path_loss_db(*this);
    p_l = std::pow(10.0, p_l_db / 10.0);
    const double p = noise_variance * std::pow(10.0, transmit_snr_db / 10.0);
    gamma_bar_r = omega_r * p * p_l / noise_variance;
    return *this;
}

inline double access_snr_pdf(double gamma, const AccessLinkSpec& s) {
    if (!(gamma >= 0.0)) throw domain_error("access_snr_pdf: gamma must be non-negative");
    const double k = s.shape();
    const double rate = s.m / s.gamma_bar_r;
    if (gamma == 0.0) return k == 1.0 ? rate : (k < 1.0 ? INFINITY : 0.0);
    return std::exp(k * std::log(rate) + (k - 1.0) * std::log(gamma) - rate * gamma - std::lgamma(k));
}

inline double access_snr_cdf(double gamma, const AccessLinkSpec& s) {
    if (!(gamma >= 0.0)) throw domain_error("access_snr_cdf: gamma must be non-negative");
    if (gamma == 0.0) return 0.0;
    return boost::math::gamma_p(s.shape(), s.m / s.gamma_bar_r * gamma);
}

}  // namespace hybridlink
