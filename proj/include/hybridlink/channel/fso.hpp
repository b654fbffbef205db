#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hybridlink/channel/pointing.hpp"
#include "hybridlink/error.hpp"
#include "hybridlink/specfun/bessel.hpp"
#include "hybridlink/specfun/gamma.hpp"
#include "hybridlink/specfun/meijer_g.hpp"

namespace hybridlink {

// How δ_τ relates to the transmit power P for IM/DD (τ = 2).
//  average_power: δ_τ = P η I_l / σ² for both detection types, so τ only
//                 changes the fading exponent (γ = δ I^τ).
//  electrical:    δ_τ = (P η I_l)^τ / σ², the received electrical SNR.
enum class SnrScaling { average_power, electrical };

struct FsoLinkSpec {
    double wavelength_m = 1550e-9;
    double length_m = 200.0;
    double visibility_km = 10.0;
    double cn2 = 1e-12;
    int tau = 1;
    double eta = 1.0;
    double noise_variance = 1.0;
    double transmit_snr_db = 30.0;
    PointingGeometry pointing = PointingGeometry::make(0.20, 0.40, 0.05);
    SnrScaling snr_scaling = SnrScaling::average_power;
    std::optional<double> alpha_override;
    std::optional<double> beta_override;

    double alpha_f = 0.0;
    double beta_f = 0.0;
    double i_l = 0.0;
    double delta_tau = 0.0;

    FsoLinkSpec& update();
};

inline double visibility_exponent(double visibility_km) {
    if (!(visibility_km > 0.0))
        throw domain_error("visibility must be positive, got " + std::to_string(visibility_km));
    if (visibility_km > 50.0) return 1.6;
    if (visibility_km > 6.0) return 1.3;
    return 0.585 * std::cbrt(visibility_km);
}

// Beer–Lambert loss over length_m for visibility in km.
inline double attenuation(double visibility_km, double wavelength_m, double length_m) {
    const double q = visibility_exponent(visibility_km);
    if (!(length_m >= 0.0))
        throw domain_error("attenuation: length must be non-negative");
    const double sigma_per_km = 3.912 / visibility_km * std::pow(wavelength_m * 1e9 / 550.0, q);
    return std::exp(-sigma_per_km * length_m * 1e-3);
}

inline double rytov_variance(double cn2, double wavelength_m, double length_m) {
    if (!(cn2 > 0.0) || !(wavelength_m > 0.0) || !(length_m > 0.0))
        throw domain_error("rytov_variance: inputs must be positive");
    const double k0 = 2.0 * std::numbers::pi / wavelength_m;
    return 1.23 * cn2 * std::pow(k0, 7.0 / 6.0) * std::pow(length_m, 11.0 / 6.0);
}

struct TurbulenceParams {
    double alpha;
    double beta;
};

inline TurbulenceParams rytov_turbulence_params(double cn2, double wavelength_m, double length_m) {
    const double s2 = rytov_variance(cn2, wavelength_m, length_m);
    const double s125 = std::pow(s2, 6.0 / 5.0);  // σ^{12/5}
    const double a = 1.0 / std::expm1(0.49 * s2 / std::pow(1.0 + 1.11 * s125, 7.0 / 6.0));
    const double b = 1.0 / std::expm1(0.51 * s2 / std::pow(1.0 + 0.69 * s125, 5.0 / 6.0));
    return {a, b};
}

inline FsoLinkSpec& FsoLinkSpec::update() {
    if (tau != 1 && tau != 2) throw domain_error("FSO detection tau must be 1 or 2");
    if (!(eta > 0.0) || !(noise_variance > 0.0)) throw domain_error("FSO eta and noise variance must be positive");
    auto t = rytov_turbulence_params(cn2, wavelength_m, length_m);
    alpha_f = alpha_override.value_or(t.alpha);
    beta_f = beta_override.value_or(t.beta);
    if (!(alpha_f > 0.0) || !(beta_f > 0.0)) throw domain_error("FSO turbulence parameters must be positive");
    i_l = attenuation(visibility_km, wavelength_m, length_m);
    const double p = noise_variance * std::pow(10.0, transmit_snr_db / 10.0);
    const double rx = p * eta * i_l;
    delta_tau = (snr_scaling == SnrScaling::electrical ? std::pow(rx, tau) : rx) / noise_variance;
    return *this;
}

namespace detail {

inline double clamp_probability(double v, const char* op) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9))
        throw numerical_integrity_error(op, "probability out of range: " + std::to_string(v));
    return std::min(1.0, std::max(0.0, v));
}

}  // namespace detail

inline specfun::MeijerGSpec fso_pdf_meijer(double gamma, const FsoLinkSpec& s) {
    const double xi2 = s.pointing.xi2();
    const double z = s.alpha_f * s.beta_f / s.pointing.a0 * std::pow(gamma / s.delta_tau, 1.0 / s.tau);
    return {{}, {xi2 + 1.0}, {xi2, s.alpha_f, s.beta_f}, {}, z};
}

inline double fso_snr_pdf(double gamma, const FsoLinkSpec& s) {
    if (!(gamma > 0.0)) throw domain_error("fso_snr_pdf: gamma must be positive");
    const double xi2 = s.pointing.xi2();
    const double lead = xi2 / (s.tau * gamma) *
                        std::exp(-std::lgamma(s.alpha_f) - std::lgamma(s.beta_f));
    return lead * specfun::meijer_g(fso_pdf_meijer(gamma, s));
}

// Parameter blocks of the FSO CDF G^{3τ,1}_{τ+1,3τ+1}.
struct FsoCdfBlocks {
    double d1;
    double d2;
    std::vector<double> rho1;
    std::vector<double> rho2;
};

inline FsoCdfBlocks fso_cdf_blocks(const FsoLinkSpec& s) {
    const int tau = s.tau;
    const double t = tau;
    const double xi2 = s.pointing.xi2();
    FsoCdfBlocks b;
    b.d1 = std::pow(t, s.alpha_f + s.beta_f - 2.0) * xi2 /
           std::pow(2.0 * std::numbers::pi, t - 1.0) *
           std::exp(-std::lgamma(s.alpha_f) - std::lgamma(s.beta_f));
    b.d2 = std::pow(s.alpha_f * s.beta_f, t) / std::pow(t, 2.0 * t);
    for (int k = 1; k <= tau; ++k) b.rho1.push_back((xi2 + k) / t);
    for (int k = 0; k < tau; ++k) b.rho2.push_back((xi2 + k) / t);
    for (int k = 0; k < tau; ++k) b.rho2.push_back((s.alpha_f + k) / t);
    for (int k = 0; k < tau; ++k) b.rho2.push_back((s.beta_f + k) / t);
    return b;
}

inline double fso_cdf_argument(double gamma, const FsoLinkSpec& s, const FsoCdfBlocks& b) {
    return b.d2 * gamma / (std::pow(s.pointing.a0, s.tau) * s.delta_tau);
}

inline specfun::MeijerGSpec fso_cdf_meijer(double gamma, const FsoLinkSpec& s) {
    auto b = fso_cdf_blocks(s);
    return {{1.0}, b.rho1, b.rho2, {0.0}, fso_cdf_argument(gamma, s, b)};
}

inline double fso_snr_cdf(double gamma, const FsoLinkSpec& s) {
    if (!(gamma >= 0.0)) throw domain_error("fso_snr_cdf: gamma must be non-negative");
    if (gamma == 0.0) return 0.0;
    auto b = fso_cdf_blocks(s);
    const double v = b.d1 * specfun::meijer_g(fso_cdf_meijer(gamma, s));
    return detail::clamp_probability(v, "fso_snr_cdf");
}

}  // namespace hybridlink
