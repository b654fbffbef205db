#pragma once

#include <cmath>
#include <random>

#include "hybridlink/channel/access.hpp"
#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/pointing.hpp"
#include "hybridlink/channel/thz.hpp"

namespace hybridlink::mc {

// Unit-mean Gamma variate.
template <class Urbg>
inline double unit_gamma(double shape, Urbg& g) {
    return std::gamma_distribution<double>(shape, 1.0 / shape)(g);
}

// h_p = A0 exp(−2r²/w_Leq²) with a Rayleigh(σ_j) radial offset.
template <class Urbg>
inline double pointing_gain(const PointingGeometry& p, Urbg& g) {
    std::exponential_distribution<double> e(1.0);
    const double r2 = 2.0 * p.jitter_std_m * p.jitter_std_m * e(g);
    return p.a0 * std::exp(-2.0 * r2 / (p.w_leq_m * p.w_leq_m));
}

template <class Urbg>
inline double sample_fso_snr(const FsoLinkSpec& s, Urbg& g) {
    const double ia = unit_gamma(s.alpha_f, g) * unit_gamma(s.beta_f, g);
    const double i = ia * pointing_gain(s.pointing, g);
    return s.delta_tau * (s.tau == 2 ? i * i : i);
}

// Σ_j |h_f_j|² with |h_f_j| = Ω (G_j/μ)^{1/α}, G_j ~ Gamma(μ, 1).
template <class Urbg>
inline double thz_branch_power(const ThzLinkSpec& s, Urbg& g) {
    std::gamma_distribution<double> gd(s.mu, 1.0);
    double sum = 0.0;
    for (int j = 0; j < s.n_rx; ++j) {
        const double h = s.omega * std::pow(gd(g) / s.mu, 1.0 / s.alpha);
        sum += h * h;
    }
    return sum;
}

template <class Urbg>
inline double sample_thz_snr(const ThzLinkSpec& s, Urbg& g) {
    const double hp = pointing_gain(s.pointing, g);
    return s.gamma_bar_t * hp * hp * thz_branch_power(s, g);
}

template <class Urbg>
inline double sample_access_snr(const AccessLinkSpec& s, Urbg& g) {
    std::gamma_distribution<double> gd(s.m, s.omega_r / s.m);
    double sum = 0.0;
    for (int j = 0; j < s.n_tx; ++j) sum += gd(g);
    return s.gamma_bar_r / s.omega_r * sum;
}

}  // namespace hybridlink::mc
