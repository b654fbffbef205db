#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "hybridlink/error.hpp"
#include "hybridlink/mc/rng.hpp"
#include "hybridlink/mc/samplers.hpp"
#include "hybridlink/metrics/system.hpp"
#include "hybridlink/switching.hpp"

namespace hybridlink::mc {

// Standard-normal AR(1): z_t = ρ z_{t−1} + √(1−ρ²) e_t, started stationary.
class GaussianAr1 {
public:
    explicit GaussianAr1(double rho) : rho_(rho), innov_(std::sqrt(1.0 - rho * rho)) {
        if (!(rho >= 0.0 && rho < 1.0)) throw domain_error("correlation rho must lie in [0, 1)");
    }

    template <class Urbg>
    double next(Urbg& g) {
        const double e = n_(g);
        z_ = started_ ? rho_ * z_ + innov_ * e : e;
        started_ = true;
        return z_;
    }

private:
    double rho_;
    double innov_;
    double z_ = 0.0;
    bool started_ = false;
    std::normal_distribution<double> n_{0.0, 1.0};
};

namespace detail {

// Φ(z) and 1 − Φ(z) without cancellation in either tail.
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double norm_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

inline double gamma_from_normal(double shape, double z) {
    return z < 0.0 ? boost::math::gamma_p_inv(shape, norm_cdf(z)) : boost::math::gamma_q_inv(shape, norm_sf(z));
}

inline double exponential_from_normal(double z) {
    return z < 0.0 ? -std::log1p(-norm_cdf(z)) : -std::log(norm_sf(z));
}

}  // namespace detail

// Per-slot FSO/THz SNR pair. With ρ > 0 every underlying random factor is
// driven by its own Gaussian AR(1) and mapped to its marginal by inverse CDF.
class ChannelProcess {
public:
    ChannelProcess(const SystemSpec& s, double rho) : s_(&s), rho_(rho) {
        if (!(rho >= 0.0 && rho < 1.0)) throw domain_error("correlation rho must lie in [0, 1)");
        const std::size_t n = 3 + 1 + static_cast<std::size_t>(s.thz.n_rx);
        drivers_.assign(n, GaussianAr1(rho));
    }

    template <class Urbg>
    std::pair<double, double> next(Urbg& g) {
        if (rho_ == 0.0) return {sample_fso_snr(s_->fso, g), sample_thz_snr(s_->thz, g)};
        const auto& f = s_->fso;
        const auto& t = s_->thz;
        const double ga = detail::gamma_from_normal(f.alpha_f, drivers_[0].next(g)) / f.alpha_f;
        const double gb = detail::gamma_from_normal(f.beta_f, drivers_[1].next(g)) / f.beta_f;
        const double hf = pointing_from_exponential(f.pointing, detail::exponential_from_normal(drivers_[2].next(g)));
        const double i = ga * gb * hf;
        const double gf = f.delta_tau * (f.tau == 2 ? i * i : i);
        const double hp = pointing_from_exponential(t.pointing, detail::exponential_from_normal(drivers_[3].next(g)));
        double sum = 0.0;
        for (int j = 0; j < t.n_rx; ++j) {
            const double gj = detail::gamma_from_normal(t.mu, drivers_[4 + j].next(g));
            const double h = t.omega * std::pow(gj / t.mu, 1.0 / t.alpha);
            sum += h * h;
        }
        return {gf, t.gamma_bar_t * hp * hp * sum};
    }

    // Underlying driver values of the last slot (first FSO factor first).
    const std::vector<GaussianAr1>& drivers() const { return drivers_; }

private:
    static double pointing_from_exponential(const PointingGeometry& p, double e) {
        const double r2 = 2.0 * p.jitter_std_m * p.jitter_std_m * e;
        return p.a0 * std::exp(-2.0 * r2 / (p.w_leq_m * p.w_leq_m));
    }

    const SystemSpec* s_;
    double rho_;
    std::vector<GaussianAr1> drivers_;
};

struct TraceSlot {
    double gamma_f = 0.0;
    double gamma_t = 0.0;
    SwitchState state;
};

inline std::vector<TraceSlot> run_trace(const SystemSpec& s, std::uint64_t n_slots, double rho, const RngStream& rng) {
    ChannelProcess proc(s, rho);
    auto eng = rng.engine();
    std::vector<TraceSlot> out;
    out.reserve(n_slots);
    SwitchState st;
    for (std::uint64_t i = 0; i < n_slots; ++i) {
        auto [gf, gt] = proc.next(eng);
        st = switch_step(st, gf, gt, s.policy);
        out.push_back({gf, gt, st});
    }
    return out;
}

// Re-runs the switch logic of another policy over the same channel draws.
inline std::vector<SwitchState> replay(std::span<const TraceSlot> trace, const SwitchPolicy& policy) {
    std::vector<SwitchState> out;
    out.reserve(trace.size());
    SwitchState st;
    for (const auto& t : trace) {
        st = switch_step(st, t.gamma_f, t.gamma_t, policy);
        out.push_back(st);
    }
    return out;
}

inline std::vector<SwitchState> states_of(std::span<const TraceSlot> trace) {
    std::vector<SwitchState> out;
    out.reserve(trace.size());
    for (const auto& t : trace) out.push_back(t.state);
    return out;
}

inline std::size_t total_switches(const SwitchCounts& c) { return c.link_changes + c.outage_changes; }

}  // namespace hybridlink::mc
