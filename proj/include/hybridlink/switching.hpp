#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "hybridlink/error.hpp"

namespace hybridlink {

struct HardPolicy {
    double gamma_th = 0.0;
};

// Dual FSO thresholds with hysteresis plus a single THz threshold.
struct SoftPolicy {
    double gamma_f_th_u = 0.0;
    double gamma_f_th_l = 0.0;
    double gamma_t_th = 0.0;
};

using SwitchPolicy = std::variant<HardPolicy, SoftPolicy>;

inline SoftPolicy as_soft(const HardPolicy& h) { return {h.gamma_th, h.gamma_th, h.gamma_th}; }

inline SoftPolicy as_soft(const SwitchPolicy& p) {
    if (auto h = std::get_if<HardPolicy>(&p)) return as_soft(*h);
    return std::get<SoftPolicy>(p);
}

inline void validate(const SwitchPolicy& p) {
    if (auto h = std::get_if<HardPolicy>(&p)) {
        if (!(h->gamma_th > 0.0)) throw domain_error("hard threshold must be positive");
        return;
    }
    const auto& s = std::get<SoftPolicy>(p);
    if (!(s.gamma_f_th_l > 0.0) || !(s.gamma_t_th > 0.0))
        throw domain_error("soft thresholds must be positive");
    if (!(s.gamma_f_th_u >= s.gamma_f_th_l))
        throw domain_error("soft policy requires gamma_f_th_u >= gamma_f_th_l");
}

namespace detail {

inline void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw domain_error(std::string(what) + " must lie in [0,1]");
}

}  // namespace detail

inline double hard_combined_outage(double cdf_f, double cdf_t) {
    detail::check_probability(cdf_f, "cdf_f");
    detail::check_probability(cdf_t, "cdf_t");
    return cdf_f * cdf_t;
}

// Long-run probability that the FSO link is off under hysteresis:
// p_low + p_med * p_low / (p_low + p_hig).
inline double soft_fso_off_probability(double p_low, double p_med, double p_hig) {
    detail::check_probability(p_low, "p_low");
    detail::check_probability(p_med, "p_med");
    detail::check_probability(p_hig, "p_hig");
    if (std::abs(p_low + p_med + p_hig - 1.0) > 1e-12)
        throw domain_error("soft_fso_off_probability: probabilities must sum to 1");
    const double d = p_low + p_hig;
    if (!(d > 0.0)) throw domain_error("soft_fso_off_probability: degenerate input, mid-band probability is 1");
    return p_low + p_med * (p_low / d);
}

// Same quantity written as p_low / (p_low + p_hig).
inline double soft_fso_off_probability_reduced(double p_low, double p_hig) {
    const double d = p_low + p_hig;
    if (!(d > 0.0)) throw domain_error("soft_fso_off_probability: degenerate input, mid-band probability is 1");
    return p_low / d;
}

// Off-probability straight from the FSO CDF at both thresholds.
inline double soft_fso_off_from_cdf(double cdf_f_at_u, double cdf_f_at_l) {
    detail::check_probability(cdf_f_at_u, "cdf_f_at_U");
    detail::check_probability(cdf_f_at_l, "cdf_f_at_L");
    if (cdf_f_at_l > cdf_f_at_u) throw domain_error("soft outage: cdf_f_at_L must not exceed cdf_f_at_U");
    const double p_low = cdf_f_at_l;
    const double p_hig = 1.0 - cdf_f_at_u;
    const double p_med = cdf_f_at_u - cdf_f_at_l;
    if (p_med == 0.0) return p_low;
    return soft_fso_off_probability_reduced(p_low, p_hig);
}

inline double soft_combined_outage(double cdf_f_at_u, double cdf_f_at_l, double cdf_t_at_th) {
    detail::check_probability(cdf_t_at_th, "cdf_t");
    return soft_fso_off_from_cdf(cdf_f_at_u, cdf_f_at_l) * cdf_t_at_th;
}

enum class ActiveLink { fso, thz, outage };

inline const char* to_string(ActiveLink a) {
    switch (a) {
        case ActiveLink::fso: return "FSO";
        case ActiveLink::thz: return "THZ";
        case ActiveLink::outage: return "OUTAGE";
    }
    return "?";
}

struct SwitchState {
    ActiveLink active = ActiveLink::fso;
    bool fso_was_below_lower = false;

    bool operator==(const SwitchState&) const = default;
};

// One decision per fading slot.
inline SwitchState soft_switch_step(SwitchState s, double gamma_f, double gamma_t, const SoftPolicy& p) {
    SwitchState next = s;
    const bool thz_ok = gamma_t >= p.gamma_t_th;
    if (gamma_f >= p.gamma_f_th_u) {
        next.active = ActiveLink::fso;
        next.fso_was_below_lower = false;
    } else if (gamma_f < p.gamma_f_th_l) {
        next.active = thz_ok ? ActiveLink::thz : ActiveLink::outage;
        next.fso_was_below_lower = true;
    } else if (s.fso_was_below_lower) {
        next.active = thz_ok ? ActiveLink::thz : ActiveLink::outage;
    } else {
        next.active = ActiveLink::fso;
    }
    return next;
}

inline SwitchState switch_step(SwitchState s, double gamma_f, double gamma_t, const SwitchPolicy& p) {
    return soft_switch_step(s, gamma_f, gamma_t, as_soft(p));
}

struct SwitchCounts {
    std::size_t link_changes = 0;     // FSO <-> THz
    std::size_t outage_changes = 0;   // into or out of OUTAGE
};

inline SwitchCounts count_switch_events(std::span<const SwitchState> trace) {
    if (trace.empty()) throw domain_error("count_switch_events: empty trace");
    SwitchCounts c;
    for (std::size_t i = 1; i < trace.size(); ++i) {
        const ActiveLink a = trace[i - 1].active, b = trace[i].active;
        if (a == b) continue;
        if (a == ActiveLink::outage || b == ActiveLink::outage)
            ++c.outage_changes;
        else
            ++c.link_changes;
    }
    return c;
}

}  // namespace hybridlink
