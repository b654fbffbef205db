#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hybridlink/channel/access.hpp"
#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/thz.hpp"
#include "hybridlink/metrics/link_metrics.hpp"
#include "hybridlink/switching.hpp"

namespace hybridlink {

// FSO/THz backhaul with an mmWave access hop behind a DF relay.
struct SystemSpec {
    FsoLinkSpec fso;
    ThzLinkSpec thz;
    AccessLinkSpec access;
    SwitchPolicy policy = HardPolicy{db_to_linear(5.0)};
    double gamma_r_th = db_to_linear(5.0);
    double transmit_snr_db = 30.0;

    // Same transmit SNR on every link.
    SystemSpec& set_snr(double db) {
        transmit_snr_db = db;
        fso.transmit_snr_db = thz.transmit_snr_db = access.transmit_snr_db = db;
        return update();
    }

    SystemSpec& update() {
        validate(policy);
        if (!(gamma_r_th > 0.0)) throw domain_error("gamma_r_th must be positive");
        fso.update();
        thz.update();
        access.update();
        return *this;
    }

    bool is_soft() const { return std::holds_alternative<SoftPolicy>(policy); }
};

struct OutageBreakdown {
    double fso = 0.0;  // FSO off: F_F(γ_th) or the hysteresis off-probability
    double thz = 0.0;
    double hybrid = 0.0;
    double access = 0.0;
    double e2e = 0.0;
};

struct DiversityOrders {
    double fso = 0.0;
    double thz = 0.0;
    double hybrid = 0.0;
    double access = 0.0;
    double e2e = 0.0;
};

struct CapacityBreakdown {
    MetricValue fso, thz, hybrid, access, e2e;
};

struct AberBreakdown {
    MetricValue fso, thz, access;
    MetricValue hybrid;                // conditioned on the backhaul not being in outage
    MetricValue hybrid_unconditional;
    MetricValue e2e;
    MetricValue e2e_unconditional;
};

// Modulation per hop. OOK only exists on the IM/DD FSO link; the RF links
// then fall back to BPSK.
struct ModulationSet {
    Modulation fso;
    Modulation thz;
    Modulation access;

    static ModulationSet uniform(const Modulation& m) {
        if (m.scheme == Scheme::ook) return {m, Modulation::bpsk(), Modulation::bpsk()};
        return {m, m, m};
    }
};

// 1 − (1 − P_hyb)(1 − P_acc), written to survive tiny probabilities
inline double e2e_outage(double hybrid, double access) { return hybrid + access - hybrid * access; }

inline double e2e_aber(double b1, double b2) { return b1 + b2 - 2.0 * b1 * b2; }

// ---------------------------------------------------------------- asymptotes

// Leading residues of the FSO CDF at small argument.
inline double fso_cdf_asymptotic(double gamma, const FsoLinkSpec& s) {
    if (gamma <= 0.0) return 0.0;
    auto b = fso_cdf_blocks(s);
    const double z = fso_cdf_argument(gamma, s, b);
    double sum = 0.0;
    for (std::size_t p = 0; p < b.rho2.size(); ++p) {
        const double bp = b.rho2[p];
        double lnmag = bp * std::log(z) + std::lgamma(bp) - std::lgamma(1.0 + bp);
        int sign = 1;
        bool vanish = false;
        for (std::size_t q = 0; q < b.rho2.size(); ++q) {
            if (q == p) continue;
            auto g = specfun::ln_gamma_signed(b.rho2[q] - bp);
            lnmag += g.log_abs;
            sign *= g.sign;
        }
        for (double a : b.rho1) {
            const double d = a - bp;
            if (specfun::is_nonpositive_integer(d)) {
                vanish = true;
                break;
            }
            auto g = specfun::ln_gamma_signed(d);
            lnmag -= g.log_abs;
            sign *= g.sign;
        }
        if (!vanish && std::isfinite(lnmag)) sum += sign * std::exp(lnmag);
    }
    return b.d1 * sum;
}

inline double thz_cdf_asymptotic(double gamma, const ThzLinkSpec& s) {
    if (gamma <= 0.0) return 0.0;
    const double xi2 = s.pointing.xi2();
    const double am = s.alpha * s.mu_total();
    const double r = gamma / s.gamma_bar;
    return s.c1 * std::tgamma(s.c2) / xi2 * std::pow(r, xi2 / 2.0) -
           s.c1 * std::pow(s.c3, s.c2) / (s.c2 * am) * std::pow(r, am / 2.0);
}

inline double access_cdf_asymptotic(double gamma, const AccessLinkSpec& s) {
    if (gamma <= 0.0) return 0.0;
    const double k = s.shape();
    return std::exp(k * std::log(s.m * gamma / s.gamma_bar_r) - std::lgamma(k + 1.0));
}

// ---------------------------------------------------------------- compositions

namespace detail {

// Link-level metrics through the closed forms.
struct ClosedFormLinks {
    const SystemSpec& s;
    AnalyticOptions opt;

    double cdf_f(double x) const { return fso_snr_cdf(x, s.fso); }
    double cdf_t(double x) const { return thz_snr_cdf(x, s.thz); }
    double cdf_r(double x) const { return access_snr_cdf(x, s.access); }
    MetricValue cap_f(double x) const { return capacity_fso(x, s.fso, opt); }
    MetricValue cap_t(double x) const { return capacity_thz(x, s.thz, opt); }
    MetricValue cap_r(double x) const { return capacity_access(x, s.access); }
    MetricValue ber_f(double x, const Modulation& m) const { return aber_fso(x, s.fso, m, opt); }
    MetricValue ber_t(double x, const Modulation& m) const { return aber_thz(x, s.thz, m, opt); }
    MetricValue ber_r(double x, const Modulation& m) const { return aber_access(x, s.access, m); }
};

// Same quantities by direct quadrature of the SNR densities.
struct QuadratureLinks {
    const SystemSpec& s;

    double cdf_f(double x) const {
        return x <= 0.0 ? 0.0 : std::min(1.0, fso_expectation_quad([](double) { return 1.0; }, 0.0, x, s.fso));
    }
    double cdf_t(double x) const {
        return x <= 0.0 ? 0.0 : std::min(1.0, thz_expectation_quad([](double) { return 1.0; }, 0.0, x, s.thz));
    }
    double cdf_r(double x) const {
        return x <= 0.0 ? 0.0 : std::min(1.0, access_expectation_quad([](double) { return 1.0; }, 0.0, x, s.access));
    }
    MetricValue cap_f(double x) const { return capacity_fso_quad(x, s.fso); }
    MetricValue cap_t(double x) const { return capacity_thz_quad(x, s.thz); }
    MetricValue cap_r(double x) const { return capacity_access_quad(x, s.access); }
    MetricValue ber_f(double x, const Modulation& m) const { return aber_fso_quad(x, s.fso, m); }
    MetricValue ber_t(double x, const Modulation& m) const { return aber_thz_quad(x, s.thz, m); }
    MetricValue ber_r(double x, const Modulation& m) const { return aber_access_quad(x, s.access, m); }
};

struct FsoBands {
    double low = 0.0;
    double hig = 0.0;
    double off = 0.0;
};

template <class L>
inline FsoBands fso_bands(const SoftPolicy& p, const L& links) {
    FsoBands b;
    const double fu = links.cdf_f(p.gamma_f_th_u);
    double fl = p.gamma_f_th_u == p.gamma_f_th_l ? fu : links.cdf_f(p.gamma_f_th_l);
    if (fl > fu) {
        if (fl - fu > 1e-10) throw numerical_integrity_error("fso_bands", "FSO CDF decreases between the soft thresholds");
        fl = fu;  // both within roundoff of 1
    }
    b.low = fl;
    b.hig = 1.0 - fu;
    b.off = soft_fso_off_from_cdf(fu, fl);
    return b;
}

template <class L>
inline OutageBreakdown outage_with(const SystemSpec& s, const L& links) {
    const SoftPolicy p = as_soft(s.policy);
    OutageBreakdown o;
    o.fso = fso_bands(p, links).off;
    o.thz = links.cdf_t(p.gamma_t_th);
    o.hybrid = o.fso * o.thz;
    o.access = links.cdf_r(s.gamma_r_th);
    o.e2e = e2e_outage(o.hybrid, o.access);
    return o;
}

template <class L>
inline CapacityBreakdown capacity_with(const SystemSpec& s, const L& links) {
    const SoftPolicy p = as_soft(s.policy);
    const FsoBands b = fso_bands(p, links);
    CapacityBreakdown c;
    c.fso = links.cap_f(p.gamma_f_th_u);
    c.thz = links.cap_t(p.gamma_t_th);
    c.access = links.cap_r(s.gamma_r_th);
    c.hybrid.value = c.fso.value + b.off * c.thz.value;
    c.hybrid.merge(c.fso).merge(c.thz);
    if (p.gamma_f_th_l != p.gamma_f_th_u) {
        MetricValue cl = links.cap_f(p.gamma_f_th_l);
        c.hybrid.value += (cl.value - c.fso.value) * b.hig / (b.low + b.hig);
        c.hybrid.merge(cl);
    }
    c.e2e.value = std::min(c.hybrid.value, c.access.value);
    c.e2e.merge(c.hybrid).merge(c.access);
    return c;
}

template <class L>
inline AberBreakdown aber_with(const SystemSpec& s, const ModulationSet& mods, const L& links) {
    if (mods.fso.tau() != s.fso.tau)
        throw domain_error("modulation " + mods.fso.name() + " needs FSO detection tau = " + std::to_string(mods.fso.tau()));
    const SoftPolicy p = as_soft(s.policy);
    const FsoBands b = fso_bands(p, links);
    const double p_hyb = b.off * links.cdf_t(p.gamma_t_th);
    AberBreakdown r;
    r.fso = links.ber_f(p.gamma_f_th_u, mods.fso);
    r.thz = links.ber_t(p.gamma_t_th, mods.thz);
    r.access = links.ber_r(s.gamma_r_th, mods.access);
    MetricValue u;
    u.value = r.fso.value + b.off * r.thz.value;
    u.merge(r.fso).merge(r.thz);
    if (p.gamma_f_th_l != p.gamma_f_th_u) {
        MetricValue bl = links.ber_f(p.gamma_f_th_l, mods.fso);
        u.value += (bl.value - r.fso.value) * b.hig / (b.low + b.hig);
        u.merge(bl);
    }
    r.hybrid_unconditional = u;
    r.hybrid = u;
    if (p_hyb >= 1.0) {
        r.hybrid.value = std::numeric_limits<double>::quiet_NaN();
        r.hybrid.flag("backhaul_always_in_outage");
    } else {
        r.hybrid.value = u.value / (1.0 - p_hyb);
    }
    r.e2e.value = e2e_aber(r.hybrid.value, r.access.value);
    r.e2e.merge(r.hybrid).merge(r.access);
    r.e2e_unconditional.value = e2e_aber(u.value, r.access.value);
    r.e2e_unconditional.merge(u).merge(r.access);
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------- public API

inline OutageBreakdown outage(const SystemSpec& s) { return detail::outage_with(s, detail::ClosedFormLinks{s, {}}); }

inline OutageBreakdown outage_quad(const SystemSpec& s) { return detail::outage_with(s, detail::QuadratureLinks{s}); }

inline double outage_e2e_hard(const SystemSpec& s) {
    if (s.is_soft()) throw domain_error("outage_e2e_hard: policy is soft");
    return outage(s).e2e;
}

inline double outage_e2e_soft(const SystemSpec& s) {
    if (!s.is_soft()) throw domain_error("outage_e2e_soft: policy is hard");
    return outage(s).e2e;
}

// High-SNR forms; E2E is the sum of the hop asymptotes.
inline OutageBreakdown asymptotic_outage(const SystemSpec& s) {
    const SoftPolicy p = as_soft(s.policy);
    OutageBreakdown o;
    const double fu = fso_cdf_asymptotic(p.gamma_f_th_u, s.fso);
    if (p.gamma_f_th_u == p.gamma_f_th_l) {
        o.fso = fu;
    } else {
        const double low = fso_cdf_asymptotic(p.gamma_f_th_l, s.fso);
        o.fso = soft_fso_off_probability_reduced(low, 1.0 - fu);
    }
    o.thz = thz_cdf_asymptotic(p.gamma_t_th, s.thz);
    o.hybrid = o.fso * o.thz;
    o.access = access_cdf_asymptotic(s.gamma_r_th, s.access);
    o.e2e = o.hybrid + o.access;
    return o;
}

inline DiversityOrders diversity_order(const SystemSpec& s) {
    DiversityOrders d;
    const double t = s.fso.tau;
    d.fso = std::min({s.fso.pointing.xi2(), s.fso.alpha_f, s.fso.beta_f}) / t;
    d.thz = std::min(s.thz.pointing.xi2() / 2.0, s.thz.alpha * s.thz.mu_total() / 2.0);
    // every pairwise sum of an FSO and a THz candidate; the minimum is the sum of minima
    d.hybrid = d.fso + d.thz;
    d.access = s.access.shape();
    d.e2e = std::min(d.hybrid, d.access);
    return d;
}

inline CapacityBreakdown capacity(const SystemSpec& s, const AnalyticOptions& o = {}) {
    return detail::capacity_with(s, detail::ClosedFormLinks{s, o});
}

inline CapacityBreakdown capacity_quad(const SystemSpec& s) { return detail::capacity_with(s, detail::QuadratureLinks{s}); }

inline AberBreakdown aber(const SystemSpec& s, const ModulationSet& m, const AnalyticOptions& o = {}) {
    return detail::aber_with(s, m, detail::ClosedFormLinks{s, o});
}

inline AberBreakdown aber_quad(const SystemSpec& s, const ModulationSet& m) {
    return detail::aber_with(s, m, detail::QuadratureLinks{s});
}

}  // namespace hybridlink
