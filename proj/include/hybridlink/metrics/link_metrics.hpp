#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "hybridlink/channel/access.hpp"
#include "hybridlink/channel/fso.hpp"
#include "hybridlink/channel/thz.hpp"
#include "hybridlink/metrics/modulation.hpp"
#include "hybridlink/metrics/value.hpp"
#include "hybridlink/specfun/erfc.hpp"
#include "hybridlink/specfun/hypergeometric.hpp"
#include "hybridlink/specfun/meijer_g.hpp"
#include "hybridlink/specfun/quadrature.hpp"

namespace hybridlink {

// How the capacity integral below the threshold is handled.
//  exact_series: tail moments of the SNR law, no approximation of ln(1+γ)
//  log_approx:   ln(1+γ) ≈ ln γ below the threshold, then ln x ≈ ϖ (x^{1/ϖ} − 1)
enum class LowerTail { exact_series, log_approx };

struct AnalyticOptions {
    LowerTail lower_tail = LowerTail::exact_series;
    double varpi = 1e4;
    double erfc_series_limit = 25.0;    // B·γ_th above this: quadrature instead of the Maclaurin series
    double log_approx_tolerance = 1e-3; // bits; flag when ln(1+γ) ≈ ln γ is visibly off
};

namespace detail {

inline double g_eval(const specfun::MeijerGSpec& s, MetricValue& acc) {
    auto r = specfun::meijer_g_eval(s);
    if (r.truncated) acc.flag("meijer_g_truncated");
    return r.value;
}

inline bool is_integer(double x) { return x == std::floor(x); }

// Σ_{k≥1} term(k) until the terms stop mattering; alternating tails are
// finished off by averaging the last two partial sums.
template <class F>
inline double tail_series(F&& term, MetricValue& acc) {
    long double sum = 0.0L, prev = 0.0L;
    for (int k = 1; k <= specfun::series_max_terms; ++k) {
        const long double t = term(k);
        prev = sum;
        sum += t;
        if (std::abs(t) < specfun::series_rel_tol * std::abs(sum) || t == 0.0L) return static_cast<double>(sum);
    }
    acc.flag("series_truncated");
    return static_cast<double>(0.5L * (sum + prev));
}

// d/ds f(s) at 0, fourth-order central difference.
template <class F>
inline double derivative_at_zero(F&& f, double h = 1e-3) {
    return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

inline constexpr double ln2 = std::numbers::ln2;

}  // namespace detail

// ---------------------------------------------------------------- FSO link

inline double fso_xi_factor(const FsoLinkSpec& s) { return s.tau == 2 ? std::numbers::e / (2.0 * std::numbers::pi) : 1.0; }

// ∫_0^x γ^s f_F(γ) dγ
inline double fso_lower_moment(double x, double s, const FsoLinkSpec& spec, MetricValue& acc) {
    if (x <= 0.0) return 0.0;
    auto b = fso_cdf_blocks(spec);
    specfun::MeijerGSpec g{{1.0 - s}, b.rho1, b.rho2, {-s}, fso_cdf_argument(x, spec, b)};
    return b.d1 * std::pow(x, s) * detail::g_eval(g, acc);
}

// ∫_x^∞ γ^s f_F(γ) dγ
inline double fso_upper_moment(double x, double s, const FsoLinkSpec& spec, MetricValue& acc) {
    auto b = fso_cdf_blocks(spec);
    std::vector<double> a_back = b.rho1;
    a_back.push_back(1.0 - s);
    std::vector<double> b_front{-s};
    b_front.insert(b_front.end(), b.rho2.begin(), b.rho2.end());
    return b.d1 * std::pow(x, s) * detail::g_eval({{}, a_back, b_front, {}, fso_cdf_argument(x, spec, b)}, acc);
}

inline MetricValue fso_cdf_value(double x, const FsoLinkSpec& spec) {
    MetricValue v;
    v.value = x <= 0.0 ? 0.0 : fso_snr_cdf(x, spec);
    return v;
}

// ∫_lo^hi g(γ) f_F(γ) dγ
template <class G>
inline double fso_expectation_quad(G&& g, double lo, double hi, const FsoLinkSpec& spec) {
    const double scale = spec.delta_tau * std::pow(spec.pointing.a0, spec.tau);
    return specfun::integrate_log_axis([&](double x) { return g(x) * fso_snr_pdf(x, spec); }, lo, hi, scale, 1e-10).value;
}

inline double fso_theta1(const FsoLinkSpec& spec, MetricValue& acc) {
    auto b = fso_cdf_blocks(spec);
    std::vector<double> a_back{1.0};
    a_back.insert(a_back.end(), b.rho1.begin(), b.rho1.end());
    std::vector<double> b_front = b.rho2;
    b_front.push_back(0.0);
    b_front.push_back(0.0);
    const double z = b.d2 / (fso_xi_factor(spec) * std::pow(spec.pointing.a0, spec.tau) * spec.delta_tau);
    return b.d1 / detail::ln2 * detail::g_eval({{0.0}, a_back, b_front, {}, z}, acc);
}

// Lower part of the capacity integral with ln(1+Ξγ) ≈ ln(Ξγ) and the ϖ power trick.
inline double fso_theta2(double gamma_th, const FsoLinkSpec& spec, const AnalyticOptions& o, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    const double w = o.varpi;
    const double xi = fso_xi_factor(spec);
    const double m1 = fso_lower_moment(gamma_th, 1.0 / w, spec, acc);
    const double m0 = fso_lower_moment(gamma_th, 0.0, spec, acc);
    return w / detail::ln2 * (std::pow(xi, 1.0 / w) * m1 - m0);
}

// ∫_x^∞ log2(1+Ξγ) f_F dγ without approximating the logarithm. For Ξx ≥ 1
// ln(1+Ξγ) = ln Ξγ + Σ (−1)^{k+1} (Ξγ)^{−k}/k over the whole range; otherwise
// the complement below x is expanded in powers of Ξγ.
inline double fso_capacity_exact(double x, const FsoLinkSpec& spec, MetricValue& acc) {
    const double xi = fso_xi_factor(spec);
    if (xi * x >= 1.0) {
        auto tm = [&](double s) { return fso_upper_moment(x, s, spec, acc); };
        const double lead = std::log(xi) * tm(0.0) + detail::derivative_at_zero(tm);
        const double ser = detail::tail_series(
            [&](int k) { return (k % 2 ? 1.0L : -1.0L) * std::pow(xi, -k) / k * tm(-double(k)); }, acc);
        return (lead + ser) / detail::ln2;
    }
    const double below = detail::tail_series(
        [&](int k) { return (k % 2 ? 1.0L : -1.0L) * std::pow(xi, k) / k * fso_lower_moment(x, double(k), spec, acc); },
        acc);
    return fso_theta1(spec, acc) - below / detail::ln2;
}

inline MetricValue capacity_fso(double gamma_th, const FsoLinkSpec& spec, const AnalyticOptions& o = {}) {
    MetricValue r;
    if (gamma_th > 0.0 && o.lower_tail == LowerTail::exact_series) {
        r.value = std::max(0.0, fso_capacity_exact(gamma_th, spec, r));
        return r;
    }
    const double t1 = fso_theta1(spec, r);
    double t2 = 0.0;
    if (gamma_th > 0.0) {
        t2 = fso_theta2(gamma_th, spec, o, r);
        MetricValue scratch;
        AnalyticOptions o2 = o;
        o2.varpi *= 2.0;
        const double t2b = fso_theta2(gamma_th, spec, o2, scratch);
        if (std::abs(t2b - t2) > 1e-4 * std::abs(t2)) {
            r.flag("varpi_unconverged");
            t2 = fso_expectation_quad([&](double x) { return std::log2(fso_xi_factor(spec) * x); }, 0.0, gamma_th, spec);
        }
        // ln(1+Ξγ) − ln(Ξγ) ≥ ln(1 + 1/(Ξγ_th)) below the threshold
        const double gap = std::log2(1.0 + 1.0 / (fso_xi_factor(spec) * gamma_th)) * fso_snr_cdf(gamma_th, spec);
        if (gap > o.log_approx_tolerance) r.flag("low_snr_log_approx");
    }
    r.value = std::max(0.0, t1 - t2);
    return r;
}

inline MetricValue capacity_fso_quad(double gamma_th, const FsoLinkSpec& spec) {
    const double xi = fso_xi_factor(spec);
    return fso_expectation_quad([&](double x) { return std::log2(1.0 + xi * x); }, gamma_th, INFINITY, spec);
}

inline double fso_theta7(double b, const FsoLinkSpec& spec, MetricValue& acc) {
    auto blk = fso_cdf_blocks(spec);
    const double z = blk.d2 / (b * std::pow(spec.pointing.a0, spec.tau) * spec.delta_tau);
    return blk.d1 / std::sqrt(std::numbers::pi) * detail::g_eval({{1.0, 0.5}, blk.rho1, blk.rho2, {0.0}, z}, acc);
}

// ∫_0^γth erfc(√(Bγ)) f_F dγ through the Maclaurin series of erfc.
inline double fso_theta8(double b, double gamma_th, const FsoLinkSpec& spec, const AnalyticOptions& o, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    if (b * gamma_th > o.erfc_series_limit) {
        acc.flag("erfc_series_quadrature");
        return fso_expectation_quad([&](double x) { return std::erfc(std::sqrt(b * x)); }, 0.0, gamma_th, spec);
    }
    const double cdf = fso_lower_moment(gamma_th, 0.0, spec, acc);
    long double sum = 0.0L;
    long double coef = 1.0L;  // (−B)^j / j!
    bool done = false;
    for (int j = 0; j < specfun::series_max_terms; ++j) {
        const double s = j + 0.5;
        const long double t = coef / (2 * j + 1) * std::sqrt(static_cast<long double>(b)) *
                              fso_lower_moment(gamma_th, s, spec, acc);
        sum += t;
        if (j > b * gamma_th && std::abs(t) < specfun::series_rel_tol * std::abs(sum)) {
            done = true;
            break;
        }
        coef *= -static_cast<long double>(b) / (j + 1);
    }
    if (!done) acc.flag("series_truncated");
    return cdf - 2.0 / std::sqrt(std::numbers::pi) * static_cast<double>(sum);
}

inline MetricValue aber_fso(double gamma_th, const FsoLinkSpec& spec, const Modulation& mod, const AnalyticOptions& o = {}) {
    MetricValue r;
    double v = 0.0;
    for (double b : mod.b) v += mod.a * (fso_theta7(b, spec, r) - fso_theta8(b, gamma_th, spec, o, r));
    r.value = std::max(0.0, v);
    return r;
}

inline MetricValue aber_fso_quad(double gamma_th, const FsoLinkSpec& spec, const Modulation& mod) {
    return fso_expectation_quad(
        [&](double x) {
            double e = 0.0;
            for (double b : mod.b) e += mod.a * std::erfc(std::sqrt(b * x));
            return e;
        },
        gamma_th, INFINITY, spec);
}

// ---------------------------------------------------------------- THz link

// ∫_0^x γ^s f_T(γ) dγ
inline double thz_lower_moment(double x, double s, const ThzLinkSpec& spec, MetricValue& acc) {
    if (x <= 0.0) return 0.0;
    const double xi2 = spec.pointing.xi2();
    const double e = (xi2 + 2.0 * s) / spec.alpha;
    const double z = spec.c3 * std::pow(x / spec.gamma_bar, spec.alpha / 2.0);
    const double pre = std::exp(spec.ln_c1 + 0.5 * xi2 * std::log(x / spec.gamma_bar) + s * std::log(x)) / spec.alpha;
    return pre * detail::g_eval({{1.0 - e}, {1.0}, {0.0, spec.c2}, {-e}, z}, acc);
}

// ∫_x^∞ γ^s f_T(γ) dγ
inline double thz_upper_moment(double x, double s, const ThzLinkSpec& spec, MetricValue& acc) {
    const double xi2 = spec.pointing.xi2();
    const double e = (xi2 + 2.0 * s) / spec.alpha;
    const double z = spec.c3 * std::pow(x / spec.gamma_bar, spec.alpha / 2.0);
    const double pre = std::exp(spec.ln_c1 + 0.5 * xi2 * std::log(x / spec.gamma_bar) + s * std::log(x)) / spec.alpha;
    return pre * detail::g_eval({{}, {1.0, 1.0 - e}, {-e, 0.0, spec.c2}, {}, z}, acc);
}

template <class G>
inline double thz_expectation_quad(G&& g, double lo, double hi, const ThzLinkSpec& spec) {
    return specfun::integrate_log_axis([&](double x) { return g(x) * thz_snr_pdf(x, spec); }, lo, hi, spec.gamma_bar, 1e-10).value;
}

inline double thz_theta3(const ThzLinkSpec& spec, MetricValue& acc) {
    const int a = static_cast<int>(spec.alpha);
    const double al = spec.alpha;
    const double h = spec.pointing.xi2() / 2.0;
    std::vector<double> a_front, a_back, b_front;
    for (int j = 1; j <= a; ++j) a_front.push_back((j - h - 1.0) / al);
    for (int j = 1; j <= a; ++j) a_back.push_back((j - h) / al);
    a_back.push_back(0.5);
    a_back.push_back(1.0);
    b_front = {0.0, 0.5, spec.c2 / 2.0, (spec.c2 + 1.0) / 2.0};
    for (int rep = 0; rep < 2; ++rep)
        for (int j = 0; j < a; ++j) b_front.push_back((j - h) / al);
    const double z = spec.c3 * spec.c3 / (4.0 * std::pow(spec.gamma_bar, al));
    const double pre = std::exp(spec.ln_c1 - h * std::log(spec.gamma_bar) + (spec.c2 - 1.5) * std::numbers::ln2 -
                                (al - 0.5) * std::log(2.0 * std::numbers::pi)) /
                       (detail::ln2 * al);
    return pre * detail::g_eval({a_front, a_back, b_front, {}, z}, acc);
}

inline double thz_theta4(double gamma_th, const ThzLinkSpec& spec, const AnalyticOptions& o, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    const double w = o.varpi;
    return w / detail::ln2 * (thz_lower_moment(gamma_th, 1.0 / w, spec, acc) - thz_lower_moment(gamma_th, 0.0, spec, acc));
}

inline MetricValue capacity_thz_quad(double gamma_th, const ThzLinkSpec& spec) {
    return thz_expectation_quad([](double x) { return std::log2(1.0 + x); }, gamma_th, INFINITY, spec);
}

inline double thz_capacity_exact(double x, const ThzLinkSpec& spec, MetricValue& acc) {
    if (x >= 1.0) {
        auto tm = [&](double s) { return thz_upper_moment(x, s, spec, acc); };
        const double lead = detail::derivative_at_zero(tm);
        const double ser =
            detail::tail_series([&](int k) { return (k % 2 ? 1.0L : -1.0L) / k * tm(-double(k)); }, acc);
        return (lead + ser) / detail::ln2;
    }
    const double below = detail::tail_series(
        [&](int k) { return (k % 2 ? 1.0L : -1.0L) / k * thz_lower_moment(x, double(k), spec, acc); }, acc);
    const double full = detail::is_integer(spec.alpha)
                            ? thz_theta3(spec, acc)
                            : thz_expectation_quad([](double g) { return std::log2(1.0 + g); }, 0.0, INFINITY, spec);
    return full - below / detail::ln2;
}

inline MetricValue capacity_thz(double gamma_th, const ThzLinkSpec& spec, const AnalyticOptions& o = {}) {
    MetricValue r;
    if (gamma_th > 0.0 && o.lower_tail == LowerTail::exact_series) {
        if (!detail::is_integer(spec.alpha) && gamma_th < 1.0) r.flag("non_integer_alpha_quadrature");
        r.value = std::max(0.0, thz_capacity_exact(gamma_th, spec, r));
        return r;
    }
    double t3;
    if (detail::is_integer(spec.alpha)) {
        t3 = thz_theta3(spec, r);
    } else {
        r.flag("non_integer_alpha_quadrature");
        t3 = thz_expectation_quad([](double x) { return std::log2(1.0 + x); }, 0.0, INFINITY, spec);
    }
    double t4 = 0.0;
    if (gamma_th > 0.0) {
        t4 = thz_theta4(gamma_th, spec, o, r);
        MetricValue scratch;
        AnalyticOptions o2 = o;
        o2.varpi *= 2.0;
        const double t4b = thz_theta4(gamma_th, spec, o2, scratch);
        if (std::abs(t4b - t4) > 1e-4 * std::abs(t4)) {
            r.flag("varpi_unconverged");
            t4 = thz_expectation_quad([](double x) { return std::log2(x); }, 0.0, gamma_th, spec);
        }
        const double gap = std::log2(1.0 + 1.0 / gamma_th) * thz_snr_cdf(gamma_th, spec);
        if (gap > o.log_approx_tolerance) r.flag("low_snr_log_approx");
    }
    r.value = std::max(0.0, t3 - t4);
    return r;
}

inline double thz_theta9(double b, const ThzLinkSpec& spec, MetricValue& acc) {
    const int a = static_cast<int>(spec.alpha);
    const double al = spec.alpha;
    const double h = spec.pointing.xi2() / 2.0;
    std::vector<double> a_front, b_back;
    for (int j = 1; j <= a; ++j) a_front.push_back((j - h) / al);
    for (int j = 1; j <= a; ++j) a_front.push_back((j - h - 0.5) / al);
    std::vector<double> b_front{0.0, 0.5, spec.c2 / 2.0, (spec.c2 + 1.0) / 2.0};
    for (int j = 1; j <= a; ++j) b_back.push_back((j - h - 1.0) / al);
    const double z = spec.c3 * spec.c3 / std::pow(spec.gamma_bar, al) * std::pow(al, al) / (4.0 * std::pow(b, al));
    const double pre = std::exp(spec.ln_c1 - h * std::log(spec.gamma_bar) + (spec.c2 - 0.5) * std::numbers::ln2 +
                                (h - 1.0) * std::log(al) - 0.5 * al * std::log(2.0 * std::numbers::pi) - h * std::log(b)) /
                       (2.0 * std::sqrt(std::numbers::pi));
    return pre * detail::g_eval({a_front, {0.5, 1.0}, b_front, b_back, z}, acc);
}

inline double thz_theta10(double b, double gamma_th, const ThzLinkSpec& spec, const AnalyticOptions& o, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    if (b * gamma_th > o.erfc_series_limit) {
        acc.flag("erfc_series_quadrature");
        return thz_expectation_quad([&](double x) { return std::erfc(std::sqrt(b * x)); }, 0.0, gamma_th, spec);
    }
    const double cdf = thz_lower_moment(gamma_th, 0.0, spec, acc);
    long double sum = 0.0L, coef = 1.0L;
    bool done = false;
    for (int j = 0; j < specfun::series_max_terms; ++j) {
        const long double t = coef / (2 * j + 1) * std::sqrt(static_cast<long double>(b)) *
                              thz_lower_moment(gamma_th, j + 0.5, spec, acc);
        sum += t;
        if (j > b * gamma_th && std::abs(t) < specfun::series_rel_tol * std::abs(sum)) {
            done = true;
            break;
        }
        coef *= -static_cast<long double>(b) / (j + 1);
    }
    if (!done) acc.flag("series_truncated");
    return cdf - 2.0 / std::sqrt(std::numbers::pi) * static_cast<double>(sum);
}

inline MetricValue aber_thz(double gamma_th, const ThzLinkSpec& spec, const Modulation& mod, const AnalyticOptions& o = {}) {
    MetricValue r;
    double v = 0.0;
    const bool closed = detail::is_integer(spec.alpha);
    if (!closed) r.flag("non_integer_alpha_quadrature");
    for (double b : mod.b) {
        const double t9 = closed ? thz_theta9(b, spec, r)
                                 : thz_expectation_quad([&](double x) { return std::erfc(std::sqrt(b * x)); }, 0.0, INFINITY, spec);
        v += mod.a * (t9 - thz_theta10(b, gamma_th, spec, o, r));
    }
    r.value = std::max(0.0, v);
    return r;
}

inline MetricValue aber_thz_quad(double gamma_th, const ThzLinkSpec& spec, const Modulation& mod) {
    return thz_expectation_quad(
        [&](double x) {
            double e = 0.0;
            for (double b : mod.b) e += mod.a * std::erfc(std::sqrt(b * x));
            return e;
        },
        gamma_th, INFINITY, spec);
}

// ------------------------------------------------------------- access link

template <class G>
inline double access_expectation_quad(G&& g, double lo, double hi, const AccessLinkSpec& spec) {
    return specfun::integrate_log_axis([&](double x) { return g(x) * access_snr_pdf(x, spec); }, lo, hi, spec.gamma_bar_r, 1e-11).value;
}

namespace detail {

// Beyond m·γ_th/γ̄ = 1 the alternating threshold series cancels; the tails are
// then evaluated from the regularised upper gamma directly.
inline constexpr double access_series_limit = 1.0;

inline bool access_series_ok(double gamma_th, const AccessLinkSpec& spec) {
    return spec.m * gamma_th / spec.gamma_bar_r <= access_series_limit;
}

// ∫_x^∞ log2(1+γ) f(γ) dγ, by parts: log2(1+x) Q(k, r x) + ∫_x^∞ Q(k, rγ)/(1+γ) dγ / ln 2
inline double access_capacity_tail(double x, const AccessLinkSpec& spec) {
    const double k = spec.shape(), r = spec.m / spec.gamma_bar_r;
    auto g = [&](double t) { return boost::math::gamma_q(k, r * x + t) / (1.0 + x + t / r); };
    const double rest = specfun::integrate(g, 0.0, INFINITY, 1e-12).value / r;
    return (std::log1p(x) * boost::math::gamma_q(k, r * x) + rest) / ln2;
}

// ∫_x^∞ erfc(√(bγ)) f(γ) dγ through Craig's form erfc(√y) = (2/π) ∫_0^{π/2} exp(−y / sin²θ) dθ
inline double access_erfc_tail(double b, double x, const AccessLinkSpec& spec) {
    const double k = spec.shape(), r = spec.m / spec.gamma_bar_r;
    auto g = [&](double th) {
        const double s = std::sin(th);
        if (s <= 0.0) return 0.0;
        const double c = b / (s * s);
        return std::exp(-k * std::log1p(c / r)) * boost::math::gamma_q(k, (r + c) * x);
    };
    return 2.0 / std::numbers::pi * specfun::integrate(g, 0.0, std::numbers::pi / 2.0, 1e-12).value;
}

}  // namespace detail

inline double access_theta5(const AccessLinkSpec& spec, MetricValue& acc) {
    const double k = spec.shape();
    return detail::g_eval({{1.0 - k, 1.0, 1.0}, {}, {1.0}, {0.0}, spec.gamma_bar_r / spec.m}, acc) /
           (detail::ln2 * std::tgamma(k));
}

inline double access_theta6(double gamma_th, const AccessLinkSpec& spec, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    const double k = spec.shape();
    const double u = spec.m * gamma_th / spec.gamma_bar_r;
    long double sum = 0.0L;
    bool done = false;
    double ln_fact = 0.0;
    for (int j = 0; j < specfun::series_max_terms; ++j) {
        if (j > 0) ln_fact += std::log(double(j));
        const double e = k + j;
        const double g = detail::g_eval({{1.0 - e, 1.0, 1.0}, {}, {1.0}, {0.0, -e}, gamma_th}, acc);
        const long double t = (j % 2 ? -1.0L : 1.0L) * std::exp(e * std::log(u) - ln_fact) * g;
        sum += t;
        if (j > u && std::abs(t) < specfun::series_rel_tol * std::abs(sum)) {
            done = true;
            break;
        }
    }
    if (!done) acc.flag("series_truncated");
    return static_cast<double>(sum) / (detail::ln2 * std::tgamma(k));
}

inline MetricValue capacity_access(double gamma_th, const AccessLinkSpec& spec) {
    MetricValue r;
    if (!detail::access_series_ok(gamma_th, spec)) {
        r.value = detail::access_capacity_tail(gamma_th, spec);
        return r;
    }
    const double v = access_theta5(spec, r) - access_theta6(gamma_th, spec, r);
    r.value = std::max(0.0, v);
    return r;
}

inline MetricValue capacity_access_quad(double gamma_th, const AccessLinkSpec& spec) {
    return access_expectation_quad([](double x) { return std::log2(1.0 + x); }, gamma_th, INFINITY, spec);
}

inline double access_theta11(double b, const AccessLinkSpec& spec) {
    const double k = spec.shape();
    const double r = spec.m / spec.gamma_bar_r;
    const double lead = std::exp(k * std::log(r) + std::lgamma(k + 0.5) - std::lgamma(k) - (k + 0.5) * std::log(b + r)) *
                        std::sqrt(b) / (std::sqrt(std::numbers::pi) * k);
    return lead * specfun::gauss_2f1(1.0, k + 0.5, k + 1.0, r / (b + r));
}

inline double access_theta12(double b, double gamma_th, const AccessLinkSpec& spec, MetricValue& acc) {
    if (gamma_th <= 0.0) return 0.0;
    const double k = spec.shape();
    const double u = spec.m * gamma_th / spec.gamma_bar_r;
    long double sum = 0.0L;
    bool done = false;
    double ln_fact = 0.0;
    for (int j = 0; j < specfun::series_max_terms; ++j) {
        if (j > 0) ln_fact += std::log(double(j));
        const double e = k + j;
        const double g = detail::g_eval({{1.0 - e}, {1.0}, {0.0, 0.5}, {-e}, b * gamma_th}, acc);
        const long double t = (j % 2 ? -1.0L : 1.0L) * std::exp(e * std::log(u) - ln_fact) * g;
        sum += t;
        if (j > u && std::abs(t) < specfun::series_rel_tol * std::abs(sum)) {
            done = true;
            break;
        }
    }
    if (!done) acc.flag("series_truncated");
    return static_cast<double>(sum) / (std::sqrt(std::numbers::pi) * std::tgamma(k));
}

inline MetricValue aber_access(double gamma_th, const AccessLinkSpec& spec, const Modulation& mod) {
    MetricValue r;
    double v = 0.0;
    const bool series = detail::access_series_ok(gamma_th, spec);
    for (double b : mod.b)
        v += mod.a * (series ? access_theta11(b, spec) - access_theta12(b, gamma_th, spec, r)
                             : detail::access_erfc_tail(b, gamma_th, spec));
    r.value = std::max(0.0, v);
    return r;
}

inline MetricValue aber_access_quad(double gamma_th, const AccessLinkSpec& spec, const Modulation& mod) {
    return access_expectation_quad(
        [&](double x) {
            double e = 0.0;
            for (double b : mod.b) e += mod.a * std::erfc(std::sqrt(b * x));
            return e;
        },
        gamma_th, INFINITY, spec);
}

}  // namespace hybridlink
