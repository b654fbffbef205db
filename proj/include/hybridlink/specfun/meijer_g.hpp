#pragma once

#include <algorithm>
#include <cstddef>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hybridlink/error.hpp"
#include "hybridlink/specfun/gamma.hpp"
#include "hybridlink/specfun/hypergeometric.hpp"

namespace hybridlink::specfun {

// G^{m,n}_{p,q}(z | a_front, a_back ; b_front, b_back) with
// n = |a_front|, p = n + |a_back|, m = |b_front|, q = m + |b_back|.
struct MeijerGSpec {
    std::vector<double> a_front;
    std::vector<double> a_back;
    std::vector<double> b_front;
    std::vector<double> b_back;
    double z = 0.0;

    int m() const { return static_cast<int>(b_front.size()); }
    int n() const { return static_cast<int>(a_front.size()); }
    int p() const { return static_cast<int>(a_front.size() + a_back.size()); }
    int q() const { return static_cast<int>(b_front.size() + b_back.size()); }
    double delta() const { return m() + n() - 0.5 * (p() + q()); }
};

enum class GMethod { residue, residue_perturbed, contour };

inline const char* to_string(GMethod m) {
    switch (m) {
        case GMethod::residue: return "residue";
        case GMethod::residue_perturbed: return "residue_perturbed";
        case GMethod::contour: return "contour";
    }
    return "?";
}

struct MeijerGResult {
    double value = 0.0;
    GMethod method = GMethod::residue;
    double error_estimate = 0.0;  // absolute
    bool truncated = false;
    bool perturbed = false;
};

enum class GPath { automatic, residue, contour };

namespace detail {

inline constexpr double g_cancel_tol = 1e-12;
inline constexpr double g_cluster_tol = 1e-9;
inline constexpr double g_perturbation = 1e-7;
inline constexpr double g_accept_rel_err = 1e-10;
// ulp multiplier on the largest residue term
inline constexpr double g_cancellation_factor = 2048.0;

inline bool params_equal(double x, double y) {
    return std::abs(x - y) <= g_cancel_tol * std::max(1.0, std::abs(x));
}

// Cancel Γ(1−a+s)/Γ(1−b+s) (a in a_front, b in b_back) and Γ(b−s)/Γ(a−s)
// (b in b_front, a in a_back).
inline MeijerGSpec reduce(MeijerGSpec s) {
    for (std::size_t i = 0; i < s.a_front.size();) {
        auto it = std::find_if(s.b_back.begin(), s.b_back.end(),
                               [&](double b) { return params_equal(b, s.a_front[i]); });
        if (it != s.b_back.end()) {
            s.b_back.erase(it);
            s.a_front.erase(s.a_front.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    for (std::size_t i = 0; i < s.b_front.size();) {
        auto it = std::find_if(s.a_back.begin(), s.a_back.end(),
                               [&](double a) { return params_equal(a, s.b_front[i]); });
        if (it != s.a_back.end()) {
            s.a_back.erase(it);
            s.b_front.erase(s.b_front.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return s;
}

inline MeijerGSpec invert(const MeijerGSpec& s) {
    auto one_minus = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = 1.0 - v[i];
        return r;
    };
    MeijerGSpec r;
    r.a_front = one_minus(s.b_front);
    r.a_back = one_minus(s.b_back);
    r.b_front = one_minus(s.a_front);
    r.b_back = one_minus(s.a_back);
    r.z = 1.0 / s.z;
    return r;
}

inline std::string describe(const MeijerGSpec& s) {
    std::ostringstream os;
    os.precision(17);
    os << "G^{" << s.m() << "," << s.n() << "}_{" << s.p() << "," << s.q() << "}(z=" << s.z << ")";
    return os.str();
}

inline void validate(const MeijerGSpec& s) {
    if (!(s.z > 0.0) || !std::isfinite(s.z))
        throw domain_error("meijer_g: z must be positive and finite");
    if (s.m() == 0)
        throw unsupported_parameters_error("meijer_g", "m = 0: " + describe(s));
    for (double a : s.a_front)
        for (double b : s.b_front) {
            double d = a - b;
            if (d >= 1.0 - g_cluster_tol && std::abs(d - std::round(d)) < g_cluster_tol)
                throw unsupported_parameters_error(
                    "meijer_g", "a_j - b_k is a positive integer, pole families overlap: " + describe(s));
        }
}

// Groups of b_front indices whose pairwise differences are integers.
inline std::vector<std::vector<std::size_t>> integer_clusters(const std::vector<double>& b) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> used(b.size(), false);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> c{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            if (used[j]) continue;
            double d = b[j] - b[i];
            if (std::abs(d - std::round(d)) < g_cluster_tol) {
                c.push_back(j);
                used[j] = true;
            }
        }
        if (c.size() > 1) out.push_back(std::move(c));
    }
    return out;
}

struct residue_eval {
    long double value;
    long double abs_scale;  // Σ of |largest term| per pole family
    bool truncated;
};

// Slater's residue sum; requires distinct b_front modulo integers and p < q
// or (p == q, z < 1).
inline residue_eval residue_sum(const MeijerGSpec& s) {
    using L = long double;
    const int m = s.m(), n = s.n(), p = s.p(), q = s.q();
    std::vector<L> a, b;
    for (double v : s.a_front) a.push_back(v);
    for (double v : s.a_back) a.push_back(v);
    for (double v : s.b_front) b.push_back(v);
    for (double v : s.b_back) b.push_back(v);
    const L z = s.z;
    const L lnz = std::log(z);
    const L x = ((p - m - n) % 2 == 0) ? z : -z;

    residue_eval out{0, 0, false};
    std::vector<L> num(static_cast<std::size_t>(p)), den;
    den.reserve(static_cast<std::size_t>(q));
    for (int h = 0; h < m; ++h) {
        const L bh = b[static_cast<std::size_t>(h)];
        L logc = bh * lnz;
        int sign = 1;
        bool zero = false;
        auto acc_num = [&](L arg) {
            auto g = ln_gamma_signed(arg);
            if (g.sign == 0)
                throw unsupported_parameters_error("meijer_g", "residue coefficient hits a Gamma pole");
            logc += g.log_abs;
            sign *= g.sign;
        };
        auto acc_den = [&](L arg) {
            auto g = ln_gamma_signed(arg);
            if (g.sign == 0) {
                zero = true;
                return;
            }
            logc -= g.log_abs;
            sign *= g.sign;
        };
        for (int j = 0; j < m; ++j)
            if (j != h) acc_num(b[static_cast<std::size_t>(j)] - bh);
        for (int j = 0; j < n; ++j) acc_num(L(1) + bh - a[static_cast<std::size_t>(j)]);
        for (int j = m; j < q; ++j) acc_den(L(1) + bh - b[static_cast<std::size_t>(j)]);
        for (int j = n; j < p; ++j) acc_den(a[static_cast<std::size_t>(j)] - bh);
        if (zero) continue;

        for (int j = 0; j < p; ++j) num[static_cast<std::size_t>(j)] = L(1) + bh - a[static_cast<std::size_t>(j)];
        den.clear();
        for (int j = 0; j < q; ++j)
            if (j != h) den.push_back(L(1) + bh - b[static_cast<std::size_t>(j)]);
        auto ser = pfq_series<L>(num, den, x);
        const L coef = L(sign) * std::exp(logc);
        out.value += coef * ser.value;
        out.abs_scale += std::abs(coef) * std::max(ser.abs_max_term, std::abs(ser.value));
        out.truncated = out.truncated || ser.truncated;
    }
    return out;
}

inline MeijerGResult residue_path(const MeijerGSpec& s) {
    constexpr double eps_ld = std::numeric_limits<long double>::epsilon();
    auto clusters = integer_clusters(s.b_front);
    if (clusters.empty()) {
        auto r = residue_sum(s);
        MeijerGResult res;
        res.value = static_cast<double>(r.value);
        res.method = GMethod::residue;
        res.truncated = r.truncated;
        res.error_estimate = static_cast<double>(r.abs_scale) * eps_ld * g_cancellation_factor +
                             std::abs(res.value) * std::numeric_limits<double>::epsilon();
        return res;
    }
    // Split coincident-modulo-integer poles by ±k·ε and average.
    MeijerGSpec plus = s, minus = s;
    for (const auto& c : clusters)
        for (std::size_t k = 1; k < c.size(); ++k) {
            plus.b_front[c[k]] += static_cast<double>(k) * g_perturbation;
            minus.b_front[c[k]] -= static_cast<double>(k) * g_perturbation;
        }
    auto rp = residue_sum(plus);
    auto rm = residue_sum(minus);
    MeijerGResult res;
    res.value = static_cast<double>(0.5L * (rp.value + rm.value));
    res.method = GMethod::residue_perturbed;
    res.perturbed = true;
    res.truncated = rp.truncated || rm.truncated;
    res.error_estimate = static_cast<double>(std::abs(rp.value - rm.value) * 0.5L * g_perturbation +
                                             std::max(rp.abs_scale, rm.abs_scale) * eps_ld * static_cast<long double>(g_cancellation_factor)) +
                         std::abs(res.value) * std::numeric_limits<double>::epsilon();
    return res;
}

// Smooth stand-in for log|Γ(x)| used only to place the contour.
inline double ln_abs_gamma_smooth(double x) {
    if (x > 0.5) return std::lgamma(x);
    return std::log(std::numbers::pi) - std::lgamma(1.0 - x);
}

inline MeijerGResult contour_path(const MeijerGSpec& s) {
    if (!(s.delta() > 0.0))
        throw unsupported_parameters_error("meijer_g",
                                           "contour integrand does not decay (delta <= 0): " + describe(s));
    const double inf = std::numeric_limits<double>::infinity();
    double lo = -inf, hi = inf;
    for (double a : s.a_front) lo = std::max(lo, a - 1.0);
    for (double b : s.b_front) hi = std::min(hi, b);
    if (!(lo < hi))
        throw unsupported_parameters_error("meijer_g", "no vertical line separates the pole families: " + describe(s));

    const double lnz = std::log(s.z);
    auto phi = [&](double c) {
        double v = c * lnz;
        for (double b : s.b_front) v += std::lgamma(b - c);
        for (double a : s.a_front) v += std::lgamma(1.0 - a + c);
        for (double b : s.b_back) v -= ln_abs_gamma_smooth(1.0 - b + c);
        for (double a : s.a_back) v -= ln_abs_gamma_smooth(a - c);
        return v;
    };
    double margin = 0.5;
    if (std::isfinite(lo) && std::isfinite(hi)) margin = std::min(0.5, 0.25 * (hi - lo));
    double left, right;
    if (std::isfinite(lo) && std::isfinite(hi)) {
        left = lo + margin;
        right = hi - margin;
    } else {
        // walk outward from the finite end until the log modulus turns upward
        const double anchor = std::isfinite(hi) ? hi - margin : lo + margin;
        const double dir = std::isfinite(hi) ? -1.0 : 1.0;
        double step = 1.0, far = anchor + dir * step;
        double prev = phi(anchor);
        for (int it = 0; it < 60; ++it) {
            double cur = phi(far);
            if (!(cur < prev)) break;
            prev = cur;
            step *= 2.0;
            far = anchor + dir * step;
        }
        left = std::min(anchor, far);
        right = std::max(anchor, far);
    }
    // golden-section minimum of the real-axis log modulus
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = right - gr * (right - left), x2 = left + gr * (right - left);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 80 && right - left > 1e-6; ++it) {
        if (f1 < f2) {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - gr * (right - left);
            f1 = phi(x1);
        } else {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + gr * (right - left);
            f2 = phi(x2);
        }
    }
    const double c = 0.5 * (left + right);
    const double dist = std::min(c - lo, hi - c);

    using cd = std::complex<double>;
    auto log_integrand = [&](double t) {
        const cd sv(c, t);
        cd v = sv * lnz;
        for (double b : s.b_front) v += ln_gamma(cd(b) - sv);
        for (double a : s.a_front) v += ln_gamma(cd(1.0 - a) + sv);
        for (double b : s.b_back) v -= ln_gamma(cd(1.0 - b) + sv);
        for (double a : s.a_back) v -= ln_gamma(cd(a) - sv);
        return v;
    };
    // Log of the scale at t = 0 keeps exp() in range.
    const double ref = log_integrand(0.0).real();
    auto f = [&](double t, double& mag) {
        cd v = log_integrand(t);
        cd e = std::exp(v - ref);
        mag = std::abs(e);
        return e.real();
    };

    double h = std::min({0.5 * dist, 0.5, 1.0 / (std::abs(lnz) + 1.0)});
    // locate the truncation point on the coarse grid
    double mag = 0.0;
    double peak = 0.0;
    std::vector<double> vals;
    vals.push_back(f(0.0, mag));
    peak = mag;
    int below = 0;
    const int max_points = 400000;
    for (int k = 1; k < max_points; ++k) {
        double v = f(k * h, mag);
        vals.push_back(v);
        peak = std::max(peak, mag);
        if (mag < 1e-18 * peak) {
            if (++below >= 8) break;
        } else {
            below = 0;
        }
    }
    const std::size_t npts = vals.size();
    double sum = 0.5 * vals[0], abs_sum = 0.5 * std::abs(vals[0]);
    for (std::size_t k = 1; k < npts; ++k) {
        sum += vals[k];
        abs_sum += std::abs(vals[k]);
    }
    // |G| <= e^ref·h·Σ|f|/π; below the smallest subnormal there is nothing to refine
    if (ref + std::log(h * abs_sum / std::numbers::pi) < std::log(std::numeric_limits<double>::denorm_min()) - 10.0) {
        MeijerGResult res;
        res.value = 0.0;
        res.method = GMethod::contour;
        return res;
    }
    double integral = h * sum;
    double diff = std::abs(integral);
    bool converged = false;
    for (int level = 0; level < 10; ++level) {
        const double hh = 0.5 * h;
        double odd = 0.0;
        for (std::size_t k = 0; k + 1 < npts * (std::size_t(1) << level); ++k) {
            double v = f((2.0 * static_cast<double>(k) + 1.0) * hh, mag);
            odd += v;
            abs_sum += std::abs(v);
        }
        const double refined = 0.5 * integral + hh * odd;
        diff = std::abs(refined - integral);
        integral = refined;
        h = hh;
        if (diff <= 1e-13 * std::abs(integral) + 1e-15 * h * abs_sum) {
            converged = true;
            break;
        }
    }
    const double scale = std::exp(ref) / std::numbers::pi;
    MeijerGResult res;
    res.value = integral * scale;
    res.method = GMethod::contour;
    res.truncated = !converged;
    res.error_estimate = (diff + 1e-15 * h * abs_sum) * scale;
    return res;
}

}  // namespace detail

inline MeijerGResult meijer_g_eval(MeijerGSpec spec, GPath path = GPath::automatic) {
    detail::validate(spec);
    MeijerGSpec s = detail::reduce(std::move(spec));
    if (s.m() == 0)
        throw unsupported_parameters_error("meijer_g", "all b_front parameters cancelled: " + detail::describe(s));
    if (s.p() > s.q() || (s.p() == s.q() && s.z > 1.0)) s = detail::invert(s);
    detail::validate(s);

    const bool residue_ok = s.p() < s.q() || s.z < 1.0;
    const bool contour_ok = s.delta() > 0.0;

    if (path == GPath::residue) {
        if (!residue_ok)
            throw unsupported_parameters_error("meijer_g", "residue series diverges: " + detail::describe(s));
        return detail::residue_path(s);
    }
    if (path == GPath::contour) return detail::contour_path(s);

    if (residue_ok) {
        auto r = detail::residue_path(s);
        const double rel = r.error_estimate / std::max(std::abs(r.value), 1e-300);
        if ((!r.truncated && rel < detail::g_accept_rel_err) || !contour_ok) return r;
        auto c = detail::contour_path(s);
        if (c.truncated && !r.truncated && r.error_estimate < c.error_estimate) return r;
        return c;
    }
    if (contour_ok) return detail::contour_path(s);
    throw unsupported_parameters_error("meijer_g",
                                       "p == q, z == 1 and delta <= 0: " + detail::describe(s));
}

inline double meijer_g(const MeijerGSpec& spec) { return meijer_g_eval(spec).value; }

}  // namespace hybridlink::specfun
