#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hybridlink::specfun {

struct quad_result {
    double value;
    double error;
};

template <class F>
inline quad_result integrate(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 15) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
    return {v, err};
}

// ∫_lo^hi f(x) dx for integrands living on a logarithmic scale (densities of
// SNRs). Works in u = ln x one decade at a time, walking outward from `scale`
// until a decade contributes nothing relative to the running total.
// lo may be 0 and hi may be +inf.
template <class F>
inline quad_result integrate_log_axis(F&& f, double lo, double hi, double scale, double rel_tol = 1e-12) {
    const double ln10 = std::log(10.0);
    const double ulo = lo > 0.0 ? std::log(lo) : std::log(scale) - 80.0 * ln10;
    const double uhi = std::isfinite(hi) ? std::log(hi) : std::log(scale) + 40.0 * ln10;
    if (!(uhi > ulo)) return {0.0, 0.0};
    auto g = [&](double u) {
        const double x = std::exp(u);
        return f(x) * x;
    };
    double u0 = std::clamp(std::log(scale), ulo, uhi);
    double total = 0.0, abs_total = 0.0, err = 0.0;
    auto chunk = [&](double a, double b) {
        double e = 0.0;
        double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 12, rel_tol, &e);
        total += v;
        abs_total += std::abs(v);
        err += e;
        return std::abs(v);
    };
    const double negligible = 1e-17;
    int quiet = 0;
    for (double a = u0; a < uhi; a += ln10) {
        double c = chunk(a, std::min(a + ln10, uhi));
        quiet = (c <= negligible * abs_total) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    quiet = 0;
    for (double b = u0; b > ulo; b -= ln10) {
        double c = chunk(std::max(b - ln10, ulo), b);
        quiet = (c <= negligible * abs_total) ? quiet + 1 : 0;
        if (quiet >= 2) break;
    }
    return {total, err};
}

}  // namespace hybridlink::specfun
