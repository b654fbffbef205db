#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hybridlink/error.hpp"

namespace hybridlink::specfun {

inline double ln_gamma(double x) {
    if (!(x > 0.0))
        throw domain_error("ln_gamma: argument must be positive, got " + std::to_string(x));
    return std::lgamma(x);
}

// log|Γ(x)| with the sign of Γ(x). sign == 0 marks a pole (x a non-positive
// integer), in which case 1/Γ(x) == 0.
template <class T>
struct signed_log {
    T log_abs;
    int sign;
};

template <class T>
inline bool is_nonpositive_integer(T x) {
    return x <= T(0) && x == std::floor(x);
}

template <class T>
inline signed_log<T> ln_gamma_signed(T x) {
    if (is_nonpositive_integer(x))
        return {std::numeric_limits<T>::infinity(), 0};
    T lg = std::lgamma(x);
    int sign = 1;
    if (x < T(0)) {
        long long fl = static_cast<long long>(std::floor(x));
        sign = (fl % 2 == 0) ? 1 : -1;
    }
    return {lg, sign};
}

// 1/Γ(x), exact zero at the poles.
template <class T>
inline T rgamma(T x) {
    auto s = ln_gamma_signed(x);
    if (s.sign == 0)
        return T(0);
    return T(s.sign) * std::exp(-s.log_abs);
}

namespace detail {

inline std::complex<double> ln_gamma_stirling(std::complex<double> z) {
    // Bernoulli B_{2k} / (2k (2k-1))
    static constexpr double c[] = {
        1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,      -1.0 / 1680.0,
        1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,       -3617.0 / 122400.0,
    };
    const std::complex<double> zi = 1.0 / z;
    const std::complex<double> zi2 = zi * zi;
    std::complex<double> sum = 0.0;
    std::complex<double> p = zi;
    for (double ck : c) {
        sum += ck * p;
        p *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + sum;
}

// log(sin(pi z)) without overflow for large |Im z|; branch is irrelevant
// because callers only exponentiate.
inline std::complex<double> ln_sin_pi(std::complex<double> z) {
    constexpr double pi = std::numbers::pi;
    const std::complex<double> i(0.0, 1.0);
    if (std::abs(z.imag()) < 30.0)
        return std::log(std::sin(pi * z));
    if (z.imag() > 0.0)
        return -i * pi * z - std::log(2.0 * i) + std::log(1.0 - std::exp(2.0 * i * pi * z));
    return i * pi * z - std::log(-2.0 * i) + std::log(1.0 - std::exp(-2.0 * i * pi * z));
}

}  // namespace detail

// Complex log-gamma. Only exp() of the result is meaningful to callers, so
// the imaginary part is reported modulo 2π.
inline std::complex<double> ln_gamma(std::complex<double> z) {
    if (z.real() < 0.5)
        return std::log(std::numbers::pi) - detail::ln_sin_pi(z) - ln_gamma(1.0 - z);
    if (std::abs(z) >= 15.0)
        return detail::ln_gamma_stirling(z);
    std::complex<double> prod = 1.0;
    std::complex<double> w = z;
    while (std::abs(w) < 15.0) {
        prod *= w;
        w += 1.0;
    }
    return detail::ln_gamma_stirling(w) - std::log(prod);
}

// Γ(a, x) for a > 0.
inline double upper_incomplete_gamma(double a, double x) {
    if (!(a > 0.0))
        throw domain_error("upper_incomplete_gamma: a must be positive, got " + std::to_string(a));
    if (!(x >= 0.0))
        throw domain_error("upper_incomplete_gamma: x must be non-negative, got " + std::to_string(x));
    if (x == 0.0)
        return std::tgamma(a);
    return boost::math::tgamma(a, x);
}

namespace detail {

// Continued fraction for Γ(a,x), modified Lentz; good for x >~ 1, any real a.
inline double upper_gamma_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

}  // namespace detail

// Γ(a, x) continued analytically to a ≤ 0 (x > 0).
inline double upper_incomplete_gamma_extended(double a, double x) {
    if (!(x > 0.0))
        throw domain_error("upper_incomplete_gamma_extended: x must be positive, got " + std::to_string(x));
    if (a > 0.0)
        return boost::math::tgamma(a, x);
    if (x >= 1.5)
        return detail::upper_gamma_cf(a, x);
    // Downward recurrence Γ(s,x) = (Γ(s+1,x) - x^s e^{-x}) / s from s0 ∈ (0,1] or s0 = 0.
    const double fl = std::floor(a);
    double s = a - fl;  // fractional part in [0,1)
    int steps = static_cast<int>(-fl);
    double g;
    if (s == 0.0) {
        g = boost::math::expint(1, x);  // Γ(0,x) = E1(x)
    } else {
        g = boost::math::tgamma(s, x);
    }
    const double emx = std::exp(-x);
    for (int k = 0; k < steps; ++k) {
        s -= 1.0;
        g = (g - std::pow(x, s) * emx) / s;
    }
    return g;
}

}  // namespace hybridlink::specfun
