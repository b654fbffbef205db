#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "hybridlink/error.hpp"
#include "hybridlink/specfun/erfc.hpp"
#include "hybridlink/specfun/gamma.hpp"

namespace hybridlink::specfun {

inline constexpr double series_rel_tol = 1e-14;
inline constexpr int series_max_terms = 500;

template <class T>
struct pfq_sum {
    T value;
    T abs_max_term;  // largest |term|, for cancellation bookkeeping
    int terms;
    bool truncated;
};

// Σ_k ∏(a_i)_k / ∏(b_j)_k · x^k / k!. Stops once |term| < tol·|sum| while the
// terms are shrinking, or at the term cap.
template <class T>
inline pfq_sum<T> pfq_series(std::span<const T> a, std::span<const T> b, T x,
                             int max_terms = series_max_terms, double tol = series_rel_tol) {
    T term = 1;
    T sum = 1;
    T amax = 1;
    for (int k = 0; k < max_terms; ++k) {
        T ratio = x / T(k + 1);
        for (T ai : a) ratio *= (ai + T(k));
        for (T bj : b) ratio /= (bj + T(k));
        T next = term * ratio;
        if (next == T(0)) return {sum, amax, k + 1, false};
        sum += next;
        amax = std::max(amax, std::abs(next));
        if (std::abs(next) < T(tol) * std::abs(sum) && std::abs(ratio) < T(0.5))
            return {sum, amax, k + 2, false};
        term = next;
    }
    return {sum, amax, max_terms + 1, true};
}

namespace detail {

inline series_result gauss_2f1_direct(double a, double b, double c, double z) {
    double ab[2] = {a, b};
    double cc[1] = {c};
    auto r = pfq_series<double>(ab, cc, z);
    return {r.value, r.terms, r.truncated};
}

}  // namespace detail

// 2F1(a,b;c;z) on 0 ≤ z < 1. Above z = 1/2 the 1−z connection formula is used
// when c−a−b is not an integer.
inline series_result gauss_2f1_eval(double a, double b, double c, double z) {
    if (!(z >= 0.0 && z < 1.0))
        throw domain_error("gauss_2f1: z must lie in [0,1), got " + std::to_string(z));
    if (is_nonpositive_integer(c))
        throw domain_error("gauss_2f1: c must not be a non-positive integer, got " + std::to_string(c));
    const double s = c - a - b;
    if (z <= 0.5 || s == std::floor(s))
        return detail::gauss_2f1_direct(a, b, c, z);

    const double w = 1.0 - z;
    auto f1 = detail::gauss_2f1_direct(a, b, a + b - c + 1.0, w);
    auto f2 = detail::gauss_2f1_direct(c - a, c - b, s + 1.0, w);
    const auto lc = ln_gamma_signed(c);
    double t1 = 0.0, t2 = 0.0;
    {
        auto g = ln_gamma_signed(s);
        double den = rgamma(c - a) * rgamma(c - b);
        if (den != 0.0)
            t1 = lc.sign * g.sign * std::exp(lc.log_abs + g.log_abs) * den * f1.value;
    }
    {
        auto g = ln_gamma_signed(-s);
        double den = rgamma(a) * rgamma(b);
        if (den != 0.0)
            t2 = lc.sign * g.sign * std::exp(lc.log_abs + g.log_abs + s * std::log(w)) * den * f2.value;
    }
    return {t1 + t2, f1.terms + f2.terms, f1.truncated || f2.truncated};
}

inline double gauss_2f1(double a, double b, double c, double z) {
    return gauss_2f1_eval(a, b, c, z).value;
}

}  // namespace hybridlink::specfun
