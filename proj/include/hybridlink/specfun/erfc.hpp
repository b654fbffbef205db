#pragma once

#include <cmath>

namespace hybridlink::specfun {

inline double erfc(double x) { return std::erfc(x); }

struct series_result {
    double value;
    int terms;
    bool truncated;
};

// Maclaurin partial sums of erfc(√x) = 1 − (2/√π) Σ_j (−1)^j x^{j+1/2} / (j!(2j+1)).
// Accumulated in binary128 so the alternating sum keeps its digits up to x ≈ 25.
inline series_result erfc_sqrt_maclaurin(double x, int max_terms = 500) {
    using wide = __float128;
    const wide xw = x;
    wide term = 1;  // (−x)^j / j!
    wide sum = 0;
    int j = 0;
    bool truncated = true;
    for (; j < max_terms; ++j) {
        wide t = term / wide(2 * j + 1);
        sum += t;
        wide at = t < 0 ? -t : t;
        wide as = sum < 0 ? -sum : sum;
        if (j > x && at < wide(1e-14) * as) {
            truncated = false;
            ++j;
            break;
        }
        term *= -xw / wide(j + 1);
    }
    const double two_over_sqrt_pi = 1.1283791670955126;
    double v = static_cast<double>(wide(1) - wide(two_over_sqrt_pi) * wide(std::sqrt(x)) * sum);
    return {v, j, truncated};
}

}  // namespace hybridlink::specfun
