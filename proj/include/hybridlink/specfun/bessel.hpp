#pragma once

#include <cmath>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "hybridlink/error.hpp"

namespace hybridlink::specfun {

inline double bessel_k(double v, double x) {
    if (!(x > 0.0))
        throw domain_error("bessel_k: x must be positive, got " + std::to_string(x));
    return boost::math::cyl_bessel_k(std::abs(v), x);
}

}  // namespace hybridlink::specfun
