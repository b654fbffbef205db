#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "hybridlink/error.hpp"

namespace hybridlink {

// Zero-boresight, identical-jitter misalignment between a Gaussian beam and a
// circular receiver aperture.
struct PointingGeometry {
    double aperture_radius_m = 0.0;
    double beamwidth_m = 0.0;
    double jitter_std_m = 0.0;

    double v0 = 0.0;
    double a0 = 0.0;
    double w_leq_m = 0.0;
    double xi = 0.0;
    bool approximation_valid = false;  // beamwidth > 6 × aperture radius

    double xi2() const { return xi * xi; }

    static PointingGeometry make(double aperture_radius_m, double beamwidth_m, double jitter_std_m) {
        if (!(aperture_radius_m > 0.0) || !(beamwidth_m > 0.0) || !(jitter_std_m > 0.0))
            throw domain_error("PointingGeometry: radius, beamwidth and jitter must be positive");
        PointingGeometry g;
        g.aperture_radius_m = aperture_radius_m;
        g.beamwidth_m = beamwidth_m;
        g.jitter_std_m = jitter_std_m;
        const double pi = std::numbers::pi;
        g.v0 = std::sqrt(pi * aperture_radius_m * aperture_radius_m / (2.0 * beamwidth_m * beamwidth_m));
        const double e = std::erf(g.v0);
        g.a0 = e * e;
        const double w2 = std::sqrt(pi * g.a0) * beamwidth_m * beamwidth_m /
                          (2.0 * g.v0 * std::exp(-g.v0 * g.v0));
        g.w_leq_m = std::sqrt(w2);
        g.xi = g.w_leq_m / (2.0 * jitter_std_m);
        g.approximation_valid = beamwidth_m > 6.0 * aperture_radius_m;
        return g;
    }
};

}  // namespace hybridlink
