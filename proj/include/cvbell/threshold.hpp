// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

// Nonlocality-loss threshold R_max(r): bisection on B_max(R) - 2, the
// exponential fit formulas, and the reflectivity <-> fiber absorption
// coefficient conversion.

#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "analytic.hpp"
#include "errors.hpp"

namespace cvbell::threshold {

enum class Mode { symmetric, asymmetric };

/// symmetric: rA = rB = R (both parties far from the source);
/// asymmetric: rA = R, rB = 0 (Bob next to the source).
struct Scenario {
    Mode mode = Mode::symmetric;
    double r = 1.0;
};

struct ThresholdPoint {
    double r = 0.0;
    double r_max = 0.0;
    double bmax_at_threshold = 0.0;
    double fit_value = 0.0;
    double gamma_max = 0.0;
};

struct FitValue {
    double value = 0.0;
    bool in_validity = true;  // the fits hold for r >= 1.5
};

inline analytic::ChannelParams at_damping(const Scenario& s, double R) {
    return s.mode == Mode::symmetric ? analytic::params_from_r(s.r, R, R)
                                     : analytic::params_from_r(s.r, R, 0.0);
}

/// Exponential fit for the threshold: 1.64 e^-r (symmetric),
/// 1.2 e^-r (asymmetric). Valid for r >= 1.5; below that the value is
/// still returned but flagged.
inline FitValue fit_rmax(const Scenario& s) {
    if (s.r < 0.0) throw domain_error("squeezing r must be >= 0");
    const double coeff = s.mode == Mode::symmetric ? 1.64 : 1.2;
    return {coeff * std::exp(-s.r), s.r >= 1.5};
}

/// Dimensionless fiber absorption coefficient gamma = -1/2 ln(1 - R^2).
inline double gamma_from_R(double R) {
    if (R < 0.0 || R >= 1.0)
        throw domain_error("R must lie in [0, 1); R = 1 means infinite loss");
    return -0.5 * std::log1p(-R * R);
}

inline double R_from_gamma(double gamma) {
    if (gamma < 0.0) throw domain_error("gamma must be >= 0");
    return std::sqrt(-std::expm1(-2.0 * gamma));
}

/// Largest damping R for which B_max > 2, by bisection on
/// g(R) = B_max(R) - 2. A coarse 0.01-step scan brackets the root when the
/// full interval [0, 1] carries no sign change (B_max returns to exactly 2
/// at R = 1 in the symmetric case).
inline ThresholdPoint rmax(const Scenario& s, double tol = 1e-4,
                           double series_tol = analytic::kDefaultTol) {
    if (s.r <= 0.0) throw domain_error("threshold search needs r > 0");
    if (tol <= 0.0) throw config_error("tolerance must be > 0");
    auto g = [&](double R) {
        return analytic::bmax_analytic(at_damping(s, R), series_tol).bmax - 2.0;
    };
    const double g0 = g(0.0);
    if (g0 <= 1e-9)
        throw domain_error("state is never nonlocal: B_max(R=0) does not exceed 2");

    double lo = 0.0, hi = 1.0;
    double ghi = g(1.0);
    if (!(ghi < -1e-12)) {
        // scan for the first sign change
        bool found = false;
        std::ostringstream scan;
        double prev = 0.0, gprev = g0;
        for (double R = 0.01; R <= 1.0 + 1e-12; R += 0.01) {
            const double gv = g(std::min(R, 1.0));
            scan << "R=" << R << " g=" << gv << "; ";
            if (gv < -1e-12) {
                lo = prev;
                hi = std::min(R, 1.0);
                ghi = gv;
                found = true;
                break;
            }
            prev = R;
            gprev = gv;
        }
        (void)gprev;
        if (!found)
            throw bracketing_error("no sign change of B_max - 2 found in [0, 1]; scan: " +
                                   scan.str());
    }
    for (int it = 0; it < 60 && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    ThresholdPoint pt;
    pt.r = s.r;
    pt.r_max = 0.5 * (lo + hi);
    pt.bmax_at_threshold = g(pt.r_max) + 2.0;
    pt.fit_value = fit_rmax(s).value;
    pt.gamma_max = gamma_from_R(pt.r_max);
    return pt;
}

}  // namespace cvbell::threshold
