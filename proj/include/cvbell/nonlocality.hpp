// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

// Horodecki criterion and the explicit CHSH functional over measurement
// directions: B_max = 2 sqrt(u + u') from the two largest eigenvalues of
// U = V^T V, together with settings that achieve it.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "errors.hpp"
#include "fock.hpp"

namespace cvbell::nonlocality {

using Eigen::Matrix3d;
using Eigen::Vector3d;

struct MeasurementSettings {
    Vector3d a, a_prime, b, b_prime;
};

struct HorodeckiResult {
    double bmax = 0.0;
    double u = 0.0;        // largest eigenvalue of V^T V
    double u_prime = 0.0;  // second largest
    MeasurementSettings settings;
};

struct OptimalityReport {
    double bmax = 0.0;
    double best_found = 0.0;
    double gap = 0.0;  // bmax - best_found
    int trials = 0;
};

namespace detail {

// Cyclic Jacobi for a symmetric 3x3 matrix; deterministic rotation order,
// 50-sweep cap. Columns of vecs are the eigenvectors.
inline void jacobi_eig3(const Matrix3d& a_in, Vector3d& vals, Matrix3d& vecs) {
    Matrix3d a = 0.5 * (a_in + a_in.transpose());
    vecs.setIdentity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30 * (1.0 + a.diagonal().cwiseAbs().maxCoeff())) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Matrix3d rot = Matrix3d::Identity();
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = s;
                rot(q, p) = -s;
                a = rot.transpose() * a * rot;
                vecs = vecs * rot;
            }
        }
    }
    vals = a.diagonal();
}

// Fixed sign convention so degenerate eigenplanes still give
// reproducible settings: first significant component made positive.
inline Vector3d orient(Vector3d v) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0.0) v = -v;
            break;
        }
    }
    return v;
}

inline Vector3d any_unit_orthogonal(const Vector3d& v) {
    Vector3d trial = std::abs(v.x()) < 0.9 ? Vector3d::UnitX() : Vector3d::UnitY();
    Vector3d w = trial - trial.dot(v) * v;
    return w.normalized();
}

inline void check_unit(const Vector3d& v, const char* name) {
    if (std::abs(v.norm() - 1.0) > 1e-9)
        throw domain_error(std::string("measurement vector ") + name + " is not unit");
}

}  // namespace detail

/// CHSH combination |a.Vb + a'.Vb + a.Vb' - a'.Vb'| at explicit settings.
inline double chsh_value(const fock::CorrelationMatrix& cm,
                         const MeasurementSettings& s) {
    detail::check_unit(s.a, "a");
    detail::check_unit(s.a_prime, "a'");
    detail::check_unit(s.b, "b");
    detail::check_unit(s.b_prime, "b'");
    const Matrix3d& v = cm.v;
    return std::abs(s.a.dot(v * s.b) + s.a_prime.dot(v * s.b) +
                    s.a.dot(v * s.b_prime) - s.a_prime.dot(v * s.b_prime));
}

/// Maximal CHSH value 2 sqrt(u + u') plus settings that achieve it: Bob's
/// vectors lie in the plane of the two dominant right singular directions
/// of V, Alice's along their images.
inline HorodeckiResult horodecki_bmax(const fock::CorrelationMatrix& cm) {
    const Matrix3d& v = cm.v;
    if (!v.allFinite()) throw domain_error("correlation matrix has non-finite entries");
    const Matrix3d u_mat = v.transpose() * v;
    Vector3d vals;
    Matrix3d vecs;
    detail::jacobi_eig3(u_mat, vals, vecs);
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return vals[i] > vals[j]; });

    HorodeckiResult res;
    res.u = std::max(vals[order[0]], 0.0);
    res.u_prime = std::max(vals[order[1]], 0.0);
    res.bmax = 2.0 * std::sqrt(res.u + res.u_prime);

    const Vector3d c = detail::orient(vecs.col(order[0]).normalized());
    Vector3d cp = vecs.col(order[1]).normalized();
    cp = detail::orient((cp - cp.dot(c) * c).normalized());

    const double total = res.u + res.u_prime;
    double cos_t = 1.0, sin_t = 0.0;
    if (total > 1e-300) {
        cos_t = std::sqrt(res.u / total);
        sin_t = std::sqrt(res.u_prime / total);
    }
    MeasurementSettings& s = res.settings;
    s.b = cos_t * c + sin_t * cp;
    s.b_prime = cos_t * c - sin_t * cp;
    const Vector3d vc = v * c;
    const Vector3d vcp = v * cp;
    s.a = vc.norm() > 1e-14 ? Vector3d(vc.normalized()) : Vector3d::UnitZ();
    s.a_prime = vcp.norm() > 1e-14 ? Vector3d(vcp.normalized())
                                   : detail::any_unit_orthogonal(s.a);
    return res;
}

/// Random-search subordination check: no sampled quadruple of unit vectors
/// may beat the eigenvalue bound.
inline OptimalityReport verify_settings_optimal(const fock::CorrelationMatrix& cm,
                                                int trials,
                                                unsigned seed = 0x5eed) {
    if (trials < 1) throw config_error("trials must be >= 1");
    const HorodeckiResult h = horodecki_bmax(cm);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&] {
        Vector3d v;
        do {
            v = Vector3d(gauss(rng), gauss(rng), gauss(rng));
        } while (v.norm() < 1e-6);
        return Vector3d(v.normalized());
    };
    OptimalityReport rep;
    rep.bmax = h.bmax;
    rep.trials = trials;
    for (int i = 0; i < trials; ++i) {
        MeasurementSettings s{random_unit(), random_unit(), random_unit(), random_unit()};
        rep.best_found = std::max(rep.best_found, chsh_value(cm, s));
    }
    rep.gap = rep.bmax - rep.best_found;
    return rep;
}

}  // namespace cvbell::nonlocality
