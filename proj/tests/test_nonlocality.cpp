// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <random>

#include "cvbell/analytic.hpp"
#include "cvbell/fock.hpp"
#include "cvbell/nonlocality.hpp"

using namespace cvbell;
using Catch::Approx;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

fock::CorrelationMatrix make_cm(const Matrix3d& v) {
    fock::CorrelationMatrix cm;
    cm.v = v;
    return cm;
}

fock::CorrelationMatrix fock_cm(double r, double R) {
    auto c = fock::FockCutoff(40);
    auto st = fock::lossy_state_purified(std::tanh(r), R, R, c);
    return fock::correlation_matrix(st, fock::pseudo_spin_ops(c));
}

Matrix3d random_rotation(std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = g(rng);
    Eigen::HouseholderQR<Matrix3d> qr(m);
    Matrix3d q = qr.householderQ();
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return q;
}

}  // namespace

TEST_CASE("jacobi 3x3 agrees with Eigen") {
    std::mt19937 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Matrix3d a;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
        a = (0.5 * (a + a.transpose())).eval();
        Vector3d vals;
        Matrix3d vecs;
        nonlocality::detail::jacobi_eig3(a, vals, vecs);
        // residual of the eigen decomposition
        CHECK((a * vecs - vecs * vals.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((vecs * vecs.transpose() - Matrix3d::Identity()).cwiseAbs().maxCoeff() <
              1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix3d> es(a);
        Vector3d sorted = vals;
        std::sort(sorted.data(), sorted.data() + 3);
        CHECK((sorted - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("horodecki criterion") {
    SECTION("maximally entangled correlation matrix") {
        auto res = nonlocality::horodecki_bmax(make_cm(Vector3d(1, -1, 1).asDiagonal()));
        CHECK(res.bmax == Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
        CHECK(res.u == Approx(1.0).margin(1e-12));
        CHECK(res.u_prime == Approx(1.0).margin(1e-12));
    }
    SECTION("classical parity correlation only") {
        auto res = nonlocality::horodecki_bmax(make_cm(Vector3d(0, 0, 1).asDiagonal()));
        CHECK(res.bmax == Approx(2.0).margin(1e-12));
        CHECK(res.u_prime == Approx(0.0).margin(1e-12));
    }
    SECTION("bmax is 2 sqrt(u + u') by construction") {
        auto res = nonlocality::horodecki_bmax(fock_cm(1.0, 0.2));
        CHECK(res.bmax ==
              Approx(2.0 * std::sqrt(res.u + res.u_prime)).margin(1e-12));
        CHECK(res.u >= res.u_prime);
        CHECK(res.u_prime >= 0.0);
    }
    SECTION("lossless NOPA at r = 1 matches the closed form") {
        auto res = nonlocality::horodecki_bmax(fock_cm(1.0, 0.0));
        auto an = analytic::bmax_analytic(analytic::params_from_r(1.0, 0.0, 0.0));
        CHECK(res.bmax == Approx(an.bmax).margin(1e-6));
    }
    SECTION("settings achieve the bound") {
        for (double R : {0.0, 0.2, 0.42}) {
            CAPTURE(R);
            auto cm = fock_cm(1.0, R);
            auto res = nonlocality::horodecki_bmax(cm);
            CHECK(nonlocality::chsh_value(cm, res.settings) ==
                  Approx(res.bmax).margin(1e-9));
        }
        // degenerate-spectrum cases too
        for (auto diag : {Vector3d(1, -1, 1), Vector3d(0, 0, 1), Vector3d(0.5, 0.5, 0.5)}) {
            auto cm = make_cm(diag.asDiagonal());
            auto res = nonlocality::horodecki_bmax(cm);
            CHECK(nonlocality::chsh_value(cm, res.settings) ==
                  Approx(res.bmax).margin(1e-9));
        }
    }
    SECTION("rotation invariance of the spectrum") {
        std::mt19937 rng(99);
        auto cm = fock_cm(1.0, 0.3);
        const double base = nonlocality::horodecki_bmax(cm).bmax;
        for (int trial = 0; trial < 50; ++trial) {
            Matrix3d oa = random_rotation(rng), ob = random_rotation(rng);
            auto rotated = make_cm(oa.transpose() * cm.v * ob);
            CHECK(nonlocality::horodecki_bmax(rotated).bmax ==
                  Approx(base).margin(1e-10));
        }
    }
    SECTION("non-finite entries rejected") {
        Matrix3d bad = Matrix3d::Zero();
        bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(nonlocality::horodecki_bmax(make_cm(bad)), domain_error);
    }
}

TEST_CASE("chsh value") {
    SECTION("textbook optimum in the 1-3 plane") {
        auto cm = make_cm(Vector3d(1, -1, 1).asDiagonal());
        const double s = 1.0 / std::sqrt(2.0);
        nonlocality::MeasurementSettings st;
        st.a = Vector3d(0, 0, 1);
        st.a_prime = Vector3d(1, 0, 0);
        st.b = Vector3d(s, 0, s);
        st.b_prime = Vector3d(-s, 0, s);
        CHECK(nonlocality::chsh_value(cm, st) ==
              Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
    }
    SECTION("degenerate settings stay classical") {
        auto cm = fock_cm(1.0, 0.1);
        nonlocality::MeasurementSettings st;
        st.a = st.a_prime = Vector3d(0, 0, 1);
        st.b = st.b_prime = Vector3d(0, 0, 1);
        CHECK(nonlocality::chsh_value(cm, st) <= 2.0 + 1e-12);
    }
    SECTION("non-unit vectors rejected") {
        auto cm = make_cm(Matrix3d::Identity());
        nonlocality::MeasurementSettings st;
        st.a = Vector3d(0, 0, 2);
        st.a_prime = st.b = st.b_prime = Vector3d(0, 0, 1);
        CHECK_THROWS_AS(nonlocality::chsh_value(cm, st), domain_error);
    }
}

TEST_CASE("random settings never beat the eigenvalue bound") {
    SECTION("classical parity matrix") {
        auto rep = nonlocality::verify_settings_optimal(
            make_cm(Vector3d(0, 0, 1).asDiagonal()), 1000);
        CHECK(rep.best_found <= 2.0 + 1e-9);
    }
    SECTION("maximally entangled matrix") {
        auto rep = nonlocality::verify_settings_optimal(
            make_cm(Vector3d(1, -1, 1).asDiagonal()), 1000);
        CHECK(rep.best_found <= 2.0 * std::sqrt(2.0) + 1e-9);
    }
    SECTION("lossy NOPA correlation matrix") {
        auto rep = nonlocality::verify_settings_optimal(fock_cm(1.0, 0.3), 10000);
        CHECK(rep.best_found <= rep.bmax + 1e-9);
        CHECK(rep.gap >= -1e-9);
    }
    SECTION("trials must be positive") {
        CHECK_THROWS_AS(
            nonlocality::verify_settings_optimal(make_cm(Matrix3d::Identity()), 0),
            config_error);
    }
}

TEST_CASE("tsirelson bound over physical states") {
    for (double r : {0.3, 1.0, 2.0})
        for (double R : {0.0, 0.3, 0.8}) {
            auto res = nonlocality::horodecki_bmax(fock_cm(r, R));
            CHECK(res.bmax <= 2.0 * std::sqrt(2.0) + 1e-9);
        }
}
