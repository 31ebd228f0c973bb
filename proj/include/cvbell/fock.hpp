// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force truncated-Fock-space construction of the two-mode squeezed
// vacuum, its lossy descendants and the pseudo-spin operators.  Everything
// here is plain matrix arithmetic on a finite grid; it serves as the ground
// truth the closed-form routines in analytic.hpp are checked against.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace cvbell::fock {

using Eigen::MatrixXcd;
using Eigen::Matrix3d;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

/// Single-mode truncation dimension. Kept even so every |2m>,|2m+1> pair
/// used by the pseudo-spin operators is complete inside the grid.
struct FockCutoff {
    int dim;

    explicit FockCutoff(int d) : dim(d) {
        if (d < 2) throw config_error("Fock cutoff must be at least 2");
        if (d % 2 != 0) throw config_error("Fock cutoff must be even");
    }
};

/// Even dimension keeping the geometric tail lambda^(2 dim) below ~1e-9
/// for squeezing up to r = 3.
inline FockCutoff default_cutoff(double r) {
    double nbar = std::sinh(r) * std::sinh(r);
    int d = std::max(40, static_cast<int>(std::ceil(10.0 * (1.0 + nbar))));
    if (d % 2 != 0) ++d;
    return FockCutoff(d);
}

/// Density operator on a finite Fock grid. trace_deficit is the probability
/// weight lost to truncation; it is tracked, never renormalized away.
struct TruncatedState {
    std::vector<int> dims;
    MatrixXcd matrix;
    double trace_deficit = 0.0;
};

struct PseudoSpinSet {
    MatrixXcd s1, s2, s3;
    int dim = 0;
};

/// V_ij = Tr(rho S_i^A S_j^B). imag_residue reports the largest imaginary
/// part dropped when taking the real entries (truncation diagnostic).
struct CorrelationMatrix {
    Matrix3d v;
    double imag_residue = 0.0;
};

namespace detail {

inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double sqrt_choose(int n, int k) {
    return std::exp(0.5 * log_choose(n, k));
}

inline void check_lambda(double lambda) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw domain_error("lambda must lie in [0, 1)");
}

inline void check_reflectivity(double r, const char* name) {
    if (r < 0.0 || r > 1.0)
        throw domain_error(std::string(name) + " must lie in [0, 1]");
}

inline double clamp_deficit(double d) { return d < 0.0 ? 0.0 : d; }

}  // namespace detail

/// NOPA state (1-lambda^2) sum lambda^(m+n) |m,m><n,n| on the grid.
inline TruncatedState tmsv_state(double lambda, FockCutoff cutoff) {
    detail::check_lambda(lambda);
    const int d = cutoff.dim;
    TruncatedState st;
    st.dims = {d, d};
    st.matrix = MatrixXcd::Zero(d * d, d * d);
    const double norm = 1.0 - lambda * lambda;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            st.matrix(m * d + m, n * d + n) = norm * std::pow(lambda, m + n);
    st.trace_deficit = std::pow(lambda, 2 * d);
    return st;
}

/// Lossy two-mode state evaluated term by term from the closed-form
/// solution of the damping master equation. The per-mode factor is
/// regrouped as sqrt(C(m,k)C(n,k)) t^(m+n-2k) R^(2k) with t = sqrt(1-R^2),
/// so R = 1 is finite without special-casing.
inline TruncatedState lossy_state_direct(double lambda, double rA, double rB,
                                         FockCutoff cutoff) {
    detail::check_lambda(lambda);
    detail::check_reflectivity(rA, "rA");
    detail::check_reflectivity(rB, "rB");
    const int d = cutoff.dim;
    const double tA = std::sqrt(1.0 - rA * rA);
    const double tB = std::sqrt(1.0 - rB * rB);
    TruncatedState st;
    st.dims = {d, d};
    st.matrix = MatrixXcd::Zero(d * d, d * d);
    const double norm = 1.0 - lambda * lambda;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const double base = norm * std::pow(lambda, m + n);
            if (base == 0.0 && (m + n) > 0) continue;
            const int kmax = std::min(m, n);
            for (int k = 0; k <= kmax; ++k) {
                const double fa = detail::sqrt_choose(m, k) * detail::sqrt_choose(n, k) *
                                  std::pow(tA, m + n - 2 * k) * std::pow(rA, 2 * k);
                if (fa == 0.0) continue;
                for (int l = 0; l <= kmax; ++l) {
                    const double fb = detail::sqrt_choose(m, l) * detail::sqrt_choose(n, l) *
                                      std::pow(tB, m + n - 2 * l) * std::pow(rB, 2 * l);
                    if (fb == 0.0) continue;
                    st.matrix((m - k) * d + (m - l), (n - k) * d + (n - l)) += base * fa * fb;
                }
            }
        }
    }
    st.trace_deficit = detail::clamp_deficit(1.0 - st.matrix.trace().real());
    return st;
}

/// Independent oracle for lossy_state_direct: purify by mixing each arm
/// with a vacuum ancilla at a beamsplitter (transmission sqrt(1-R^2),
/// reflection R, real amplitudes) and trace out both ancillas.
inline TruncatedState lossy_state_purified(double lambda, double rA, double rB,
                                           FockCutoff cutoff) {
    detail::check_lambda(lambda);
    detail::check_reflectivity(rA, "rA");
    detail::check_reflectivity(rB, "rB");
    const int d = cutoff.dim;
    if (d > 128)
        throw config_error("purified construction supports dim <= 128 "
                           "(four-mode intermediate)");
    const double tA = std::sqrt(1.0 - rA * rA);
    const double tB = std::sqrt(1.0 - rB * rB);
    // |n>|0> -> sum_j sqrt(C(n,j)) t^(n-j) R^j |n-j>|j>
    auto bs_amp = [](int n, int j, double t, double R) {
        return detail::sqrt_choose(n, j) * std::pow(t, n - j) * std::pow(R, j);
    };
    std::vector<double> c(d);
    const double norm = std::sqrt(1.0 - lambda * lambda);
    for (int m = 0; m < d; ++m) c[m] = norm * std::pow(lambda, m);

    TruncatedState st;
    st.dims = {d, d};
    st.matrix = MatrixXcd::Zero(d * d, d * d);
    std::vector<int> idx(d);
    std::vector<double> amp(d);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
            // fixed ancilla occupation (k, l): the kept modes stay pure
            int count = 0;
            for (int m = std::max(k, l); m < d; ++m) {
                const double a = c[m] * bs_amp(m, k, tA, rA) * bs_amp(m, l, tB, rB);
                if (a == 0.0) continue;
                idx[count] = (m - k) * d + (m - l);
                amp[count] = a;
                ++count;
            }
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < count; ++j)
                    st.matrix(idx[i], idx[j]) += amp[i] * amp[j];
        }
    }
    st.trace_deficit = detail::clamp_deficit(1.0 - st.matrix.trace().real());
    return st;
}

/// Joint (Alice, Eve) state when losses act on Bob's arm only, evaluated
/// through the exchange rule applied to the closed-form lossy solution.
/// The reflected-port sign is fixed to the positive beamsplitter convention
/// so the result matches eve_state_purified elementwise.
inline TruncatedState eve_state(double lambda, double rB, FockCutoff cutoff) {
    detail::check_lambda(lambda);
    detail::check_reflectivity(rB, "rB");
    const int d = cutoff.dim;
    const double t = std::sqrt(1.0 - rB * rB);
    TruncatedState st;
    st.dims = {d, d};
    st.matrix = MatrixXcd::Zero(d * d, d * d);
    const double norm = 1.0 - lambda * lambda;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const double base = norm * std::pow(lambda, m + n);
            if (base == 0.0 && (m + n) > 0) continue;
            const int lmax = std::min(m, n);
            for (int l = 0; l <= lmax; ++l) {
                const double f = detail::sqrt_choose(m, l) * detail::sqrt_choose(n, l) *
                                 std::pow(rB, m + n - 2 * l) * std::pow(t, 2 * l);
                if (f == 0.0) continue;
                st.matrix(m * d + (m - l), n * d + (n - l)) += base * f;
            }
        }
    }
    st.trace_deficit = detail::clamp_deficit(1.0 - st.matrix.trace().real());
    return st;
}

/// Oracle for eve_state: three-mode purification (NOPA plus Bob's vacuum
/// ancilla, beamsplitter on Bob's arm), then trace out Bob.
inline TruncatedState eve_state_purified(double lambda, double rB, FockCutoff cutoff) {
    detail::check_lambda(lambda);
    detail::check_reflectivity(rB, "rB");
    const int d = cutoff.dim;
    const double t = std::sqrt(1.0 - rB * rB);
    std::vector<double> c(d);
    const double norm = std::sqrt(1.0 - lambda * lambda);
    for (int m = 0; m < d; ++m) c[m] = norm * std::pow(lambda, m);

    TruncatedState st;
    st.dims = {d, d};
    st.matrix = MatrixXcd::Zero(d * d, d * d);
    std::vector<int> idx(d);
    std::vector<double> amp(d);
    for (int b = 0; b < d; ++b) {
        // Bob keeps b photons; Eve holds the reflected l = m - b
        int count = 0;
        for (int m = b; m < d; ++m) {
            const int l = m - b;
            const double a = c[m] * detail::sqrt_choose(m, l) * std::pow(t, b) *
                             std::pow(rB, l);
            if (a == 0.0) continue;
            idx[count] = m * d + l;
            amp[count] = a;
            ++count;
        }
        for (int i = 0; i < count; ++i)
            for (int j = 0; j < count; ++j)
                st.matrix(idx[i], idx[j]) += amp[i] * amp[j];
    }
    st.trace_deficit = detail::clamp_deficit(1.0 - st.matrix.trace().real());
    return st;
}

/// Spin-1/2 realization on Fock-level pairs: S1 couples |2m> <-> |2m+1>,
/// S2 = i(|2m+1><2m| - |2m><2m+1|), S3 = even/odd parity pairs.
inline PseudoSpinSet pseudo_spin_ops(FockCutoff cutoff) {
    const int d = cutoff.dim;
    PseudoSpinSet ps;
    ps.dim = d;
    ps.s1 = MatrixXcd::Zero(d, d);
    ps.s2 = MatrixXcd::Zero(d, d);
    ps.s3 = MatrixXcd::Zero(d, d);
    for (int m = 0; 2 * m + 1 < d; ++m) {
        const int e = 2 * m, o = 2 * m + 1;
        ps.s1(e, o) = 1.0;
        ps.s1(o, e) = 1.0;
        ps.s2(o, e) = cplx(0.0, 1.0);
        ps.s2(e, o) = cplx(0.0, -1.0);
        ps.s3(e, e) = 1.0;
        ps.s3(o, o) = -1.0;
    }
    return ps;
}

inline CorrelationMatrix correlation_matrix(const TruncatedState& state,
                                            const PseudoSpinSet& spins) {
    if (state.dims.size() != 2 || state.dims[0] != spins.dim || state.dims[1] != spins.dim)
        throw config_error("state must be two-mode with both dims equal to the spin dim");
    const int d = spins.dim;
    const MatrixXcd* ops[3] = {&spins.s1, &spins.s2, &spins.s3};

    // nonzero entries of each spin matrix (at most one per row)
    struct Entry { int row, col; cplx val; };
    std::vector<Entry> nz[3];
    for (int i = 0; i < 3; ++i)
        for (int r = 0; r < d; ++r)
            for (int cidx = 0; cidx < d; ++cidx)
                if ((*ops[i])(r, cidx) != 0.0) nz[i].push_back({r, cidx, (*ops[i])(r, cidx)});

    CorrelationMatrix out;
    out.imag_residue = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // Tr(rho (S_i x S_j)) = sum rho[(a,b),(a',b')] S_i[a',a] S_j[b',b]
            cplx tr = 0.0;
            for (const auto& ea : nz[i])
                for (const auto& eb : nz[j])
                    tr += state.matrix(ea.col * d + eb.col, ea.row * d + eb.row) *
                          ea.val * eb.val;
            out.v(i, j) = tr.real();
            out.imag_residue = std::max(out.imag_residue, std::abs(tr.imag()));
        }
    }
    return out;
}

/// Mean photon number in one mode of a two-mode state.
inline double mean_photon(const TruncatedState& state, int mode) {
    const int dA = state.dims.at(0), dB = state.dims.at(1);
    double n = 0.0;
    for (int a = 0; a < dA; ++a)
        for (int b = 0; b < dB; ++b)
            n += (mode == 0 ? a : b) * state.matrix(a * dB + b, a * dB + b).real();
    return n;
}

namespace detail {

// Connected components of the sparsity pattern of a Hermitian matrix.
// The states built above are block diagonal in the photon-number offset,
// so eigenvalues come out of many small blocks instead of one dense solve.
inline std::vector<std::vector<int>> sparsity_components(const MatrixXcd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(i, j) != 0.0 || m(j, i) != 0.0) parent[find(i)] = find(j);
    std::vector<std::vector<int>> comps(n);
    for (int i = 0; i < n; ++i) comps[find(i)].push_back(i);
    std::erase_if(comps, [](const auto& c) { return c.empty(); });
    return comps;
}

}  // namespace detail

/// Trace distance (1/2)||rho1 - rho2||_1 between Hermitian operators.
inline double trace_distance(const MatrixXcd& a, const MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw config_error("trace_distance: dimension mismatch");
    MatrixXcd diff = a - b;
    diff = 0.5 * (diff + diff.adjoint().eval());
    double sum = 0.0;
    for (const auto& comp : detail::sparsity_components(diff)) {
        if (comp.size() == 1) {
            sum += std::abs(diff(comp[0], comp[0]).real());
            continue;
        }
        MatrixXcd sub(comp.size(), comp.size());
        for (size_t i = 0; i < comp.size(); ++i)
            for (size_t j = 0; j < comp.size(); ++j)
                sub(i, j) = diff(comp[i], comp[j]);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
        sum += es.eigenvalues().cwiseAbs().sum();
    }
    return 0.5 * sum;
}

inline double trace_distance(const TruncatedState& a, const TruncatedState& b) {
    return trace_distance(a.matrix, b.matrix);
}

/// Smallest eigenvalue of a Hermitian operator (positivity diagnostic),
/// computed per sparsity block like trace_distance.
inline double min_eigenvalue(const MatrixXcd& m) {
    MatrixXcd h = 0.5 * (m + m.adjoint().eval());
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& comp : detail::sparsity_components(h)) {
        if (comp.size() == 1) {
            lo = std::min(lo, h(comp[0], comp[0]).real());
            continue;
        }
        MatrixXcd sub(comp.size(), comp.size());
        for (size_t i = 0; i < comp.size(); ++i)
            for (size_t j = 0; j < comp.size(); ++j)
                sub(i, j) = h(comp[i], comp[j]);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

/// Largest elementwise deviation from Hermiticity.
inline double hermiticity_residue(const MatrixXcd& m) {
    return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

}  // namespace cvbell::fock
