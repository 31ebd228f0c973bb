// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

// Closed-form Bell-factor ingredients for the lossy two-mode squeezed
// vacuum: the alpha series, the beta factor and B_max = 2 sqrt(alpha^2 +
// max(alpha^2, beta^2)), with adaptive series truncation.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace cvbell::analytic {

inline constexpr double kSqueezingCap = 5.0;   // tanh(5) already ~0.9999
inline constexpr long kTermCap = 100000;
inline constexpr double kDefaultTol = 1e-12;

/// Full physical scenario: squeezing r (lambda = tanh r) and the two
/// beamsplitter reflectivities modeling channel loss.
struct ChannelParams {
    double r = 0.0;
    double lambda = 0.0;
    double rA = 0.0;
    double rB = 0.0;
};

struct SeriesResult {
    double value = 0.0;
    long terms_used = 0;
    double tail_estimate = 0.0;
};

struct BellResult {
    double alpha = 0.0;
    double beta = 0.0;
    double bmax = 0.0;
    bool violated = false;
    long terms_used = 0;
    double tail_estimate = 0.0;
};

inline double lambda_from_r(double r) {
    if (r < 0.0) throw domain_error("squeezing r must be >= 0");
    if (r > kSqueezingCap) throw domain_error("squeezing r exceeds the cap of 5");
    return std::tanh(r);
}

namespace detail {

inline void check_reflectivity(double x, const char* name) {
    if (x < 0.0 || x > 1.0)
        throw domain_error(std::string(name) + " must lie in [0, 1]");
}

inline void check_params(const ChannelParams& p) {
    if (p.lambda < 0.0 || p.lambda >= 1.0)
        throw domain_error("lambda must lie in [0, 1)");
    check_reflectivity(p.rA, "rA");
    check_reflectivity(p.rB, "rB");
}

inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace detail

inline ChannelParams params_from_r(double r, double rA, double rB) {
    ChannelParams p{r, lambda_from_r(r), rA, rB};
    detail::check_params(p);
    return p;
}

inline ChannelParams params_from_lambda(double lambda, double rA, double rB) {
    if (lambda < 0.0 || lambda >= 1.0) throw domain_error("lambda must lie in [0, 1)");
    ChannelParams p{std::atanh(lambda), lambda, rA, rB};
    detail::check_params(p);
    return p;
}

/// Literal per-mode sum Lambda_i(m) = sum_k C(m,2k) (2k+1)^(-1/2)
/// (R/sqrt(1-R^2))^(2m-4k), with 0^0 = 1. Diverges at R = 1 for m >= 1;
/// exposed for testing, the alpha series uses the regrouped stable form.
inline double capital_lambda(int m, double rI) {
    if (m < 0) throw domain_error("m must be >= 0");
    detail::check_reflectivity(rI, "rI");
    if (rI == 1.0 && m >= 1)
        throw divergence_error("capital_lambda diverges at R = 1 for m >= 1");
    const double x = (rI * rI) / (1.0 - rI * rI);  // (R/t)^2
    double sum = 0.0;
    for (int k = 0; 2 * k <= m; ++k)
        sum += std::exp(detail::log_choose(m, 2 * k)) / std::sqrt(2.0 * k + 1.0) *
               std::pow(x, m - 2 * k);
    return sum;
}

namespace detail {

// Regrouped per-mode factor F(m) = Lambda(m) t^(2m+1)
//   = sum_k C(m,2k) (2k+1)^(-1/2) R^(2(m-2k)) (1-R^2)^((4k+1)/2),
// finite at R = 1 and free of the huge-Lambda-times-tiny-prefactor
// cancellation. All terms are positive and log-concave in k, so the sum
// is taken outward from the peak and cut when terms stop contributing.
inline double series_factor(int m, double R) {
    const double t2 = 1.0 - R * R;
    if (R == 0.0) return (m % 2 == 0) ? 1.0 / std::sqrt(m + 1.0) : 0.0;
    if (t2 <= 0.0) return 0.0;
    const double logR2 = 2.0 * std::log(R);
    const double logt2 = std::log(t2);
    const int kmax = m / 2;
    auto log_term = [&](int k) {
        return log_choose(m, 2 * k) - 0.5 * std::log(2.0 * k + 1.0) +
               (m - 2 * k) * logR2 + (2.0 * k + 0.5) * logt2;
    };
    // binomial C(m,j) y^j peaks near j = m y/(1+y) with y = t^2/R^2
    int kc = static_cast<int>(std::lround(0.5 * m * t2));
    kc = std::clamp(kc, 0, kmax);
    double sum = 0.0;
    for (int k = kc; k >= 0; --k) {
        const double term = std::exp(log_term(k));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    for (int k = kc + 1; k <= kmax; ++k) {
        const double term = std::exp(log_term(k));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

}  // namespace detail

/// alpha = 2(1-lambda^2) sum_m (m+1) lambda^(2m+1) F_A(m) F_B(m).
/// Stops once 5 consecutive terms each move the partial sum by a relative
/// factor below tol, then validates by doubling the term count and
/// requiring agreement within 10 tol.
inline SeriesResult alpha_series(const ChannelParams& p, double tol = kDefaultTol) {
    detail::check_params(p);
    if (tol <= 0.0) throw config_error("tolerance must be > 0");
    const double lam = p.lambda;
    if (lam == 0.0) return {0.0, 0, 0.0};
    const double prefactor = 2.0 * (1.0 - lam * lam);
    const double lam2 = lam * lam;

    double sum = 0.0;
    double lam_pow = lam;  // lambda^(2m+1)
    int consecutive_small = 0;
    long stop_at = -1;
    double checkpoint = 0.0;
    long m = 0;
    for (; m < kTermCap; ++m) {
        const double term = (m + 1) * lam_pow * detail::series_factor(static_cast<int>(m), p.rA) *
                            detail::series_factor(static_cast<int>(m), p.rB);
        sum += term;
        lam_pow *= lam2;
        if (term == 0.0 || (sum > 0.0 && term < tol * sum))
            ++consecutive_small;
        else
            consecutive_small = 0;
        if (stop_at < 0) {
            if (consecutive_small >= 5) {
                checkpoint = sum;
                stop_at = 2 * (m + 1);
            }
        } else if (m + 1 >= stop_at) {
            if (std::abs(sum - checkpoint) <= 10.0 * tol * std::max(sum, 1e-300)) {
                SeriesResult res;
                res.value = prefactor * sum;
                res.terms_used = m + 1;
                res.tail_estimate = prefactor * std::abs(sum - checkpoint);
                return res;
            }
            // doubled run still moved the sum: restart the validation window
            checkpoint = sum;
            stop_at = 2 * (m + 1);
        }
    }
    throw convergence_error("alpha series did not converge within the term cap",
                            prefactor * sum, m);
}

/// beta = (1-lambda^2) / (1 - lambda^2 (1-2 rA^2)(1-2 rB^2)).
inline double beta(const ChannelParams& p) {
    detail::check_params(p);
    const double lam2 = p.lambda * p.lambda;
    return (1.0 - lam2) /
           (1.0 - lam2 * (1.0 - 2.0 * p.rA * p.rA) * (1.0 - 2.0 * p.rB * p.rB));
}

inline BellResult bmax_analytic(const ChannelParams& p, double tol = kDefaultTol) {
    const SeriesResult a = alpha_series(p, tol);
    BellResult res;
    res.alpha = a.value;
    res.beta = beta(p);
    res.terms_used = a.terms_used;
    res.tail_estimate = a.tail_estimate;
    const double a2 = res.alpha * res.alpha;
    const double b2 = res.beta * res.beta;
    res.bmax = 2.0 * std::sqrt(a2 + std::max(a2, b2));
    res.violated = res.bmax > 2.0;
    return res;
}

}  // namespace cvbell::analytic
