// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace cvbell {

/// A physical parameter is outside its admissible range.
class domain_error : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical configuration value (cutoff, tolerance, grid) is unusable.
class config_error : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// A quantity is infinite at the requested parameter point.
class divergence_error : public domain_error {
 public:
    using domain_error::domain_error;
};

/// A series or solver did not converge within its iteration budget.
/// Carries the partial result so callers can inspect how far it got.
class convergence_error : public std::runtime_error {
 public:
    convergence_error(const std::string& msg, double partial, long terms)
        : std::runtime_error(msg), partial_(partial), terms_(terms) {}

    double partial_sum() const { return partial_; }
    long terms() const { return terms_; }

 private:
    double partial_ = 0.0;
    long terms_ = 0;
};

/// No sign change could be bracketed for a root find.
class bracketing_error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

}  // namespace cvbell
