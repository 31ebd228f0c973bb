// Copyright 2026 The cvbell Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "analytic.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "nonlocality.hpp"
#include "threshold.hpp"
