// SPDX-License-Identifier: Apache-2.0
//
// relaycap - capacity bounds for Gaussian relay channels with ISI and colored noise
// Copyright (C) 2026 relaycap contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RELAYCAP_CONSTANTS_HPP
#define RELAYCAP_CONSTANTS_HPP

namespace relaycap
{

// All internal rates are in nats per real dimension; conversion to bits is a
// presentation concern handled at the CLI layer.
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kPi = 3.14159265358979323846;

// Absolute tolerance on bisection variables (dual multipliers, water levels).
inline constexpr double kBisectionTolX = 1e-10;

// Tolerance on bisection residuals (power budgets, constraint slacks).
inline constexpr double kBisectionTolResidual = 1e-9;

// Diagonal jitter added once when a Cholesky factorization of a nominally PSD
// matrix fails; a second failure raises NumericalRankError.
inline constexpr double kCholeskyJitter = 1e-12;

// Largest block length accepted by the dense log-determinant oracle unless the
// caller raises the limit explicitly.
inline constexpr int kDefaultOracleLimit = 16;

// Default iteration count for outer scalarization (lambda) bisections.
inline constexpr int kDefaultLambdaIters = 60;

} // namespace relaycap

#endif // RELAYCAP_CONSTANTS_HPP
