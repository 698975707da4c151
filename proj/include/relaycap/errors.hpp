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

#ifndef RELAYCAP_ERRORS_HPP
#define RELAYCAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relaycap
{

// Base class for all library errors.
class Error : public std::runtime_error
{
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Block length does not exceed the memory of an impulse response (n <= m).
class InvalidBlockLengthError : public Error
{
  public:
    explicit InvalidBlockLengthError(const std::string &msg) : Error(msg) {}
};

// A noise spectrum came out non-positive in some band; the message names the
// offending band (1-indexed).
class IndefiniteNoiseError : public Error
{
  public:
    IndefiniteNoiseError(const std::string &msg, int band_1indexed) : Error(msg), band(band_1indexed) {}
    int band; // 1-indexed offending band
};

// A covariance matrix that must be positive definite is numerically singular.
class NumericalRankError : public Error
{
  public:
    explicit NumericalRankError(const std::string &msg) : Error(msg) {}
};

// An argument violates a documented precondition (bad sizes, negative powers, ...).
class InvalidArgumentError : public Error
{
  public:
    explicit InvalidArgumentError(const std::string &msg) : Error(msg) {}
};

// A signature-waveform cross-correlation profile leaves |rho(w)| > 1 somewhere.
class InvalidWaveformError : public Error
{
  public:
    explicit InvalidWaveformError(const std::string &msg) : Error(msg) {}
};

// A scenario/config file could not be parsed or fails validation.
class ConfigError : public Error
{
  public:
    explicit ConfigError(const std::string &msg) : Error(msg) {}
};

// An iterative solver failed to reach its stated tolerance.
class SolverError : public Error
{
  public:
    explicit SolverError(const std::string &msg) : Error(msg) {}
};

} // namespace relaycap

#endif // RELAYCAP_ERRORS_HPP
