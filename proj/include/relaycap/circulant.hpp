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
//
// Circulant channel/noise matrices and their DFT diagonalization.
//
// Conventions:
//  - The DFT is unitary, F(j,k) = exp(-2*pi*i*j*k/n) / sqrt(n), so Parseval
//    holds without band-dependent factors.
//  - A circulant built from taps h_0..h_m has first row
//    [h_0, 0, ..., 0, h_m, ..., h_2, h_1] and first column (the generator)
//    equal to the zero-padded taps. Its DFT eigenvalues are
//    H(w_i) = sum_k h_k exp(-2*pi*i*k*i/n).
//  - Noise circulants are built from the periodized autocorrelation (sum of
//    all shifts by n), which for n >= 2*i_max + 1 reduces to placing R[i] at
//    offsets +/- i.

#ifndef RELAYCAP_CIRCULANT_HPP
#define RELAYCAP_CIRCULANT_HPP

#include <vector>

#include <Eigen/Dense>

#include "relaycap/channel.hpp"

namespace relaycap
{

// n x n circulant matrix of the impulse response. Throws
// InvalidBlockLengthError if n <= h.memory(), InvalidArgumentError if the
// response is empty or all-zero.
Eigen::MatrixXcd build_circulant(const ImpulseResponse &h, int n);

// n x n circulant noise covariance from the periodized autocorrelation.
// Positivity of the eigenvalues is NOT checked here (see noise_spectrum).
Eigen::MatrixXd build_noise_circulant(const NoiseAutocorrelation &r, int n);

// DFT eigenvalues H(w_i), i = 0..n-1, of the circulant generator.
std::vector<cplx> transfer_spectrum(const ImpulseResponse &h, int n);

// Real DFT eigenvalues N(w_i) of the periodized-autocorrelation circulant.
// Throws IndefiniteNoiseError naming the first offending band (1-indexed)
// when an eigenvalue fails to be strictly positive; `label` names the noise
// process in that message.
std::vector<double> noise_spectrum(const NoiseAutocorrelation &r, int n, const char *label = "noise");

// Unitary DFT matrix F with F(j,k) = exp(-2*pi*i*j*k/n) / sqrt(n).
Eigen::MatrixXcd dft_matrix(int n);

// Diagonalize every link and noise process of `ch` into n parallel scalar
// channels with SNR-normalized gains a = |H|^2 / N. Enforces the block-length
// and noise-positivity invariants.
SubbandChannel subband_decompose(const CirculantChannel &ch);

// Time-domain circulant covariance F^H * diag(spectrum) * F for a power
// spectrum given per band (used to build CovarianceSet inputs that are
// diagonal in the DFT domain).
Eigen::MatrixXcd covariance_from_spectrum(const std::vector<cplx> &spectrum, int n);

} // namespace relaycap

#endif // RELAYCAP_CIRCULANT_HPP
