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
// Domain types for the three-node relay network
//
//            relay (R)
//           /        \
//   source (S) ----- destination (D)
//
// Each link is a linear time-invariant channel with finite memory; receiver
// noise is stationary Gaussian with a finite-support autocorrelation. All
// types here are immutable values after construction and every operation on
// them is a pure function, so concurrent use needs no synchronization.

#ifndef RELAYCAP_CHANNEL_HPP
#define RELAYCAP_CHANNEL_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace relaycap
{

using cplx = std::complex<double>;

// Finite impulse response h_0..h_m of one link (dimensionless amplitude).
struct ImpulseResponse
{
    std::vector<cplx> taps; // length m+1; at least one tap nonzero

    int memory() const
    {
        return static_cast<int>(taps.size()) - 1;
    }
};

// Even real autocorrelation R[0..i_max] of a stationary noise process
// (power units). R[i] applies at lags +i and -i.
struct NoiseAutocorrelation
{
    std::vector<double> lags; // R[0..i_max]; R[0] > 0

    int support() const
    {
        return static_cast<int>(lags.size()) - 1;
    }

    static NoiseAutocorrelation white(double power = 1.0)
    {
        return NoiseAutocorrelation{{power}};
    }
};

// An n-block circular model of the full network: three links plus the two
// receiver noise processes. Positive semidefiniteness of the noise is checked
// when the circulant matrices are actually built.
struct CirculantChannel
{
    int n = 0; // block length; must exceed every memory/support
    ImpulseResponse h_sr, h_sd, h_rd;
    NoiseAutocorrelation noise_r, noise_d;
};

// Frequency-domain description after DFT diagonalization: n parallel scalar
// relay channels. The a gains are SNR-normalized, a = |H|^2 / N, so that a
// transmit power P yields receive SNR a*P directly.
struct SubbandChannel
{
    int n = 0;
    std::vector<double> a_sr, a_sd, a_rd; // finite, >= 0

    // Raw spectra (optional; populated by subband_decompose).
    std::vector<cplx> h_sr, h_sd, h_rd; // H_q(w_i)
    std::vector<double> noise_r, noise_d; // N_q(w_i) > 0

    // Convenience constructor for synthetic flat/per-band gain profiles with
    // unit noise spectra.
    static SubbandChannel from_gains(std::vector<double> sr, std::vector<double> sd, std::vector<double> rd);
};

// Time-domain input covariances of the source and relay blocks plus their
// cross-covariance. The stacked 2n x 2n joint matrix must be Hermitian PSD.
struct CovarianceSet
{
    Eigen::MatrixXcd sigma_s;  // n x n Hermitian PSD
    Eigen::MatrixXcd sigma_r;  // n x n Hermitian PSD
    Eigen::MatrixXcd sigma_sr; // n x n cross-covariance E[x_S x_R^H]

    // Stacked joint covariance [[S, SR], [SR^H, R]].
    Eigen::MatrixXcd joint() const;
};

// Per-band power allocation produced by the optimizers. `alpha` is the share
// of source power spent on the relay-directed component of coherent schemes
// (ignored by CF, which uses independent inputs).
struct PowerAllocation
{
    std::vector<double> p_s;   // source power per band, >= 0
    std::vector<double> p_r;   // relay power per band, >= 0
    std::vector<double> alpha; // in [0, 1] per band

    double mean_p_s() const;
    double mean_p_r() const;

    static PowerAllocation uniform(int n, double p_s, double p_r, double alpha = 1.0);
};

} // namespace relaycap

#endif // RELAYCAP_CHANNEL_HPP
