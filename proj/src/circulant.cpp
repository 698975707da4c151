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

#include "relaycap/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaycap/constants.hpp"
#include "relaycap/errors.hpp"

namespace relaycap
{

namespace
{

void check_impulse_response(const ImpulseResponse &h)
{
    if (h.taps.empty())
        throw InvalidArgumentError("impulse response must have at least one tap");
    bool any_nonzero = false;
    for (const auto &t : h.taps)
        if (t != cplx(0.0, 0.0))
        {
            any_nonzero = true;
            break;
        }
    if (!any_nonzero)
        throw InvalidArgumentError("impulse response must have at least one nonzero tap");
}

void check_autocorrelation(const NoiseAutocorrelation &r)
{
    if (r.lags.empty())
        throw InvalidArgumentError("noise autocorrelation must define R[0]");
    if (!(r.lags[0] > 0.0))
        throw InvalidArgumentError("noise autocorrelation requires R[0] > 0");
}

// Periodized circulant generator of an even autocorrelation: every lag +/- i
// is folded onto its residue mod n and the contributions are summed.
std::vector<double> periodized_generator(const NoiseAutocorrelation &r, int n)
{
    std::vector<double> g(static_cast<size_t>(n), 0.0);
    const int imax = r.support();
    for (int i = 0; i <= imax; i++)
    {
        g[static_cast<size_t>(i % n)] += r.lags[static_cast<size_t>(i)];
        if (i > 0)
            g[static_cast<size_t>(((n - i) % n + n) % n)] += r.lags[static_cast<size_t>(i)];
    }
    return g;
}

} // namespace

Eigen::MatrixXcd build_circulant(const ImpulseResponse &h, int n)
{
    check_impulse_response(h);
    const int m = h.memory();
    if (n <= m)
    {
        std::ostringstream os;
        os << "invalid block length n=" << n << " for impulse response with memory m=" << m << " (need n > m)";
        throw InvalidBlockLengthError(os.str());
    }

    // Generator = first column = zero-padded taps; entry (i,j) = g[(i-j) mod n].
    std::vector<cplx> g(static_cast<size_t>(n), cplx(0.0, 0.0));
    for (int k = 0; k <= m; k++)
        g[static_cast<size_t>(k)] = h.taps[static_cast<size_t>(k)];

    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            M(i, j) = g[static_cast<size_t>(((i - j) % n + n) % n)];
    return M;
}

Eigen::MatrixXd build_noise_circulant(const NoiseAutocorrelation &r, int n)
{
    check_autocorrelation(r);
    if (n < 1)
        throw InvalidBlockLengthError("block length must be positive");
    const std::vector<double> g = periodized_generator(r, n);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++)
            M(i, j) = g[static_cast<size_t>(((i - j) % n + n) % n)];
    return M;
}

std::vector<cplx> transfer_spectrum(const ImpulseResponse &h, int n)
{
    check_impulse_response(h);
    const int m = h.memory();
    if (n <= m)
    {
        std::ostringstream os;
        os << "invalid block length n=" << n << " for impulse response with memory m=" << m << " (need n > m)";
        throw InvalidBlockLengthError(os.str());
    }
    std::vector<cplx> H(static_cast<size_t>(n));
    for (int i = 0; i < n; i++)
    {
        cplx acc(0.0, 0.0);
        for (int k = 0; k <= m; k++)
        {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) / static_cast<double>(n);
            acc += h.taps[static_cast<size_t>(k)] * std::polar(1.0, ang);
        }
        H[static_cast<size_t>(i)] = acc;
    }
    return H;
}

std::vector<double> noise_spectrum(const NoiseAutocorrelation &r, int n, const char *label)
{
    check_autocorrelation(r);
    if (n < 1)
        throw InvalidBlockLengthError("block length must be positive");
    const std::vector<double> g = periodized_generator(r, n);

    std::vector<double> N(static_cast<size_t>(n));
    for (int i = 0; i < n; i++)
    {
        // The generator is symmetric (g[j] = g[n-j]), so the DFT is real; the
        // imaginary part is discarded as pure roundoff.
        double acc = 0.0;
        for (int j = 0; j < n; j++)
        {
            const double ang = 2.0 * kPi * static_cast<double>(j) * static_cast<double>(i) / static_cast<double>(n);
            acc += g[static_cast<size_t>(j)] * std::cos(ang);
        }
        N[static_cast<size_t>(i)] = acc;
    }

    for (int i = 0; i < n; i++)
    {
        if (!(N[static_cast<size_t>(i)] > 0.0))
        {
            std::ostringstream os;
            os << "indefinite " << label << ": spectrum eigenvalue " << N[static_cast<size_t>(i)] << " at band "
               << (i + 1) << " of " << n << " is not strictly positive";
            throw IndefiniteNoiseError(os.str(), i + 1);
        }
    }
    return N;
}

Eigen::MatrixXcd dft_matrix(int n)
{
    if (n < 1)
        throw InvalidBlockLengthError("block length must be positive");
    Eigen::MatrixXcd F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; j++)
        for (int k = 0; k < n; k++)
        {
            const double ang = -2.0 * kPi * static_cast<double>(j) * static_cast<double>(k) / static_cast<double>(n);
            F(j, k) = scale * std::polar(1.0, ang);
        }
    return F;
}

SubbandChannel subband_decompose(const CirculantChannel &ch)
{
    check_impulse_response(ch.h_sr);
    check_impulse_response(ch.h_sd);
    check_impulse_response(ch.h_rd);
    check_autocorrelation(ch.noise_r);
    check_autocorrelation(ch.noise_d);

    // Zero-padding policy: if a noise support exceeds the channel memory the
    // impulse responses are (conceptually) zero-padded, so the block length
    // must clear the noise supports as well as every channel memory.
    int m_eff = ch.h_sr.memory();
    m_eff = std::max(m_eff, ch.h_sd.memory());
    m_eff = std::max(m_eff, ch.h_rd.memory());
    m_eff = std::max(m_eff, ch.noise_r.support());
    m_eff = std::max(m_eff, ch.noise_d.support());
    if (ch.n <= m_eff)
    {
        std::ostringstream os;
        os << "invalid block length n=" << ch.n << ": must exceed every channel memory and noise support (max "
           << m_eff << ")";
        throw InvalidBlockLengthError(os.str());
    }

    SubbandChannel sb;
    sb.n = ch.n;
    sb.h_sr = transfer_spectrum(ch.h_sr, ch.n);
    sb.h_sd = transfer_spectrum(ch.h_sd, ch.n);
    sb.h_rd = transfer_spectrum(ch.h_rd, ch.n);
    sb.noise_r = noise_spectrum(ch.noise_r, ch.n, "relay noise");
    sb.noise_d = noise_spectrum(ch.noise_d, ch.n, "destination noise");

    sb.a_sr.resize(static_cast<size_t>(ch.n));
    sb.a_sd.resize(static_cast<size_t>(ch.n));
    sb.a_rd.resize(static_cast<size_t>(ch.n));
    for (int i = 0; i < ch.n; i++)
    {
        const auto k = static_cast<size_t>(i);
        sb.a_sr[k] = std::norm(sb.h_sr[k]) / sb.noise_r[k];
        sb.a_sd[k] = std::norm(sb.h_sd[k]) / sb.noise_d[k];
        sb.a_rd[k] = std::norm(sb.h_rd[k]) / sb.noise_d[k];
    }
    return sb;
}

Eigen::MatrixXcd covariance_from_spectrum(const std::vector<cplx> &spectrum, int n)
{
    if (static_cast<int>(spectrum.size()) != n)
        throw InvalidArgumentError("spectrum length must equal the block length");
    const Eigen::MatrixXcd F = dft_matrix(n);
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; i++)
        d(i) = spectrum[static_cast<size_t>(i)];
    return F.adjoint() * d.asDiagonal() * F;
}

SubbandChannel SubbandChannel::from_gains(std::vector<double> sr, std::vector<double> sd, std::vector<double> rd)
{
    if (sr.size() != sd.size() || sd.size() != rd.size() || sr.empty())
        throw InvalidArgumentError("per-band gain vectors must have equal nonzero length");
    SubbandChannel sb;
    sb.n = static_cast<int>(sr.size());
    sb.a_sr = std::move(sr);
    sb.a_sd = std::move(sd);
    sb.a_rd = std::move(rd);
    sb.noise_r.assign(static_cast<size_t>(sb.n), 1.0);
    sb.noise_d.assign(static_cast<size_t>(sb.n), 1.0);
    for (int i = 0; i < sb.n; i++)
    {
        const auto k = static_cast<size_t>(i);
        if (!(sb.a_sr[k] >= 0.0) || !(sb.a_sd[k] >= 0.0) || !(sb.a_rd[k] >= 0.0))
            throw InvalidArgumentError("per-band gains must be finite and nonnegative");
        sb.h_sr.push_back(std::sqrt(sb.a_sr[k]));
        sb.h_sd.push_back(std::sqrt(sb.a_sd[k]));
        sb.h_rd.push_back(std::sqrt(sb.a_rd[k]));
    }
    return sb;
}

Eigen::MatrixXcd CovarianceSet::joint() const
{
    const Eigen::Index n = sigma_s.rows();
    Eigen::MatrixXcd J(2 * n, 2 * n);
    J.topLeftCorner(n, n) = sigma_s;
    J.topRightCorner(n, n) = sigma_sr;
    J.bottomLeftCorner(n, n) = sigma_sr.adjoint();
    J.bottomRightCorner(n, n) = sigma_r;
    return J;
}

double PowerAllocation::mean_p_s() const
{
    double acc = 0.0;
    for (double v : p_s)
        acc += v;
    return p_s.empty() ? 0.0 : acc / static_cast<double>(p_s.size());
}

double PowerAllocation::mean_p_r() const
{
    double acc = 0.0;
    for (double v : p_r)
        acc += v;
    return p_r.empty() ? 0.0 : acc / static_cast<double>(p_r.size());
}

PowerAllocation PowerAllocation::uniform(int n, double p_s, double p_r, double alpha)
{
    PowerAllocation a;
    a.p_s.assign(static_cast<size_t>(n), p_s);
    a.p_r.assign(static_cast<size_t>(n), p_r);
    a.alpha.assign(static_cast<size_t>(n), alpha);
    return a;
}

} // namespace relaycap
