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

#include "relaycap/oracle.hpp"

#include <cmath>
#include <sstream>

#include "relaycap/circulant.hpp"
#include "relaycap/errors.hpp"

namespace relaycap
{

namespace
{

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd &M)
{
    return 0.5 * (M + M.adjoint());
}

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix (eigenvalues below a
// relative floor are treated as exact zeros, so zero-power inputs are legal).
Eigen::MatrixXcd psd_pinv(const Eigen::MatrixXcd &M)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(M));
    if (es.info() != Eigen::Success)
        throw NumericalRankError("eigendecomposition failed while inverting a covariance");
    const Eigen::VectorXd ev = es.eigenvalues();
    const double floor = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); i++)
        inv(i) = (ev(i) > floor) ? 1.0 / ev(i) : 0.0;
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

// Mutual information 0.5 * (logdet(noise + signal) - logdet(noise)) in nats.
double gaussian_mi(const Eigen::MatrixXcd &signal, const Eigen::MatrixXcd &noise, const char *what)
{
    const double a = logdet_hermitian_pd(hermitize(noise + signal), what);
    const double b = logdet_hermitian_pd(hermitize(noise), what);
    return 0.5 * (a - b);
}

} // namespace

double logdet_hermitian_pd(const Eigen::MatrixXcd &M, const char *what)
{
    Eigen::LLT<Eigen::MatrixXcd> llt(M);
    if (llt.info() != Eigen::Success)
    {
        Eigen::MatrixXcd J = M;
        J.diagonal().array() += kCholeskyJitter;
        llt.compute(J);
        // The jitter exists to absorb roundoff on well-conditioned matrices;
        // if a pivot sits at the jitter floor the matrix was truly singular.
        bool rescued = llt.info() == Eigen::Success;
        if (rescued)
        {
            const Eigen::MatrixXcd L = llt.matrixL();
            for (Eigen::Index i = 0; i < L.rows(); i++)
                if (L(i, i).real() * L(i, i).real() <= 100.0 * kCholeskyJitter)
                    rescued = false;
        }
        if (!rescued)
        {
            std::ostringstream os;
            os << "numerical rank failure: " << what << " is singular (Cholesky failed even with " << kCholeskyJitter
               << " jitter)";
            throw NumericalRankError(os.str());
        }
    }
    double acc = 0.0;
    const Eigen::MatrixXcd L = llt.matrixL();
    for (Eigen::Index i = 0; i < L.rows(); i++)
        acc += std::log(L(i, i).real());
    return 2.0 * acc;
}

void validate_covariance_set(const CovarianceSet &cov, int n)
{
    if (cov.sigma_s.rows() != n || cov.sigma_s.cols() != n || cov.sigma_r.rows() != n || cov.sigma_r.cols() != n ||
        cov.sigma_sr.rows() != n || cov.sigma_sr.cols() != n)
        throw InvalidArgumentError("covariance blocks must all be n x n");

    const Eigen::MatrixXcd J = cov.joint();
    const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    if ((J - J.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw InvalidArgumentError("joint input covariance is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(J), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-9 * scale)
        throw InvalidArgumentError("joint input covariance is not positive semidefinite");
}

OracleDfTerms oracle_df_terms(const CirculantChannel &ch, const CovarianceSet &cov, int oracle_limit)
{
    const int n = ch.n;
    if (n > oracle_limit)
    {
        std::ostringstream os;
        os << "oracle block length " << n << " exceeds the dense-oracle limit " << oracle_limit;
        throw InvalidArgumentError(os.str());
    }
    validate_covariance_set(cov, n);

    const Eigen::MatrixXcd H_sr = build_circulant(ch.h_sr, n);
    const Eigen::MatrixXcd H_sd = build_circulant(ch.h_sd, n);
    const Eigen::MatrixXcd H_rd = build_circulant(ch.h_rd, n);
    const Eigen::MatrixXcd C_r = build_noise_circulant(ch.noise_r, n).cast<cplx>();
    const Eigen::MatrixXcd C_d = build_noise_circulant(ch.noise_d, n).cast<cplx>();

    // Residual source covariance once the relay input is known.
    const Eigen::MatrixXcd sigma_cond =
        hermitize(cov.sigma_s - cov.sigma_sr * psd_pinv(cov.sigma_r) * cov.sigma_sr.adjoint());

    // I(x_S; y_R | x_R): the relay observes y_R = H_SR x_S + v_R.
    const double i1 = gaussian_mi(H_sr * sigma_cond * H_sr.adjoint(), C_r, "relay-cut conditional covariance");

    // I(x_S, x_R; y_D): y_D = [H_SD H_RD] (x_S; x_R) + v_D with the full joint
    // input covariance (no diagonality assumed anywhere).
    Eigen::MatrixXcd G(n, 2 * n);
    G.leftCols(n) = H_sd;
    G.rightCols(n) = H_rd;
    const double i2 = gaussian_mi(G * cov.joint() * G.adjoint(), C_d, "destination-cut covariance");

    return {i1, i2};
}

OracleCfTerms oracle_cf_terms(const CirculantChannel &ch, const CovarianceSet &cov, const Eigen::MatrixXcd &qnoise,
                              int oracle_limit)
{
    const int n = ch.n;
    if (n > oracle_limit)
    {
        std::ostringstream os;
        os << "oracle block length " << n << " exceeds the dense-oracle limit " << oracle_limit;
        throw InvalidArgumentError(os.str());
    }
    validate_covariance_set(cov, n);
    if (qnoise.rows() != n || qnoise.cols() != n)
        throw InvalidArgumentError("compression noise covariance must be n x n");

    const Eigen::MatrixXcd H_sr = build_circulant(ch.h_sr, n);
    const Eigen::MatrixXcd H_sd = build_circulant(ch.h_sd, n);
    const Eigen::MatrixXcd H_rd = build_circulant(ch.h_rd, n);
    const Eigen::MatrixXcd C_r = build_noise_circulant(ch.noise_r, n).cast<cplx>();
    const Eigen::MatrixXcd C_d = build_noise_circulant(ch.noise_d, n).cast<cplx>();

    const Eigen::MatrixXcd sigma_cond =
        hermitize(cov.sigma_s - cov.sigma_sr * psd_pinv(cov.sigma_r) * cov.sigma_sr.adjoint());

    // rate = I(x_S; y_D, yhat_R | x_R): stacked observation (y_D; yhat_R) of
    // the residual source signal, 2n x 2n block determinant.
    Eigen::MatrixXcd T(2 * n, n);
    T.topRows(n) = H_sd;
    T.bottomRows(n) = H_sr;
    Eigen::MatrixXcd noise2(2 * n, 2 * n);
    noise2.setZero();
    noise2.topLeftCorner(n, n) = C_d;
    noise2.bottomRightCorner(n, n) = C_r + qnoise;
    const double rate = gaussian_mi(T * sigma_cond * T.adjoint(), noise2, "stacked CF observation covariance");

    // I(x_R; y_D): full y_D covariance versus its conditional given x_R.
    const Eigen::MatrixXcd cross = H_sd * cov.sigma_sr * H_rd.adjoint();
    const Eigen::MatrixXcd cov_yd = hermitize(H_sd * cov.sigma_s * H_sd.adjoint() +
                                              H_rd * cov.sigma_r * H_rd.adjoint() + cross + cross.adjoint() + C_d);
    const Eigen::MatrixXcd cov_yd_given_xr = hermitize(H_sd * sigma_cond * H_sd.adjoint() + C_d);
    const double i_xr_yd = 0.5 * (logdet_hermitian_pd(cov_yd, "destination output covariance") -
                                  logdet_hermitian_pd(cov_yd_given_xr, "conditional destination covariance"));

    // I(y_R; yhat_R | x_R, y_D): Wyner-Ziv side-information term. Conditioning
    // on x_R reduces both observations to the residual source signal; the
    // remaining y_D knowledge enters through a Schur complement.
    const Eigen::MatrixXcd cov_yr_given_xr = hermitize(H_sr * sigma_cond * H_sr.adjoint() + C_r);
    const Eigen::MatrixXcd cross_rd = H_sr * sigma_cond * H_sd.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt_yd(cov_yd_given_xr);
    if (llt_yd.info() != Eigen::Success)
        throw NumericalRankError("numerical rank failure: conditional destination covariance is singular");
    const Eigen::MatrixXcd K = hermitize(cov_yr_given_xr - cross_rd * llt_yd.solve(cross_rd.adjoint()));
    const double i_compress = gaussian_mi(K, qnoise, "compression noise covariance");

    return {rate, i_xr_yd - i_compress};
}

} // namespace relaycap
