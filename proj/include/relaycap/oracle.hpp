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
// Small-n dense log-determinant oracle for all mutual-information quantities
// of the circular relay model. Nothing here assumes diagonal covariances; the
// oracle exists precisely to validate the per-band formulas used everywhere
// else. All mutual informations are for the real-signal model: each n x n
// complex Hermitian log-determinant enters with a 1/2 prefactor, and results
// are whole-block quantities in nats (divide by n for per-use rates).

#ifndef RELAYCAP_ORACLE_HPP
#define RELAYCAP_ORACLE_HPP

#include <Eigen/Dense>

#include "relaycap/channel.hpp"
#include "relaycap/constants.hpp"

namespace relaycap
{

struct OracleDfTerms
{
    double i1; // I(x_S; y_R | x_R), nats per block
    double i2; // I(x_S, x_R; y_D), nats per block
};

struct OracleCfTerms
{
    double rate;           // I(x_S; y_D, yhat_R | x_R), nats per block
    double constraint_gap; // I(x_R; y_D) - I(y_R; yhat_R | x_R, y_D), nats per block
};

// log det of a Hermitian positive definite matrix via Cholesky; one retry with
// a 1e-12 diagonal jitter, then NumericalRankError.
double logdet_hermitian_pd(const Eigen::MatrixXcd &M, const char *what);

// Throws InvalidArgumentError unless the stacked joint covariance is Hermitian
// PSD (up to roundoff) with the expected dimensions for block length n.
void validate_covariance_set(const CovarianceSet &cov, int n);

// Decode-and-forward cut mutual informations by dense log-determinants over
// the full time-domain Gaussian model.
OracleDfTerms oracle_df_terms(const CirculantChannel &ch, const CovarianceSet &cov,
                              int oracle_limit = kDefaultOracleLimit);

// Compress-and-forward rate and Wyner-Ziv feasibility gap. `qnoise` is the
// n x n Hermitian PD covariance of the compression noise added to y_R.
OracleCfTerms oracle_cf_terms(const CirculantChannel &ch, const CovarianceSet &cov, const Eigen::MatrixXcd &qnoise,
                              int oracle_limit = kDefaultOracleLimit);

} // namespace relaycap

#endif // RELAYCAP_ORACLE_HPP
