// SPDX-License-Identifier: Apache-2.0
//
// csitfree: link-level simulator for CSIT-free mmWave MU-MISO downlink
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

#include "csitfree/baselines.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csitfree
{
    void BaselineResult::finalize()
    {
        user_se.assign(sinr.size(), 0.0);
        sum_se = 0.0;
        for (std::size_t k = 0; k < sinr.size(); ++k)
        {
            if (sinr[k].empty())
                continue;
            double acc = 0.0;
            for (double g : sinr[k])
                acc += std::log2(1.0 + g);
            user_se[k] = acc / static_cast<double>(sinr[k].size());
            sum_se += user_se[k];
        }
    }

    Beams zf_precoder(const CMatrix &H)
    {
        constexpr double tol = 1e-10;
        const Eigen::Index K = H.rows();
        const Eigen::Index N = H.cols();
        if (K > N)
            throw std::invalid_argument("zf_precoder: more users than antennas.");

        Beams out;
        Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVector &s = svd.singularValues();
        const double smax = s.size() > 0 ? s(0) : 0.0;

        RVector s_inv = RVector::Zero(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i)
        {
            if (smax > 0.0 && s(i) > tol * smax)
                s_inv(i) = 1.0 / s(i);
            else
                out.degenerate = true;
        }
        if (s.size() < K)
            out.degenerate = true;

        out.W = svd.matrixV() * s_inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double norm = out.W.col(k).norm();
            if (norm > 0.0)
                out.W.col(k) /= norm;
            else
                out.degenerate = true;
        }
        return out;
    }

    Beams mrt_precoder(const CMatrix &H)
    {
        Beams out;
        out.W = CMatrix::Zero(H.cols(), H.rows());
        for (Eigen::Index k = 0; k < H.rows(); ++k)
        {
            const double norm = H.row(k).norm();
            if (norm > 0.0)
                out.W.col(k) = H.row(k).adjoint() / norm;
            else
                out.degenerate = true;
        }
        return out;
    }

    std::vector<double> baseline_sinr(const CMatrix &W, const CMatrix &H, double user_power, double noise_power,
                                      double sinr_cap)
    {
        if (W.rows() != H.cols() || W.cols() != H.rows())
            throw std::invalid_argument("baseline_sinr: W must be N x K for a K x N channel.");
        const CMatrix G = H * W; // G(k, j) = h_k^T w_j
        std::vector<double> gamma(static_cast<std::size_t>(H.rows()));
        for (Eigen::Index k = 0; k < H.rows(); ++k)
        {
            const double desired = user_power * std::norm(G(k, k));
            double interference = 0.0;
            for (Eigen::Index j = 0; j < G.cols(); ++j)
                if (j != k)
                    interference += user_power * std::norm(G(k, j));
            const double denom = interference + noise_power;
            double g;
            if (desired == 0.0)
                g = 0.0;
            else if (denom <= 0.0 || desired >= sinr_cap * denom)
                g = sinr_cap;
            else
                g = desired / denom;
            gamma[static_cast<std::size_t>(k)] = g;
        }
        return gamma;
    }

    double baseline_user_power(const SystemConfig &cfg)
    {
        const std::vector<double> p = cfg.powers();
        if (cfg.baseline_power == BaselinePower::EqualPerUser)
            return p.front();
        const double total = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
        return total / static_cast<double>(cfg.users);
    }

    double radiated_power(const CMatrix &W, double user_power)
    {
        return user_power * W.squaredNorm();
    }

    double max_leakage(const CMatrix &W, const CMatrix &H)
    {
        const CMatrix G = H * W;
        double worst = 0.0;
        for (Eigen::Index k = 0; k < G.rows(); ++k)
            for (Eigen::Index j = 0; j < G.cols(); ++j)
                if (j != k)
                    worst = std::max(worst, std::abs(G(k, j)));
        return worst;
    }

} // namespace csitfree
