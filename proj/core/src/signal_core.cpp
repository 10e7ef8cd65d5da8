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

#include "csitfree/signal_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csitfree
{
    UnitaryMatrix::UnitaryMatrix(CMatrix entries) : entries_(std::move(entries))
    {
        if (entries_.rows() != entries_.cols())
            throw std::invalid_argument("UnitaryMatrix must be square.");
    }

    double UnitaryMatrix::unitarity_error() const
    {
        const auto n = entries_.rows();
        return (entries_ * entries_.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    }

    UnitaryMatrix dft_matrix(std::size_t N)
    {
        if (N == 0)
            throw std::invalid_argument("DFT dimension must be at least 1.");

        const auto n = static_cast<Eigen::Index>(N);
        const double scale = 1.0 / std::sqrt(static_cast<double>(N));
        CMatrix U(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
            {
                // Reduce the exponent mod N so equal twiddles are bit-identical.
                const auto k = static_cast<double>((a * b) % n);
                U(a, b) = std::polar(scale, -2.0 * kPi * k / static_cast<double>(N));
            }
        return UnitaryMatrix(std::move(U));
    }

    std::size_t circulant_index(std::size_t row, std::size_t col, std::size_t N)
    {
        if (N == 0 || row < 1 || row > N || col < 1 || col > N)
            throw std::invalid_argument("circulant_index: index (" + std::to_string(row) + ", " +
                                        std::to_string(col) + ") outside [1, " + std::to_string(N) + "].");
        return ((row + col - 2) % N) + 1;
    }

    UnitaryMatrix build_cp_dft(std::size_t N, std::size_t n)
    {
        if (n < 1 || n > N)
            throw std::invalid_argument("build_cp_dft: shift index " + std::to_string(n) + " outside [1, " +
                                        std::to_string(N) + "].");
        const UnitaryMatrix dft = dft_matrix(N);
        const CMatrix &U = dft.matrix();
        CMatrix Un(U.rows(), U.cols());
        for (std::size_t i = 1; i <= N; ++i)
            Un.col(static_cast<Eigen::Index>(i - 1)) = U.col(static_cast<Eigen::Index>(circulant_index(i, n, N) - 1));
        return UnitaryMatrix(std::move(Un));
    }

    UnitaryMatrix build_precoder(std::size_t N, std::size_t n)
    {
        if (n < 1 || n > N)
            throw std::invalid_argument("build_precoder: block index " + std::to_string(n) + " outside [1, " +
                                        std::to_string(N) + "].");
        // U_m(:,n) = U(:, C(n,m))
        const UnitaryMatrix dft = dft_matrix(N);
        const CMatrix &U = dft.matrix();
        CMatrix F(U.rows(), U.cols());
        for (std::size_t m = 1; m <= N; ++m)
            F.col(static_cast<Eigen::Index>(m - 1)) = U.col(static_cast<Eigen::Index>(circulant_index(n, m, N) - 1));
        return UnitaryMatrix(std::move(F));
    }

    SteeringVector array_response(double angle, double wavenumber, std::size_t N, double spacing)
    {
        SteeringVector a;
        a.angle = angle;
        a.wavenumber = wavenumber;
        a.entries.resize(static_cast<Eigen::Index>(N));
        const double step = -wavenumber * spacing * std::sin(angle);
        for (std::size_t n = 0; n < N; ++n)
            a.entries(static_cast<Eigen::Index>(n)) = std::polar(1.0, step * static_cast<double>(n));
        return a;
    }

    DopplerVector doppler_vector(double wavenumber, double block_duration, double speed, double heading,
                                 double probe_angle, std::size_t N)
    {
        if (speed < 0.0)
            throw std::invalid_argument("doppler_vector: speed must be non-negative.");
        DopplerVector d;
        d.speed = speed;
        d.heading = heading;
        d.probe_angle = probe_angle;
        d.block_duration = block_duration;
        d.entries.resize(static_cast<Eigen::Index>(N));
        const double step = wavenumber * block_duration * speed * std::cos(heading - probe_angle);
        for (std::size_t n = 0; n < N; ++n)
            d.entries(static_cast<Eigen::Index>(n)) = std::polar(1.0, step * static_cast<double>(n));
        return d;
    }

    std::vector<double> codebook_angles(std::size_t Q)
    {
        if (Q == 0)
            throw std::invalid_argument("Codebook resolution Q must be at least 1.");
        std::vector<double> angles(Q);
        for (std::size_t q = 1; q <= Q; ++q)
            angles[q - 1] = -kPi / 2.0 + static_cast<double>(q - 1) * kPi / static_cast<double>(Q);
        return angles;
    }

    Codebooks build_codebooks(std::size_t Q, std::span<const double> wavenumbers, std::size_t N, double spacing,
                              double block_duration, double speed, double heading)
    {
        Codebooks cb;
        cb.resolution = Q;
        cb.angles = codebook_angles(Q);
        cb.steering.resize(wavenumbers.size());
        cb.doppler.resize(wavenumbers.size());
        for (std::size_t l = 0; l < wavenumbers.size(); ++l)
        {
            cb.steering[l].reserve(Q);
            cb.doppler[l].reserve(Q);
            for (double angle : cb.angles)
            {
                cb.steering[l].push_back(array_response(angle, wavenumbers[l], N, spacing));
                cb.doppler[l].push_back(doppler_vector(wavenumbers[l], block_duration, speed, heading, angle, N));
            }
        }
        return cb;
    }

    CpDftBank::CpDftBank(std::size_t N) : N_(N), dft_(dft_matrix(N))
    {
        cp_dft_.reserve(N);
        precoder_.reserve(N);
        for (std::size_t n = 1; n <= N; ++n)
        {
            cp_dft_.push_back(build_cp_dft(N, n));
            precoder_.push_back(build_precoder(N, n));
        }
    }

    const UnitaryMatrix &CpDftBank::cp_dft(std::size_t n) const
    {
        if (n < 1 || n > N_)
            throw std::invalid_argument("CpDftBank::cp_dft: index outside [1, N].");
        return cp_dft_[n - 1];
    }

    const UnitaryMatrix &CpDftBank::precoder(std::size_t n) const
    {
        if (n < 1 || n > N_)
            throw std::invalid_argument("CpDftBank::precoder: index outside [1, N].");
        return precoder_[n - 1];
    }

} // namespace csitfree
