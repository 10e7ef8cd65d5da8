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

#ifndef CSITFREE_SIGNAL_CORE_HPP
#define CSITFREE_SIGNAL_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace csitfree
{
    using cd = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s

    // Square matrix that was constructed to be unitary (DFT, CP-DFT, precoder).
    class UnitaryMatrix
    {
    public:
        UnitaryMatrix() = default;
        explicit UnitaryMatrix(CMatrix entries);

        const CMatrix &matrix() const noexcept { return entries_; }
        Eigen::Index dim() const noexcept { return entries_.rows(); }
        cd operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

        // max |M M^H - I|
        double unitarity_error() const;

    private:
        CMatrix entries_;
    };

    // ULA array response a(theta) at one subcarrier wavenumber.
    struct SteeringVector
    {
        CVector entries;
        double angle = 0.0;      // rad
        double wavenumber = 0.0; // rad/m
    };

    // Per-block Doppler phase progression d(theta) for a moving user.
    struct DopplerVector
    {
        CVector entries;
        double speed = 0.0;          // m/s
        double heading = 0.0;        // rad
        double probe_angle = 0.0;    // rad
        double block_duration = 0.0; // s
    };

    // Quantized AoD grid with per-subcarrier steering and Doppler codebooks.
    // steering[l][q] and doppler[l][q] are indexed 0-based; angles[q] holds Delta_{q+1}.
    struct Codebooks
    {
        std::size_t resolution = 0;
        std::vector<double> angles;
        std::vector<std::vector<SteeringVector>> steering;
        std::vector<std::vector<DopplerVector>> doppler;

        std::size_t subcarriers() const noexcept { return steering.size(); }
    };

    // Normalized N x N DFT matrix, entry (a,b) = exp(-j 2 pi (a-1)(b-1) / N) / sqrt(N).
    UnitaryMatrix dft_matrix(std::size_t N);

    // C(i,n) of the circulant matrix whose first column is [1..N]^T. All indices 1-based.
    std::size_t circulant_index(std::size_t row, std::size_t col, std::size_t N);

    // n-th CP-DFT matrix: column i is DFT column C(i,n). n is 1-based.
    UnitaryMatrix build_cp_dft(std::size_t N, std::size_t n);

    // Precoder of data block n: column m equals column n of the m-th CP-DFT matrix.
    UnitaryMatrix build_precoder(std::size_t N, std::size_t n);

    SteeringVector array_response(double angle, double wavenumber, std::size_t N, double spacing);

    DopplerVector doppler_vector(double wavenumber, double block_duration, double speed, double heading,
                                 double probe_angle, std::size_t N);

    // Delta_q = -pi/2 + (q-1) pi / Q, q = 1..Q
    std::vector<double> codebook_angles(std::size_t Q);

    Codebooks build_codebooks(std::size_t Q, std::span<const double> wavenumbers, std::size_t N, double spacing,
                              double block_duration, double speed, double heading);

    // All CP-DFT matrices U_1..U_N and precoders F_1..F_N for one N, built once and shared read-only.
    class CpDftBank
    {
    public:
        explicit CpDftBank(std::size_t N);

        std::size_t size() const noexcept { return N_; }
        const UnitaryMatrix &dft() const noexcept { return dft_; }
        const UnitaryMatrix &cp_dft(std::size_t n) const;    // U_n, 1-based
        const UnitaryMatrix &precoder(std::size_t n) const;  // F_n, 1-based

    private:
        std::size_t N_;
        UnitaryMatrix dft_;
        std::vector<UnitaryMatrix> cp_dft_;
        std::vector<UnitaryMatrix> precoder_;
    };

} // namespace csitfree

#endif
