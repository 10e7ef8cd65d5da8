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

#include "csitfree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace csitfree
{
    namespace
    {
        enum class Receiver
        {
            Proposed,
            Perfect,
            NoDoppler
        };

        double mean_of(std::span<const double> v)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        }

        double stderr_of(std::span<const double> v, double mean)
        {
            if (v.size() < 2)
                return 0.0;
            double ss = 0.0;
            for (double x : v)
                ss += (x - mean) * (x - mean);
            return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
        }
    } // namespace

    const MethodOutcome &TrialReport::method(std::string_view name) const
    {
        for (const auto &m : methods)
            if (m.method == name)
                return m;
        throw std::out_of_range("TrialReport: no method '" + std::string(name) + "'");
    }

    bool TrialReport::degenerate() const
    {
        return std::any_of(methods.begin(), methods.end(), [](const MethodOutcome &m) { return m.degenerate; });
    }

    Simulator::Simulator(SystemConfig cfg)
        : cfg_((cfg.validate(), std::move(cfg))), bank_(cfg_.antennas), nu_(cfg_.wavenumbers()),
          table_(bank_, nu_, cfg_.codebook_size, cfg_.spacing()), power_{cfg_.powers()}
    {
    }

    TrialReport Simulator::run_trial(std::uint64_t index) const
    {
        TrialRng rng(cfg_.seed, index);
        auto geometry = sample_geometry(rng, cfg_);
        return run(index, rng, std::move(geometry));
    }

    TrialReport Simulator::run_trial(std::uint64_t index, std::span<const UserGeometry> geometry) const
    {
        if (geometry.size() != cfg_.users)
            throw std::invalid_argument("run_trial: geometry must list one entry per user.");
        TrialRng rng(cfg_.seed, index);
        return run(index, rng, std::vector<UserGeometry>(geometry.begin(), geometry.end()));
    }

    TrialReport Simulator::run(std::uint64_t index, TrialRng &rng, std::vector<UserGeometry> geometry) const
    {
        const std::size_t K = cfg_.users;
        const std::size_t L = cfg_.subcarriers;
        const std::size_t N = cfg_.antennas;
        const auto n = static_cast<Eigen::Index>(N);
        const double Tb = cfg_.block_duration();
        const double sigma2 = cfg_.noise_power_w;
        const double cap = cfg_.sinr_cap();
        const double sqrt_n = std::sqrt(static_cast<double>(N));

        const ChannelRealization channel = realize_channel(rng, geometry, cfg_, nu_);
        const Frame frame = assemble_frame(rng, cfg_);
        std::vector<CMatrix> noise(K, CMatrix(static_cast<Eigen::Index>(L), n));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < L; ++l)
                noise[k].row(static_cast<Eigen::Index>(l)) = draw_noise(rng, sigma2, N).transpose();

        // Transmitted blocks, shared by all users: column n-1 of X[l] is x_{l,n}.
        std::vector<CMatrix> X(L, CMatrix(n, n));
        std::vector<CVector> symbols(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            symbols[l] = frame.symbols.row(static_cast<Eigen::Index>(l)).transpose();
            for (std::size_t b = 1; b <= N; ++b)
                X[l].col(static_cast<Eigen::Index>(b - 1)) = precode_block(symbols[l], power_, b, bank_);
        }

        std::vector<std::vector<CVector>> true_doppler(K, std::vector<CVector>(L));
        std::vector<Observation> obs(K);
        for (std::size_t k = 0; k < K; ++k)
        {
            obs[k].user = k;
            obs[k].y.resize(static_cast<Eigen::Index>(L), n);
            for (std::size_t l = 0; l < L; ++l)
            {
                const auto li = static_cast<Eigen::Index>(l);
                true_doppler[k][l] = doppler_from_step(geometry[k].doppler_step(nu_[l], Tb), N);
                const Eigen::RowVectorXcd hx = channel.composite[k][l].transpose() * X[l];
                obs[k].y.row(li) = hx.cwiseProduct(true_doppler[k][l].transpose()) + noise[k].row(li);
            }
        }

        const PilotContext pilots{frame.pilots[0], frame.pilots[1], power_.p[N - 2], power_.p[N - 1], cap};

        TrialReport report;
        report.index = index;
        report.q_star.assign(K, 0);

        auto run_receiver = [&](Receiver mode, std::string_view name) {
            MethodOutcome out;
            out.method = std::string(name);
            out.sinr.assign(K, std::vector<double>(L, 0.0));
            double estimated = 0.0;

            for (std::size_t k = 0; k < K; ++k)
            {
                const std::size_t slot = k + 1;
                double angle = geometry[k].aod;
                std::vector<cd> g_hat(L);
                std::vector<CVector> doppler(L);

                if (mode == Receiver::Perfect)
                {
                    for (std::size_t l = 0; l < L; ++l)
                    {
                        g_hat[l] = channel.gain[k][l] * std::sqrt(power_.p[N - 2]);
                        doppler[l] = true_doppler[k][l];
                    }
                }
                else
                {
                    const double speed = mode == Receiver::Proposed ? geometry[k].speed : 0.0;
                    const auto steps = doppler_step_table(nu_, table_.angles(), Tb, speed, geometry[k].heading);
                    const EstimationResult est = estimate_channel(obs[k], table_, steps, pilots);
                    angle = est.angle;
                    g_hat = est.g_hat;
                    for (std::size_t l = 0; l < L; ++l)
                        doppler[l] = doppler_from_step(steps[l][est.q_star - 1], N);
                    estimated += est.R_hat[est.q_star - 1];
                    if (mode == Receiver::Proposed)
                        report.q_star[k] = est.q_star;
                }

                const double scale = sqrt_n * std::sqrt(power_.p[k] / power_.p[N - 2]);
                for (std::size_t l = 0; l < L; ++l)
                {
                    const auto li = static_cast<Eigen::Index>(l);
                    ++out.symbols;
                    if (g_hat[l] == cd{0.0, 0.0})
                    {
                        ++out.symbol_errors;
                        continue;
                    }
                    const CVector steering = array_response(angle, nu_[l], N, cfg_.spacing()).entries;
                    const CVector noise_l = noise[k].row(li).transpose();
                    const Decomposition dec =
                        decompose_terms(bank_, channel.composite[k][l], true_doppler[k][l], symbols[l], power_,
                                        noise_l, sigma2, slot, g_hat[l], steering, doppler[l], cap);
                    out.sinr[k][l] = dec.sinr.gamma;

                    const CVector y = obs[k].y.row(li).transpose();
                    const CVector r = combining_row(bank_, slot, steering, doppler[l]);
                    const cd soft = (r.transpose() * y)(0) / g_hat[l] / scale;
                    if (qpsk::nearest(soft) != frame.data_index[l][k])
                        ++out.symbol_errors;
                }
            }
            if (mode != Receiver::Perfect)
                out.sum_se_estimated = estimated;
            out.finalize();
            return out;
        };

        auto run_csit = [&](bool zf, std::string_view name) {
            MethodOutcome out;
            out.method = std::string(name);
            out.sinr.assign(K, std::vector<double>(L, 0.0));
            const double pu = baseline_user_power(cfg_);
            CMatrix H(static_cast<Eigen::Index>(K), n);
            for (std::size_t l = 0; l < L; ++l)
            {
                for (std::size_t k = 0; k < K; ++k)
                    H.row(static_cast<Eigen::Index>(k)) = channel.composite[k][l].transpose();
                const Beams beams = zf ? zf_precoder(H) : mrt_precoder(H);
                out.degenerate = out.degenerate || beams.degenerate;
                const auto gamma = baseline_sinr(beams.W, H, pu, sigma2, cap);
                for (std::size_t k = 0; k < K; ++k)
                    out.sinr[k][l] = gamma[k];
            }
            out.finalize();
            return out;
        };

        report.methods.push_back(run_receiver(Receiver::Proposed, kMethods[0]));
        report.methods.push_back(run_receiver(Receiver::Perfect, kMethods[1]));
        report.methods.push_back(run_receiver(Receiver::NoDoppler, kMethods[2]));
        report.methods.push_back(run_csit(true, kMethods[3]));
        report.methods.push_back(run_csit(false, kMethods[4]));
        report.geometry = std::move(geometry);
        return report;
    }

    std::vector<TrialReport> run_trials(const Simulator &sim, std::size_t count, std::size_t threads)
    {
        std::vector<TrialReport> out(count);
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = std::min(threads, std::max<std::size_t>(count, 1));

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (std::size_t t = next++; t < count; t = next++)
            {
                try
                {
                    out[t] = sim.run_trial(t);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        };

        if (threads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (std::size_t i = 0; i < threads; ++i)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        if (error)
            std::rethrow_exception(error);
        return out;
    }

    SweepPoint summarize(double value, std::span<const TrialReport> trials, const SystemConfig &cfg)
    {
        SweepPoint point;
        point.value = value;
        const double overhead = static_cast<double>(cfg.users) / static_cast<double>(cfg.antennas);

        for (std::size_t m = 0; m < kMethods.size(); ++m)
        {
            MethodSummary s;
            s.method = std::string(kMethods[m]);
            s.trials = trials.size();

            std::vector<double> se, scaled, users;
            double estimated = 0.0;
            std::size_t estimated_count = 0, errors = 0, symbols = 0;
            for (const auto &t : trials)
            {
                const MethodOutcome &o = t.methods.at(m);
                se.push_back(o.sum_se);
                scaled.push_back(o.sum_se * overhead);
                users.insert(users.end(), o.user_se.begin(), o.user_se.end());
                if (!std::isnan(o.sum_se_estimated))
                {
                    estimated += o.sum_se_estimated;
                    ++estimated_count;
                }
                errors += o.symbol_errors;
                symbols += o.symbols;
                if (o.degenerate)
                    ++s.degenerate_trials;
            }
            s.mean_sum_se = mean_of(se);
            s.stderr_sum_se = stderr_of(se, s.mean_sum_se);
            s.mean_sum_se_scaled = mean_of(scaled);
            s.stderr_sum_se_scaled = stderr_of(scaled, s.mean_sum_se_scaled);
            if (estimated_count > 0)
                s.mean_sum_se_estimated = estimated / static_cast<double>(estimated_count);
            if (symbols > 0)
                s.symbol_error_rate = static_cast<double>(errors) / static_cast<double>(symbols);
            if (!users.empty())
            {
                std::sort(users.begin(), users.end());
                const std::size_t h = users.size() / 2;
                s.user_se.min = users.front();
                s.user_se.max = users.back();
                s.user_se.median = users.size() % 2 ? users[h] : 0.5 * (users[h - 1] + users[h]);
                s.user_se.mean = mean_of(users);
            }
            point.methods.push_back(std::move(s));
        }
        return point;
    }

    std::size_t SweepReport::rows() const noexcept
    {
        std::size_t r = 0;
        for (const auto &p : points)
            r += p.methods.size();
        return r;
    }

    SweepReport run_sweep(const SweepSpec &spec, const SweepOptions &options)
    {
        spec.validate();
        SweepReport report;
        report.variable = spec.variable;
        report.base = spec.base;
        report.seed = spec.base.seed;
        report.trials = spec.trials;
        report.complexity = complexity_count(spec.base.subcarriers, spec.base.codebook_size, spec.base.antennas);

        for (double value : spec.values)
        {
            SystemConfig cfg = apply_sweep_value(spec.base, spec.variable, value);
            cfg.trials = spec.trials;
            const Simulator sim(cfg);
            auto trials = run_trials(sim, spec.trials, options.threads);
            report.points.push_back(summarize(value, trials, cfg));
            if (options.keep_trials)
                report.detail.push_back(std::move(trials));
        }
        return report;
    }

    std::uint64_t complexity_count(std::uint64_t L, std::uint64_t Q, std::uint64_t N)
    {
        return (2 * L + L * Q) * N * N + L * Q * N;
    }

} // namespace csitfree
