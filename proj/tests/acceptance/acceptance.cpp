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

// Acceptance checks. Each criterion prints exactly one PASS/FAIL line.
//   csitfree_acceptance                 run all criteria
//   csitfree_acceptance --criterion 5   run one

#include "csitfree/baselines.hpp"
#include "csitfree/channel.hpp"
#include "csitfree/config.hpp"
#include "csitfree/experiment.hpp"
#include "csitfree/receiver.hpp"
#include "csitfree/report.hpp"
#include "csitfree/signal_core.hpp"
#include "csitfree/transmitter.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace csitfree;

namespace
{
    struct Verdict
    {
        bool pass = false;
        std::string detail;
    };

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    std::string fmt(const char *f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    CVector random_symbols(std::mt19937_64 &rng, std::size_t N)
    {
        std::uniform_int_distribution<std::size_t> pick(0, 3);
        CVector s(static_cast<Eigen::Index>(N));
        for (Eigen::Index i = 0; i < s.size(); ++i)
            s(i) = qpsk::symbol(pick(rng));
        s(s.size() - 2) = kPilotSymbol;
        s(s.size() - 1) = kPilotSymbol;
        return s;
    }

    // 1: CP-DFT orthogonality structure
    Verdict criterion_1()
    {
        const auto t0 = Clock::now();
        double worst_unitary = 0.0, worst_off = 0.0, worst_trace = 0.0;
        for (std::size_t N = 2; N <= 16; ++N)
        {
            const CpDftBank bank(N);
            for (std::size_t n = 1; n <= N; ++n)
                for (std::size_t m = 1; m <= N; ++m)
                {
                    const CMatrix P = bank.cp_dft(n).matrix() * bank.cp_dft(m).matrix().adjoint();
                    if (n == m)
                    {
                        worst_unitary = std::max(
                            worst_unitary, (P - CMatrix::Identity(P.rows(), P.cols())).cwiseAbs().maxCoeff());
                        continue;
                    }
                    CMatrix off = P;
                    off.diagonal().setZero();
                    worst_off = std::max(worst_off, off.cwiseAbs().maxCoeff());
                    worst_trace = std::max(worst_trace, std::abs(P.trace()));
                }
        }
        const double t = seconds_since(t0);
        const bool ok = worst_unitary <= 1e-12 && worst_off <= 1e-12 && worst_trace <= 1e-9 && t < 1.0;
        return {ok, "N=2..16: max|UU^H-I| " + fmt("%.2e", worst_unitary) + ", max off-diag " + fmt("%.2e", worst_off) +
                        ", max |trace| " + fmt("%.2e", worst_trace) + ", " + fmt("%.3f", t) + " s"};
    }

    // 2: interference cancellation with perfect estimates
    Verdict criterion_2()
    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<std::size_t> pick_n(3, 12);
        std::uniform_real_distribution<double> angle(-kPi / 2, kPi / 2);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        std::uniform_real_distribution<double> dist(100.0, 200.0);
        std::uniform_real_distribution<double> speed(0.0, 60.0);
        std::uniform_real_distribution<double> power(0.01, 1.0);
        const double nu = 2.0 * kPi * 28e9 / kSpeedOfLight;
        const double spacing = kSpeedOfLight / 28e9 / 2.0;
        const double Tb = 80.0 / 6.25e6;

        double worst_desired = 0.0, worst_v = 0.0;
        for (int c = 0; c < 1000; ++c)
        {
            const std::size_t N = pick_n(rng);
            const CpDftBank bank(N);
            const double theta = angle(rng);
            const cd g = std::polar(1.0 / dist(rng), phase(rng));
            const double step = nu * Tb * speed(rng) * std::cos(phase(rng) - theta);
            PowerAllocation p;
            for (std::size_t i = 0; i < N; ++i)
                p.p.push_back(power(rng));
            const CVector s = random_symbols(rng, N);
            const CVector a = array_response(theta, nu, N, spacing).entries;
            const CVector d = doppler_from_step(step, N);
            for (std::size_t n = 1; n <= N; ++n)
            {
                const auto dec = decompose_terms(bank, g * a, d, s, p, CVector(), 0.0, n, g, a, d, 1e8);
                const cd target = s(static_cast<Eigen::Index>(n - 1)) * std::sqrt(static_cast<double>(N) * p.p[n - 1]);
                worst_desired = std::max(worst_desired, std::abs(dec.desired_term - target) / std::abs(target));
                for (std::size_t m = 0; m < N; ++m)
                    if (m != n - 1)
                        worst_v = std::max(worst_v, std::abs(dec.coefficients[m] / g) / static_cast<double>(N));
            }
        }
        const double t = seconds_since(t0);
        const bool ok = worst_desired <= 1e-9 && worst_v <= 1e-9 && t < 10.0;
        return {ok, "1000 configs: max desired rel err " + fmt("%.2e", worst_desired) + ", max |v|/N " +
                        fmt("%.2e", worst_v) + ", " + fmt("%.2f", t) + " s"};
    }

    // 3: closed-form genie SINR, as stated: gamma = N p |g|^2 / sigma^2 = 25 dB
    Verdict criterion_3()
    {
        const auto t0 = Clock::now();
        const std::size_t N = 10;
        const double p = dbm_to_watt(25.0);
        const double sigma2 = dbm_to_watt(-30.0);
        const double r = 100.0;
        const double nu = 2.0 * kPi * 28e9 / kSpeedOfLight;
        const double spacing = kSpeedOfLight / 28e9 / 2.0;
        const double Tb = 80.0 / 6.25e6;

        std::mt19937_64 rng(3);
        const CpDftBank bank(N);
        const PowerAllocation power = PowerAllocation::equal(N, p);
        const double theta = 0.37;
        const cd g = std::polar(1.0 / r, 0.8);
        const CVector a = array_response(theta, nu, N, spacing).entries;
        const CVector d = doppler_vector(nu, Tb, 39.0, theta, theta, N).entries;
        const cd g_hat = g * std::sqrt(p);

        TrialRng noise_rng(3);
        double desired = 0.0, impairment = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i)
        {
            const CVector s = random_symbols(rng, N);
            const CVector z = draw_noise(noise_rng, sigma2, N);
            const auto dec = decompose_terms(bank, g * a, d, s, power, z, sigma2, 1, g_hat, a, d, 1e8);
            desired += std::norm(dec.desired_term);
            impairment += std::norm(dec.interference_term + dec.noise_term);
        }
        const double measured_db = 10.0 * std::log10(desired / impairment);
        const double stated_db = 10.0 * std::log10(static_cast<double>(N) * p * std::norm(g) / sigma2);
        const double t = seconds_since(t0);
        const bool ok = std::abs(measured_db - stated_db) <= 0.2 && std::abs(stated_db - 25.0) <= 0.2 && t < 10.0;
        return {ok, "genie SINR over 1e4 noise draws " + fmt("%.2f", measured_db) + " dB vs stated N p|g|^2/sigma^2 " +
                        fmt("%.2f", stated_db) + " dB (p|g|^2/sigma^2 = " +
                        fmt("%.2f", 10.0 * std::log10(p * std::norm(g) / sigma2)) + " dB), " + fmt("%.2f", t) + " s"};
    }

    // 4: AoD / gain estimator, Q = 256, L = 16
    Verdict criterion_4()
    {
        const auto t0 = Clock::now();
        SystemConfig cfg;
        cfg.subcarriers = 16;
        cfg.codebook_size = 256;
        const std::size_t N = cfg.antennas, L = cfg.subcarriers, Q = cfg.codebook_size;
        const auto nu = cfg.wavenumbers();
        const double p = dbm_to_watt(25.0);
        const double Tb = cfg.block_duration();
        const CpDftBank bank(N);
        const PilotCombinerTable table(bank, nu, Q, cfg.spacing());
        const PowerAllocation power = PowerAllocation::equal(N, p);
        PilotContext pilots;
        pilots.power_first = pilots.power_second = p;
        pilots.sinr_cap = cfg.sinr_cap();

        TrialRng rng(4);
        std::mt19937_64 sym(4);
        auto run = [&](double theta, double heading, std::vector<cd> &gains) {
            Observation obs;
            obs.y.resize(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(N));
            gains.clear();
            for (std::size_t l = 0; l < L; ++l)
            {
                const cd g = std::polar(1.0 / rng.uniform(100.0, 200.0), rng.uniform(0.0, 2.0 * kPi));
                gains.push_back(g);
                const CVector h = g * array_response(theta, nu[l], N, cfg.spacing()).entries;
                const CVector d = doppler_from_step(nu[l] * Tb * 39.0 * std::cos(heading - theta), N);
                obs.y.row(static_cast<Eigen::Index>(l)) =
                    observe(bank, h, d, random_symbols(sym, N), power, CVector::Zero(static_cast<Eigen::Index>(N)))
                        .transpose();
            }
            return estimate_channel(obs, table, doppler_step_table(nu, table.angles(), Tb, 39.0, heading), pilots);
        };

        std::size_t exact = 0;
        double worst_gain = 0.0;
        std::vector<cd> gains;
        for (int i = 0; i < 100; ++i)
        {
            const std::size_t q = rng.uniform_index(Q) + 1;
            const double theta = table.angles()[q - 1];
            const auto est = run(theta, rng.uniform(0.0, 2.0 * kPi), gains);
            if (est.q_star == q)
                ++exact;
            for (std::size_t l = 0; l < L; ++l)
                worst_gain = std::max(worst_gain, std::abs(est.g_hat[l] - gains[l] * std::sqrt(p)));
        }

        std::size_t within = 0;
        double worst_off = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const double theta = rng.uniform(-kPi / 2, kPi / 2);
            const auto est = run(theta, rng.uniform(0.0, 2.0 * kPi), gains);
            const double err = std::abs(est.angle - theta);
            worst_off = std::max(worst_off, err);
            if (err <= kPi / static_cast<double>(Q))
                ++within;
        }
        const double t = seconds_since(t0);
        const bool ok = exact == 100 && worst_gain <= 1e-9 && within == 100 && t < 30.0;
        return {ok, "on-grid q* exact " + std::to_string(exact) + "/100, max |g_hat - g sqrt(p)| " +
                        fmt("%.2e", worst_gain) + "; off-grid within pi/Q " + std::to_string(within) +
                        "/100 (max err " + fmt("%.2e", worst_off) + " rad, pi/Q " +
                        fmt("%.2e", kPi / static_cast<double>(Q)) + "), " + fmt("%.2f", t) + " s"};
    }

    // 5: kappa-sweep trends on the smoke preset
    Verdict criterion_5()
    {
        const auto t0 = Clock::now();
        SweepSpec spec;
        apply_preset(spec.base, "smoke");
        spec.values = {-10, 0, 10, 20, 30, 40};
        spec.trials = 200;
        const SweepReport rep = run_sweep(spec, {0, true});
        const std::size_t P = rep.points.size();

        // (a) nondecreasing within 2 standard errors of the difference
        bool a_ok = true;
        for (std::size_t i = 1; i < P; ++i)
        {
            const auto &prev = rep.points[i - 1].methods[0];
            const auto &cur = rep.points[i].methods[0];
            const double tol = 2.0 * std::hypot(prev.stderr_sum_se, cur.stderr_sum_se);
            a_ok = a_ok && cur.mean_sum_se >= prev.mean_sum_se - tol;
        }

        // (b) per-trial bound and gap at the last point
        std::size_t violations = 0;
        for (const auto &trials : rep.detail)
            for (const auto &t : trials)
                if (t.method("proposed").sum_se > t.method("perfect_limit").sum_se)
                    ++violations;
        const double lim = rep.points.back().methods[1].mean_sum_se;
        const double gap = (lim - rep.points.back().methods[0].mean_sum_se) / lim;
        const bool b_ok = violations == 0 && gap <= 0.05;

        // (c) proposed beats no_doppler at every kappa, one-sided 95% paired test
        bool c_ok = true;
        double weakest_z = std::numeric_limits<double>::infinity();
        std::string z_list;
        for (const auto &trials : rep.detail)
        {
            std::vector<double> diff;
            for (const auto &t : trials)
                diff.push_back(t.method("proposed").sum_se - t.method("no_doppler").sum_se);
            double mean = 0.0, ss = 0.0;
            for (double x : diff)
                mean += x;
            mean /= static_cast<double>(diff.size());
            for (double x : diff)
                ss += (x - mean) * (x - mean);
            const double se = std::sqrt(ss / static_cast<double>(diff.size() - 1) / static_cast<double>(diff.size()));
            const double z = se > 0.0 ? mean / se : (mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            weakest_z = std::min(weakest_z, z);
            z_list += (z_list.empty() ? "" : "/") + fmt("%.1f", z);
            c_ok = c_ok && z > 1.645;
        }

        // (d) v = 0 makes the two CSIT-free receivers identical
        SweepSpec still = spec;
        still.base.speed_mps = 0.0;
        const SweepReport rep0 = run_sweep(still, {0, true});
        bool d_ok = true;
        for (const auto &trials : rep0.detail)
            for (const auto &t : trials)
            {
                const auto &p = t.method("proposed");
                const auto &n = t.method("no_doppler");
                d_ok = d_ok && p.sinr == n.sinr && p.sum_se == n.sum_se;
            }

        const double t = seconds_since(t0);
        const bool ok = a_ok && b_ok && c_ok && d_ok && t < 300.0;
        return {ok, std::string("(a) ") + (a_ok ? "ok" : "FAIL") + "; (b) " + std::to_string(violations) +
                        " per-trial violations, gap at 40 dB " + fmt("%.2f", 100.0 * gap) + "% (limit 5%) " +
                        (b_ok ? "ok" : "FAIL") + "; (c) paired z per kappa " + z_list + " " +
                        (c_ok ? "ok" : "FAIL") + "; (d) " + (d_ok ? "bit-identical" : "FAIL") + "; " +
                        fmt("%.1f", t) + " s"};
    }

    // 6: complexity formula and instrumented count
    Verdict criterion_6()
    {
        const std::uint64_t formula = complexity_count(64, 256, 10);

        SystemConfig cfg;
        const std::size_t N = cfg.antennas, L = cfg.subcarriers, Q = cfg.codebook_size;
        const auto nu = cfg.wavenumbers();
        const CpDftBank bank(N);
        const double theta = 0.21;
        std::mt19937_64 sym(6);
        Observation obs;
        obs.y.resize(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(N));
        const PowerAllocation power = PowerAllocation::equal(N, dbm_to_watt(25.0));
        for (std::size_t l = 0; l < L; ++l)
        {
            const CVector h = 0.01 * array_response(theta, nu[l], N, cfg.spacing()).entries;
            const CVector d = doppler_from_step(nu[l] * cfg.block_duration() * 39.0, N);
            obs.y.row(static_cast<Eigen::Index>(l)) =
                observe(bank, h, d, random_symbols(sym, N), power, CVector::Zero(static_cast<Eigen::Index>(N)))
                    .transpose();
        }
        const Codebooks cb = build_codebooks(Q, nu, N, cfg.spacing(), cfg.block_duration(), 39.0, theta);
        MultiplicationCounter counter;
        PilotContext pilots;
        pilots.power_first = pilots.power_second = dbm_to_watt(25.0);
        (void)estimate_channel_counted(obs, cb, bank, pilots, counter);

        const bool ok = formula == 1815040 && counter.count == formula;
        return {ok, "formula " + std::to_string(formula) + " (expected 1815040), instrumented receiver counted " +
                        std::to_string(counter.count)};
    }

    // 7: determinism and thread independence
    Verdict criterion_7()
    {
        SweepSpec spec;
        apply_preset(spec.base, "smoke");
        spec.trials = 20;
        const std::string a = to_csv(run_sweep(spec, {1, false}));
        const std::string b = to_csv(run_sweep(spec, {1, false}));
        const std::string c = to_csv(run_sweep(spec, {8, false}));
        const bool ok = a == b && a == c;
        return {ok, std::string("rerun CSV ") + (a == b ? "byte-identical" : "differs") + ", serial vs 8 threads " +
                        (a == c ? "identical" : "differs")};
    }

    // 8: CSIT baselines
    Verdict criterion_8()
    {
        SystemConfig cfg;
        cfg.subcarriers = 16;
        const auto nu = cfg.wavenumbers();
        const double pu = baseline_user_power(cfg);
        double proposed_power = 0.0;
        for (double p : cfg.powers())
            proposed_power += p;
        proposed_power /= static_cast<double>(cfg.antennas);

        // Per-block radiated power of the proposed scheme for a unit-modulus frame.
        const CpDftBank bank(cfg.antennas);
        TrialRng frame_rng(8);
        const Frame frame = assemble_frame(frame_rng, cfg);
        const PowerAllocation power{cfg.powers()};
        double worst_power = 0.0;
        for (std::size_t n = 1; n <= cfg.antennas; ++n)
        {
            const double x2 = precode_block(frame.symbols.row(0).transpose(), power, n, bank).squaredNorm();
            worst_power = std::max(worst_power, std::abs(x2 - proposed_power) / proposed_power);
        }

        double worst_leak = 0.0;
        std::size_t well_conditioned = 0;
        for (std::uint64_t t = 0; t < 50; ++t)
        {
            TrialRng rng(cfg.seed, t);
            const auto geo = sample_geometry(rng, cfg);
            const auto ch = realize_channel(rng, geo, cfg, nu);
            for (std::size_t l = 0; l < cfg.subcarriers; ++l)
            {
                CMatrix H(static_cast<Eigen::Index>(cfg.users), static_cast<Eigen::Index>(cfg.antennas));
                for (std::size_t k = 0; k < cfg.users; ++k)
                    H.row(static_cast<Eigen::Index>(k)) = ch.composite[k][l].transpose();
                const Beams zf = zf_precoder(H);
                const Beams mrt = mrt_precoder(H);
                worst_power = std::max(worst_power, std::abs(radiated_power(zf.W, pu) - proposed_power) / proposed_power);
                worst_power =
                    std::max(worst_power, std::abs(radiated_power(mrt.W, pu) - proposed_power) / proposed_power);

                Eigen::JacobiSVD<CMatrix> svd(H);
                const auto &s = svd.singularValues();
                if (s(0) / s(s.size() - 1) >= 1e6)
                    continue;
                ++well_conditioned;
                const CMatrix G = H * zf.W;
                for (Eigen::Index k = 0; k < G.rows(); ++k)
                    for (Eigen::Index j = 0; j < G.cols(); ++j)
                        if (j != k)
                            worst_leak = std::max(worst_leak, std::abs(G(k, j)) / H.row(k).norm());
            }
        }

        SystemConfig single = cfg;
        single.users = 1;
        const Simulator sim(single);
        double worst_single = 0.0;
        for (std::uint64_t t = 0; t < 20; ++t)
        {
            const TrialReport r = sim.run_trial(t);
            const auto &zf = r.method("ZF").sinr[0];
            const auto &mrt = r.method("MRT").sinr[0];
            for (std::size_t l = 0; l < zf.size(); ++l)
                worst_single = std::max(worst_single, std::abs(zf[l] - mrt[l]) / mrt[l]);
        }

        const bool ok = worst_leak <= 1e-10 && worst_single <= 1e-9 && worst_power <= 1e-12 && well_conditioned > 0;
        return {ok, "ZF leakage/|h| " + fmt("%.2e", worst_leak) + " over " + std::to_string(well_conditioned) +
                        " channels; K=1 ZF vs MRT rel " + fmt("%.2e", worst_single) + "; radiated power rel " +
                        fmt("%.2e", worst_power)};
    }
} // namespace

int main(int argc, char **argv)
{
    const std::vector<std::function<Verdict()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                            criterion_5, criterion_6, criterion_7, criterion_8};
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i)
    {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc)
        {
            const long c = std::strtol(argv[++i], nullptr, 10);
            if (c < 1 || c > static_cast<long>(criteria.size()))
            {
                std::fprintf(stderr, "criterion must be in [1, %zu]\n", criteria.size());
                return 2;
            }
            selected.push_back(static_cast<std::size_t>(c));
        }
        else
        {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 2;
        }
    }
    if (selected.empty())
        for (std::size_t c = 1; c <= criteria.size(); ++c)
            selected.push_back(c);

    int failures = 0;
    for (std::size_t c : selected)
    {
        Verdict v;
        try
        {
            v = criteria[c - 1]();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %zu: %s\n", v.pass ? "PASS" : "FAIL", c, v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
