// SPDX-License-Identifier: Apache-2.0
//
// starris - impedance-level modeling of simultaneously transmitting and
// reflecting surfaces, with uplink NOMA outage analysis and simulation
// Copyright (C) 2026 the starris contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "starris/sim_engine.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace starris::sim
{

namespace
{
constexpr double z95 = 1.959963984540054; // two-sided 95% normal quantile
constexpr std::uint64_t chunk_size = 8192;

// one Monte Carlo trial of the configured access scheme; returns the outage
// indicator pair (user r, user t)
std::pair<bool, bool> scenario_trial(const access::UplinkScenario &sc, const LinkSet &links,
                                     const std::vector<std::pair<double, double>> &amps,
                                     RngStream &rng)
{
    std::size_t m = sc.m_elements;
    // amplitudes are all that matter under ideal per-element cophasing, so
    // the composite channels accumulate |h||g| weighted by the element split
    double sum_r = 0.0, sum_t = 0.0, sum_r_unit = 0.0, sum_t_unit = 0.0;
    for (std::size_t i = 0; i < m; ++i)
    {
        double ha = std::abs(channels::sample_rician(links.bs, rng));
        double gr = std::abs(channels::sample_rician(links.user_r, rng));
        double gt = std::abs(channels::sample_rician(links.user_t, rng));
        sum_r += amps[i].second * ha * gr;
        sum_t += amps[i].first * ha * gt;
        sum_r_unit += ha * gr;
        sum_t_unit += ha * gt;
    }

    if (sc.scheme == access::Scheme::oma)
    {
        double snr_r = sc.p * sum_r_unit * sum_r_unit / sc.noise;
        double snr_t = sc.p * sum_t_unit * sum_t_unit / sc.noise;
        return {!(snr_r > access::threshold_oma(sc.rate_r)), !(snr_t > access::threshold_oma(sc.rate_t))};
    }

    auto sinrs = access::noma_sinrs_from_gains(sum_r * sum_r, sum_t * sum_t, sc);
    return access::noma_outage_events(sinrs, sc);
}
} // namespace

OutageEstimate make_estimate(std::uint64_t successes, std::uint64_t trials)
{
    if (trials == 0)
        throw std::invalid_argument("an estimate needs at least one trial");
    OutageEstimate e;
    e.successes = successes;
    e.trials = trials;
    double n = double(trials);
    double p = double(successes) / n;
    e.p_hat = p;
    std::uint64_t failures = trials - successes;
    if (successes >= 10 && failures >= 10)
    {
        e.ci_half_width = z95 * std::sqrt(p * (1.0 - p) / n);
    }
    else
    {
        // Wilson half-width, stable at and near the boundaries
        double z2 = z95 * z95;
        e.ci_half_width = z95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    }
    return e;
}

PointResult run_trials(std::uint64_t trials, std::uint64_t seed, const TrialEvent &event,
                       unsigned workers)
{
    if (trials == 0)
        throw std::invalid_argument("at least one trial required");
    if (workers == 0)
    {
        workers = std::thread::hardware_concurrency();
        if (workers == 0)
            workers = 1;
    }

    std::uint64_t n_chunks = (trials + chunk_size - 1) / chunk_size;
    if (workers > n_chunks)
        workers = unsigned(n_chunks);

    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<std::uint64_t> count_r{0};
    std::atomic<std::uint64_t> count_t{0};

    auto worker = [&] {
        for (;;)
        {
            std::uint64_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks)
                return;
            std::uint64_t begin = c * chunk_size;
            std::uint64_t end = std::min(begin + chunk_size, trials);
            std::uint64_t local_r = 0, local_t = 0;
            for (std::uint64_t i = begin; i < end; ++i)
            {
                // the stream depends only on (seed, trial index), never on
                // which worker runs the trial
                RngStream rng(mix_seed(seed, i));
                auto [out_r, out_t] = event(rng);
                local_r += out_r ? 1 : 0;
                local_t += out_t ? 1 : 0;
            }
            count_r.fetch_add(local_r);
            count_t.fetch_add(local_t);
        }
    };

    if (workers == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }

    return {make_estimate(count_r.load(), trials), make_estimate(count_t.load(), trials)};
}

PointResult run_point(const access::UplinkScenario &sc, const LinkSet &links, std::uint64_t trials,
                      std::uint64_t seed, unsigned workers)
{
    access::UplinkScenario scenario = access::with_derived_amplitudes(sc);
    access::validate(scenario);
    channels::validate(links.bs);
    channels::validate(links.user_r);
    channels::validate(links.user_t);
    auto amps = access::build_surface(scenario);
    auto event = [&scenario, &links, &amps](RngStream &rng) {
        return scenario_trial(scenario, links, amps, rng);
    };
    return run_trials(trials, seed, event, workers);
}

const char *variant_name(Variant v)
{
    switch (v)
    {
    case Variant::noma_perfect:
        return "noma_perfect_sic";
    case Variant::noma_imperfect:
        return "noma_imperfect_sic";
    case Variant::oma:
        return "oma";
    }
    return "unknown";
}

std::vector<SweepRow> run_sweep(const SweepSpec &spec)
{
    if (spec.grid.empty())
        throw std::invalid_argument("sweep grid is empty");

    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size() * 6);
    const Variant variants[] = {Variant::noma_perfect, Variant::noma_imperfect, Variant::oma};

    for (std::size_t pi = 0; pi < spec.grid.size(); ++pi)
    {
        double value = spec.grid[pi];
        for (std::size_t vi = 0; vi < 3; ++vi)
        {
            access::UplinkScenario sc = spec.scenario;
            switch (spec.variable)
            {
            case SweepVariable::transmit_snr_db:
                sc.p = sc.noise * std::pow(10.0, value / 10.0);
                break;
            case SweepVariable::beta_t:
                sc.beta_t = value;
                sc.beta_r = 0.0; // re-derived as the complement below
                break;
            case SweepVariable::m_elements:
                if (value < 1.0 || value != std::floor(value))
                    throw std::invalid_argument("element count sweep needs positive integers");
                sc.m_elements = std::size_t(value);
                break;
            }

            Variant variant = variants[vi];
            sc.scheme = (variant == Variant::oma) ? access::Scheme::oma : access::Scheme::noma;
            if (variant == Variant::noma_perfect)
                sc.alpha0 = 0.0;

            std::uint64_t point_seed = mix_seed(spec.seed, pi, vi);
            PointResult res = run_point(sc, spec.links, spec.trials, point_seed, spec.workers);

            for (auto user : {access::User::r, access::User::t})
            {
                const OutageEstimate &e = (user == access::User::r) ? res.user_r : res.user_t;
                rows.push_back({value, variant, user, e.p_hat, e.ci_half_width, e.successes, e.trials,
                                point_seed});
            }
        }
    }
    return rows;
}

} // namespace starris::sim
