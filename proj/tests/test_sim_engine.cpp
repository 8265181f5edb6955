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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "starris/access.hpp"
#include "starris/analysis.hpp"
#include "starris/channels.hpp"
#include "starris/rng.hpp"
#include "starris/sim_engine.hpp"

using namespace starris::sim;
using starris::mix_seed;
using starris::RngStream;
using starris::access::UplinkScenario;
using starris::channels::RicianLink;

TEST_CASE("make_estimate - Normal interval away from the boundaries") {
    const auto e = make_estimate(500, 1000);
    CHECK(e.p_hat == 0.5);
    // 1.959963984540054 * sqrt(0.25/1000) = 0.030989751615228078
    CHECK(std::abs(e.ci_half_width - 0.030989751615228078) < 1e-15);
    CHECK_THROWS_AS(make_estimate(0, 0), std::invalid_argument);
}

TEST_CASE("make_estimate - Wilson width near the boundaries") {
    // at zero successes the normal width collapses to zero; Wilson keeps a
    // defensible 0.0019133792427775616
    const auto z = make_estimate(0, 1000);
    CHECK(z.p_hat == 0.0);
    CHECK(std::abs(z.ci_half_width - 0.0019133792427775616) < 1e-15);
    // one success: 0.0027330061136659284
    const auto one = make_estimate(1, 1000);
    CHECK(std::abs(one.ci_half_width - 0.0027330061136659284) < 1e-15);
    // interval widths stay monotone through the switch at ten successes
    CHECK(one.ci_half_width > z.ci_half_width);
}

TEST_CASE("run_trials - Worker count cannot change the outcome") {
    const TrialEvent event = [](RngStream &rng) {
        const double u = rng.next_double();
        return std::make_pair(u < 0.3, u < 0.7);
    };
    const auto base = run_trials(50000, 424242, event, 1);
    for (const unsigned workers : {2u, 3u, 5u, 0u}) {
        const auto res = run_trials(50000, 424242, event, workers);
        CHECK(res.user_r.successes == base.user_r.successes);
        CHECK(res.user_t.successes == base.user_t.successes);
    }
    // a different seed draws a different sample
    const auto other = run_trials(50000, 424243, event, 1);
    CHECK(other.user_r.successes != base.user_r.successes);
}

TEST_CASE("run_trials - Trial streams depend only on seed and index") {
    const std::uint64_t seed = 1234, trials = 20000;
    const TrialEvent event = [](RngStream &rng) {
        const double u = rng.next_double();
        return std::make_pair(u < 0.25, u < 0.5);
    };
    std::uint64_t manual_r = 0, manual_t = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng(mix_seed(seed, i));
        const double u = rng.next_double();
        manual_r += u < 0.25 ? 1 : 0;
        manual_t += u < 0.5 ? 1 : 0;
    }
    const auto res = run_trials(trials, seed, event, 3);
    CHECK(res.user_r.successes == manual_r);
    CHECK(res.user_t.successes == manual_t);
}

TEST_CASE("run_trials - Interval coverage on a known Bernoulli") {
    // 200 independent runs against p = 0.1; the nominal 95% interval must
    // cover the truth in a believable fraction of them
    int covered = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const TrialEvent event = [](RngStream &rng) {
            const bool hit = rng.next_double() < 0.1;
            return std::make_pair(hit, hit);
        };
        const auto res = run_trials(1000, 5000 + rep, event, 1);
        if (std::abs(res.user_r.p_hat - 0.1) <= res.user_r.ci_half_width)
            ++covered;
    }
    CHECK(covered >= 180); // 0.90 * 200
    CHECK(covered <= 198); // 0.99 * 200
}

TEST_CASE("run_point - Replays the documented per-trial draw layout") {
    // one stream per trial, consuming h, g_r, g_t per element in that order
    UplinkScenario sc;
    sc.m_elements = 3;
    sc.beta_t = 0.2; // beta_r derived as the complement internally
    sc.p = 5.0;
    sc.noise = 1.0;
    sc.alpha0 = 0.3;
    const LinkSet links{{1.0, 1.0}, {0.5, 2.0}, {0.0, 1.0}};
    const std::uint64_t trials = 500, seed = 77;

    const auto derived = starris::access::with_derived_amplitudes(sc);
    std::uint64_t manual_r = 0, manual_t = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        RngStream rng(mix_seed(seed, i));
        double sum_r = 0.0, sum_t = 0.0;
        for (std::size_t e = 0; e < sc.m_elements; ++e) {
            const double ha = std::abs(starris::channels::sample_rician(links.bs, rng));
            const double gr = std::abs(starris::channels::sample_rician(links.user_r, rng));
            const double gt = std::abs(starris::channels::sample_rician(links.user_t, rng));
            sum_r += derived.beta_r * ha * gr;
            sum_t += derived.beta_t * ha * gt;
        }
        const auto sinrs =
            starris::access::noma_sinrs_from_gains(sum_r * sum_r, sum_t * sum_t, derived);
        const auto [out_r, out_t] = starris::access::noma_outage_events(sinrs, derived);
        manual_r += out_r ? 1 : 0;
        manual_t += out_t ? 1 : 0;
    }

    const auto res = run_point(sc, links, trials, seed, 2);
    CHECK(res.user_r.successes == manual_r);
    CHECK(res.user_t.successes == manual_t);
}

TEST_CASE("run_point - Dark transmission side leaves user t in certain outage") {
    UplinkScenario sc;
    sc.m_elements = 8;
    sc.beta_t = 0.0;
    sc.beta_r = 1.0;
    // The 8-element sum hardens user r's channel (mean ~6.7, sd ~1.55 in
    // amplitude), so at the default power its outage would be exactly zero.
    // Power is lowered until the threshold sits inside the fluctuation range:
    // outage iff sum < sqrt(1.8284/0.05) = 6.05, about one sd below the mean.
    sc.p = 0.05;
    const LinkSet links{{1.3489628825916536, 1.0}, {1.3489628825916536, 1.0}, {0.0, 1.0}};
    const auto res = run_point(sc, links, 4000, 3, 1);
    CHECK(res.user_t.p_hat == 1.0);
    CHECK(res.user_r.p_hat > 0.05);
    CHECK(res.user_r.p_hat < 0.9);
}

TEST_CASE("run_point - Saturated SIC residual caps user t at high power") {
    // alpha0 = 1: sinr_t = g_t/(g_t + noise/p) -> 1 < threshold(1.5)
    UplinkScenario sc;
    sc.m_elements = 4;
    sc.alpha0 = 1.0;
    sc.p = 1e12;
    const LinkSet links{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    const auto res = run_point(sc, links, 2000, 9, 1);
    CHECK(res.user_t.p_hat == 1.0);
}

TEST_CASE("run_point - Estimates settle onto the noise-free event at high power") {
    // M = 8 with unit mean powers. The target rate of user r is raised to 3
    // so the gain-ratio event sits a couple of sd from the ratio's center and
    // stays measurable; at the pinned rate 1.5 it lives so deep in the left
    // tail of the hardened 8-element sums that 2e5 trials never observe it.
    UplinkScenario sc;
    sc.m_elements = 8;
    sc.beta_t = 0.2;
    sc.rate_r = 3.0;
    const RicianLink link{1.3489628825916536, 1.0};
    const LinkSet links{link, link, link};

    auto at50 = sc;
    at50.p = 1e5;
    sc.p = 1e4;
    const auto res40 = run_point(sc, links, 200000, 21, 0);
    const auto res50 = run_point(at50, links, 200000, 22, 0);

    // the two estimates sit on the same plateau
    CHECK(res40.user_r.p_hat > 0.005);
    CHECK(std::abs(res40.user_r.p_hat - res50.user_r.p_hat) <
          res40.user_r.ci_half_width + res50.user_r.ci_half_width);

    // and the plateau is the noise-free gain-ratio event itself, sampled
    // here directly on independent draws
    const auto derived = starris::access::with_derived_amplitudes(sc);
    const auto amps = starris::access::build_surface(derived);
    const TrialEvent event = [&](RngStream &rng) {
        double sum_r = 0.0, sum_t = 0.0;
        for (std::size_t e = 0; e < sc.m_elements; ++e) {
            const double ha = std::abs(starris::channels::sample_rician(links.bs, rng));
            const double gr = std::abs(starris::channels::sample_rician(links.user_r, rng));
            const double gt = std::abs(starris::channels::sample_rician(links.user_t, rng));
            sum_r += amps[e].second * ha * gr;
            sum_t += amps[e].first * ha * gt;
        }
        return starris::access::high_snr_outage_event(sum_r, sum_t, derived);
    };
    const auto ev = run_trials(200000, 23, event, 0);
    CHECK(std::abs(res50.user_r.p_hat - ev.user_r.p_hat) <
          res50.user_r.ci_half_width + ev.user_r.ci_half_width + 1e-3);

    // The Gaussian-ratio closed form is a model, not an identity; at this
    // moderate deviation it should land within a factor of 3 of the truth.
    const auto [sr, st] = starris::channels::cascaded_stats_pair(link, link, link);
    starris::analysis::FloorQuery q;
    q.m = 8;
    q.beta_t = sc.beta_t;
    q.beta_r = starris::access::complement_amplitude(sc.beta_t);
    q.gamma_r = starris::access::threshold_noma(sc.rate_r);
    q.gamma_t = starris::access::threshold_noma(sc.rate_t);
    q.stats_r = sr;
    q.stats_t = st;
    const double floor_r = starris::analysis::error_floor(q).p_floor_r;
    CHECK(floor_r > ev.user_r.p_hat / 3.0);
    CHECK(floor_r < ev.user_r.p_hat * 3.0);
}

TEST_CASE("run_sweep - Row layout, derived seeds, and per-variant overrides") {
    SweepSpec spec;
    spec.scenario.m_elements = 4;
    spec.scenario.alpha0 = 0.4;
    spec.scenario.noise = 2.0;
    spec.links = {{1.0, 1.0}, {1.0, 1.0}, {0.5, 1.0}};
    spec.variable = SweepVariable::transmit_snr_db;
    spec.grid = {0.0, 10.0};
    spec.trials = 3000;
    spec.seed = 6;
    spec.workers = 1;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 12); // 2 points x 3 variants x 2 users

    // fixed emission order: per point, the variants in declaration order,
    // user r before user t
    CHECK(rows[0].value == 0.0);
    CHECK(rows[0].variant == Variant::noma_perfect);
    CHECK(rows[0].user == starris::access::User::r);
    CHECK(rows[1].user == starris::access::User::t);
    CHECK(rows[2].variant == Variant::noma_imperfect);
    CHECK(rows[4].variant == Variant::oma);
    CHECK(rows[6].value == 10.0);
    CHECK(rows[0].point_seed == mix_seed(spec.seed, std::size_t(0), std::size_t(0)));
    CHECK(rows[4].point_seed == mix_seed(spec.seed, std::size_t(0), std::size_t(2)));

    // a sweep row must be reproducible in isolation through run_point
    UplinkScenario sc = spec.scenario;
    sc.p = sc.noise * std::pow(10.0, 10.0 / 10.0);
    sc.alpha0 = 0.0; // noma_perfect override
    const auto lone = run_point(sc, spec.links, spec.trials, rows[6].point_seed, 1);
    CHECK(lone.user_r.successes == rows[6].successes);
    CHECK(lone.user_t.successes == rows[7].successes);

    // the OMA variant must have run under the orthogonal scheme: with these
    // links user t's halved-resource threshold is far out of reach
    sc = spec.scenario;
    sc.p = sc.noise; // value 0 dB
    sc.scheme = starris::access::Scheme::oma;
    const auto oma = run_point(sc, spec.links, spec.trials, rows[4].point_seed, 1);
    CHECK(oma.user_r.successes == rows[4].successes);
    CHECK(oma.user_t.successes == rows[5].successes);
}

TEST_CASE("run_sweep - Amplitude sweep rederives the complement split") {
    SweepSpec spec;
    spec.scenario.m_elements = 4;
    spec.scenario.beta_t = 0.9; // must be ignored by the sweep override
    spec.scenario.beta_r = 0.1;
    spec.links = {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    spec.variable = SweepVariable::beta_t;
    spec.grid = {0.3};
    spec.trials = 2000;
    spec.seed = 15;
    spec.workers = 1;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 6);

    UplinkScenario sc = spec.scenario;
    sc.beta_t = 0.3;
    sc.beta_r = 0.0; // run_point derives sqrt(1 - 0.09)
    sc.alpha0 = 0.0;
    const auto lone = run_point(sc, spec.links, spec.trials, rows[0].point_seed, 1);
    CHECK(lone.user_r.successes == rows[0].successes);
    CHECK(lone.user_t.successes == rows[1].successes);
}

TEST_CASE("run_sweep - Bad grids are rejected") {
    SweepSpec spec;
    spec.links = {{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}};
    spec.grid = {};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.variable = SweepVariable::m_elements;
    spec.grid = {4.5};
    spec.trials = 100;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
}

TEST_CASE("variant_name - Stable identifiers for table output") {
    CHECK(std::string(variant_name(Variant::noma_perfect)) == "noma_perfect_sic");
    CHECK(std::string(variant_name(Variant::noma_imperfect)) == "noma_imperfect_sic");
    CHECK(std::string(variant_name(Variant::oma)) == "oma");
}
