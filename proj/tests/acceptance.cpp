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

// Acceptance suite: every release gate of the project as one numbered test
// case each, with its tolerance pinned in code and a single [PASS]/[FAIL]
// line on stdout. The cases are independent and can be filtered
// individually (--test-case="criterion NN*"), which is how ctest runs them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "starris/access.hpp"
#include "starris/analysis.hpp"
#include "starris/channels.hpp"
#include "starris/em_core.hpp"
#include "starris/fieldmap.hpp"
#include "starris/rng.hpp"
#include "starris/sim_engine.hpp"

namespace em = starris::em;
namespace ch = starris::channels;
namespace ac = starris::access;
namespace an = starris::analysis;
namespace sim = starris::sim;
namespace fm = starris::fieldmap;
using starris::mix_seed;
using starris::RngStream;

namespace {

bool report(const char *label, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", label);
    std::fflush(stdout);
    return ok;
}

void detail(const std::string &line) {
    std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// the pinned evaluation geometry: shape factor 1.3 dB on every hop, BS hop
// over 50 m and both user hops over 10 m with exponent 2.2
constexpr double k_pin = 1.3489628825916536; // 10^0.13
ch::RicianLink pinned_bs() { return {k_pin, ch::omega_from_distance(50.0, 2.2)}; }
ch::RicianLink pinned_user() { return {k_pin, ch::omega_from_distance(10.0, 2.2)}; }

ac::UplinkScenario pinned_scenario() {
    ac::UplinkScenario sc;
    sc.m_elements = 64;
    sc.beta_t = 0.2;
    sc.beta_r = ac::complement_amplitude(0.2);
    sc.rate_r = 1.5;
    sc.rate_t = 1.5;
    sc.noise = 1.0;
    sc.alpha0 = 0.0;
    return sc;
}

double random_reactance(RngStream &rng) {
    const double mag =
        em::free_space_impedance * std::pow(10.0, 6.0 * rng.next_double() - 3.0);
    return rng.next_double() < 0.5 ? -mag : mag;
}

// noise-free trial event on the cophased composites of the pinned scenario
sim::PointResult event_floor_mc(const ac::UplinkScenario &sc, const sim::LinkSet &links,
                                std::uint64_t trials, std::uint64_t seed) {
    const auto amps = ac::build_surface(sc);
    const auto event = [&](RngStream &rng) {
        double sum_r = 0.0, sum_t = 0.0;
        for (std::size_t i = 0; i < sc.m_elements; ++i) {
            const double ha = std::abs(ch::sample_rician(links.bs, rng));
            const double gr = std::abs(ch::sample_rician(links.user_r, rng));
            const double gt = std::abs(ch::sample_rician(links.user_t, rng));
            sum_r += amps[i].second * ha * gr;
            sum_t += amps[i].first * ha * gt;
        }
        return ac::high_snr_outage_event(sum_r, sum_t, sc);
    };
    return sim::run_trials(trials, seed, event, 0);
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("criterion 01: lossless elements conserve energy") {
    // 1000 purely reactive impedance pairs, |t|^2 + |r|^2 = 1 within 1e-12
    const double tol = 1e-12;
    RngStream rng(101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const em::ElementImpedance imp{{0.0, random_reactance(rng)},
                                       {0.0, random_reactance(rng)},
                                       em::free_space_impedance};
        const auto c = em::coefficients_from_impedance(imp);
        worst = std::max(worst, std::abs(em::passivity_excess(c)));
    }
    const bool ok = worst < tol;
    detail("worst |t^2 + r^2 - 1| = " + fmt(worst) + " (tolerance " + fmt(tol) + ")");
    CHECK(report("criterion 01: lossless elements conserve energy", ok));
}

TEST_CASE("criterion 02: lossless phase gap locks to a quarter turn") {
    // same reactive population; phase gap +-pi/2 within 1e-9 wherever both
    // amplitudes exceed 1e-6
    const double tol = 1e-9;
    RngStream rng(101); // same draw sequence as criterion 01
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const em::ElementImpedance imp{{0.0, random_reactance(rng)},
                                       {0.0, random_reactance(rng)},
                                       em::free_space_impedance};
        const auto c = em::coefficients_from_impedance(imp);
        if (c.beta_t() < 1e-6 || c.beta_r() < 1e-6)
            continue;
        ++checked;
        worst = std::max(worst,
                         std::abs(std::abs(em::lossless_phase_gap(c)) - M_PI / 2.0));
    }
    const bool ok = worst < tol && checked > 900;
    detail("checked " + std::to_string(checked) + " samples, worst ||gap| - pi/2| = " +
           fmt(worst));
    CHECK(report("criterion 02: lossless phase gap locks to a quarter turn", ok));
}

TEST_CASE("criterion 03: field balance matches coefficient scattering") {
    // induced_fields and scatter(coefficients_from_impedance(.)) are two
    // routes to the same received fields; 1000 random passive tuples
    const double tol = 1e-12;
    RngStream rng(103);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const em::ElementImpedance imp{
            {2.0 * em::free_space_impedance * rng.next_double(), random_reactance(rng)},
            {2.0 * em::free_space_impedance * rng.next_double(), random_reactance(rng)},
            em::free_space_impedance};
        const em::cplx e1(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
        const em::cplx e2(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
        const auto c = em::coefficients_from_impedance(imp);
        const auto [rec_a, rec_b] = em::scatter(c, e1, e2);
        const auto fs = em::induced_fields(imp, e1, e2);
        worst = std::max(worst, std::abs(fs.e_rec_a - rec_a));
        worst = std::max(worst, std::abs(fs.e_rec_b - rec_b));
    }
    const bool ok = worst < tol;
    detail("worst field mismatch = " + fmt(worst) + " (tolerance " + fmt(tol) + ")");
    CHECK(report("criterion 03: field balance matches coefficient scattering", ok));
}

TEST_CASE("criterion 04: cascade density validated against sampling") {
    // all four shape combinations on unit-power hops: the series density must
    // integrate to 1 within 1e-6 and stay within L1 distance 0.02 of a
    // million-sample histogram on [0, mu + 6 sigma] with 100 bins
    const double tol_l1 = 0.02;
    const double tol_norm = 1e-6;
    bool ok = true;
    int combo = 0;
    for (const double kh : {0.0, k_pin}) {
        for (const double kg : {0.0, k_pin}) {
            const ch::RicianLink lh{kh, 1.0};
            const ch::RicianLink lg{kg, 1.0};
            const auto [mu, sigma] = ch::cascaded_moments(lh, lg);

            oracles::Histogram hist(mu + 6.0 * sigma, 100);
            RngStream rng(400 + combo);
            for (int i = 0; i < 1000000; ++i)
                hist.add(std::abs(ch::sample_rician(lh, rng)) *
                         std::abs(ch::sample_rician(lg, rng)));
            const double l1 = oracles::l1_against_density(
                hist, [&](double x) { return ch::product_rician_pdf(x, lh, lg); });

            const double mass = oracles::integrate(
                [&](double x) { return ch::product_rician_pdf(x, lh, lg); }, 0.0,
                mu + 16.0 * sigma, 1e-9);

            const bool pass = l1 < tol_l1 && std::abs(mass - 1.0) < tol_norm;
            detail("K_h=" + fmt(kh) + " K_g=" + fmt(kg) + ": L1=" + fmt(l1) +
                   ", mass=" + fmt(mass) + (pass ? "" : "  <-- out of tolerance"));
            ok = ok && pass;
            ++combo;
        }
    }
    CHECK(report("criterion 04: cascade density validated against sampling", ok));
}

TEST_CASE("criterion 05: cascade moments validated against sampling") {
    // closed-form mu, sigma, rho within 4 empirical standard errors of a
    // million-draw estimate (100 batches of 10000), plus the exact Rayleigh
    // anchor mu = pi/4
    const ch::RicianLink bs{k_pin, 0.5};
    const ch::RicianLink user_r{k_pin, 2.0};
    const ch::RicianLink user_t{0.0, 1.0};
    const auto [st_r, st_t] = ch::cascaded_stats_pair(bs, user_r, user_t);

    const int batches = 100, per_batch = 10000;
    std::vector<double> mu_r(batches), sd_r(batches), mu_t(batches), sd_t(batches),
        rho(batches);
    RngStream rng(105);
    for (int b = 0; b < batches; ++b) {
        oracles::PairStats ps;
        for (int i = 0; i < per_batch; ++i) {
            const double ha = std::abs(ch::sample_rician(bs, rng));
            ps.add(ha * std::abs(ch::sample_rician(user_r, rng)),
                   ha * std::abs(ch::sample_rician(user_t, rng)));
        }
        mu_r[b] = ps.a.mean();
        sd_r[b] = ps.a.sd();
        mu_t[b] = ps.b.mean();
        sd_t[b] = ps.b.sd();
        rho[b] = ps.corr();
    }
    const auto against = [&](const std::vector<double> &est, double closed,
                             const char *name) {
        oracles::SampleStats s;
        for (const double v : est)
            s.add(v);
        const double se = s.se();
        const bool pass = std::abs(s.mean() - closed) < 4.0 * se;
        detail(std::string(name) + ": closed=" + fmt(closed) + " sampled=" +
               fmt(s.mean()) + " se=" + fmt(se) + (pass ? "" : "  <-- out of tolerance"));
        return pass;
    };
    bool ok = against(mu_r, st_r.mu, "mu_r");
    ok = against(sd_r, st_r.sigma, "sigma_r") && ok;
    ok = against(mu_t, st_t.mu, "mu_t") && ok;
    ok = against(sd_t, st_t.sigma, "sigma_t") && ok;
    ok = against(rho, st_r.rho, "rho") && ok;

    const auto [mu_ray, sd_ray] = ch::cascaded_moments({0.0, 1.0}, {0.0, 1.0});
    const bool ray_ok = std::abs(mu_ray - M_PI / 4.0) < 1e-10;
    detail("rayleigh anchor |mu - pi/4| = " + fmt(std::abs(mu_ray - M_PI / 4.0)));
    ok = ok && ray_ok;
    CHECK(report("criterion 05: cascade moments validated against sampling", ok));
}

TEST_CASE("criterion 06: analytic floor meets simulation at 40 dB") {
    // pinned geometry, M = 64, perfect SIC, transmit SNR 40 dB, 1e6 trials:
    // |floor - p_hat| <= max(0.01, 3 CI) per user (user t's clause applies
    // because 1/alpha0 is unbounded here)
    ac::UplinkScenario sc = pinned_scenario();
    sc.p = 1e4; // 40 dB over unit noise
    const sim::LinkSet links{pinned_bs(), pinned_user(), pinned_user()};

    const auto [stats_r, stats_t] = ch::cascaded_stats_pair(links.bs, links.user_r, links.user_t);
    an::FloorQuery q;
    q.m = int(sc.m_elements);
    q.beta_t = sc.beta_t;
    q.beta_r = sc.beta_r;
    q.gamma_r = ac::threshold_noma(sc.rate_r);
    q.gamma_t = ac::threshold_noma(sc.rate_t);
    q.alpha0 = sc.alpha0;
    q.stats_r = stats_r;
    q.stats_t = stats_t;
    const an::FloorResult floor = an::error_floor(q);

    const auto mc = sim::run_point(sc, links, 1000000, 106, 0);
    const double gap_r = std::abs(floor.p_floor_r - mc.user_r.p_hat);
    const double gap_t = std::abs(floor.p_floor_t - mc.user_t.p_hat);
    const bool ok_r = gap_r <= std::max(0.01, 3.0 * mc.user_r.ci_half_width);
    const bool ok_t = gap_t <= std::max(0.01, 3.0 * mc.user_t.ci_half_width);

    detail("user r: floor=" + fmt(floor.p_floor_r) + " mc=" + fmt(mc.user_r.p_hat) +
           " ci=" + fmt(mc.user_r.ci_half_width) + (ok_r ? "" : "  <-- disagrees"));
    detail("user t: floor=" + fmt(floor.p_floor_t) + " mc=" + fmt(mc.user_t.p_hat) +
           " ci=" + fmt(mc.user_t.ci_half_width) + (ok_t ? "" : "  <-- disagrees"));
    if (!ok_t) {
        // show where the gap comes from: the noise-free ratio event itself
        // does match the floor; 40 dB is simply not yet in the floor regime
        // for user t under this path loss (its decode is still noise-limited)
        const auto ev = event_floor_mc(sc, links, 1000000, 107);
        detail("user t noise-free ratio event: mc=" + fmt(ev.user_t.p_hat) + " ci=" +
               fmt(ev.user_t.ci_half_width) + " vs floor=" + fmt(floor.p_floor_t));
    }
    const bool ok = ok_r && ok_t;
    CHECK(report("criterion 06: analytic floor meets simulation at 40 dB", ok));
}

TEST_CASE("criterion 07: saturated SIC pins user t in outage") {
    // alpha0 = 0.6 leaves 1/alpha0 = 1.667 below the threshold 1.828: the
    // analytic floor must sit at exactly 1 and simulation must agree
    ac::UplinkScenario sc = pinned_scenario();
    sc.alpha0 = 0.6;
    sc.p = 1e4;
    const sim::LinkSet links{pinned_bs(), pinned_user(), pinned_user()};

    const auto [stats_r, stats_t] = ch::cascaded_stats_pair(links.bs, links.user_r, links.user_t);
    an::FloorQuery q;
    q.m = int(sc.m_elements);
    q.beta_t = sc.beta_t;
    q.beta_r = sc.beta_r;
    q.gamma_r = ac::threshold_noma(sc.rate_r);
    q.gamma_t = ac::threshold_noma(sc.rate_t);
    q.alpha0 = sc.alpha0;
    q.stats_r = stats_r;
    q.stats_t = stats_t;
    const an::FloorResult floor = an::error_floor(q);
    const bool exact_one = (floor.p_floor_t == 1.0);

    const auto mc = sim::run_point(sc, links, 100000, 108, 0);
    const bool mc_ok = mc.user_t.p_hat >= 0.999;

    detail("analytic floor_t = " + fmt(floor.p_floor_t) + " (exact 1: " +
           (exact_one ? "yes" : "no") + "), mc at 40 dB = " + fmt(mc.user_t.p_hat));
    const bool ok = exact_one && mc_ok;
    CHECK(report("criterion 07: saturated SIC pins user t in outage", ok));
}

TEST_CASE("criterion 08: access schemes ordered across the SNR sweep") {
    // 0..10 dB in 11 points, 1e5 trials: NOMA outage <= OMA outage at >= 80%
    // of points per user, and every curve non-increasing within 2 CI
    sim::SweepSpec spec;
    spec.scenario = pinned_scenario();
    spec.scenario.alpha0 = 0.6; // the imperfect-SIC variant uses this
    spec.links = {pinned_bs(), pinned_user(), pinned_user()};
    spec.variable = sim::SweepVariable::transmit_snr_db;
    for (int i = 0; i <= 10; ++i)
        spec.grid.push_back(double(i));
    spec.trials = 100000;
    spec.seed = 109;
    const auto rows = sim::run_sweep(spec);

    // index rows: [variant][user][point]
    auto curve = [&](sim::Variant v, ac::User u) {
        std::vector<const sim::SweepRow *> c;
        for (const auto &row : rows)
            if (row.variant == v && row.user == u)
                c.push_back(&row);
        return c;
    };

    bool ok = true;
    for (const auto u : {ac::User::r, ac::User::t}) {
        const auto noma = curve(sim::Variant::noma_perfect, u);
        const auto oma = curve(sim::Variant::oma, u);
        int le = 0;
        for (std::size_t i = 0; i < noma.size(); ++i)
            if (noma[i]->p_hat <= oma[i]->p_hat)
                ++le;
        const bool order_ok = le * 5 >= int(noma.size()) * 4; // >= 80%
        detail(std::string("user ") + (u == ac::User::r ? "r" : "t") + ": noma <= oma at " +
               std::to_string(le) + "/" + std::to_string(noma.size()) + " points" +
               (order_ok ? "" : "  <-- below 80%"));
        ok = ok && order_ok;
    }
    for (const auto v : {sim::Variant::noma_perfect, sim::Variant::noma_imperfect,
                         sim::Variant::oma}) {
        for (const auto u : {ac::User::r, ac::User::t}) {
            const auto c = curve(v, u);
            for (std::size_t i = 0; i + 1 < c.size(); ++i) {
                const double slack = 2.0 * (c[i]->ci_half_width + c[i + 1]->ci_half_width);
                if (c[i + 1]->p_hat > c[i]->p_hat + slack) {
                    detail(std::string(sim::variant_name(v)) + " user " +
                           (u == ac::User::r ? "r" : "t") + " rises at " +
                           fmt(c[i + 1]->value) + " dB");
                    ok = false;
                }
            }
        }
    }
    detail("note: this window sits in the all-outage regime under the pinned "
           "path loss; ties satisfy both gates");

    // informational only: a window where the curves separate. The amplitude
    // asymmetry (NOMA splits 0.2 / 0.98, OMA grants every element amplitude
    // 1) lets user r keep its NOMA advantage while user t eventually trades
    // the interference-free OMA slot against its weak transmission amplitude.
    sim::SweepSpec info = spec;
    info.grid = {30.0, 35.0, 40.0, 45.0, 50.0};
    info.trials = 30000;
    info.seed = 1090;
    const auto irows = sim::run_sweep(info);
    auto icurve = [&](sim::Variant v, ac::User u) {
        std::vector<const sim::SweepRow *> c;
        for (const auto &row : irows)
            if (row.variant == v && row.user == u)
                c.push_back(&row);
        return c;
    };
    const auto np_r = icurve(sim::Variant::noma_perfect, ac::User::r);
    const auto np_t = icurve(sim::Variant::noma_perfect, ac::User::t);
    const auto om_r = icurve(sim::Variant::oma, ac::User::r);
    const auto om_t = icurve(sim::Variant::oma, ac::User::t);
    for (std::size_t i = 0; i < np_r.size(); ++i)
        detail("info " + fmt(np_r[i]->value) + " dB: noma r=" + fmt(np_r[i]->p_hat) +
               " oma r=" + fmt(om_r[i]->p_hat) + " | noma t=" + fmt(np_t[i]->p_hat) +
               " oma t=" + fmt(om_t[i]->p_hat));

    CHECK(report("criterion 08: access schemes ordered across the SNR sweep", ok));
}

TEST_CASE("criterion 09: floors ordered in the transmission amplitude") {
    // analytic floors strictly increase over beta_t in {0.15, 0.2, 0.25} at
    // M = 64; the simulated noise-free event reproduces the ordering at
    // M = 8 (where the floors are large enough to measure) with separations
    // beyond the interval sum; mode switching at 25% stays within 0.05 of
    // the uniform beta_t = 0.25 floor
    const sim::LinkSet links{pinned_bs(), pinned_user(), pinned_user()};
    const auto [stats_r, stats_t] = ch::cascaded_stats_pair(links.bs, links.user_r, links.user_t);

    an::FloorQuery q;
    q.gamma_r = ac::threshold_noma(1.5);
    q.gamma_t = ac::threshold_noma(1.5);
    q.stats_r = stats_r;
    q.stats_t = stats_t;

    bool ok = true;
    const double betas[3] = {0.15, 0.2, 0.25};

    q.m = 64;
    double floors64[3];
    for (int i = 0; i < 3; ++i) {
        q.beta_t = betas[i];
        q.beta_r = ac::complement_amplitude(betas[i]);
        floors64[i] = an::error_floor(q).p_floor_r;
    }
    const bool analytic_ok = floors64[0] < floors64[1] && floors64[1] < floors64[2];
    detail("analytic floors at M=64: " + fmt(floors64[0]) + " < " + fmt(floors64[1]) +
           " < " + fmt(floors64[2]) + (analytic_ok ? "" : "  <-- not increasing"));
    ok = ok && analytic_ok;

    // The simulated leg runs at M = 8 and target rate 3 for user r: with the
    // pinned rate 1.5 the ratio event sits so deep in the left tail of the
    // hardened sums that no feasible trial count observes it, while at rate 3
    // the floors land around 1e-2 where a million trials resolve the ordering.
    an::FloorQuery q8 = q;
    q8.m = 8;
    q8.gamma_r = ac::threshold_noma(3.0);
    double floors8[3];
    sim::OutageEstimate mc8[3];
    for (int i = 0; i < 3; ++i) {
        q8.beta_t = betas[i];
        q8.beta_r = ac::complement_amplitude(betas[i]);
        floors8[i] = an::error_floor(q8).p_floor_r;
        ac::UplinkScenario sc = pinned_scenario();
        sc.m_elements = 8;
        sc.rate_r = 3.0;
        sc.beta_t = betas[i];
        sc.beta_r = q8.beta_r;
        mc8[i] = event_floor_mc(sc, links, 1000000, 110 + i).user_r;
        detail("M=8 rate_r=3 beta_t=" + fmt(betas[i]) + ": analytic=" + fmt(floors8[i]) +
               " mc=" + fmt(mc8[i].p_hat) + " ci=" + fmt(mc8[i].ci_half_width));
    }
    const bool analytic8_ok = floors8[0] < floors8[1] && floors8[1] < floors8[2];
    const bool mc_ok =
        mc8[0].p_hat + mc8[0].ci_half_width + mc8[1].ci_half_width < mc8[1].p_hat &&
        mc8[1].p_hat + mc8[1].ci_half_width + mc8[2].ci_half_width < mc8[2].p_hat;
    if (!analytic8_ok)
        detail("analytic ordering broken at M=8");
    if (!mc_ok)
        detail("simulated ordering not separated beyond the interval sum");
    ok = ok && analytic8_ok && mc_ok;

    q.m = 64;
    q.beta_t = 0.25;
    q.beta_r = ac::complement_amplitude(0.25);
    const double ms = an::floor_for_ms(0.25, q).p_floor_r;
    const bool ms_ok = std::abs(ms - floors64[2]) < 0.05;
    detail("mode switching 25%: floor=" + fmt(ms) + ", |diff to uniform 0.25| = " +
           fmt(std::abs(ms - floors64[2])) + (ms_ok ? "" : "  <-- beyond 0.05"));
    ok = ok && ms_ok;
    CHECK(report("criterion 09: floors ordered in the transmission amplitude", ok));
}

TEST_CASE("criterion 10: Gaussian surrogate converges with element count") {
    // KL divergence of the exact M-fold sum density from its Gaussian
    // surrogate over M in {5, 10, 15, 20, 25}: non-increasing with at most
    // one inversion, and below 0.1 nats from M = 20 on
    const ch::RicianLink link{k_pin, 1.0};
    const int ms[5] = {5, 10, 15, 20, 25};
    double d[5];
    for (int i = 0; i < 5; ++i) {
        d[i] = ch::kl_gaussian_approx(ms[i], link, link);
        detail("M=" + std::to_string(ms[i]) + ": " + fmt(d[i]) + " nats");
    }
    int inversions = 0;
    for (int i = 0; i + 1 < 5; ++i)
        if (d[i + 1] > d[i])
            ++inversions;
    const bool ok = inversions <= 1 && d[3] < 0.1 && d[4] < 0.1 && d[0] > 0.0;
    detail("inversions: " + std::to_string(inversions) + " (at most 1 allowed)");
    CHECK(report("criterion 10: Gaussian surrogate converges with element count", ok));
}

TEST_CASE("criterion 11: cophased surface focuses power on the BS") {
    // 8x8 half-wavelength array, both users lit, per-side phase profiles
    // cophased toward the BS at (1, 3, 0): the map peak must land within one
    // cell of the BS and clear the off-beam median by 10 dB; with the
    // transmission side switched off the far half-space must be exactly dark
    fm::ArrayGeometry geo; // 8x8, spacing 0.05, wavelength 0.1
    const fm::Vec3 bs{1.0, 3.0, 0.0};
    const fm::Vec3 user_r{-5.0, 15.0, 0.0};
    const fm::Vec3 user_t{0.0, -10.0, 0.0};
    const double p = 0.01; // 10 dBm
    fm::MapGrid grid;
    grid.extent_x = 40.0;
    grid.extent_y = 40.0;
    grid.nx = 20;
    grid.ny = 20; // centers -19 + 2i; (1, 3) is the center of cell (10, 11)

    const auto phase_r = fm::cophase_toward(geo, user_r, bs);
    const auto phase_t = fm::cophase_toward(geo, user_t, bs);
    const double amp = 1.0 / std::sqrt(2.0);
    std::vector<em::StarCoefficients> coeffs;
    for (std::size_t m = 0; m < geo.element_count(); ++m)
        coeffs.push_back(em::StarCoefficients::from_polar(amp, phase_t[m], amp, phase_r[m]));

    const auto map =
        fm::compute_power_map(geo, coeffs, {{user_r, p}, {user_t, p}}, grid);

    const auto peak_it = std::max_element(map.power.begin(), map.power.end());
    const std::size_t flat = std::size_t(peak_it - map.power.begin());
    const std::size_t px = flat % grid.nx, py = flat / grid.nx;
    const double cell = grid.extent_x / double(grid.nx);
    const bool peak_ok =
        std::abs(map.xs[px] - bs.x) <= cell && std::abs(map.ys[py] - bs.y) <= cell;

    // off-beam reference: cells more than 3 cell widths from the BS cell
    std::vector<double> off;
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            if ((std::abs(map.xs[i] - bs.x) > 3.0 * cell ||
                 std::abs(map.ys[j] - bs.y) > 3.0 * cell) &&
                map.at(i, j) > 0.0)
                off.push_back(map.at(i, j));
    std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
    const double median = off[off.size() / 2];
    const double margin_db = 10.0 * std::log10(*peak_it / median);
    const bool margin_ok = margin_db >= 10.0;

    detail("peak at (" + fmt(map.xs[px]) + ", " + fmt(map.ys[py]) + ") vs BS (1, 3), margin " +
           fmt(margin_db) + " dB over the off-beam median");

    // transmission switched off, only user r lit: the far side stays dark
    std::vector<em::StarCoefficients> dark;
    for (std::size_t m = 0; m < geo.element_count(); ++m)
        dark.push_back(em::StarCoefficients::from_polar(0.0, phase_t[m], amp, phase_r[m]));
    const auto half = fm::compute_power_map(geo, dark, {{user_r, p}}, grid);
    bool dark_ok = true;
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i)
            if (half.ys[j] < 0.0 && half.at(i, j) != 0.0)
                dark_ok = false;
    detail(std::string("far side with beta_t = 0: ") + (dark_ok ? "exactly zero" : "leaks"));

    const bool ok = peak_ok && margin_ok && dark_ok;
    CHECK(report("criterion 11: cophased surface focuses power on the BS", ok));
}

TEST_CASE("criterion 12: sweep output is byte-stable across worker counts") {
    // the shipped binary must produce identical CSV bytes for any --threads
    char tmpl[] = "/tmp/starris_acceptance_XXXXXX";
    const char *dir_c = mkdtemp(tmpl);
    REQUIRE(dir_c != nullptr);
    const std::string dir = dir_c;

    const std::string cfg_path = dir + "/run.ini";
    {
        std::ofstream cfg(cfg_path);
        cfg << "[surface]\nm = 8\nbeta_t = 0.2\n\n"
               "[links]\npath_loss_exponent = 2.2\n"
               "h.k_db = 1.3\nh.distance = 50\n"
               "g_r.k_db = 1.3\ng_r.distance = 10\n"
               "g_t.k_db = 1.3\ng_t.distance = 10\n\n"
               "[access]\nscheme = noma\nalpha0 = 0.6\nrate_r = 1.5\nrate_t = 1.5\n"
               "noise_dbm = -50\n\n"
               "[sweep]\nvariable = transmit_snr_db\ngrid = 0:10:5\ntrials = 20000\n"
               "seed = 11\n\n"
               "[output]\ncsv = " << dir << "/base.csv\n";
    }

    const auto run = [&](const std::string &extra, const std::string &csv) {
        const std::string cmd = std::string(STARRIS_CLI_PATH) + " outage --config " +
                                cfg_path + " --out " + csv + " " + extra + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) && WEXITSTATUS(status) == 0;
    };
    bool ok = run("--threads 1", dir + "/t1.csv");
    ok = run("--threads 3", dir + "/t3.csv") && ok;
    ok = run("", dir + "/t0.csv") && ok; // hardware default

    const std::string b1 = read_file(dir + "/t1.csv");
    const std::string b3 = read_file(dir + "/t3.csv");
    const std::string b0 = read_file(dir + "/t0.csv");
    const bool stable = !b1.empty() && b1 == b3 && b1 == b0;
    detail(std::string("csv bytes: threads 1 vs 3 ") + (b1 == b3 ? "identical" : "differ") +
           ", vs default " + (b1 == b0 ? "identical" : "differ"));
    const bool all = ok && stable;
    CHECK(report("criterion 12: sweep output is byte-stable across worker counts", all));
}
