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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starris/access.hpp"
#include "starris/analysis.hpp"
#include "starris/channels.hpp"
#include "starris/em_core.hpp"
#include "starris/fieldmap.hpp"
#include "starris/run_config.hpp"
#include "starris/sim_engine.hpp"
#include "starris/table_io.hpp"

namespace
{

using starris::io::format_full;

// complex flag values come in as "a", "bj" or "a+bj" / "a-bj"
starris::em::cplx parse_complex(const std::string &s)
{
    const char *c = s.c_str();
    char *end = nullptr;
    double first = std::strtod(c, &end);
    if (end == c)
        throw std::invalid_argument("cannot parse complex value '" + s + "' (expected a+bj)");
    if (*end == 'j' || *end == 'i')
        return (*(end + 1) == '\0')
                   ? starris::em::cplx{0.0, first}
                   : throw std::invalid_argument("trailing characters in complex value '" + s + "'");
    if (*end == '\0')
        return {first, 0.0};
    const char *c2 = end;
    double second = std::strtod(c2, &end);
    if (end == c2 || (*end != 'j' && *end != 'i') || *(end + 1) != '\0')
        throw std::invalid_argument("cannot parse complex value '" + s + "' (expected a+bj)");
    return {first, second};
}

std::vector<double> parse_list(const std::string &s, const std::string &what)
{
    std::vector<double> values;
    std::istringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ','))
    {
        char *end = nullptr;
        double v = std::strtod(part.c_str(), &end);
        if (end == part.c_str() || *end != '\0')
            throw std::invalid_argument("cannot parse " + what + " entry '" + part + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw std::invalid_argument(what + " list is empty");
    return values;
}

starris::fieldmap::Vec3 parse_vec3(const std::string &s, const std::string &what)
{
    auto v = parse_list(s, what);
    if (v.size() != 3)
        throw std::invalid_argument(what + " needs exactly three coordinates x,y,z");
    return {v[0], v[1], v[2]};
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void emit(const std::string &out_path, const std::string &content)
{
    if (out_path.empty())
        std::cout << content;
    else
        starris::io::write_text_file(out_path, content);
}

std::string sidecar_path(const std::string &csv_path)
{
    std::size_t dot = csv_path.find_last_of('.');
    std::size_t slash = csv_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return csv_path.substr(0, dot) + ".json";
    return csv_path + ".json";
}

// ---------------------------------------------------------------- coeffs --

struct CoeffsArgs
{
    std::string ze;
    std::string zm;
    double eta = starris::em::free_space_impedance;
    std::string out;
};

void run_coeffs(const CoeffsArgs &a)
{
    namespace em = starris::em;
    em::ElementImpedance imp{parse_complex(a.ze), parse_complex(a.zm), a.eta};
    em::validate(imp);
    em::StarCoefficients c = em::coefficients_from_impedance(imp);

    std::string gap;
    if (c.beta_t() > 0.0 && c.beta_r() > 0.0)
        gap = format_full(em::lossless_phase_gap(c));

    std::ostringstream csv;
    csv << "t_re,t_im,r_re,r_im,beta_t,phi_t_rad,beta_r,phi_r_rad,passivity_excess,phase_gap_rad\n";
    csv << format_full(c.t.real()) << ',' << format_full(c.t.imag()) << ','
        << format_full(c.r.real()) << ',' << format_full(c.r.imag()) << ','
        << format_full(c.beta_t()) << ',' << format_full(c.phi_t()) << ','
        << format_full(c.beta_r()) << ',' << format_full(c.phi_r()) << ','
        << format_full(em::passivity_excess(c)) << ',' << gap << '\n';
    emit(a.out, csv.str());
}

// ---------------------------------------------------------------- outage --

struct OutageArgs
{
    std::string config;
    std::string out;
    std::string meta;
    unsigned threads = 0;
    bool threads_set = false;
};

void run_outage(const OutageArgs &a)
{
    namespace sim = starris::sim;
    starris::cli::RunConfig cfg = starris::cli::load_run_config(a.config);
    if (!a.out.empty())
    {
        cfg.csv_path = a.out;
        cfg.meta_path = a.meta.empty() ? sidecar_path(a.out) : a.meta;
    }
    else if (!a.meta.empty())
    {
        cfg.meta_path = a.meta;
    }
    if (a.threads_set)
        cfg.spec.workers = a.threads;

    std::vector<sim::SweepRow> rows = sim::run_sweep(cfg.spec);

    std::ostringstream csv;
    csv << "value,variant,user,p_hat,ci_half_width,successes,trials,seed\n";
    for (const auto &row : rows)
    {
        csv << format_full(row.value) << ',' << sim::variant_name(row.variant) << ','
            << (row.user == starris::access::User::r ? 'r' : 't') << ',' << format_full(row.p_hat)
            << ',' << format_full(row.ci_half_width) << ',' << row.successes << ',' << row.trials
            << ',' << row.point_seed << '\n';
    }
    starris::io::write_text_file(cfg.csv_path, csv.str());

    nlohmann::json meta;
    meta["tool"] = "starris outage";
    meta["version"] = starris::io::tool_version;
    meta["seed"] = cfg.spec.seed;
    meta["trials"] = cfg.spec.trials;
    meta["csv"] = cfg.csv_path;
    meta["config_echo"] = cfg.canonical;
    starris::io::write_text_file(cfg.meta_path, meta.dump(2) + "\n");

    std::cerr << "wrote " << cfg.csv_path << " and " << cfg.meta_path << "\n";
}

// ----------------------------------------------------------------- links --

// shared flags of the analysis-side subcommands: one BS hop and one or two
// user hops, each given either as omega or as distance + shared exponent
struct LinkArgs
{
    double k_db = 1.3;
    double dist_h = 50.0;
    double dist_r = 10.0;
    double dist_t = 10.0;
    double exponent = 2.2;
    double omega_h = 0.0; // 0 = derive from distance
    double omega_r = 0.0;
    double omega_t = 0.0;

    starris::channels::RicianLink bs() const
    {
        double k = starris::channels::k_from_db(k_db);
        double om = omega_h > 0.0 ? omega_h : starris::channels::omega_from_distance(dist_h, exponent);
        return {k, om};
    }
    starris::channels::RicianLink user_r() const
    {
        double k = starris::channels::k_from_db(k_db);
        double om = omega_r > 0.0 ? omega_r : starris::channels::omega_from_distance(dist_r, exponent);
        return {k, om};
    }
    starris::channels::RicianLink user_t() const
    {
        double k = starris::channels::k_from_db(k_db);
        double om = omega_t > 0.0 ? omega_t : starris::channels::omega_from_distance(dist_t, exponent);
        return {k, om};
    }
};

void add_link_flags(CLI::App *sub, LinkArgs &l)
{
    sub->add_option("--k-db", l.k_db, "Rician K factor of every link, dB");
    sub->add_option("--dist-h", l.dist_h, "surface-BS distance, m");
    sub->add_option("--dist-r", l.dist_r, "user r - surface distance, m");
    sub->add_option("--dist-t", l.dist_t, "user t - surface distance, m");
    sub->add_option("--exponent", l.exponent, "path loss exponent, unitless");
    sub->add_option("--omega-h", l.omega_h, "mean power of the surface-BS link, overrides --dist-h");
    sub->add_option("--omega-r", l.omega_r, "mean power of the user r link, overrides --dist-r");
    sub->add_option("--omega-t", l.omega_t, "mean power of the user t link, overrides --dist-t");
}

// ----------------------------------------------------------------- floor --

struct FloorArgs
{
    int m = 64;
    std::string beta_t_list;
    double ms_fraction = 0.0; // 0 = no mode-switching row
    double alpha0 = 0.0;
    double rate_r = 1.5;
    double rate_t = 1.5;
    std::string convention = "sum";
    LinkArgs links;
    std::string out;
};

void run_floor(const FloorArgs &a)
{
    namespace analysis = starris::analysis;
    namespace access = starris::access;

    analysis::MomentConvention conv;
    if (a.convention == "sum")
        conv = analysis::MomentConvention::sum_level;
    else if (a.convention == "element")
        conv = analysis::MomentConvention::per_element;
    else
        throw std::invalid_argument("unknown convention '" + a.convention + "' (use sum or element)");

    auto [stats_r, stats_t] =
        starris::channels::cascaded_stats_pair(a.links.bs(), a.links.user_r(), a.links.user_t());

    starris::analysis::FloorQuery q;
    q.m = a.m;
    q.gamma_r = access::threshold_noma(a.rate_r);
    q.gamma_t = access::threshold_noma(a.rate_t);
    q.alpha0 = a.alpha0;
    q.stats_r = stats_r;
    q.stats_t = stats_t;

    std::ostringstream csv;
    csv << "mode,beta_t,transmit_fraction,floor_r,floor_t,regime_ok\n";
    for (double beta : parse_list(a.beta_t_list, "beta_t"))
    {
        q.beta_t = beta;
        q.beta_r = access::complement_amplitude(beta);
        analysis::FloorResult res = analysis::error_floor(q, conv);
        csv << "uniform," << format_full(beta) << ",," << format_full(res.p_floor_r) << ','
            << format_full(res.p_floor_t) << ',' << (res.regime_ok ? 1 : 0) << '\n';
    }
    if (a.ms_fraction > 0.0)
    {
        analysis::FloorResult res = analysis::floor_for_ms(a.ms_fraction, q);
        csv << "mode_switching,," << format_full(a.ms_fraction) << ','
            << format_full(res.p_floor_r) << ',' << format_full(res.p_floor_t) << ','
            << (res.regime_ok ? 1 : 0) << '\n';
    }
    emit(a.out, csv.str());
}

// ----------------------------------------------------------------- pdf ----

// pdf and kl act on a single cascade (one BS hop, one user hop)
struct PairArgs
{
    double k_h = 0.0;
    double k_g = 0.0;
    double omega_h = 1.0;
    double omega_g = 1.0;

    starris::channels::RicianLink bs() const { return {k_h, omega_h}; }
    starris::channels::RicianLink user() const { return {k_g, omega_g}; }
};

void add_pair_flags(CLI::App *sub, PairArgs &p, double *k_db, CLI::Option **k_db_opt)
{
    PairArgs *pp = &p;
    sub->add_option("--k", p.k_h, "Rician K of both hops, linear (sets --k-h and --k-g)")
        ->each([pp](const std::string &v) { pp->k_g = pp->k_h = std::stod(v); });
    sub->add_option("--k-h", p.k_h, "Rician K of the surface-BS hop, linear");
    sub->add_option("--k-g", p.k_g, "Rician K of the user hop, linear");
    *k_db_opt = sub->add_option("--k-db", *k_db, "Rician K of both hops, dB (overrides linear flags)");
    sub->add_option("--omega", p.omega_h, "mean power of both hops (sets --omega-h and --omega-g)")
        ->each([pp](const std::string &v) { pp->omega_g = pp->omega_h = std::stod(v); });
    sub->add_option("--omega-h", p.omega_h, "mean power of the surface-BS hop");
    sub->add_option("--omega-g", p.omega_g, "mean power of the user hop");
}

struct PdfArgs
{
    int m = 1;
    PairArgs pair;
    double x_max = 0.0; // 0 = default grid extent
    std::size_t points = std::size_t(1) << 15;
    std::string out;
};

void run_pdf(const PdfArgs &a)
{
    namespace channels = starris::channels;
    channels::RicianLink bs = a.pair.bs();
    channels::RicianLink user = a.pair.user();
    channels::GridSpec grid = channels::default_sum_grid(a.m, bs, user);
    if (a.x_max > 0.0)
        grid.x_max = a.x_max;
    grid.points = a.points;

    channels::DiscretizedDensity d = channels::sum_pdf_exact(a.m, bs, user, grid);

    std::ostringstream csv;
    csv << "x,pdf\n";
    for (std::size_t j = 0; j < d.x.size(); ++j)
        csv << format_full(d.x[j]) << ',' << format_full(d.f[j]) << '\n';
    emit(a.out, csv.str());
}

// ------------------------------------------------------------------ kl ----

struct KlArgs
{
    std::string m_list;
    PairArgs pair;
    std::string out;
};

void run_kl(const KlArgs &a)
{
    std::ostringstream csv;
    csv << "m,kl_nats\n";
    for (double mv : parse_list(a.m_list, "m"))
    {
        if (mv < 1.0 || mv != std::floor(mv))
            throw std::invalid_argument("element counts must be positive integers");
        double d = starris::channels::kl_gaussian_approx(int(mv), a.pair.bs(), a.pair.user());
        csv << int(mv) << ',' << format_full(d) << '\n';
    }
    emit(a.out, csv.str());
}

// -------------------------------------------------------------- fieldmap --

struct FieldmapArgs
{
    std::size_t rows = 8;
    std::size_t cols = 8;
    double wavelength = 0.1;
    double spacing = 0.0; // 0 = half wavelength
    std::string bs = "0,10,0";
    std::string user_r = "-5,15,0";
    std::string user_t = "0,-10,0";
    bool only_r = false;
    bool only_t = false;
    double power_dbm = 10.0;
    double beta_t = 0.70710678118654752;
    double beta_r = 0.70710678118654752;
    double extent = 40.0;
    std::size_t cells = 200;
    double plane_z = 0.0;
    std::string out;
    std::string meta;
};

void run_fieldmap(const FieldmapArgs &a)
{
    namespace fm = starris::fieldmap;
    namespace em = starris::em;

    fm::ArrayGeometry geo{a.rows, a.cols, a.spacing > 0.0 ? a.spacing : a.wavelength / 2.0,
                          a.wavelength};
    fm::validate(geo);
    if (a.only_r && a.only_t)
        throw std::invalid_argument("--only-r and --only-t are mutually exclusive");

    fm::Vec3 bs = parse_vec3(a.bs, "--bs");
    fm::Vec3 pos_r = parse_vec3(a.user_r, "--user-r");
    fm::Vec3 pos_t = parse_vec3(a.user_t, "--user-t");
    double p = dbm_to_watt(a.power_dbm);

    // each side's phase profile cophases its own user toward the BS: the
    // reflection phases steer user r's wave, the transmission phases user t's
    std::vector<double> phase_r = fm::cophase_toward(geo, pos_r, bs);
    std::vector<double> phase_t = fm::cophase_toward(geo, pos_t, bs);
    std::vector<em::StarCoefficients> coeffs;
    coeffs.reserve(geo.element_count());
    for (std::size_t m = 0; m < geo.element_count(); ++m)
        coeffs.push_back(em::StarCoefficients::from_polar(a.beta_t, phase_t[m], a.beta_r, phase_r[m]));

    std::vector<fm::Source> sources;
    if (!a.only_t)
        sources.push_back({pos_r, p});
    if (!a.only_r)
        sources.push_back({pos_t, p});

    fm::MapGrid grid{a.extent, a.extent, a.cells, a.cells, a.plane_z};
    fm::FieldGrid map = fm::compute_power_map(geo, coeffs, sources, grid);

    std::ostringstream csv;
    csv << "x_m,y_m,power_w\n";
    for (std::size_t j = 0; j < map.ys.size(); ++j)
        for (std::size_t i = 0; i < map.xs.size(); ++i)
            csv << format_full(map.xs[i]) << ',' << format_full(map.ys[j]) << ','
                << format_full(map.at(i, j)) << '\n';
    emit(a.out, csv.str());

    std::string meta_path = a.meta;
    if (meta_path.empty() && !a.out.empty())
        meta_path = sidecar_path(a.out);
    if (!meta_path.empty())
    {
        auto peak = std::max_element(map.power.begin(), map.power.end());
        std::size_t flat = std::size_t(peak - map.power.begin());
        nlohmann::json meta;
        meta["tool"] = "starris fieldmap";
        meta["version"] = starris::io::tool_version;
        meta["units"] = "W";
        meta["extent_x_m"] = a.extent;
        meta["extent_y_m"] = a.extent;
        meta["nx"] = a.cells;
        meta["ny"] = a.cells;
        meta["plane_z_m"] = a.plane_z;
        meta["rows"] = a.rows;
        meta["cols"] = a.cols;
        meta["wavelength_m"] = geo.wavelength;
        meta["spacing_m"] = geo.spacing;
        meta["power_dbm"] = a.power_dbm;
        meta["beta_t"] = a.beta_t;
        meta["beta_r"] = a.beta_r;
        meta["db_reference_w"] = *peak; // 0 dB = map peak
        meta["peak"] = {{"x_m", map.xs[flat % a.cells]},
                        {"y_m", map.ys[flat / a.cells]},
                        {"power_w", *peak}};
        meta["excluded_cells"] = map.excluded.size();
        meta["bs_m"] = {bs.x, bs.y, bs.z};
        nlohmann::json src_list = nlohmann::json::array();
        for (const auto &s : sources)
            src_list.push_back({s.position.x, s.position.y, s.position.z});
        meta["sources_m"] = src_list;
        starris::io::write_text_file(meta_path, meta.dump(2) + "\n");
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"starris: impedance-level STAR surface modeling and uplink outage analysis"};
    app.require_subcommand(1);

    CoeffsArgs coeffs;
    auto *sub_coeffs =
        app.add_subcommand("coeffs", "transmission/reflection response of one element");
    sub_coeffs->add_option("--ze", coeffs.ze, "electric surface impedance, ohm, as a+bj")->required();
    sub_coeffs->add_option("--zm", coeffs.zm, "magnetic surface impedance, ohm, as a+bj")->required();
    sub_coeffs->add_option("--eta", coeffs.eta, "wave impedance of the medium, ohm");
    sub_coeffs->add_option("--out", coeffs.out, "write CSV here instead of stdout");
    sub_coeffs->callback([&] { run_coeffs(coeffs); });

    OutageArgs outage;
    auto *sub_outage = app.add_subcommand("outage", "Monte Carlo outage sweep from a config file");
    sub_outage->add_option("--config", outage.config, "run configuration file path")->required();
    sub_outage->add_option("--out", outage.out, "override the CSV output path");
    sub_outage->add_option("--meta", outage.meta, "override the JSON metadata path");
    auto *thr = sub_outage->add_option("--threads", outage.threads,
                                       "worker thread count (0 = hardware concurrency)");
    sub_outage->callback([&, thr] {
        outage.threads_set = thr->count() > 0;
        run_outage(outage);
    });

    FloorArgs floor;
    auto *sub_floor = app.add_subcommand("floor", "high-SNR outage floors of both users");
    sub_floor->add_option("--m", floor.m, "element count");
    sub_floor->add_option("--beta-t", floor.beta_t_list, "transmission amplitudes, comma separated")
        ->required();
    sub_floor->add_option("--ms", floor.ms_fraction,
                          "also emit a mode-switching floor with this transmit fraction");
    sub_floor->add_option("--alpha0", floor.alpha0, "residual interference factor after SIC");
    sub_floor->add_option("--rate-r", floor.rate_r, "target rate of user r, bit/s/Hz");
    sub_floor->add_option("--rate-t", floor.rate_t, "target rate of user t, bit/s/Hz");
    sub_floor->add_option("--convention", floor.convention,
                          "moment convention: sum (default) or element");
    add_link_flags(sub_floor, floor.links);
    sub_floor->add_option("--out", floor.out, "write CSV here instead of stdout");
    sub_floor->callback([&] { run_floor(floor); });

    PdfArgs pdf;
    double pdf_k_db = 0.0;
    CLI::Option *pdf_k_db_opt = nullptr;
    auto *sub_pdf = app.add_subcommand("pdf", "exact density of the M-element cascaded sum");
    sub_pdf->add_option("--m", pdf.m, "number of summed element cascades");
    add_pair_flags(sub_pdf, pdf.pair, &pdf_k_db, &pdf_k_db_opt);
    sub_pdf->add_option("--x-max", pdf.x_max, "grid extent (default: mean + 8 std of the sum)");
    sub_pdf->add_option("--points", pdf.points, "grid resolution");
    sub_pdf->add_option("--out", pdf.out, "write CSV here instead of stdout");
    sub_pdf->callback([&] {
        if (pdf_k_db_opt->count() > 0)
            pdf.pair.k_h = pdf.pair.k_g = starris::channels::k_from_db(pdf_k_db);
        run_pdf(pdf);
    });

    KlArgs kl;
    double kl_k_db = 0.0;
    CLI::Option *kl_k_db_opt = nullptr;
    auto *sub_kl = app.add_subcommand("kl", "Gaussian-approximation divergence per element count");
    sub_kl->add_option("--m", kl.m_list, "element counts, comma separated")->required();
    add_pair_flags(sub_kl, kl.pair, &kl_k_db, &kl_k_db_opt);
    sub_kl->add_option("--out", kl.out, "write CSV here instead of stdout");
    sub_kl->callback([&] {
        if (kl_k_db_opt->count() > 0)
            kl.pair.k_h = kl.pair.k_g = starris::channels::k_from_db(kl_k_db);
        run_kl(kl);
    });

    FieldmapArgs fmap;
    auto *sub_fmap = app.add_subcommand("fieldmap", "scattered power density over a horizontal plane");
    sub_fmap->add_option("--rows", fmap.rows, "element rows");
    sub_fmap->add_option("--cols", fmap.cols, "element columns");
    sub_fmap->add_option("--wavelength", fmap.wavelength, "carrier wavelength, m");
    sub_fmap->add_option("--spacing", fmap.spacing, "element pitch, m (default: half wavelength)");
    sub_fmap->add_option("--bs", fmap.bs, "BS position x,y,z in m (cophasing target)");
    sub_fmap->add_option("--user-r", fmap.user_r, "user r position x,y,z in m (reflection side, y > 0)");
    sub_fmap->add_option("--user-t", fmap.user_t, "user t position x,y,z in m (transmission side, y < 0)");
    sub_fmap->add_flag("--only-r", fmap.only_r, "only user r transmits");
    sub_fmap->add_flag("--only-t", fmap.only_t, "only user t transmits");
    sub_fmap->add_option("--power-dbm", fmap.power_dbm, "per-user transmit power, dBm");
    sub_fmap->add_option("--beta-t", fmap.beta_t, "transmission amplitude of every element");
    sub_fmap->add_option("--beta-r", fmap.beta_r, "reflection amplitude of every element");
    sub_fmap->add_option("--extent", fmap.extent, "side length of the square map window, m");
    sub_fmap->add_option("--cells", fmap.cells, "cells per map axis");
    sub_fmap->add_option("--z", fmap.plane_z, "height of the observation plane, m");
    sub_fmap->add_option("--out", fmap.out, "write CSV here instead of stdout");
    sub_fmap->add_option("--meta", fmap.meta, "JSON metadata path (default: next to --out)");
    sub_fmap->callback([&] { run_fieldmap(fmap); });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "numerical domain error: " << e.what() << "\n";
        return 4;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::runtime_error &e)
    {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
