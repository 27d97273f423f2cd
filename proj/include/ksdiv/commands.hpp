// commands.hpp: The three batch commands behind the CLI driver, exposed as
// plain functions so the whole pipeline is testable without spawning a
// process.  Each command reads a RunConfig, writes its artifacts under the
// output directory, and returns a human-readable summary.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "dynamics.hpp"
#include "generators.hpp"
#include "output.hpp"
#include "witness.hpp"

namespace ksdiv::cli {

struct CommandResult {
    std::string summary;
    std::vector<std::string> files;
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// first-violation phrasing; crossings below 1e-5 are reported as immediate
inline std::string loss_line(const std::string& cls, double t_loss, double t_max) {
    if (!std::isfinite(t_loss)) return cls + "-divisible on [0, " + fmt("%g", t_max) + "]";
    if (t_loss < 1e-5) return cls + "-divisibility lost at t = 0+";
    return cls + "-divisibility lost at t " + "≈ " + fmt("%.6f", t_loss);
}

inline std::string write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
    return path;
}

inline std::string join_path(const std::string& dir, const char* name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir.empty() ? "." : dir);
    return (fs::path(dir.empty() ? "." : dir) / name).string();
}

}  // namespace detail

// --------------------------------- classify ----------------------------------

inline CommandResult cmd_classify(const RunConfig& rc, const std::string& out_dir) {
    CommandResult res;

    if (rc.model == Model::CustomTransfer)
        throw ConfigError("classify supports models pauli-rates and amplitude-damping only");

    if (rc.model == Model::PauliRates) {
        if (!rc.has_rates)
            throw ConfigError("model pauli-rates requires section [rates]");
        const auto grid = dynamics::uniform_grid(rc.t_max, rc.grid);
        const auto tr = dynamics::accumulate_rates(rc.rates, grid);

        const std::string csv_path = detail::join_path(out_dir, "classification.csv");
        CsvWriter csv(csv_path);
        csv.header({"t", "gamma1", "gamma2", "gamma3", "lambda1", "lambda2", "lambda3", "p0",
                    "p1", "p2", "p3", "p_divisible", "ks_divisible", "cp_divisible", "p_margin",
                    "ks_margin", "cp_margin"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            const auto g = tr.rates.at(t);
            const double p_margin =
                std::min({g[1] + g[2], g[0] + g[2], g[0] + g[1]});
            double ks_margin = std::numeric_limits<double>::infinity();
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    if (a != b) ks_margin = std::min(ks_margin, g[a] + 2.0 * g[b]);
            const double cp_margin = std::min({g[0], g[1], g[2]});
            const bool p_ok = p_margin >= -rc.tie_tolerance;
            const bool ks_ok = ks_margin >= -rc.tie_tolerance;
            const bool cp_ok = cp_margin >= -rc.tie_tolerance;
            if ((cp_ok && !ks_ok) || (ks_ok && !p_ok))
                throw std::logic_error("classification hierarchy violated at t = " +
                                       detail::fmt("%.17g", t));
            csv.field(t);
            for (double v : g) csv.field(v);
            for (double v : tr.lambda[i]) csv.field(v);
            for (double v : tr.p[i]) csv.field(v);
            csv.field(int(p_ok)).field(int(ks_ok)).field(int(cp_ok));
            csv.field(p_margin).field(ks_margin).field(cp_margin);
            csv.end_row();
        }
        res.files.push_back(csv_path);

        const auto& rf = tr.rates;
        const double p_loss = dynamics::detail::first_crossing(
            [&rf](double t) {
                const auto g = rf.at(t);
                return std::min({g[1] + g[2], g[0] + g[2], g[0] + g[1]});
            },
            grid);
        const double ks_loss = dynamics::detail::first_crossing(
            [&rf](double t) { return dynamics::detail::min_ks_margin(rf.at(t)); }, grid);
        const double cp_loss = dynamics::detail::first_crossing(
            [&rf](double t) {
                const auto g = rf.at(t);
                return std::min({g[0], g[1], g[2]});
            },
            grid);

        std::ostringstream sum;
        sum << "model: pauli-rates\n"
            << "t range: [0, " << detail::fmt("%g", rc.t_max) << "], " << rc.grid
            << " grid points\n"
            << detail::loss_line("P", p_loss, rc.t_max) << "\n"
            << detail::loss_line("KS", ks_loss, rc.t_max) << "\n"
            << detail::loss_line("CP", cp_loss, rc.t_max) << "\n";
        res.summary = sum.str();
        res.files.push_back(
            detail::write_text(detail::join_path(out_dir, "summary.txt"), res.summary));
        return res;
    }

    // amplitude damping: one decay channel, so P-, KS- and CP-divisibility all
    // reduce to gamma(t) >= 0
    if (!rc.damping_g) throw ConfigError("model amplitude-damping requires section [damping]");
    const dynamics::AmplitudeDampingSpec spec(rc.damping_g);
    const auto grid = dynamics::uniform_grid(rc.t_max, rc.grid);

    const std::string csv_path = detail::join_path(out_dir, "classification.csv");
    CsvWriter csv(csv_path);
    csv.header({"t", "gamma", "omega", "abs_g", "cptp", "divisible"});
    for (double t : grid) {
        const auto r = dynamics::damping_rates(spec, t);
        const auto m = dynamics::damping_map(spec, t);
        csv.field(t).field(r.gamma).field(r.omega).field(std::abs(spec.G(t)));
        csv.field(int(m.cptp)).field(int(r.gamma >= -rc.tie_tolerance));
        csv.end_row();
    }
    res.files.push_back(csv_path);

    const double loss = dynamics::detail::first_crossing(
        [&spec](double t) { return dynamics::damping_rates(spec, t).gamma; }, grid);
    std::ostringstream sum;
    sum << "model: amplitude-damping\n"
        << "t range: [0, " << detail::fmt("%g", rc.t_max) << "], " << rc.grid
        << " grid points\n"
        << "P = KS = CP for this model (single decay channel)\n"
        << detail::loss_line("CP", loss, rc.t_max) << "\n";
    res.summary = sum.str();
    res.files.push_back(
        detail::write_text(detail::join_path(out_dir, "summary.txt"), res.summary));
    return res;
}

// -------------------------------- region scan --------------------------------

namespace detail {

struct RegionSample {
    std::array<double, 3> q{};
    bool positive = false, ks_ppp = false, ks_q38 = false, cp = false;
    double ppp_margin = 0.0;
};

inline RegionSample region_sample(const std::array<double, 3>& q) {
    RegionSample s;
    s.q = q;
    s.ppp_margin =
        1.0 + 2.0 * q[0] * q[1] * q[2] - (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
    s.positive = std::max({std::abs(q[0]), std::abs(q[1]), std::abs(q[2])}) <= 1.0 + 1e-12;
    if (s.positive) {
        const maps::KSClosedForm ks = maps::ks_closed_form_diag({q[0], q[1], q[2]});
        s.ks_ppp = ks.certified;
        s.ks_q38 = ks.general_certified;
        const auto p = maps::eigenvalues_to_mixture(q);
        s.cp = std::min({p[0], p[1], p[2], p[3]}) >= -1e-10;
    }
    // hierarchy is ground truth, not a plotting convention
    if ((s.cp && !(s.ks_ppp && s.ks_q38)) || ((s.ks_ppp || s.ks_q38) && !s.positive))
        throw std::logic_error("region hierarchy violated at q = (" + fmt("%.17g", q[0]) + ", " +
                               fmt("%.17g", q[1]) + ", " + fmt("%.17g", q[2]) + ")");
    return s;
}

}  // namespace detail

inline CommandResult cmd_region_scan(const RunConfig& rc, const std::string& out_dir) {
    CommandResult res;
    const int n = rc.resolution;
    const auto coord = [n](int i) { return -1.0 + 2.0 * double(i) / double(n - 1); };

    long n_pos = 0, n_ks = 0, n_cp = 0, n_total = 0;
    std::vector<detail::RegionSample> slice;  // row-major (i over q1, j over q2)

    std::optional<CsvWriter> csv;
    std::string csv_path;
    if (rc.out_csv) {
        csv_path = detail::join_path(out_dir, "region.csv");
        csv.emplace(csv_path);
        csv->header({"p1", "p2", "p3", "positive", "ks_ppp", "ks_q38", "cp"});
    }
    const auto emit = [&](const detail::RegionSample& s) {
        ++n_total;
        n_pos += s.positive;
        n_ks += s.ks_ppp;
        n_cp += s.cp;
        if (csv) {
            csv->field(s.q[0]).field(s.q[1]).field(s.q[2]);
            csv->field(int(s.positive)).field(int(s.ks_ppp)).field(int(s.ks_q38)).field(int(s.cp));
            csv->end_row();
        }
    };

    if (rc.region_slice) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double q1 = coord(i), q2 = coord(j);
                const detail::RegionSample s = detail::region_sample({q1, q2, 1.0 - q1 - q2});
                slice.push_back(s);
                emit(s);
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    emit(detail::region_sample({coord(i), coord(j), coord(k)}));
    }
    if (csv) res.files.push_back(csv_path);

    if (rc.region_slice && rc.out_svg) {
        const SlicePoint pv[3] = {slice_project(1, 1, -1), slice_project(1, -1, 1),
                                  slice_project(-1, 1, 1)};
        const SlicePoint cv[3] = {slice_project(1, 0, 0), slice_project(0, 1, 0),
                                  slice_project(0, 0, 1)};
        double u0 = pv[0].u, u1 = pv[0].u, v0 = pv[0].v, v1 = pv[0].v;
        for (const SlicePoint& p : pv) {
            u0 = std::min(u0, p.u);
            u1 = std::max(u1, p.u);
            v0 = std::min(v0, p.v);
            v1 = std::max(v1, p.v);
        }
        const double pad = 0.15;
        SvgCanvas svg(u0 - pad, u1 + pad, v0 - pad, v1 + pad);
        svg.polygon({pv[0], pv[1], pv[2]}, "#eef1f6", "#41506b", 2.0);
        svg.polygon({cv[0], cv[1], cv[2]}, "#d3e8d3", "#2f6b3a", 2.0);

        const auto field = [&](int i, int j) { return slice[std::size_t(i) * n + j].ppp_margin; };
        const auto keep = [&](int i, int j) { return slice[std::size_t(i) * n + j].positive; };
        const auto point = [&](int i, int j) {
            const auto& q = slice[std::size_t(i) * n + j].q;
            return slice_project(q[0], q[1], q[2]);
        };
        const GridLevelCurve curve = march_zero_level(n, n, field, point, keep);
        for (const auto& [a, b] : curve.segments) svg.segment(a, b, "#a32020", 2.5);

        svg.label(slice_project(0.9, 0.9, -0.8), "P", 28);
        svg.label(slice_project(0.55, 0.55, -0.1), "KS", 24);
        svg.label(slice_project(1.0 / 3, 1.0 / 3, 1.0 / 3), "CP", 24);

        const std::string svg_path = detail::join_path(out_dir, "region.svg");
        svg.write(svg_path);
        res.files.push_back(svg_path);
    }

    std::ostringstream sum;
    sum << "region scan (" << (rc.region_slice ? "slice" : "cube") << ", resolution " << n
        << "): " << n_total << " points\n"
        << "positive: " << n_pos << "  ks: " << n_ks << "  cp: " << n_cp << "\n";
    res.summary = sum.str();
    return res;
}

// ---------------------------------- witness ----------------------------------

namespace detail {

inline std::string fmt_complex(cplx z) {
    return "(" + fmt("%.12g", z.real()) + ", " + fmt("%.12g", z.imag()) + ")";
}

}  // namespace detail

inline CommandResult cmd_witness(const RunConfig& rc, const std::string& out_dir) {
    const int n_specs = int(rc.map_q.has_value()) + int(rc.map_mixture.has_value()) +
                        int(rc.transfer.has_value()) + int(rc.map_builtin.has_value()) +
                        int(rc.generator_rates.has_value());
    if (n_specs != 1)
        throw ConfigError(
            "section [map] must define exactly one of q | mixture | transfer | builtin | "
            "generator_rates");

    std::string mode;
    maps::KSReport report;
    if (rc.generator_rates) {
        mode = "generator dissipativity";
        report = generators::dissipativity_numeric(generators::pauli_generator(*rc.generator_rates),
                                                   rc.seed, rc.budget);
    } else {
        maps::QubitMap m;
        if (rc.map_q) {
            m = maps::PauliDiagonalMap{*rc.map_q}.to_map();
        } else if (rc.map_mixture) {
            const auto& p = *rc.map_mixture;
            if (std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) > 1e-9)
                throw ConfigError("[map] mixture weights must sum to 1");
            m = maps::mixture_to_map(maps::PauliMixtureMap{p});
        } else if (rc.transfer) {
            Mat4 t;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) t(r, c) = (*rc.transfer)[std::size_t(4 * r + c)];
            m = maps::QubitMap(t);
        } else {
            m = maps::PauliDiagonalMap{{1.0, 1.0, *rc.map_builtin == "transposition" ? -1.0 : 1.0}}
                    .to_map();
        }
        const bool unital = maps::is_unital(m, 1e-10);
        mode = unital ? "KS (unital)" : "KS-2 (non-unital)";
        report = maps::ks_witness_search(m, unital, rc.seed, rc.budget);
    }

    std::ostringstream sum;
    sum << "mode: " << mode << "\n"
        << "verdict: " << maps::verdict_name(report.verdict) << "\n"
        << "margin: " << detail::fmt("%.12g", report.margin) << "\n";
    if (report.witness) {
        sum << "witness: w0 = " << detail::fmt_complex(report.witness->w0) << ", w = ["
            << detail::fmt_complex(report.witness->w[0]) << ", "
            << detail::fmt_complex(report.witness->w[1]) << ", "
            << detail::fmt_complex(report.witness->w[2]) << "]\n";
    }
    sum << "evaluations: " << report.evaluations << "\n";

    CommandResult res;
    res.summary = sum.str();
    res.files.push_back(
        detail::write_text(detail::join_path(out_dir, "witness.txt"), res.summary));
    return res;
}

}  // namespace ksdiv::cli
