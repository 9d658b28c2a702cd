#pragma once

// Command-line front end. Exit codes:
//   0 success, 1 certification failed, 2 usage / parse / symmetry error,
//   3 numerical failure (solver, tracking, closed gap, contradiction).
// Every error is also written to the error stream as one JSON object.

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blochlab/arcs.hpp"
#include "blochlab/band_structure.hpp"
#include "blochlab/config.hpp"
#include "blochlab/error.hpp"
#include "blochlab/kronig_penney.hpp"
#include "blochlab/parallel.hpp"
#include "blochlab/perturbation.hpp"
#include "blochlab/report.hpp"
#include "blochlab/selfcheck.hpp"

namespace blochlab::cli {

enum ExitCode : int { kOk = 0, kCertifyFail = 1, kUsage = 2, kNumerical = 3 };

inline int exit_code_for(const Error& e) {
    const auto& k = e.kind();
    if (k == "invalid_input" || k == "parse" || k == "symmetry" || k == "condition_not_met" || k == "degeneracy")
        return kUsage;
    return kNumerical;
}

struct Options {
    std::string config_path;
    std::optional<double> g;
    std::optional<int> N;
    std::optional<int> threads;
    std::string format = "json";
    std::string out_path;

    std::optional<int> p_points;
    std::optional<int> n_max;
    std::optional<double> g_fraction;
    std::optional<int> k;
    std::optional<int> window_points;
    std::optional<int> band;
    std::optional<double> p;
    std::optional<int> order;
    std::optional<double> gamma;
    int kp_bands = 9;
};

namespace detail {

inline void emit(const Options& o, std::ostream& out, const std::string& text) {
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw InvalidInputError("cannot open output file '" + o.out_path + "'");
    f << text;
}

inline std::string dump(const report::json& j) { return j.dump(2) + "\n"; }

/// Config from file (if any) with command-line overrides applied.
inline RunConfig resolve(const Options& o, bool need_file, bool physics = true) {
    RunConfig c;
    if (!o.config_path.empty())
        c = load_config(o.config_path);
    else if (need_file)
        throw InvalidInputError("--config is required for this subcommand");
    if (o.g) c.g = *o.g;
    if (o.N) c.N = *o.N;
    if (o.threads) c.threads = *o.threads;
    if (o.p_points) c.p_points = *o.p_points;
    if (o.n_max) c.n_max = *o.n_max;
    if (o.g_fraction) c.g_fraction = *o.g_fraction;
    if (o.k) c.k = *o.k;
    if (o.window_points) c.window_points = *o.window_points;
    if (o.band) c.band = *o.band;
    if (o.p) c.p = *o.p;
    if (o.order) c.order = *o.order;
    c.validate(physics);
    return c;
}

inline SweepOptions sweep_options(const RunConfig& c) {
    SweepOptions s;
    s.threads = resolve_threads(c.threads);
    s.tau_pair = c.tau_pair;
    s.tau_resid = c.tau_resid;
    return s;
}

inline int cmd_bands(const Options& o, std::ostream& out) {
    const auto c = resolve(o, true);
    const auto spec = c.spec();
    const auto t = sweep(spec, c.g.value_or(0.0), c.N, uniform_grid(c.p_points), c.n_max, sweep_options(c));
    const auto edges = band_edges(t);
    emit(o, out, o.format == "csv" ? report::bands_csv(c, t) : dump(report::bands_json(c, t, edges)));
    return kOk;
}

inline int cmd_certify(const Options& o, std::ostream& out, std::ostream& err) {
    const auto c = resolve(o, true);
    const auto spec = c.spec();
    spec.require_checked("certify");
    CertifyOptions opt;
    opt.sweep = sweep_options(c);
    opt.n_bands_used = c.n_bands_used;
    opt.tau_real = c.tau_real;
    const auto t0 = sweep(spec, 0.0, c.N, uniform_grid(c.p_points), c.n_max, opt.sweep);
    double g = 0.0;
    if (c.g) {
        g = *c.g;
    } else {
        // Throws GapClosedError when the unperturbed operator has touching bands.
        g = c.g_fraction * gap_analysis(t0, spec.W(), c.n_bands_used).g_bar;
    }
    const auto cert = certify_reality(t0, g, opt);
    emit(o, out, dump(report::certify_json(c, g, cert)));
    if (cert.gap_closed) {
        err << report::error_json("gap_closed", "unperturbed operator has a closed gap; reality threshold undefined")
                   .dump()
            << "\n";
        return kNumerical;
    }
    return cert.pass ? kOk : kCertifyFail;
}

inline int cmd_arcs(const Options& o, std::ostream& out) {
    const auto c = resolve(o, true);
    const auto spec = c.spec();
    const double g = c.g.value_or(0.1);
    const auto r = trace_arcs(spec, c.k, g, c.N, arc_window(c.window_points, c.window_width),
                              resolve_threads(c.threads), c.tau_pair);
    const auto s = slope_check(spec, c.k, c.g_samples, c.N, c.tau_pair);
    emit(o, out, o.format == "csv" ? report::arcs_csv(c, r) : dump(report::arcs_json(c, r, s)));
    return kOk;
}

inline int cmd_series(const Options& o, std::ostream& out) {
    const auto c = resolve(o, true);
    const auto spec = c.spec();
    std::optional<GapReport> gaps;
    try {
        const auto t0 = sweep(spec, 0.0, c.N, uniform_grid(c.p_points), c.n_max, sweep_options(c));
        gaps = gap_analysis(t0, spec.W(), c.n_bands_used);
    } catch (const GapClosedError&) {
        // No majorization bound without open gaps; coefficients are still reported.
    }
    const auto r = rs_coefficients(spec, c.band, c.p, c.N, c.order,
                                   gaps ? std::optional<double>(gaps->g_bar) : std::nullopt);
    std::optional<MajorizationCheck> maj;
    if (gaps) maj = check_majorization(r, gaps->w_norm, gaps->d);
    emit(o, out, dump(report::series_json(c, r, gaps ? &*gaps : nullptr, maj ? &*maj : nullptr)));
    return kOk;
}

inline int cmd_kp(const Options& o, std::ostream& out) {
    const auto c = resolve(o, false, false);
    double gamma = 1.0;
    if (!o.config_path.empty()) {
        if (!c.q_delta) throw InvalidInputError("kp needs a delta_comb q");
        gamma = c.q_strength;
    }
    if (o.gamma) gamma = *o.gamma;
    if (o.kp_bands < 1) throw InvalidInputError("--bands must be >= 1");
    if (o.format == "csv") {
        emit(o, out, report::kp_csv(c, kp::dispersion_samples(gamma, o.kp_bands, c.p_points)));
    } else {
        emit(o, out, dump(report::kp_json(c, gamma, kp::band_edges_exact(gamma, o.kp_bands - 1))));
    }
    return kOk;
}

inline int cmd_selfcheck(const Options& o, std::ostream& out) {
    const auto checks = run_selfcheck();
    report::json arr = report::json::array();
    bool all = true;
    for (const auto& ch : checks) {
        arr.push_back({{"name", ch.name}, {"pass", ch.pass}, {"measured", ch.measured}, {"limit", ch.limit}});
        all = all && ch.pass;
    }
    report::json j{{"tool", "blochlab"}, {"version", kToolVersion}, {"command", "selfcheck"}, {"pass", all},
                   {"checks", arr}};
    emit(o, out, dump(j));
    return all ? kOk : kCertifyFail;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Floquet-Bloch spectra of PT-symmetric periodic Schroedinger operators", "blochlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config_path, "configuration file")->check(CLI::ExistingFile);
        s->add_option("--g", o.g, "coupling g");
        s->add_option("--N", o.N, "plane-wave truncation (matrix size 2N+1)");
        s->add_option("--threads", o.threads, "worker threads (default: BLOCHLAB_THREADS or hardware)");
        s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", o.out_path, "output file (default: stdout)");
    };

    auto* bands = app.add_subcommand("bands", "band sweep and edges");
    common(bands);
    bands->add_option("--p-points", o.p_points, "p-grid size on [0, 1/2]");
    bands->add_option("--n-max", o.n_max, "highest band index");

    auto* certify = app.add_subcommand("certify", "gap analysis and reality certificate");
    common(certify);
    certify->add_option("--p-points", o.p_points, "p-grid size on [0, 1/2]");
    certify->add_option("--n-max", o.n_max, "highest band index");
    certify->add_option("--g-fraction", o.g_fraction, "g as a fraction of the threshold when --g is absent");

    auto* arcs = app.add_subcommand("arcs", "complex arc tracing near p = 1/2");
    common(arcs);
    arcs->add_option("--k", o.k, "crossing index");
    arcs->add_option("--window-points", o.window_points, "p samples in the arc window");

    auto* series = app.add_subcommand("series", "perturbation series coefficients");
    common(series);
    series->add_option("--band", o.band, "band index n");
    series->add_option("--p", o.p, "quasimomentum");
    series->add_option("--order", o.order, "highest order S (<= 10)");

    auto* kpc = app.add_subcommand("kp", "exact delta-comb band edges and dispersion");
    common(kpc);
    kpc->add_option("--gamma", o.gamma, "comb strength (>= 0)");
    kpc->add_option("--bands", o.kp_bands, "number of bands");
    kpc->add_option("--p-points", o.p_points, "p samples for CSV dispersion");

    auto* self = app.add_subcommand("selfcheck", "run the built-in invariant suite");
    self->add_option("--out", o.out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << report::error_json("usage", e.what()).dump() << "\n";
        return kUsage;
    }

    try {
        if (bands->parsed()) return detail::cmd_bands(o, out);
        if (certify->parsed()) return detail::cmd_certify(o, out, err);
        if (arcs->parsed()) return detail::cmd_arcs(o, out);
        if (series->parsed()) return detail::cmd_series(o, out);
        if (kpc->parsed()) return detail::cmd_kp(o, out);
        if (self->parsed()) return detail::cmd_selfcheck(o, out);
    } catch (const Error& e) {
        err << report::error_json(e.kind(), e.what()).dump() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << report::error_json("internal", e.what()).dump() << "\n";
        return kNumerical;
    }
    return kUsage;
}

}  // namespace blochlab::cli
