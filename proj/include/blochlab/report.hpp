#pragma once

// JSON and CSV serialization of run results. Every document carries the tool
// version and the configuration hash. Numbers in CSV use %.17g under the C
// locale with LF line endings.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "blochlab/arcs.hpp"
#include "blochlab/band_structure.hpp"
#include "blochlab/config.hpp"
#include "blochlab/kronig_penney.hpp"
#include "blochlab/perturbation.hpp"

namespace blochlab::report {

using json = nlohmann::ordered_json;

inline json cjson(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json header(const RunConfig& cfg, const std::string& command) {
    return json{{"tool", "blochlab"}, {"version", kToolVersion}, {"command", command}, {"config_hash", cfg.hash()}};
}

inline std::string csv_preamble(const RunConfig& cfg, const std::string& command) {
    return "# blochlab " + std::string(kToolVersion) + " " + command + " config_hash=" + cfg.hash() + "\n";
}

inline const char* kind_name(PairKind k) {
    switch (k) {
        case PairKind::real: return "real";
        case PairKind::conjugate_pair: return "conjugate_pair";
        case PairKind::unpaired: return "unpaired";
    }
    return "unknown";
}

inline json gaps_json(const GapReport& r) {
    json gaps = json::array();
    for (const auto& g : r.gaps)
        gaps.push_back({{"below", g.below}, {"lower", g.lower}, {"upper", g.upper}, {"width", g.width()}});
    return json{{"d", r.d},
                {"g_bar", r.g_bar},
                {"w_norm", r.w_norm},
                {"w_norm_lower", r.w_norm_lower},
                {"n_bands_used", r.n_bands_used},
                {"finite_band_estimate", r.finite_band_estimate},
                {"gaps", gaps}};
}

inline json edges_json(const std::vector<BandEdge>& edges) {
    json out = json::array();
    for (const auto& e : edges)
        out.push_back({{"n", e.n}, {"alpha", e.alpha}, {"beta", e.beta}, {"complex_band", e.complex_band}});
    return out;
}

inline json bands_json(const RunConfig& cfg, const BandTable& t, const std::vector<BandEdge>& edges) {
    json j = header(cfg, "bands");
    j["g"] = t.g.real();
    j["N"] = t.N;
    j["n_max"] = t.n_max;
    j["p_grid"] = t.p_grid;
    json bands = json::array();
    for (int n = 0; n < t.band_count(); ++n) {
        json b = json::array();
        for (std::size_t i = 0; i < t.p_grid.size(); ++i) {
            json e = cjson(t.bands[n][i]);
            e["kind"] = kind_name(t.kinds[n][i]);
            b.push_back(e);
        }
        bands.push_back({{"n", n}, {"values", b}});
    }
    j["bands"] = bands;
    j["edges"] = edges_json(edges);
    return j;
}

inline std::string bands_csv(const RunConfig& cfg, const BandTable& t) {
    std::string s = csv_preamble(cfg, "bands") + "p,n,re_lambda,im_lambda\n";
    for (std::size_t i = 0; i < t.p_grid.size(); ++i)
        for (int n = 0; n < t.band_count(); ++n)
            s += num(t.p_grid[i]) + "," + std::to_string(n) + "," + num(t.bands[n][i].real()) + "," +
                 num(t.bands[n][i].imag()) + "\n";
    return s;
}

inline json certify_json(const RunConfig& cfg, double g, const RealityCertificate& c) {
    json j = header(cfg, "certify");
    j["g"] = g;
    j["N"] = cfg.N;
    j["p_points"] = cfg.p_points;
    j["n_max"] = cfg.n_max;
    j["pass"] = c.pass;
    j["d"] = c.gaps.d;
    j["g_bar"] = c.gaps.g_bar;
    j["within_guaranteed_regime"] = c.within_guaranteed_regime;
    j["max_im"] = c.max_im;
    j["worst_n"] = c.worst_n;
    j["worst_p"] = c.worst_p;
    j["conjugate_pairs"] = c.conjugate_pairs;
    j["max_displacement"] = c.max_displacement;
    j["displacement_bound"] = c.displacement_bound;
    j["displacement_ok"] = c.displacement_ok;
    j["inclusion_ok"] = c.inclusion_ok;
    j["gap_closed"] = c.gap_closed;
    j["gap_report"] = gaps_json(c.gaps);
    return j;
}

inline json arc_point_json(const ArcPoint& a) {
    return json{{"p", a.p},
                {"plus", cjson(a.plus)},
                {"minus", cjson(a.minus)},
                {"complex_pair", a.complex_pair},
                {"conj_error", a.conj_error}};
}

inline json arcs_json(const RunConfig& cfg, const ArcReport& r, const SlopeReport& s) {
    json j = header(cfg, "arcs");
    j["k"] = r.k;
    j["g"] = r.g;
    j["N"] = r.N;
    j["empirical"] = r.empirical;
    j["predicted"] = {{"plus", cjson(r.predicted.first)}, {"minus", cjson(r.predicted.second)}};
    j["at_half"] = arc_point_json(r.at_half);
    j["eta"] = r.eta ? json(*r.eta) : json(nullptr);
    j["eta_grid"] = r.eta_grid ? json(*r.eta_grid) : json(nullptr);
    j["arc_interval"] = r.eta ? json::array({0.5 - *r.eta, 0.5}) : json(nullptr);
    j["max_abs_im"] = r.max_abs_im;
    j["max_conj_error"] = r.max_conj_error;
    j["re_offset"] = r.re_offset;
    j["prediction_error"] = r.prediction_error;
    j["slope"] = {{"g_samples", s.g_samples}, {"im_plus", s.im_plus}, {"measured", s.measured},
                  {"predicted", s.predicted}, {"error", s.error()}};
    json pts = json::array();
    for (const auto& a : r.samples) pts.push_back(arc_point_json(a));
    j["samples"] = pts;
    return j;
}

inline std::string arcs_csv(const RunConfig& cfg, const ArcReport& r) {
    std::string s = csv_preamble(cfg, "arcs") + "p,re_plus,im_plus,re_minus,im_minus\n";
    for (const auto& a : r.samples)
        s += num(a.p) + "," + num(a.plus.real()) + "," + num(a.plus.imag()) + "," + num(a.minus.real()) + "," +
             num(a.minus.imag()) + "\n";
    return s;
}

inline json series_json(const RunConfig& cfg, const RSSeries& r, const GapReport* gaps,
                        const MajorizationCheck* maj) {
    json j = header(cfg, "series");
    j["band"] = r.n;
    j["p"] = r.p;
    j["order"] = r.order;
    json co = json::array();
    for (const auto& z : r.coeffs) co.push_back(cjson(z));
    j["coefficients"] = co;
    j["radius_lower"] = r.radius_lower;
    j["level_spacing"] = r.level_spacing;
    if (gaps) {
        j["d"] = gaps->d;
        j["w_norm"] = gaps->w_norm;
        // Intermediate resolvent-type constant, logged for comparison only.
        j["kato_ratio_info"] = r.level_spacing > 0.0 ? 2.0 * gaps->w_norm / r.level_spacing : 0.0;
    }
    if (maj) {
        j["majorization_bound"] = maj->bound;
        j["majorization_holds"] = maj->holds;
        j["majorization_all"] = maj->all();
    }
    return j;
}

inline json kp_json(const RunConfig& cfg, double gamma, const kp::EdgeChain& e) {
    json j = header(cfg, "kp");
    j["gamma"] = gamma;
    j["alpha"] = e.alpha;
    j["beta"] = e.beta;
    j["gap_widths"] = e.gap_widths();
    return j;
}

inline std::string kp_csv(const RunConfig& cfg, const std::vector<kp::DispersionPoint>& pts) {
    std::string s = csv_preamble(cfg, "kp") + "p,n,energy\n";
    for (const auto& d : pts) s += num(d.p) + "," + std::to_string(d.n) + "," + num(d.energy) + "\n";
    return s;
}

inline json error_json(const std::string& kind, const std::string& message) {
    return json{{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace blochlab::report
