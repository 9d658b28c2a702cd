#pragma once

// Text configuration for batch runs.
//
//   # comment
//   [q]
//   kind = delta_comb        (or: trig)
//   strength = 1.0           (delta_comb only)
//   0 0.5 0                  (trig only: "n re im" coefficient lines)
//
//   [W]
//   i_sin = 1 1.0            (shorthand: amp * i sin(n x))
//   cos = 2 0.3              (shorthand: amp * cos(n x))
//   3 0.25 0                 ("n re im" coefficient lines add up)
//
//   [run]
//   g = 0.005
//   N = 256
//
// Unknown keys and malformed lines are reported with their line number.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "blochlab/band_structure.hpp"
#include "blochlab/error.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
    std::string source;  // path, or empty when built in code

    // potential
    bool q_delta = true;
    double q_strength = 0.0;
    std::map<int, cplx> q_coeffs;
    std::map<int, cplx> w_coeffs;
    bool pt_required = true;

    // run parameters
    std::optional<double> g;     // unset: certify uses g_fraction * g_bar
    double g_fraction = 0.9;
    int N = 256;
    int p_points = kDefaultGridPoints;
    int n_max = 8;
    int n_bands_used = kDefaultBandsUsed;
    int k = 0;
    int band = 0;
    double p = 0.25;
    int order = 6;
    int window_points = 81;
    double window_width = 0.2;
    std::vector<double> g_samples{1e-3, 2e-3};
    double tau_pair = kPairTolerance;
    double tau_resid = kResidualTolerance;
    double tau_real = kPairTolerance;
    int threads = 0;

    TrigPotential W() const { return TrigPotential(w_coeffs); }

    PeriodicPotential q() const {
        if (q_delta) return DeltaComb{q_strength};
        return TrigPotential(q_coeffs);
    }

    PotentialSpec spec() const {
        return pt_required ? PotentialSpec(q(), W()) : PotentialSpec::unchecked(q(), W());
    }

    /// Checks invariants that do not depend on the subcommand.
    void validate(bool physics = true) const {
        if (N < 0) throw InvalidInputError("N must be non-negative, got " + std::to_string(N));
        if (physics && N < 4) throw InvalidInputError("N must be >= 4, got " + std::to_string(N));
        if (p_points < 2) throw InvalidInputError("p_points must be >= 2");
        if (n_max < 0) throw InvalidInputError("n_max must be >= 0");
        if (n_bands_used < 1) throw InvalidInputError("n_bands_used must be >= 1");
        if (k < 0) throw InvalidInputError("k must be >= 0");
        if (band < 0) throw InvalidInputError("band must be >= 0");
        if (order < 0 || order > 10) throw InvalidInputError("order must lie in [0, 10]");
        if (window_points < 2) throw InvalidInputError("window_points must be >= 2");
        if (!(window_width > 0.0 && window_width < 0.25)) throw InvalidInputError("window_width must lie in (0, 1/4)");
        if (!(tau_pair > 0.0) || !(tau_resid > 0.0) || !(tau_real > 0.0))
            throw InvalidInputError("tolerances must be positive");
        if (!(g_fraction > 0.0)) throw InvalidInputError("g_fraction must be positive");
        if (g && !std::isfinite(*g)) throw InvalidInputError("g must be finite");
        if (threads < 0) throw InvalidInputError("threads must be >= 0");
    }

    /// Canonical text of every field that affects results. Thread count and
    /// the source path are excluded.
    std::string canonical() const {
        std::string s;
        char buf[64];
        auto num = [&](const char* key, double v) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            s += key;
            s += '=';
            s += buf;
            s += '\n';
        };
        auto coeffs = [&](const char* tag, const std::map<int, cplx>& m) {
            for (const auto& [n, c] : m) {
                std::snprintf(buf, sizeof buf, "%s %d %.17g %.17g\n", tag, n, c.real(), c.imag());
                s += buf;
            }
        };
        s += q_delta ? "q=delta\n" : "q=trig\n";
        num("strength", q_delta ? q_strength : 0.0);
        coeffs("q", q_coeffs);
        coeffs("w", w_coeffs);
        num("pt_required", pt_required ? 1 : 0);
        if (g) num("g", *g);
        num("g_fraction", g_fraction);
        num("N", N);
        num("p_points", p_points);
        num("n_max", n_max);
        num("n_bands_used", n_bands_used);
        num("k", k);
        num("band", band);
        num("p", p);
        num("order", order);
        num("window_points", window_points);
        num("window_width", window_width);
        for (double v : g_samples) num("g_sample", v);
        num("tau_pair", tau_pair);
        num("tau_resid", tau_resid);
        num("tau_real", tau_real);
        return s;
    }

    /// 64-bit FNV-1a of canonical(), as 16 hex digits.
    std::string hash() const {
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

inline double parse_double(std::string_view s, int line) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ParseError("expected a finite number, got '" + std::string(s) + "'", line);
    return v;
}

inline int parse_int(std::string_view s, int line) {
    int v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ParseError("expected an integer, got '" + std::string(s) + "'", line);
    return v;
}

inline bool parse_bool(std::string_view s, int line) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ParseError("expected true/false, got '" + std::string(s) + "'", line);
}

inline void add_coeff_line(std::map<int, cplx>& m, std::string_view text, int line) {
    const auto f = split_ws(text);
    if (f.size() != 3) throw ParseError("coefficient lines take 'n re im'", line);
    m[parse_int(f[0], line)] += cplx(parse_double(f[1], line), parse_double(f[2], line));
}

inline void add_mode_shorthand(std::map<int, cplx>& m, std::string_view key, std::string_view value, int line) {
    const auto f = split_ws(value);
    if (f.size() != 2) throw ParseError(std::string(key) + " takes 'n amplitude'", line);
    const int n = parse_int(f[0], line);
    const double a = parse_double(f[1], line);
    if (n <= 0) throw ParseError(std::string(key) + ": mode index must be positive", line);
    if (key == "i_sin") {
        m[n] += 0.5 * a;
        m[-n] -= 0.5 * a;
    } else {
        m[n] += 0.5 * a;
        m[-n] += 0.5 * a;
    }
}

}  // namespace detail

/// Parses configuration text. Symmetry of W is enforced at load time when
/// pt_required is true (the default).
inline RunConfig parse_config(std::string_view text, std::string source = {}) {
    using namespace detail;
    RunConfig c;
    c.source = std::move(source);
    enum class Section { none, q, w, run } section = Section::none;
    bool q_kind_seen = false;
    int w_line = 0;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            const auto name = trim(line.substr(1, line.size() - 2));
            if (name == "q")
                section = Section::q;
            else if (name == "W" || name == "w")
                section = Section::w;
            else if (name == "run")
                section = Section::run;
            else
                throw ParseError("unknown section [" + std::string(name) + "]", line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            if (section == Section::q) {
                if (c.q_delta && q_kind_seen) throw ParseError("coefficient line under kind = delta_comb", line_no);
                c.q_delta = false;
                add_coeff_line(c.q_coeffs, line, line_no);
            } else if (section == Section::w) {
                add_coeff_line(c.w_coeffs, line, line_no);
                if (!w_line) w_line = line_no;
            } else {
                throw ParseError("expected 'key = value'", line_no);
            }
            continue;
        }

        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError("missing value for '" + std::string(key) + "'", line_no);

        switch (section) {
            case Section::none:
                throw ParseError("key outside any section", line_no);
            case Section::q:
                if (key == "kind") {
                    if (value == "delta_comb")
                        c.q_delta = true;
                    else if (value == "trig" || value == "zero")
                        c.q_delta = false;
                    else
                        throw ParseError("q kind must be delta_comb, trig or zero", line_no);
                    q_kind_seen = true;
                } else if (key == "strength") {
                    c.q_strength = parse_double(value, line_no);
                } else if (key == "cos") {
                    c.q_delta = false;
                    add_mode_shorthand(c.q_coeffs, key, value, line_no);
                } else {
                    throw ParseError("unknown key '" + std::string(key) + "' in [q]", line_no);
                }
                break;
            case Section::w:
                if (key == "i_sin" || key == "cos") {
                    add_mode_shorthand(c.w_coeffs, key, value, line_no);
                    if (!w_line) w_line = line_no;
                } else {
                    throw ParseError("unknown key '" + std::string(key) + "' in [W]", line_no);
                }
                break;
            case Section::run: {
                if (key == "g") c.g = parse_double(value, line_no);
                else if (key == "g_fraction") c.g_fraction = parse_double(value, line_no);
                else if (key == "N") c.N = parse_int(value, line_no);
                else if (key == "p_points") c.p_points = parse_int(value, line_no);
                else if (key == "n_max") c.n_max = parse_int(value, line_no);
                else if (key == "n_bands_used") c.n_bands_used = parse_int(value, line_no);
                else if (key == "k") c.k = parse_int(value, line_no);
                else if (key == "band") c.band = parse_int(value, line_no);
                else if (key == "p") c.p = parse_double(value, line_no);
                else if (key == "order") c.order = parse_int(value, line_no);
                else if (key == "window_points") c.window_points = parse_int(value, line_no);
                else if (key == "window_width") c.window_width = parse_double(value, line_no);
                else if (key == "tau_pair") c.tau_pair = parse_double(value, line_no);
                else if (key == "tau_resid") c.tau_resid = parse_double(value, line_no);
                else if (key == "tau_real") c.tau_real = parse_double(value, line_no);
                else if (key == "threads") c.threads = parse_int(value, line_no);
                else if (key == "pt_required") c.pt_required = parse_bool(value, line_no);
                else if (key == "g_samples") {
                    c.g_samples.clear();
                    for (auto f : split_ws(value)) c.g_samples.push_back(parse_double(f, line_no));
                } else {
                    throw ParseError("unknown key '" + std::string(key) + "' in [run]", line_no);
                }
                try {
                    c.validate(false);
                } catch (const InvalidInputError& e) {
                    throw ParseError(e.what(), line_no);
                }
                break;
            }
        }
    }

    if (!c.q_delta && c.q_strength != 0.0) throw ParseError("strength given for a non-delta q", 0);
    if (c.pt_required) {
        const TrigPotential w(c.w_coeffs);
        if (!w.pt_symmetric())
            throw SymmetryError("line " + std::to_string(w_line) +
                                ": W has a coefficient with non-zero imaginary part; PT symmetry is required");
    }
    // Build once so q symmetry problems surface at load time too.
    (void)c.spec();
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace blochlab
