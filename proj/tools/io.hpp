#pragma once

// Deterministic JSON/CSV emission. Every double goes through fmt_double
// (17 significant digits, '.' decimal point, no locale), so the two
// encodings of one run carry identical numeric text.

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "kgring/radial.hpp"
#include "kgring/spectrum.hpp"

namespace kgring::io {

using json = nlohmann::ordered_json;

inline std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) return std::signbit(v) ? "-0.0" : "0.0";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) return "null";
    std::string s(buf, end);
    // keep floats recognizable as floats on re-parse
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
}

inline void write_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

/// Compact JSON with one top-level member per line and floats via fmt_double.
inline void write_json(std::ostream& os, const json& j, int depth = 0) {
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            const bool top = depth == 0;
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                if (top) os << "\n  ";
                first = false;
                write_string(os, it.key());
                os << ':';
                write_json(os, it.value(), depth + 1);
            }
            if (top) os << '\n';
            os << '}';
            return;
        }
        case json::value_t::array: {
            os << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ',';
                if (depth <= 1 && (v.is_object() || v.is_array())) os << "\n    ";
                first = false;
                write_json(os, v, depth + 1);
            }
            os << ']';
            return;
        }
        case json::value_t::number_float: os << fmt_double(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json params_json(const PotentialParams& p) {
    return json{{"M", p.M}, {"b", p.b}, {"alpha", p.alpha}, {"A", p.A},
                {"beta", p.beta}, {"beta_prime", p.beta_prime}, {"C0", p.C0}};
}

inline PotentialParams params_from_json(const json& j) {
    PotentialParams p;
    p.M = j.at("M").get<double>();
    p.b = j.at("b").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.A = j.at("A").get<double>();
    p.beta = j.at("beta").get<double>();
    p.beta_prime = j.at("beta_prime").get<double>();
    p.C0 = j.at("C0").get<double>();
    return p;
}

inline const std::vector<std::string>& state_columns() {
    static const std::vector<std::string> cols{"n_r",    "N",      "m",      "E",           "epsilon",
                                               "eta",    "Lambda", "sqrt_c", "lambda",      "l_eff",
                                               "norm_radial", "norm_angular", "admissible", "rejection_reason"};
    return cols;
}

inline json state_json(const BoundState& st, const std::string& reason = {}) {
    json j;
    j["n_r"] = st.quantum.n_r;
    j["N"] = st.quantum.N;
    j["m"] = st.quantum.m;
    j["E"] = st.E;
    j["epsilon"] = st.epsilon;
    j["eta"] = st.eta;
    j["Lambda"] = finite_or_null(st.lambda_real ? st.Lambda : NAN);
    j["sqrt_c"] = finite_or_null(st.lambda_real ? st.sqrt_c : NAN);
    j["lambda"] = st.angular.lambda;
    j["l_eff"] = st.angular.l_eff;
    j["norm_radial"] = st.norm;
    j["norm_angular"] = st.angular.norm;
    const bool ok = reason.empty() && st.admissible();
    j["admissible"] = ok;
    j["rejection_reason"] = ok ? json(nullptr) : json(reason.empty() ? st.rejection_reason() : reason);
    return j;
}

inline json rejection_json(const Rejection& r) {
    if (r.state) return state_json(*r.state, r.reason);
    json j;
    for (const std::string& c : state_columns()) j[c] = nullptr;
    j["n_r"] = r.quantum.n_r;
    j["N"] = r.quantum.N;
    j["m"] = r.quantum.m;
    j["E"] = r.E;
    j["admissible"] = false;
    j["rejection_reason"] = r.reason;
    return j;
}

inline json spectrum_json(const SpectrumRequest& req, const SpectrumResult& res) {
    json j;
    j["params"] = params_json(req.params);
    const auto [lo, hi] = req.window();
    j["request"] = json{{"n_r_max", req.n_r_max}, {"N_max", req.N_max},         {"m_min", req.m_min},
                        {"m_max", req.m_max},     {"energy_window", {lo, hi}}, {"scan_points", req.scan_points},
                        {"tol", req.tol}};
    j["states"] = json::array();
    for (const BoundState& st : res.states) j["states"].push_back(state_json(st));
    j["rejected"] = json::array();
    for (const Rejection& r : res.rejected) j["rejected"].push_back(rejection_json(r));
    j["excluded"] = json::array();
    for (const Exclusion& e : res.excluded)
        j["excluded"].push_back(json{{"n_r", e.quantum.n_r}, {"N", e.quantum.N}, {"m", e.quantum.m},
                                     {"E_lo", e.E_lo}, {"E_hi", e.E_hi}, {"reason", e.reason}});
    j["diagnostics"] = json::array();
    for (const RootDiagnostic& d : res.diagnostics)
        j["diagnostics"].push_back(json{{"n_r", d.quantum.n_r}, {"N", d.quantum.N}, {"m", d.quantum.m},
                                        {"E", d.E}, {"residual", d.residual}, {"iterations", d.iterations},
                                        {"bracket", {d.bracket_lo, d.bracket_hi}}, {"accepted", d.accepted}});
    return j;
}

inline std::string csv_cell(const json& v) {
    switch (v.type()) {
        case json::value_t::null: return "";
        case json::value_t::number_float: return fmt_double(v.get<double>());
        case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
        case json::value_t::string: {
            const std::string s = v.get<std::string>();
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        }
        default: return v.dump();
    }
}

/// Rows of objects sharing the given keys; header first, LF line endings.
inline void write_csv(std::ostream& os, const std::vector<std::string>& cols, const json& rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const json& row : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_cell(row.at(cols[i]));
        os << '\n';
    }
}

} // namespace kgring::io
