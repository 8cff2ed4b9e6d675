#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mosk/certify.hpp"
#include "mosk/point.hpp"
#include "mosk/split.hpp"

namespace mosk::report {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Shortest text that reads back to the same double: 17 significant digits.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Finite values as JSON numbers, the rest as the strings "inf", "-inf", "nan".
inline json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

inline json to_json(const Point& p) {
    json a = json::array();
    for (double c : p.coords()) a.push_back(number(c));
    return a;
}

inline json to_json(const std::vector<double>& v) {
    json a = json::array();
    for (double c : v) a.push_back(number(c));
    return a;
}

inline json to_json(const Witness& w) {
    json pts = json::array();
    for (const auto& p : w.points) pts.push_back(to_json(p));
    return {{"points", pts}, {"value", number(w.value)}};
}

inline json to_json(const std::vector<Estimate>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back({{"probe", number(e.probe)}, {"value", number(e.value)}});
    return a;
}

inline json to_json(const ClassCertificate& c) {
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = number(v);
    json levels = json::array();
    for (const auto& l : c.level_estimates) levels.push_back(to_json(l));
    json j = {{"class", c.class_name},
              {"params", params},
              {"estimates", to_json(c.estimates)},
              {"level_estimates", levels},
              {"verdict", to_string(c.verdict)},
              {"witness", c.witness ? to_json(*c.witness) : json(nullptr)},
              {"seed", c.seed},
              {"samples", c.samples}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

inline json to_json(const Modulus& m) {
    json j = json::object();
    if (m.form == Modulus::Form::power) {
        j["form"] = "power";
        j["coefficient"] = number(m.coefficient);
        j["exponent"] = number(m.exponent);
    } else {
        j["form"] = "table";
        json rows = json::array();
        for (const auto& [t, v] : m.table) rows.push_back({{"t", number(t)}, {"phi", number(v)}});
        j["table"] = rows;
    }
    j["supercoercive_coefficient"] = m.supercoercive_coefficient ? number(*m.supercoercive_coefficient) : json(nullptr);
    return j;
}

inline json to_json(const SamplerConfig& cfg) {
    return {{"seed", cfg.seed},
            {"samples", cfg.sample_count},
            {"box_low", to_json(cfg.box_low)},
            {"box_high", to_json(cfg.box_high)},
            {"pair_strategy", to_string(cfg.pair_strategy)},
            {"escalation_levels", cfg.escalation_levels},
            {"escalation_factor", number(cfg.escalation_factor)}};
}

inline json to_json(const StoppingRule& s) {
    return {{"max_iter", s.max_iter},
            {"tol_residual", number(s.tol_residual)},
            {"divergence_guard", number(s.divergence_guard)}};
}

inline json to_json(const SelfDualReport& r) {
    return {{"operator", to_json(r.op_modulus)},
            {"inverse", to_json(r.inverse_modulus)},
            {"reflected_cld", to_json(r.reflected_cld)},
            {"verdicts",
             {to_string(r.op_modulus.verdict), to_string(r.inverse_modulus.verdict),
              to_string(r.reflected_cld.verdict)}},
            {"agrees_with_equivalence", r.agrees_with_equivalence}};
}

/// Trace summary; the per-iteration data goes to CSV.
inline json summary(const IterationTrace& tr) {
    json j = {{"termination", to_string(tr.termination)},
              {"steps", tr.steps()},
              {"period2_flag", tr.period2_flag},
              {"final_iterate", to_json(tr.last())},
              {"final_residual", tr.residuals.empty() ? json(nullptr) : number(tr.residuals.back())}};
    if (tr.shadows) j["final_shadow"] = to_json(tr.shadows->back());
    return j;
}

/// Pretty-printed document with the schema tag first.
inline std::string document(const json& config, const std::string& kind, const json& result) {
    json doc = {{"schema", schema_version}, {"kind", kind}, {"config", config}, {"result", result}};
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

/// RFC-4180 quoting: fields containing comma, quote or line break are quoted.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    /// Writes the config as one '#'-prefixed compact JSON line.
    void comment(const json& config) { out_ << "# " << config.dump() << "\n"; }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_field(fields[i]);
        }
        out_ << "\n";
    }

private:
    std::ostream& out_;
};

/// iter, x_0..x_{d-1}[, y_0..y_{d-1}], residual[, dist_ref][, probe_k...]
inline void write_trace_csv(std::ostream& out, const IterationTrace& tr, const json& config) {
    CsvWriter w(out);
    w.comment(config);
    const std::size_t d = tr.dim();
    std::vector<std::string> header{"iter"};
    for (std::size_t i = 0; i < d; ++i) header.push_back("x_" + std::to_string(i));
    if (tr.shadows) {
        for (std::size_t i = 0; i < d; ++i) header.push_back("y_" + std::to_string(i));
    }
    header.push_back("residual");
    if (tr.distances_to_ref) header.push_back("dist_ref");
    for (std::size_t k : tr.probe_indices) header.push_back("probe_" + std::to_string(k));
    w.row(header);
    for (std::size_t n = 0; n < tr.iterates.size(); ++n) {
        std::vector<std::string> row{std::to_string(n)};
        for (double c : tr.iterates[n].coords()) row.push_back(format_double(c));
        if (tr.shadows) {
            for (double c : (*tr.shadows)[n].coords()) row.push_back(format_double(c));
        }
        row.push_back(n < tr.residuals.size() ? format_double(tr.residuals[n]) : "");
        if (tr.distances_to_ref) row.push_back(format_double((*tr.distances_to_ref)[n]));
        if (!tr.probe_indices.empty()) {
            for (double v : tr.weak_probes[n]) row.push_back(format_double(v));
        }
        w.row(row);
    }
}

inline std::string trace_csv(const IterationTrace& tr, const json& config) {
    std::ostringstream s;
    write_trace_csv(s, tr, config);
    return s.str();
}

} // namespace mosk::report
