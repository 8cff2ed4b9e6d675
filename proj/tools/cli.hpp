#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mosk/mosk.hpp"

namespace mosk::cli {

using report::json;

/// Bad flags, unknown identifiers or violated preconditions: exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum Exit : int { ok = 0, usage = 1, refuted = 2, numerical = 3 };

struct RunConfig {
    std::string command;

    std::string op;
    std::string op_b;
    std::string map_kind; ///< self, resolvent, reflected, neg-reflected; empty picks a default
    bool inverse = false;
    std::optional<std::size_t> dim;

    std::string class_name;
    std::vector<double> t_list{0.1, 0.5, 1.0, 2.0};
    std::vector<double> eps_list{0.1, 1.0};
    double alpha = 0.5;
    std::size_t n_max = 1000;
    std::size_t families = 8;

    std::uint64_t seed = 42;
    std::size_t samples = 10000;
    std::vector<double> box{-10.0, 10.0};
    std::vector<double> box_low;
    std::vector<double> box_high;
    std::string strategy = "mixed";
    std::size_t levels = 0; ///< 0 picks the command default
    unsigned threads = 0;

    std::string algo = "dr";
    double gamma = 0.5;
    std::string x0 = "1";
    std::size_t max_iter = 100000;
    double tol = 1e-10;
    double guard = 1e12;
    std::vector<double> ref;
    std::vector<std::size_t> probes;
    bool expect_converge = false;

    std::string example;
    std::size_t n = 20;

    std::string out;
    std::string json_out;
};

// ---------------------------------------------------------------------------
// Parsing helpers

inline double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
    return v;
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

/// "e<k>" for the k-th basis vector, otherwise comma-separated coordinates.
inline Point parse_point(const std::string& s, std::size_t dim) {
    if (!s.empty() && s[0] == 'e') {
        const double k = parse_number(s.substr(1));
        if (k < 1 || k != std::floor(k) || k > static_cast<double>(dim)) {
            throw UsageError("basis index out of range in '" + s + "'");
        }
        return Point::basis(dim, static_cast<std::size_t>(k));
    }
    Point p(parse_list(s));
    if (p.dim() != dim) {
        throw UsageError("point '" + s + "' has dimension " + std::to_string(p.dim()) + ", expected " +
                         std::to_string(dim));
    }
    return p;
}

/// Dimension implied by an explicit coordinate list, if any.
inline std::optional<std::size_t> point_dim(const std::string& s) {
    if (!s.empty() && s[0] == 'e') return std::nullopt;
    return parse_list(s).size();
}

inline gallery::GalleryEntry lookup(const std::string& id, std::optional<std::size_t> dim) {
    const auto& ids = gallery::gallery_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown gallery identifier '" + id + "'");
    return gallery::gallery_entry(id, dim);
}

inline MonotoneOperator resolve_operator(const RunConfig& c, const std::string& id, std::optional<std::size_t> dim) {
    auto e = lookup(id, dim);
    if (!e.op) throw UsageError("'" + id + "' has no operator");
    return c.inverse ? invert(*e.op) : *e.op;
}

inline std::string default_map_kind(const RunConfig& c, const gallery::GalleryEntry& e) {
    if (!c.map_kind.empty()) return c.map_kind;
    return (e.map && !c.inverse) ? "self" : "resolvent";
}

inline NonexpansiveMap resolve_map(const RunConfig& c, const std::string& id, std::optional<std::size_t> dim) {
    auto e = lookup(id, dim);
    const std::string kind = default_map_kind(c, e);
    if (kind == "self") {
        if (!e.map) throw UsageError("'" + id + "' has no mapping of its own; use --map resolvent|reflected|neg-reflected");
        if (c.inverse) throw UsageError("--inverse applies to operators, not to --map self");
        return *e.map;
    }
    if (!e.op) throw UsageError("'" + id + "' has no operator");
    const MonotoneOperator A = c.inverse ? invert(*e.op) : *e.op;
    if (kind == "resolvent") return resolvent_map(A);
    if (kind == "reflected") return reflected_map(A);
    if (kind == "neg-reflected") return negated(reflected_map(A));
    throw UsageError("unknown --map kind '" + kind + "'");
}

inline bool is_map_class(const std::string& cls) {
    return cls == "nonexpansive" || cls == "firmly-nonexpansive" || cls == "averaged" ||
           cls == "contraction-large-distances" || cls == "banach-contraction" ||
           cls == "strongly-nonexpansive" || cls == "super-strongly-nonexpansive";
}

inline bool is_operator_class(const std::string& cls) {
    return cls == "uniformly-monotone" || cls == "strongly-monotone" || cls == "coercive" ||
           cls == "growth-condition";
}

inline SamplerConfig sampler(const RunConfig& c, std::size_t dim, std::size_t default_levels) {
    SamplerConfig s;
    s.seed = c.seed;
    s.sample_count = c.samples;
    s.pair_strategy = pair_strategy_from_string(c.strategy);
    s.escalation_levels = c.levels != 0 ? c.levels : default_levels;
    s.threads = c.threads;
    if (!c.box_low.empty() || !c.box_high.empty()) {
        s.box_low = Point(c.box_low);
        s.box_high = Point(c.box_high);
    } else {
        if (c.box.size() != 2) throw UsageError("--box expects lo,hi");
        s.box_low = Point(std::vector<double>(dim, c.box[0]));
        s.box_high = Point(std::vector<double>(dim, c.box[1]));
    }
    if (s.box_low.dim() != dim || s.box_high.dim() != dim) {
        throw UsageError("sampling box dimension does not match the target dimension " + std::to_string(dim));
    }
    s.validate();
    return s;
}

inline json sampler_json(const SamplerConfig& s) { return report::to_json(s); }

/// Writes `content` to `path`; "-" means stdout.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) return;
    if (path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw UsageError("failed writing '" + path + "'");
}

/// Summary lines go to stderr when the payload itself goes to stdout.
inline std::ostream& summary_stream(const RunConfig& c, std::ostream& out, std::ostream& err) {
    return (c.out == "-" || c.json_out == "-") ? err : out;
}

// ---------------------------------------------------------------------------
// Commands

inline int run_gallery(const RunConfig& c, std::ostream& out, std::ostream& err) {
    json entries = json::array();
    std::ostringstream table;
    for (const auto& id : gallery::gallery_ids()) {
        const auto e = gallery::gallery_entry(id);
        std::string caps;
        if (e.op) {
            caps += "resolvent";
            if (e.op->has_direct_eval()) caps += ",direct";
            if (e.op->has_inverse_direct_eval()) caps += ",inverse-direct";
            if (e.op->has_scaled_resolvent()) caps += ",scaled-resolvent";
        }
        if (e.map) caps += caps.empty() ? "map" : ",map";
        if (caps.empty()) caps = "witnesses";
        json props = json::array();
        if (e.op) {
            for (const auto& p : e.op->declared_properties()) props.push_back(to_string(p.kind));
        }
        entries.push_back({{"id", id},
                           {"dim", e.dim},
                           {"variable_dim", gallery::has_variable_dim(id)},
                           {"description", e.description},
                           {"capabilities", caps},
                           {"declared_properties", props}});
        table << id << "\tdim=" << e.dim << (gallery::has_variable_dim(id) ? "*" : "") << "\t" << caps << "\t"
              << e.description << "\n";
    }
    emit(c.out, report::document({{"command", "gallery"}}, "gallery", entries), out);
    auto& s = summary_stream(c, out, err);
    if (c.out.empty()) s << table.str();
    s << "gallery: " << entries.size() << " entries\n";
    return ok;
}

inline std::vector<GraphSample> cone_points(std::size_t count) {
    std::vector<GraphSample> pts;
    for (std::size_t n = 1; n <= count; ++n) {
        auto [a, b] = gallery::cone_subdiff_witnesses(n);
        pts.push_back(std::move(a));
        pts.push_back(std::move(b));
    }
    return pts;
}

inline std::vector<std::pair<GraphSample, GraphSample>> cone_pairs(std::size_t count) {
    std::vector<std::pair<GraphSample, GraphSample>> pairs;
    for (std::size_t n = 1; n <= count; ++n) pairs.push_back(gallery::cone_subdiff_witnesses(n));
    return pairs;
}

inline int run_certify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.op.empty()) throw UsageError("certify needs --op");
    if (!is_map_class(c.class_name) && !is_operator_class(c.class_name)) {
        throw UsageError("unknown class '" + c.class_name + "'");
    }
    const auto entry = lookup(c.op, c.dim);
    const std::size_t dim = entry.dim;

    json config = {{"command", "certify"}, {"op", c.op}, {"class", c.class_name}, {"dim", dim},
                   {"inverse", c.inverse}};
    json result;
    ClassCertificate cert;
    std::string target = (c.inverse ? "inv(" + c.op + ")" : c.op);

    if (is_map_class(c.class_name)) {
        if (!entry.op && !entry.map) throw UsageError("'" + c.op + "' has neither an operator nor a mapping");
        const NonexpansiveMap T = resolve_map(c, c.op, c.dim);
        const std::string kind = default_map_kind(c, entry);
        config["map"] = kind;
        target = T.name();
        if (c.class_name == "strongly-nonexpansive" || c.class_name == "super-strongly-nonexpansive") {
            const auto mode = c.class_name == "strongly-nonexpansive" ? SequentialMode::sne : SequentialMode::ssne;
            std::vector<gallery::WitnessFamily> extra;
            if (c.op == "staircase" && kind == "self") extra.push_back(gallery::staircase_witness_family());
            config["seed"] = c.seed;
            config["n_max"] = c.n_max;
            config["families"] = c.families;
            cert = certify_sequential(T, mode, c.seed, c.n_max, c.families, extra);
        } else {
            const auto cfg = sampler(c, dim, 1);
            config["sampler"] = sampler_json(cfg);
            if (c.class_name == "nonexpansive") {
                cert = certify_lipschitz(T, cfg);
            } else if (c.class_name == "firmly-nonexpansive") {
                cert = certify_firm(T, cfg);
            } else if (c.class_name == "averaged") {
                config["alpha"] = report::number(c.alpha);
                cert = certify_averaged(T, c.alpha, cfg);
            } else if (c.class_name == "contraction-large-distances") {
                config["eps"] = report::to_json(c.eps_list);
                cert = certify_cld(T, c.eps_list, cfg);
            } else {
                config["eps"] = report::to_json(c.eps_list);
                cert = certify_banach(T, cfg, c.eps_list);
            }
        }
    } else if (c.op == "cone-subdiff") {
        const std::size_t count = std::min<std::size_t>(c.samples, 100000);
        config["witness_count"] = count;
        if (c.class_name == "growth-condition") {
            cert = certify_growth(cone_pairs(count));
        } else if (c.class_name == "coercive") {
            cert = certify_coercive(cone_points(count));
        } else {
            throw UsageError("cone-subdiff supports only growth-condition and coercive");
        }
    } else {
        const MonotoneOperator A = resolve_operator(c, c.op, c.dim);
        target = A.name();
        const auto cfg = sampler(c, dim, 1);
        config["sampler"] = sampler_json(cfg);
        if (c.class_name == "uniformly-monotone") {
            config["t"] = report::to_json(c.t_list);
            auto est = estimate_modulus(A, c.t_list, cfg);
            result["modulus"] = report::to_json(est.modulus);
            cert = std::move(est.certificate);
        } else if (c.class_name == "strongly-monotone") {
            config["t"] = report::to_json(c.t_list);
            cert = certify_strongly_monotone(A, c.t_list, cfg);
        } else if (c.class_name == "growth-condition") {
            cert = certify_growth(sample_graph_pairs(A, cfg), c.seed);
        } else {
            cert = certify_coercive(sample_graph_points(A, cfg), c.seed);
        }
    }
    result["certificate"] = report::to_json(cert);
    emit(c.out, report::document(config, "certificate", result), out);
    summary_stream(c, out, err) << "certify " << c.class_name << " on " << target << ": " << to_string(cert.verdict)
                                << " (samples " << cert.samples << ", seed " << cert.seed << ")"
                                << (cert.note.empty() ? "" : "; " + cert.note) << "\n";
    return cert.refuted() ? refuted : ok;
}

/// Dimension for the split operators: --dim, else the length of --x0, else
/// the first fixed-dimension operator, else the largest default.
inline std::optional<std::size_t> split_dim(const RunConfig& c, const std::vector<std::string>& ids) {
    if (c.dim) return c.dim;
    if (auto d = point_dim(c.x0)) return d;
    std::size_t largest = 0;
    for (const auto& id : ids) {
        const auto e = lookup(id, std::nullopt);
        if (!gallery::has_variable_dim(id)) return e.dim;
        largest = std::max(largest, e.dim);
    }
    return largest;
}

inline int run_split(const RunConfig& c, std::ostream& out, std::ostream& err) {
    StoppingRule stop{c.max_iter, c.tol, c.guard};
    json config = {{"command", "split"}, {"algo", c.algo}};
    IterationTrace tr;
    std::size_t dim = 0;
    TraceOptions opt;
    auto finish_options = [&](std::size_t d) {
        if (!c.ref.empty()) {
            opt.reference = Point(c.ref);
            if (opt.reference->dim() != d) throw UsageError("--ref has the wrong dimension");
            config["ref"] = report::to_json(*opt.reference);
        }
        for (std::size_t k : c.probes) {
            if (k < 1 || k > d) throw UsageError("--probes index out of range");
        }
        opt.probes = c.probes;
        if (opt.probes.empty() && (c.op == "shift" || c.op_b == "shift")) {
            for (std::size_t k = 1; k <= std::min<std::size_t>(8, d); ++k) opt.probes.push_back(k);
        }
        config["probes"] = opt.probes;
    };
    if (c.algo == "iterate") {
        if (c.op.empty()) throw UsageError("split --algo iterate needs --op");
        const auto d = split_dim(c, {c.op});
        const NonexpansiveMap T = resolve_map(c, c.op, d);
        dim = T.dim();
        const Point x0 = parse_point(c.x0, dim);
        finish_options(dim);
        config["op"] = c.op;
        config["map"] = default_map_kind(c, lookup(c.op, d));
        config["inverse"] = c.inverse;
        config["x0"] = report::to_json(x0);
        config["stop"] = report::to_json(stop);
        tr = iterate(T, x0, stop, opt);
    } else if (c.algo == "pr" || c.algo == "dr" || c.algo == "fb") {
        if (c.op.empty() || c.op_b.empty()) throw UsageError("split --algo " + c.algo + " needs --opA and --opB");
        const auto d = split_dim(c, {c.op, c.op_b});
        RunConfig plain = c;
        plain.inverse = false;
        const MonotoneOperator A = resolve_operator(plain, c.op, d);
        const MonotoneOperator B = resolve_operator(plain, c.op_b, d);
        dim = A.dim();
        const Point x0 = parse_point(c.x0, dim);
        finish_options(dim);
        config["opA"] = c.op;
        config["opB"] = c.op_b;
        config["dim"] = dim;
        config["x0"] = report::to_json(x0);
        config["stop"] = report::to_json(stop);
        if (c.algo == "pr") {
            tr = peaceman_rachford(A, B, x0, stop, opt);
        } else if (c.algo == "dr") {
            tr = douglas_rachford(A, B, x0, stop, opt);
        } else {
            config["gamma"] = report::number(c.gamma);
            tr = forward_backward(A, B, c.gamma, x0, stop, opt);
        }
    } else {
        throw UsageError("unknown --algo '" + c.algo + "' (pr, dr, fb, iterate)");
    }
    config["expect_converge"] = c.expect_converge;

    emit(c.out, report::trace_csv(tr, config), out);
    emit(c.json_out, report::document(config, "trace-summary", report::summary(tr)), out);
    summary_stream(c, out, err) << "split " << c.algo << ": " << to_string(tr.termination) << " after "
                                << tr.steps() << " steps, final residual "
                                << (tr.residuals.empty() ? std::string("n/a") : report::format_double(tr.residuals.back()))
                                << ", period-2 flag " << (tr.period2_flag ? "set" : "clear") << "\n";
    if (c.expect_converge && tr.termination != Termination::converged) return refuted;
    return ok;
}

inline int run_witness(const RunConfig& c, std::ostream& out, std::ostream& err) {
    json config = {{"command", "witness"}, {"example", c.example}, {"n", c.n}};
    std::ostringstream csv;
    report::CsvWriter w(csv);
    w.comment(config);
    using report::format_double;
    if (c.example == "staircase-ssne") {
        if (c.n < 1 || c.n > gallery::staircase_cap) {
            throw UsageError("--n must lie in 1.." + std::to_string(gallery::staircase_cap));
        }
        w.row({"n", "x_1", "x_2", "y_1", "y_2", "b_n", "d_n", "g_n"});
        for (std::size_t k = 1; k <= c.n; ++k) {
            const auto s = gallery::staircase_witnesses(k);
            w.row({std::to_string(k), format_double(s.x[0]), format_double(s.x[1]), format_double(s.y[0]),
                   format_double(s.y[1]), format_double(distance(s.x, s.y)), format_double(s.square_deficit),
                   format_double(s.gap_norm)});
        }
    } else if (c.example == "cone-subdiff") {
        if (c.n < 1) throw UsageError("--n must be >= 1");
        w.row({"n", "x_1", "x_2", "xstar_1", "xstar_2", "y_1", "y_2", "ystar_1", "ystar_2", "growth_ratio",
               "coercivity"});
        for (std::size_t k = 1; k <= c.n; ++k) {
            const auto [a, b] = gallery::cone_subdiff_witnesses(k);
            const double ratio = distance(a.xstar, b.xstar) / distance(a.x, b.x);
            const double coer = dot(a.x, a.xstar) / norm(a.x);
            w.row({std::to_string(k), format_double(a.x[0]), format_double(a.x[1]), format_double(a.xstar[0]),
                   format_double(a.xstar[1]), format_double(b.x[0]), format_double(b.x[1]),
                   format_double(b.xstar[0]), format_double(b.xstar[1]), format_double(ratio), format_double(coer)});
        }
    } else {
        throw UsageError("unknown --example '" + c.example + "' (staircase-ssne, cone-subdiff)");
    }
    emit(c.out, csv.str(), out);
    summary_stream(c, out, err) << "witness " << c.example << ": " << c.n << " rows\n";
    return ok;
}

inline int run_selfdual(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.op.empty()) throw UsageError("selfdual needs --op");
    RunConfig plain = c;
    plain.inverse = false;
    const MonotoneOperator A = resolve_operator(plain, c.op, c.dim);
    const auto cfg = sampler(c, A.dim(), 4);
    json config = {{"command", "selfdual"}, {"op", c.op}, {"dim", A.dim()}, {"sampler", sampler_json(cfg)},
                   {"t", report::to_json(c.t_list)}, {"eps", report::to_json(c.eps_list)}};
    const auto r = check_selfdual(A, cfg, c.t_list, c.eps_list);
    emit(c.out, report::document(config, "selfdual", report::to_json(r)), out);
    summary_stream(c, out, err) << "selfdual " << c.op << ": A " << to_string(r.op_modulus.verdict) << ", A^-1 "
                                << to_string(r.inverse_modulus.verdict) << ", R_A CLD "
                                << to_string(r.reflected_cld.verdict) << "; "
                                << (r.agrees_with_equivalence ? "agrees" : "disagrees")
                                << " with the self-duality equivalence\n";
    return r.agrees_with_equivalence ? ok : refuted;
}

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.command == "gallery") return run_gallery(c, out, err);
    if (c.command == "certify") return run_certify(c, out, err);
    if (c.command == "split") return run_split(c, out, err);
    if (c.command == "witness") return run_witness(c, out, err);
    if (c.command == "selfdual") return run_selfdual(c, out, err);
    throw UsageError("unknown command '" + c.command + "'");
}

// ---------------------------------------------------------------------------
// Argument parsing

inline std::uint64_t default_seed() {
    if (const char* s = std::getenv("MOSK_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(s, &used);
            if (used == std::string(s).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("MOSK_SEED is not an unsigned integer: '") + s + "'");
    }
    return 42;
}

/// Parses argv into a RunConfig; returns nullopt after printing help.
inline std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out) {
    RunConfig c;
    c.seed = default_seed();
    CLI::App app{"Monotone operators and strongly nonexpansive mappings: certifiers, splittings, witnesses", "mosk"};
    app.require_subcommand(1);

    std::string t_s, eps_s, box_s, box_low_s, box_high_s, ref_s, probes_s;
    std::size_t dim = 0;

    auto sampling = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "RNG seed (default: $MOSK_SEED or 42)");
        sub->add_option("--samples", c.samples, "pairs per escalation level")->check(CLI::PositiveNumber);
        sub->add_option("--box", box_s, "sampling cube lo,hi (default -10,10)");
        sub->add_option("--box-low", box_low_s, "lower box corner, comma separated");
        sub->add_option("--box-high", box_high_s, "upper box corner, comma separated");
        sub->add_option("--strategy", c.strategy, "independent|antithetic|radial-shells|mixed");
        sub->add_option("--levels", c.levels, "nested boxes (factor 10 each)");
        sub->add_option("--threads", c.threads, "worker threads (0 = auto); results do not depend on it");
        sub->add_option("--t", t_s, "modulus shells t_1<t_2<...");
        sub->add_option("--eps", eps_s, "distance thresholds eps_1<eps_2<...");
    };
    auto target = [&](CLI::App* sub) {
        sub->add_option("--dim", dim, "dimension for variable-dimension entries");
        sub->add_option("--map", c.map_kind, "self|resolvent|reflected|neg-reflected");
        sub->add_flag("--inverse", c.inverse, "use the inverse operator");
    };

    auto* gal = app.add_subcommand("gallery", "list the gallery");
    gal->add_option("--out", c.out, "JSON listing path ('-' for stdout)");

    auto* cert = app.add_subcommand("certify", "certify or refute a class membership");
    cert->add_option("--op", c.op, "gallery identifier")->required();
    cert->add_option("--class", c.class_name, "class name")->required();
    cert->add_option("--alpha", c.alpha, "averagedness constant");
    cert->add_option("--n-max", c.n_max, "length of sequential witness families");
    cert->add_option("--families", c.families, "number of generated scaled-pair families");
    cert->add_option("--out", c.out, "certificate JSON path ('-' for stdout)");
    target(cert);
    sampling(cert);

    auto* spl = app.add_subcommand("split", "run a fixed-point or splitting iteration");
    spl->add_option("--algo", c.algo, "pr|dr|fb|iterate");
    spl->add_option("--opA,--op", c.op, "first operator (or the mapping source for iterate)");
    spl->add_option("--opB", c.op_b, "second operator");
    spl->add_option("--gamma", c.gamma, "forward-backward step size");
    spl->add_option("--x0", c.x0, "start point: comma-separated coordinates or e<k>");
    spl->add_option("--max-iter", c.max_iter)->check(CLI::PositiveNumber);
    spl->add_option("--tol", c.tol, "residual tolerance");
    spl->add_option("--guard", c.guard, "divergence guard on ||x_n||");
    spl->add_option("--ref", ref_s, "reference point for distance tracking");
    spl->add_option("--probes", probes_s, "coordinate probes k (1-based), comma separated");
    spl->add_flag("--expect-converge", c.expect_converge, "exit 2 unless the run converges");
    spl->add_option("--out", c.out, "trace CSV path ('-' for stdout)");
    spl->add_option("--json", c.json_out, "summary JSON path ('-' for stdout)");
    target(spl);

    auto* wit = app.add_subcommand("witness", "dump a witness sequence");
    wit->add_option("--example", c.example, "staircase-ssne|cone-subdiff")->required();
    wit->add_option("--n", c.n, "number of rows");
    wit->add_option("--out", c.out, "CSV path ('-' for stdout)");

    auto* sd = app.add_subcommand("selfdual", "compare A, A^-1 and R_A verdicts");
    sd->add_option("--op", c.op, "gallery identifier")->required();
    sd->add_option("--dim", dim, "dimension for variable-dimension entries");
    sd->add_option("--out", c.out, "report JSON path ('-' for stdout)");
    sampling(sd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    if (dim != 0) c.dim = dim;
    if (!t_s.empty()) c.t_list = parse_list(t_s);
    if (!eps_s.empty()) c.eps_list = parse_list(eps_s);
    if (!box_s.empty()) c.box = parse_list(box_s);
    if (!box_low_s.empty() || !box_high_s.empty()) {
        if (box_low_s.empty() || box_high_s.empty()) throw UsageError("--box-low and --box-high go together");
        c.box_low = parse_list(box_low_s);
        c.box_high = parse_list(box_high_s);
    }
    if (!ref_s.empty()) c.ref = parse_list(ref_s);
    if (!probes_s.empty()) {
        for (double k : parse_list(probes_s)) {
            if (k < 1 || k != std::floor(k)) throw UsageError("--probes expects positive integers");
            c.probes.push_back(static_cast<std::size_t>(k));
        }
    }
    return c;
}

/// Full command-line entry point with the documented exit statuses.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    try {
        const auto cfg = parse(argc, argv, out);
        if (!cfg) return ok;
        return run(*cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical;
    } catch (const OverflowError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical;
    } catch (const Error& e) {
        // domain, dimension, step-size and unsupported errors all stem from the request
        err << "usage error: " << e.what() << "\n";
        return usage;
    }
}

} // namespace mosk::cli
