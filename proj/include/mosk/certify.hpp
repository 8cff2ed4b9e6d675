#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mosk/core.hpp"
#include "mosk/errors.hpp"
#include "mosk/gallery.hpp"
#include "mosk/point.hpp"

namespace mosk {

/// Absolute slack on inequality violations.
inline constexpr double tol_cert = 1e-9;
/// Threshold below which a modulus estimate counts as zero.
inline constexpr double tol_pos = 1e-12;
/// A margin that shrinks to this fraction of its starting value across nested
/// boxes (or probes) is read as tending to zero.
inline constexpr double decay_ratio = 0.05;

enum class PairStrategy { independent, antithetic, radial_shells, mixed };

inline std::string to_string(PairStrategy s) {
    switch (s) {
    case PairStrategy::independent: return "independent";
    case PairStrategy::antithetic: return "antithetic";
    case PairStrategy::radial_shells: return "radial-shells";
    case PairStrategy::mixed: return "mixed";
    }
    return "unknown";
}

inline PairStrategy pair_strategy_from_string(const std::string& s) {
    if (s == "independent") return PairStrategy::independent;
    if (s == "antithetic") return PairStrategy::antithetic;
    if (s == "radial-shells") return PairStrategy::radial_shells;
    if (s == "mixed") return PairStrategy::mixed;
    throw DomainError("unknown pair strategy '" + s + "'");
}

struct SamplerConfig {
    std::uint64_t seed = 42;
    std::size_t sample_count = 10000; ///< pairs per escalation level
    Point box_low;
    Point box_high;
    PairStrategy pair_strategy = PairStrategy::mixed;
    /// Number of nested boxes; level k scales the half-widths by factor^k.
    std::size_t escalation_levels = 1;
    double escalation_factor = 10.0;
    /// 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    static SamplerConfig cube(std::size_t dim, double lo, double hi, std::size_t samples, std::uint64_t seed = 42) {
        SamplerConfig c;
        c.seed = seed;
        c.sample_count = samples;
        c.box_low = Point(std::vector<double>(dim, lo));
        c.box_high = Point(std::vector<double>(dim, hi));
        return c;
    }

    std::size_t dim() const { return box_low.dim(); }

    void validate() const {
        if (sample_count < 1) throw DomainError("SamplerConfig: sample_count must be >= 1");
        if (box_low.dim() == 0 || box_low.dim() != box_high.dim()) {
            throw DimensionMismatch("SamplerConfig: box corners must share a positive dimension");
        }
        for (std::size_t i = 0; i < box_low.dim(); ++i) {
            if (!(box_low[i] < box_high[i])) throw DomainError("SamplerConfig: box_low must be < box_high");
        }
        if (escalation_levels < 1) throw DomainError("SamplerConfig: escalation_levels must be >= 1");
        if (!(escalation_factor > 1.0)) throw DomainError("SamplerConfig: escalation_factor must be > 1");
    }
};

enum class Verdict { consistent, refuted };

inline std::string to_string(Verdict v) { return v == Verdict::consistent ? "consistent" : "refuted"; }

struct Estimate {
    double probe;
    double value;
};

/// Refuting (or extremal) sample: the points involved and the value they produce.
struct Witness {
    std::vector<Point> points;
    double value;
};

struct ClassCertificate {
    std::string class_name;
    std::map<std::string, double> params;
    std::vector<Estimate> estimates;
    /// Per escalation level, the same probes as `estimates`.
    std::vector<std::vector<Estimate>> level_estimates;
    Verdict verdict = Verdict::consistent;
    std::optional<Witness> witness;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::string note;

    bool refuted() const { return verdict == Verdict::refuted; }
    std::optional<double> estimate_at(double probe) const {
        for (const auto& e : estimates) {
            if (e.probe == probe) return e.value;
        }
        return std::nullopt;
    }
};

// ===========================================================================
// Modulus

struct Modulus {
    enum class Form { power, table };
    Form form = Form::table;
    double coefficient = 0.0; ///< power form: coefficient * t^exponent
    double exponent = 0.0;
    std::vector<std::pair<double, double>> table; ///< (t, phi(t)), nondecreasing
    std::optional<double> supercoercive_coefficient; ///< phi(t) >= c t^2 for t >= 1

    static Modulus power(double coefficient, double exponent) {
        Modulus m;
        m.form = Form::power;
        m.coefficient = coefficient;
        m.exponent = exponent;
        return m;
    }

    static Modulus from_table(std::vector<std::pair<double, double>> table) {
        Modulus m;
        m.form = Form::table;
        m.table = std::move(table);
        return m;
    }

    double base(double t) const {
        if (t <= 0.0) return 0.0;
        if (form == Form::power) return coefficient * std::pow(t, exponent);
        double v = 0.0;
        for (const auto& [tt, phi] : table) {
            if (tt <= t && std::isfinite(phi)) v = std::max(v, phi);
        }
        return v;
    }

    /// Best lower bound at t combining the base form with the quadratic bound.
    double operator()(double t) const {
        double v = base(t);
        if (supercoercive_coefficient && t >= 1.0) v = std::max(v, *supercoercive_coefficient * t * t);
        return v;
    }
};

/// Adds the doubling bound: phi(1) >= alpha gives phi(t) >= (alpha/4) t^2 for t >= 1.
inline Modulus tighten_modulus(Modulus m, double alpha_at_1) {
    if (!(alpha_at_1 > 0.0)) throw DomainError("tighten_modulus: alpha must be positive");
    m.supercoercive_coefficient = alpha_at_1 / 4.0;
    return m;
}

// ===========================================================================
// Pair sampling

struct SampledPair {
    Point x;
    Point y;
    std::size_t level;
    std::uint64_t index; ///< unique across levels; used for deterministic tie breaks
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::size_t batch_size = 1024;

struct LevelBox {
    Point center;
    Point half;
    double diameter;
    double min_half;
};

inline LevelBox level_box(const SamplerConfig& cfg, std::size_t level) {
    const double f = std::pow(cfg.escalation_factor, static_cast<double>(level));
    Point center = 0.5 * (cfg.box_low + cfg.box_high);
    Point half = (0.5 * f) * (cfg.box_high - cfg.box_low);
    double mh = std::numeric_limits<double>::infinity();
    for (double h : half.coords()) mh = std::min(mh, h);
    const double diam = 2.0 * norm(half);
    return {std::move(center), std::move(half), diam, mh};
}

/// Generates the pairs of one batch. Depends only on (seed, level, batch).
inline void generate_batch(const SamplerConfig& cfg, const LevelBox& box, const std::vector<double>& hints,
                           std::size_t level, std::size_t batch, std::vector<SampledPair>& out) {
    out.clear();
    const std::size_t begin = batch * batch_size;
    const std::size_t end = std::min(cfg.sample_count, begin + batch_size);
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64((static_cast<std::uint64_t>(level) << 32) ^ batch)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t d = box.center.dim();
    auto uniform_point = [&] {
        Point p = box.center;
        for (std::size_t i = 0; i < d; ++i) p[i] += box.half[i] * (2.0 * unit(rng) - 1.0);
        return p;
    };
    const double r_min = 1e-4 * box.min_half;
    const double r_max = std::max(box.diameter, 2.0 * r_min);
    for (std::size_t i = begin; i < end; ++i) {
        const std::uint64_t index = static_cast<std::uint64_t>(level) * cfg.sample_count + i;
        PairStrategy s = cfg.pair_strategy;
        if (s == PairStrategy::mixed) s = static_cast<PairStrategy>(i % 3);
        Point x = uniform_point();
        Point y;
        switch (s) {
        case PairStrategy::independent: y = uniform_point(); break;
        case PairStrategy::antithetic: y = 2.0 * box.center - x; break;
        default: {
            Point u = Point::zeros(d);
            double un = 0.0;
            while (un == 0.0) {
                for (std::size_t k = 0; k < d; ++k) u[k] = gauss(rng);
                un = norm(u);
            }
            double r;
            if (!hints.empty() && unit(rng) < 0.5) {
                const std::size_t k = std::min(hints.size() - 1, static_cast<std::size_t>(unit(rng) * hints.size()));
                r = hints[k] * std::exp2(unit(rng));
            } else {
                r = r_min * std::exp(unit(rng) * std::log(r_max / r_min));
            }
            u = (1.0 / un) * u;
            // room along +u and -u before leaving the box
            double up = std::numeric_limits<double>::infinity();
            double down = up;
            for (std::size_t k = 0; k < d; ++k) {
                const double lo = box.center[k] - box.half[k];
                const double hi = box.center[k] + box.half[k];
                if (u[k] > 0.0) {
                    up = std::min(up, (hi - x[k]) / u[k]);
                    down = std::min(down, (x[k] - lo) / u[k]);
                } else if (u[k] < 0.0) {
                    up = std::min(up, (lo - x[k]) / u[k]);
                    down = std::min(down, (x[k] - hi) / u[k]);
                }
            }
            if (r > up) {
                if (r <= down) {
                    u = -u;
                } else if (down > up) {
                    u = -u;
                    r = down;
                } else {
                    r = up;
                }
            }
            y = x + r * u;
            for (std::size_t k = 0; k < d; ++k) {
                y[k] = std::clamp(y[k], box.center[k] - box.half[k], box.center[k] + box.half[k]);
            }
            break;
        }
        }
        out.push_back({std::move(x), std::move(y), level, index});
    }
}

} // namespace detail

/// Running extremum with deterministic tie breaking on the pair index.
struct Extremum {
    bool maximize = true;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
    std::vector<Point> points;

    bool empty() const { return std::isnan(value); }

    bool improves(double v, std::uint64_t i) const {
        if (std::isnan(v)) return false;
        if (empty()) return true;
        if (v == value) return i < index;
        return maximize ? v > value : v < value;
    }

    template <class MakePoints>
    void offer(double v, std::uint64_t i, MakePoints&& make) {
        if (improves(v, i)) {
            value = v;
            index = i;
            points = make();
        }
    }

    void merge(const Extremum& o) {
        if (!o.empty() && improves(o.value, o.index)) {
            value = o.value;
            index = o.index;
            points = o.points;
        }
    }
};

/// Extremum per (level, slot).
class ExtremumTable {
public:
    ExtremumTable(std::size_t levels, std::size_t slots, bool maximize)
        : levels_(levels), slots_(slots), cells_(levels * slots) {
        for (auto& c : cells_) c.maximize = maximize;
    }

    Extremum& at(std::size_t level, std::size_t slot) { return cells_[level * slots_ + slot]; }
    const Extremum& at(std::size_t level, std::size_t slot) const { return cells_[level * slots_ + slot]; }
    std::size_t levels() const { return levels_; }
    std::size_t slots() const { return slots_; }

    void merge(const ExtremumTable& o) {
        for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(o.cells_[i]);
    }

    /// Extremum of one slot over all levels.
    Extremum overall(std::size_t slot) const {
        Extremum e;
        e.maximize = cells_.empty() ? true : cells_[0].maximize;
        for (std::size_t l = 0; l < levels_; ++l) e.merge(at(l, slot));
        return e;
    }

private:
    std::size_t levels_;
    std::size_t slots_;
    std::vector<Extremum> cells_;
};

/// Runs `fn(pair, table)` on every sampled pair of every level, in parallel
/// over fixed batches, and merges the per-thread tables. The reduction is
/// order independent, so the result does not depend on the thread count.
template <class Fn>
ExtremumTable sample_pairs(const SamplerConfig& cfg, const std::vector<double>& hints, std::size_t slots,
                           bool maximize, Fn&& fn) {
    cfg.validate();
    const std::size_t levels = cfg.escalation_levels;
    const std::size_t batches = (cfg.sample_count + detail::batch_size - 1) / detail::batch_size;
    const std::size_t jobs = levels * batches;
    unsigned nthreads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, std::min<std::size_t>(jobs, 16)));

    std::vector<detail::LevelBox> boxes;
    for (std::size_t l = 0; l < levels; ++l) boxes.push_back(detail::level_box(cfg, l));

    std::vector<ExtremumTable> tables(nthreads, ExtremumTable(levels, slots, maximize));
    std::vector<std::exception_ptr> errors(nthreads);
    auto worker = [&](unsigned t) {
        try {
            std::vector<SampledPair> pairs;
            for (std::size_t job = t; job < jobs; job += nthreads) {
                const std::size_t level = job / batches;
                const std::size_t batch = job % batches;
                detail::generate_batch(cfg, boxes[level], hints, level, batch, pairs);
                for (const auto& p : pairs) fn(p, tables[t]);
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    for (unsigned t = 1; t < nthreads; ++t) tables[0].merge(tables[t]);
    return std::move(tables[0]);
}

namespace detail {

/// True when a positive margin shrinks steadily across levels to at most
/// decay_ratio of its first value. Needs at least three finite levels.
inline bool margin_decays(const std::vector<double>& margins) {
    std::vector<double> m;
    for (double v : margins) {
        if (std::isfinite(v)) m.push_back(v);
    }
    if (m.size() < 3 || margins.size() != m.size()) return false;
    for (std::size_t i = 1; i < m.size(); ++i) {
        if (m[i] > m[i - 1] * (1.0 + 1e-9) + 1e-300) return false;
    }
    return m.back() <= decay_ratio * m.front();
}

inline std::vector<double> sorted_positive(std::vector<double> v, const char* what) {
    if (v.empty()) throw DomainError(std::string(what) + ": probe list must be nonempty");
    for (double x : v) {
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + ": probes must be positive");
    }
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) throw DomainError(std::string(what) + ": probes must be increasing");
    }
    return v;
}

inline void check_map_dim(const NonexpansiveMap& T, const SamplerConfig& cfg) {
    if (T.dim() != cfg.dim()) throw DimensionMismatch("sampler box dimension does not match " + T.name());
}

inline void check_op_dim(const MonotoneOperator& A, const SamplerConfig& cfg) {
    if (A.dim() != cfg.dim()) throw DimensionMismatch("sampler box dimension does not match " + A.name());
}

inline ClassCertificate base_certificate(std::string name, const SamplerConfig& cfg) {
    ClassCertificate c;
    c.class_name = std::move(name);
    c.seed = cfg.seed;
    c.samples = cfg.sample_count;
    return c;
}

/// Fills estimates and level_estimates from one table slot per probe.
inline void fill_estimates(ClassCertificate& c, const ExtremumTable& t, const std::vector<double>& probes) {
    c.estimates.clear();
    c.level_estimates.assign(t.levels(), {});
    for (std::size_t s = 0; s < probes.size(); ++s) {
        const Extremum e = t.overall(s);
        c.estimates.push_back({probes[s], e.empty() ? std::numeric_limits<double>::infinity() : e.value});
        for (std::size_t l = 0; l < t.levels(); ++l) {
            const auto& cell = t.at(l, s);
            c.level_estimates[l].push_back(
                {probes[s], cell.empty() ? std::numeric_limits<double>::infinity() : cell.value});
        }
    }
}

inline Witness make_witness(const Extremum& e) { return {e.points, e.value}; }

} // namespace detail

// ===========================================================================
// Mapping certifiers

/// sup ||Tx - Ty|| / ||x - y||; refuted above 1 + tol_cert.
inline ClassCertificate certify_lipschitz(const NonexpansiveMap& T, const SamplerConfig& cfg) {
    detail::check_map_dim(T, cfg);
    auto table = sample_pairs(cfg, {}, 1, true, [&](const SampledPair& p, ExtremumTable& t) {
        const double d = distance(p.x, p.y);
        if (d == 0.0) return;
        const double r = distance(T(p.x), T(p.y)) / d;
        t.at(p.level, 0).offer(r, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
    });
    auto c = detail::base_certificate("nonexpansive", cfg);
    detail::fill_estimates(c, table, {0.0});
    const Extremum best = table.overall(0);
    if (!best.empty()) c.witness = detail::make_witness(best);
    c.verdict = (!best.empty() && best.value > 1.0 + tol_cert) ? Verdict::refuted : Verdict::consistent;
    return c;
}

/// max of ||Tx-Ty||^2 + ||(Id-T)x-(Id-T)y||^2 - ||x-y||^2.
inline ClassCertificate certify_firm(const NonexpansiveMap& F, const SamplerConfig& cfg) {
    detail::check_map_dim(F, cfg);
    auto table = sample_pairs(cfg, {}, 1, true, [&](const SampledPair& p, ExtremumTable& t) {
        const Point d = p.x - p.y;
        const Point dT = F(p.x) - F(p.y);
        const double v = squared_norm(dT) + squared_norm(d - dT) - squared_norm(d);
        t.at(p.level, 0).offer(v, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
    });
    auto c = detail::base_certificate("firmly-nonexpansive", cfg);
    detail::fill_estimates(c, table, {0.0});
    const Extremum best = table.overall(0);
    if (!best.empty()) c.witness = detail::make_witness(best);
    c.verdict = (!best.empty() && best.value > tol_cert) ? Verdict::refuted : Verdict::consistent;
    return c;
}

/// max of (1-a)||(Id-T)x-(Id-T)y||^2 - a(||x-y||^2 - ||Tx-Ty||^2).
inline ClassCertificate certify_averaged(const NonexpansiveMap& T, double alpha, const SamplerConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("certify_averaged: alpha must lie in (0, 1)");
    detail::check_map_dim(T, cfg);
    auto table = sample_pairs(cfg, {}, 1, true, [&](const SampledPair& p, ExtremumTable& t) {
        const Point d = p.x - p.y;
        const Point dT = T(p.x) - T(p.y);
        const double v = (1.0 - alpha) * squared_norm(d - dT) - alpha * (squared_norm(d) - squared_norm(dT));
        t.at(p.level, 0).offer(v, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
    });
    auto c = detail::base_certificate("averaged", cfg);
    c.params["alpha"] = alpha;
    detail::fill_estimates(c, table, {0.0});
    const Extremum best = table.overall(0);
    if (!best.empty()) c.witness = detail::make_witness(best);
    c.verdict = (!best.empty() && best.value > tol_cert) ? Verdict::refuted : Verdict::consistent;
    return c;
}

namespace detail {

/// beta(eps) = sup ratio over pairs with ||x - y|| >= eps, per level.
inline ExtremumTable large_distance_ratios(const NonexpansiveMap& T, const std::vector<double>& eps,
                                           const SamplerConfig& cfg) {
    check_map_dim(T, cfg);
    return sample_pairs(cfg, eps, eps.size(), true, [&](const SampledPair& p, ExtremumTable& t) {
        const double d = distance(p.x, p.y);
        if (d < eps.front()) return;
        const double r = distance(T(p.x), T(p.y)) / d;
        for (std::size_t k = 0; k < eps.size() && eps[k] <= d; ++k) {
            t.at(p.level, k).offer(r, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
        }
    });
}

} // namespace detail

/// Contraction for large distances: beta(eps) < 1 for every probed eps, and
/// no margin 1 - beta(eps) collapsing across the nested boxes.
inline ClassCertificate certify_cld(const NonexpansiveMap& T, const std::vector<double>& eps_list,
                                    const SamplerConfig& cfg) {
    const auto eps = detail::sorted_positive(eps_list, "certify_cld");
    const auto table = detail::large_distance_ratios(T, eps, cfg);
    auto c = detail::base_certificate("contraction-large-distances", cfg);
    detail::fill_estimates(c, table, eps);
    c.verdict = Verdict::consistent;
    for (std::size_t k = 0; k < eps.size() && !c.refuted(); ++k) {
        const Extremum best = table.overall(k);
        if (!best.empty() && best.value > 1.0 - tol_cert) {
            c.verdict = Verdict::refuted;
            c.witness = detail::make_witness(best);
            c.note = "ratio reaches 1 at eps=" + std::to_string(eps[k]);
        }
    }
    for (std::size_t k = 0; k < eps.size() && !c.refuted(); ++k) {
        std::vector<double> margins;
        for (std::size_t l = 0; l < table.levels(); ++l) {
            const auto& cell = table.at(l, k);
            margins.push_back(cell.empty() ? std::numeric_limits<double>::infinity() : 1.0 - cell.value);
        }
        if (detail::margin_decays(margins)) {
            c.verdict = Verdict::refuted;
            c.witness = detail::make_witness(table.at(table.levels() - 1, k));
            c.note = "1 - beta(eps) decays across nested boxes at eps=" + std::to_string(eps[k]);
        }
    }
    if (!c.witness) {
        const Extremum best = table.overall(0);
        if (!best.empty()) c.witness = detail::make_witness(best);
    }
    return c;
}

/// Banach contraction: sup ratio bounded away from 1 as eps -> 0.
inline ClassCertificate certify_banach(const NonexpansiveMap& T, const SamplerConfig& cfg,
                                       const std::vector<double>& eps_list = {1e-3, 1e-2, 1e-1, 1.0}) {
    const auto eps = detail::sorted_positive(eps_list, "certify_banach");
    const auto table = detail::large_distance_ratios(T, eps, cfg);
    auto c = detail::base_certificate("banach-contraction", cfg);
    detail::fill_estimates(c, table, eps);
    const Extremum finest = table.overall(0);
    if (!finest.empty()) c.witness = detail::make_witness(finest);
    std::vector<double> margins;
    for (std::size_t k = eps.size(); k-- > 0;) {
        const Extremum e = table.overall(k);
        margins.push_back(e.empty() ? std::numeric_limits<double>::infinity() : 1.0 - e.value);
    }
    if (!finest.empty() && finest.value > 1.0 - tol_cert) {
        c.verdict = Verdict::refuted;
        c.note = "ratio reaches 1";
    } else if (detail::margin_decays(margins)) {
        c.verdict = Verdict::refuted;
        c.note = "1 - beta(eps) decays as eps -> 0";
    }
    return c;
}

// ===========================================================================
// Operator certifiers

struct ModulusEstimate {
    Modulus modulus;
    ClassCertificate certificate;
};

namespace detail {

struct GraphPair {
    GraphSample a;
    GraphSample b;
};

inline GraphPair graph_pair(const MonotoneOperator& A, const SampledPair& p) {
    return {minty_sample(A, p.x), minty_sample(A, p.y)};
}

/// Index of the shell [t_i, t_{i+1}) containing s, or npos below t_0.
inline std::size_t shell_of(const std::vector<double>& t, double s) {
    if (s < t.front()) return static_cast<std::size_t>(-1);
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    return static_cast<std::size_t>(it - t.begin()) - 1;
}

inline std::vector<double> suffix_min(std::vector<double> v) {
    for (std::size_t i = v.size(); i-- > 1;) v[i - 1] = std::min(v[i - 1], v[i]);
    return v;
}

} // namespace detail

/// Empirical modulus of uniform monotonicity from Minty-sampled graph pairs.
///
/// `estimates` holds the per-shell infimum of <x-y, x*-y*> over pairs with
/// ||x-y|| in [t_i, t_{i+1}); the returned Modulus table is the running
/// infimum over ||x-y|| >= t_i, which is nondecreasing. Empty shells are +inf.
inline ModulusEstimate estimate_modulus(const MonotoneOperator& A, const std::vector<double>& t_list,
                                        const SamplerConfig& cfg) {
    const auto t = detail::sorted_positive(t_list, "estimate_modulus");
    detail::check_op_dim(A, cfg);
    const auto table = sample_pairs(cfg, t, t.size(), false, [&](const SampledPair& p, ExtremumTable& tab) {
        const auto g = detail::graph_pair(A, p);
        const double sep = distance(g.a.x, g.b.x);
        const std::size_t shell = detail::shell_of(t, sep);
        if (shell == static_cast<std::size_t>(-1)) return;
        const double inner = dot(g.a.x - g.b.x, g.a.xstar - g.b.xstar);
        tab.at(p.level, shell).offer(inner, p.index, [&] {
            return std::vector<Point>{p.x, p.y, g.a.x, g.a.xstar, g.b.x, g.b.xstar};
        });
    });

    auto c = detail::base_certificate("uniformly-monotone", cfg);
    detail::fill_estimates(c, table, t);
    std::vector<double> shell_inf;
    for (const auto& e : c.estimates) shell_inf.push_back(e.value);
    const auto envelope = detail::suffix_min(shell_inf);

    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < t.size(); ++i) rows.emplace_back(t[i], envelope[i]);
    Modulus m = Modulus::from_table(std::move(rows));

    auto smallest_from = [&](std::size_t shell, std::optional<std::size_t> level) {
        Extremum best;
        best.maximize = false;
        for (std::size_t s = shell; s < t.size(); ++s) {
            if (level) {
                best.merge(table.at(*level, s));
            } else {
                best.merge(table.overall(s));
            }
        }
        return best;
    };

    c.verdict = Verdict::consistent;
    for (std::size_t i = 0; i < t.size() && !c.refuted(); ++i) {
        if (envelope[i] <= tol_pos) {
            c.verdict = Verdict::refuted;
            c.witness = detail::make_witness(smallest_from(i, std::nullopt));
            c.note = "modulus estimate vanishes at t=" + std::to_string(t[i]);
        }
    }
    for (std::size_t i = 0; i < t.size() && !c.refuted(); ++i) {
        std::vector<double> margins;
        for (std::size_t l = 0; l < table.levels(); ++l) {
            const Extremum e = smallest_from(i, l);
            margins.push_back(e.empty() ? std::numeric_limits<double>::infinity() : e.value);
        }
        if (detail::margin_decays(margins)) {
            c.verdict = Verdict::refuted;
            c.witness = detail::make_witness(smallest_from(i, table.levels() - 1));
            c.note = "modulus estimate decays across nested boxes at t=" + std::to_string(t[i]);
        }
    }
    if (!c.witness) {
        const Extremum e = smallest_from(0, std::nullopt);
        if (!e.empty()) c.witness = detail::make_witness(e);
    }
    return {std::move(m), std::move(c)};
}

/// Strong monotonicity: <x-y, x*-y*>/||x-y||^2 bounded away from zero. Refuted
/// when the ratio vanishes or decays across shells (towards small t) or boxes.
inline ClassCertificate certify_strongly_monotone(const MonotoneOperator& A, const std::vector<double>& t_list,
                                                  const SamplerConfig& cfg) {
    const auto t = detail::sorted_positive(t_list, "certify_strongly_monotone");
    detail::check_op_dim(A, cfg);
    const auto table = sample_pairs(cfg, t, t.size(), false, [&](const SampledPair& p, ExtremumTable& tab) {
        const auto g = detail::graph_pair(A, p);
        const double sep = distance(g.a.x, g.b.x);
        const std::size_t shell = detail::shell_of(t, sep);
        if (shell == static_cast<std::size_t>(-1)) return;
        const double ratio = dot(g.a.x - g.b.x, g.a.xstar - g.b.xstar) / (sep * sep);
        tab.at(p.level, shell).offer(ratio, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
    });
    auto c = detail::base_certificate("strongly-monotone", cfg);
    detail::fill_estimates(c, table, t);
    Extremum worst;
    worst.maximize = false;
    for (std::size_t s = 0; s < t.size(); ++s) worst.merge(table.overall(s));
    if (!worst.empty()) c.witness = detail::make_witness(worst);
    c.verdict = Verdict::consistent;
    if (!worst.empty() && worst.value <= tol_pos) {
        c.verdict = Verdict::refuted;
        c.note = "ratio vanishes";
        return c;
    }
    std::vector<double> by_shell;
    for (std::size_t s = t.size(); s-- > 0;) by_shell.push_back(c.estimates[s].value);
    if (detail::margin_decays(by_shell)) {
        c.verdict = Verdict::refuted;
        c.note = "ratio decays as t -> 0";
        return c;
    }
    for (std::size_t s = 0; s < t.size(); ++s) {
        std::vector<double> margins;
        for (std::size_t l = 0; l < table.levels(); ++l) {
            const auto& cell = table.at(l, s);
            margins.push_back(cell.empty() ? std::numeric_limits<double>::infinity() : cell.value);
        }
        if (detail::margin_decays(margins)) {
            c.verdict = Verdict::refuted;
            c.witness = detail::make_witness(table.at(table.levels() - 1, s));
            c.note = "ratio decays across nested boxes";
            return c;
        }
    }
    return c;
}

struct InequalityReport {
    double max_violation;
    std::optional<Witness> witness;
    Verdict verdict;
    std::size_t samples;
};

/// Checks ||x-y||^2 - ||R_A x - R_A y||^2 >= 4 phi(||J_A x - J_A y||).
inline InequalityReport check_reflected_modulus_inequality(const MonotoneOperator& A, const Modulus& phi,
                                                           const SamplerConfig& cfg) {
    detail::check_op_dim(A, cfg);
    const auto table = sample_pairs(cfg, {}, 1, true, [&](const SampledPair& p, ExtremumTable& tab) {
        const Point jx = A.resolvent(p.x);
        const Point jy = A.resolvent(p.y);
        const Point d = p.x - p.y;
        const Point dR = (2.0 * jx - p.x) - (2.0 * jy - p.y);
        const double lhs = squared_norm(d) - squared_norm(dR);
        const double v = 4.0 * phi(distance(jx, jy)) - lhs;
        tab.at(p.level, 0).offer(v, p.index, [&] { return std::vector<Point>{p.x, p.y}; });
    });
    const Extremum e = table.overall(0);
    InequalityReport r{e.empty() ? -std::numeric_limits<double>::infinity() : e.value, std::nullopt,
                       Verdict::consistent, cfg.sample_count * cfg.escalation_levels};
    if (!e.empty()) r.witness = detail::make_witness(e);
    if (!e.empty() && e.value > tol_cert) r.verdict = Verdict::refuted;
    return r;
}

inline InequalityReport check_lemma_3_5(const MonotoneOperator& A, const Modulus& phi, const SamplerConfig& cfg) {
    return check_reflected_modulus_inequality(A, phi, cfg);
}

// ===========================================================================
// Sequential definitions

enum class SequentialMode { sne, ssne };

struct SequentialRow {
    std::size_t n;
    double b;       ///< ||x_n - y_n||
    double deficit; ///< r_n (sne) or d_n (ssne)
    double gap;     ///< ||(x_n - y_n) - (T x_n - T y_n)||
};

struct SequentialReport {
    std::string family;
    SequentialMode mode;
    std::vector<SequentialRow> rows;
    bool differences_bounded;
    bool deficit_to_zero;
    bool gap_to_zero;
    bool refuted;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> head_tail(std::size_t n) {
    const std::size_t k = std::max<std::size_t>(1, n / 10);
    return {k, n - k};
}

inline bool tends_to_zero(const std::vector<double>& v) {
    const auto [h, t] = head_tail(v.size());
    double head = 0.0;
    for (std::size_t i = 0; i < h; ++i) head = std::max(head, std::abs(v[i]));
    double tail = 0.0;
    for (std::size_t i = t; i < v.size(); ++i) tail = std::max(tail, std::abs(v[i]));
    return tail <= tol_cert || tail <= decay_ratio * head;
}

} // namespace detail

/// Tabulates a witness family against the SNE or SSNE implication. A family
/// whose deficit tends to zero while the gap does not refutes the class (for
/// SNE the differences must also stay bounded).
inline SequentialReport check_sequential(const NonexpansiveMap& T, const gallery::WitnessFamily& w,
                                         SequentialMode mode, std::size_t n_max) {
    if (n_max < 1) throw DomainError("check_sequential: n_max must be >= 1");
    n_max = std::min(n_max, w.cap);
    SequentialReport rep{w.name, mode, {}, true, false, false, false};
    std::vector<double> def, gaps, bs;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto [x, y] = w.generator(n);
        const Point d = x - y;
        const Point dT = T(x) - T(y);
        const double b = norm(d);
        const double tn = norm(dT);
        double deficit;
        if (mode == SequentialMode::ssne) {
            deficit = w.square_deficit ? (*w.square_deficit)(n) : (b - tn) * (b + tn);
        } else {
            deficit = b - tn;
        }
        const double g = w.gap_norm ? (*w.gap_norm)(n) : norm(d - dT);
        rep.rows.push_back({n, b, deficit, g});
        def.push_back(deficit);
        gaps.push_back(g);
        bs.push_back(b);
    }
    const auto [h, t] = detail::head_tail(bs.size());
    double head_b = 0.0;
    for (std::size_t i = 0; i < h; ++i) head_b = std::max(head_b, bs[i]);
    double tail_b = 0.0;
    for (std::size_t i = t; i < bs.size(); ++i) tail_b = std::max(tail_b, bs[i]);
    rep.differences_bounded = tail_b <= 2.0 * head_b + tol_cert;
    rep.deficit_to_zero = detail::tends_to_zero(def);
    rep.gap_to_zero = detail::tends_to_zero(gaps);
    rep.refuted = rep.deficit_to_zero && !rep.gap_to_zero &&
                  (mode == SequentialMode::ssne || rep.differences_bounded);
    return rep;
}

/// Seeded scaled-pair families (n u, n u + c) with unit u and ||c|| in [0.1, 1].
inline std::vector<gallery::WitnessFamily> scaled_pair_families(std::size_t dim, std::size_t count,
                                                                 std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0x5ca1ed9a1f5ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_unit = [&] {
        Point u = Point::zeros(dim);
        double n = 0.0;
        while (n == 0.0) {
            for (std::size_t i = 0; i < dim; ++i) u[i] = gauss(rng);
            n = norm(u);
        }
        return (1.0 / n) * u;
    };
    std::vector<gallery::WitnessFamily> out;
    for (std::size_t k = 0; k < count; ++k) {
        Point u = random_unit();
        Point c = (0.1 + 0.9 * unit(rng)) * random_unit();
        auto fam = gallery::scaled_pair_family(u, c);
        fam.name = "scaled-pair-" + std::to_string(k);
        out.push_back(std::move(fam));
    }
    return out;
}

/// SNE / SSNE battery over generated scaled-pair families plus any extra families.
inline ClassCertificate certify_sequential(const NonexpansiveMap& T, SequentialMode mode, std::uint64_t seed,
                                           std::size_t n_max = 1000, std::size_t family_count = 8,
                                           const std::vector<gallery::WitnessFamily>& extra = {}) {
    ClassCertificate c;
    c.class_name = mode == SequentialMode::ssne ? "super-strongly-nonexpansive" : "strongly-nonexpansive";
    c.seed = seed;
    c.params["n_max"] = static_cast<double>(n_max);
    auto families = scaled_pair_families(T.dim(), family_count, seed);
    families.insert(families.end(), extra.begin(), extra.end());
    c.samples = families.size();
    double k = 0.0;
    for (const auto& fam : families) {
        const auto rep = check_sequential(T, fam, mode, n_max);
        const auto& last = rep.rows.back();
        c.estimates.push_back({k, last.deficit});
        k += 1.0;
        if (rep.refuted && !c.refuted()) {
            c.verdict = Verdict::refuted;
            const auto [x, y] = fam.generator(last.n);
            c.witness = Witness{{x, y}, last.gap};
            c.note = "family " + fam.name + ": deficit -> 0 while gap stays at " + std::to_string(last.gap);
        }
    }
    return c;
}

// ===========================================================================
// Growth and coercivity

struct GrowthRow {
    double separation;
    double ratio;
};

struct GrowthReport {
    std::vector<GrowthRow> rows; ///< sorted by separation
    double top_decile_inf;
    Verdict verdict;
};

/// ||x* - y*|| / ||x - y|| against ||x - y||; the infimum over the
/// largest-separation decile stands in for the lim inf at infinity.
inline GrowthReport check_growth(const std::vector<std::pair<GraphSample, GraphSample>>& samples) {
    GrowthReport r{{}, std::numeric_limits<double>::infinity(), Verdict::consistent};
    for (const auto& [a, b] : samples) {
        const double sep = distance(a.x, b.x);
        if (sep <= 0.0) throw DomainError("check_growth: pairs must have distinct base points");
        r.rows.push_back({sep, distance(a.xstar, b.xstar) / sep});
    }
    if (r.rows.empty()) throw DomainError("check_growth: no samples");
    std::stable_sort(r.rows.begin(), r.rows.end(),
                     [](const GrowthRow& p, const GrowthRow& q) { return p.separation < q.separation; });
    const std::size_t k = std::max<std::size_t>(1, r.rows.size() / 10);
    for (std::size_t i = r.rows.size() - k; i < r.rows.size(); ++i) {
        r.top_decile_inf = std::min(r.top_decile_inf, r.rows[i].ratio);
    }
    r.verdict = r.top_decile_inf <= tol_pos ? Verdict::refuted : Verdict::consistent;
    return r;
}

struct CoerciveRow {
    double norm;
    double value; ///< <x, x*> / ||x||
};

struct CoerciveReport {
    std::vector<CoerciveRow> rows; ///< sorted by norm
    std::vector<double> envelope;  ///< minimum per equal-count bin of increasing norm
    bool increasing;
    Verdict verdict;
};

inline CoerciveReport check_coercive(const std::vector<GraphSample>& samples, std::size_t bins = 10) {
    CoerciveReport r{{}, {}, false, Verdict::refuted};
    for (const auto& s : samples) {
        const double n = norm(s.x);
        if (n == 0.0) continue;
        r.rows.push_back({n, dot(s.x, s.xstar) / n});
    }
    if (r.rows.empty()) throw DomainError("check_coercive: no samples with nonzero x");
    std::stable_sort(r.rows.begin(), r.rows.end(),
                     [](const CoerciveRow& p, const CoerciveRow& q) { return p.norm < q.norm; });
    bins = std::max<std::size_t>(1, std::min(bins, r.rows.size()));
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * r.rows.size() / bins;
        const std::size_t hi = (b + 1) * r.rows.size() / bins;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) m = std::min(m, r.rows[i].value);
        r.envelope.push_back(m);
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < r.envelope.size(); ++i) {
        if (r.envelope[i] < r.envelope[i - 1]) nondecreasing = false;
    }
    r.increasing = nondecreasing && r.envelope.size() >= 2 && r.envelope.back() > r.envelope.front() + tol_pos;
    r.verdict = r.increasing ? Verdict::consistent : Verdict::refuted;
    return r;
}

/// Growth-condition certificate: estimates hold the infimum ratio per
/// separation decile (probe = smallest separation in the decile).
inline ClassCertificate certify_growth(const std::vector<std::pair<GraphSample, GraphSample>>& samples,
                                      std::uint64_t seed = 0) {
    const auto rep = check_growth(samples);
    ClassCertificate c;
    c.class_name = "growth-condition";
    c.seed = seed;
    c.samples = samples.size();
    const std::size_t bins = std::min<std::size_t>(10, rep.rows.size());
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * rep.rows.size() / bins;
        const std::size_t hi = (b + 1) * rep.rows.size() / bins;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = lo; i < hi; ++i) m = std::min(m, rep.rows[i].ratio);
        c.estimates.push_back({rep.rows[lo].separation, m});
    }
    c.verdict = rep.verdict;
    // the pair realising the top-decile infimum
    double best = std::numeric_limits<double>::infinity();
    const double cutoff = rep.rows[rep.rows.size() - std::max<std::size_t>(1, rep.rows.size() / 10)].separation;
    for (const auto& [a, b] : samples) {
        const double sep = distance(a.x, b.x);
        if (sep < cutoff) continue;
        const double r = distance(a.xstar, b.xstar) / sep;
        if (r < best) {
            best = r;
            c.witness = Witness{{a.x, a.xstar, b.x, b.xstar}, r};
        }
    }
    return c;
}

/// Coercivity certificate: estimates hold the lower envelope of <x, x*>/||x||
/// per norm bin (probe = smallest norm in the bin).
inline ClassCertificate certify_coercive(const std::vector<GraphSample>& samples, std::uint64_t seed = 0,
                                         std::size_t bins = 10) {
    const auto rep = check_coercive(samples, bins);
    ClassCertificate c;
    c.class_name = "coercive";
    c.seed = seed;
    c.samples = samples.size();
    const std::size_t nb = rep.envelope.size();
    for (std::size_t b = 0; b < nb; ++b) c.estimates.push_back({rep.rows[b * rep.rows.size() / nb].norm, rep.envelope[b]});
    c.verdict = rep.verdict;
    const double cutoff = rep.rows[(nb - 1) * rep.rows.size() / nb].norm;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        const double n = norm(s.x);
        if (n == 0.0 || n < cutoff) continue;
        const double v = dot(s.x, s.xstar) / n;
        if (v < best) {
            best = v;
            c.witness = Witness{{s.x, s.xstar}, v};
        }
    }
    return c;
}

/// Minty-sampled graph pairs / points for the growth and coercivity reports.
inline std::vector<std::pair<GraphSample, GraphSample>> sample_graph_pairs(const MonotoneOperator& A,
                                                                           const SamplerConfig& cfg) {
    detail::check_op_dim(A, cfg);
    std::vector<std::pair<GraphSample, GraphSample>> out;
    std::mutex mu;
    std::vector<std::pair<std::uint64_t, std::pair<GraphSample, GraphSample>>> tagged;
    sample_pairs(cfg, {}, 1, true, [&](const SampledPair& p, ExtremumTable&) {
        auto g = detail::graph_pair(A, p);
        if (distance(g.a.x, g.b.x) == 0.0) return;
        std::lock_guard lock(mu);
        tagged.emplace_back(p.index, std::make_pair(std::move(g.a), std::move(g.b)));
    });
    std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& t : tagged) out.push_back(std::move(t.second));
    return out;
}

inline std::vector<GraphSample> sample_graph_points(const MonotoneOperator& A, const SamplerConfig& cfg) {
    std::vector<GraphSample> out;
    for (auto& [a, b] : sample_graph_pairs(A, cfg)) {
        out.push_back(std::move(a));
        out.push_back(std::move(b));
    }
    return out;
}

// ===========================================================================
// Self-duality

struct SelfDualReport {
    ClassCertificate op_modulus;
    ClassCertificate inverse_modulus;
    ClassCertificate reflected_cld;
    /// (A and A^{-1} uniformly monotone) <=> R_A contraction for large distances
    bool agrees_with_equivalence;
};

inline SelfDualReport check_selfdual(const MonotoneOperator& A, const SamplerConfig& cfg,
                                     const std::vector<double>& t_list = {0.1, 0.5, 1.0, 2.0},
                                     const std::vector<double>& eps_list = {0.1, 1.0}) {
    auto m_a = estimate_modulus(A, t_list, cfg).certificate;
    auto m_inv = estimate_modulus(invert(A), t_list, cfg).certificate;
    auto cld = certify_cld(reflected_map(A), eps_list, cfg);
    const bool both = !m_a.refuted() && !m_inv.refuted();
    const bool agrees = both == !cld.refuted();
    return {std::move(m_a), std::move(m_inv), std::move(cld), agrees};
}

// ===========================================================================
// Witness replay

/// Recomputes the value stored in a mapping certificate's witness.
inline double replay_witness(const ClassCertificate& c, const NonexpansiveMap& T) {
    if (!c.witness || c.witness->points.size() < 2) throw DomainError("replay_witness: certificate has no witness");
    const Point& x = c.witness->points[0];
    const Point& y = c.witness->points[1];
    const Point d = x - y;
    const Point dT = T(x) - T(y);
    if (c.class_name == "nonexpansive" || c.class_name == "contraction-large-distances" ||
        c.class_name == "banach-contraction") {
        return norm(dT) / norm(d);
    }
    if (c.class_name == "firmly-nonexpansive") {
        return squared_norm(dT) + squared_norm(d - dT) - squared_norm(d);
    }
    if (c.class_name == "averaged") {
        const double a = c.params.at("alpha");
        return (1.0 - a) * squared_norm(d - dT) - a * (squared_norm(d) - squared_norm(dT));
    }
    if (c.class_name == "strongly-nonexpansive" || c.class_name == "super-strongly-nonexpansive") {
        return norm(d - dT);
    }
    throw DomainError("replay_witness: class " + c.class_name + " is not a mapping class");
}

/// Recomputes the value stored in a growth or coercivity witness, which holds
/// graph points rather than sampling points.
inline double replay_graph_witness(const ClassCertificate& c) {
    if (!c.witness) throw DomainError("replay_graph_witness: certificate has no witness");
    const auto& p = c.witness->points;
    if (c.class_name == "growth-condition" && p.size() == 4) return distance(p[1], p[3]) / distance(p[0], p[2]);
    if (c.class_name == "coercive" && p.size() == 2) return dot(p[0], p[1]) / norm(p[0]);
    throw DomainError("replay_graph_witness: unsupported certificate " + c.class_name);
}

/// Recomputes the value stored in an operator certificate's witness.
inline double replay_witness(const ClassCertificate& c, const MonotoneOperator& A) {
    if (!c.witness || c.witness->points.size() < 2) throw DomainError("replay_witness: certificate has no witness");
    const auto a = minty_sample(A, c.witness->points[0]);
    const auto b = minty_sample(A, c.witness->points[1]);
    const double inner = dot(a.x - b.x, a.xstar - b.xstar);
    if (c.class_name == "uniformly-monotone") return inner;
    if (c.class_name == "strongly-monotone") return inner / squared_norm(a.x - b.x);
    throw DomainError("replay_witness: class " + c.class_name + " is not an operator class");
}

} // namespace mosk
