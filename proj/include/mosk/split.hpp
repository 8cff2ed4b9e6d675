#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mosk/compose.hpp"
#include "mosk/core.hpp"
#include "mosk/errors.hpp"
#include "mosk/point.hpp"

namespace mosk {

struct StoppingRule {
    std::size_t max_iter = 100000;
    double tol_residual = 1e-10; ///< stop once ||x_{n+1} - x_n|| <= tol_residual
    double divergence_guard = 1e12; ///< abort once ||x_n|| exceeds this

    void validate() const {
        if (max_iter < 1) throw DomainError("StoppingRule: max_iter must be >= 1");
        if (!(tol_residual >= 0.0)) throw DomainError("StoppingRule: tol_residual must be >= 0");
        if (!(divergence_guard > 0.0)) throw DomainError("StoppingRule: divergence_guard must be positive");
    }
};

/// Extra per-iteration diagnostics.
struct TraceOptions {
    std::optional<Point> reference; ///< records ||x_n - reference||
    std::vector<std::size_t> probes; ///< records <e_k, x_n>, k counted from 1
};

enum class Termination { converged, max_iter, diverged };

inline std::string to_string(Termination t) {
    switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iter: return "max-iter";
    case Termination::diverged: return "diverged";
    }
    return "unknown";
}

/// Distance below which x_{n+2} and x_n count as equal for the period-2 flag.
inline constexpr double period2_tolerance = 1e-12;

struct IterationTrace {
    std::vector<Point> iterates;             ///< x_0, ..., x_n
    std::optional<std::vector<Point>> shadows; ///< y_k = J_A x_k (PR and DR only)
    std::vector<double> residuals;           ///< ||x_{k+1} - x_k||, one fewer than iterates
    std::optional<std::vector<double>> distances_to_ref;
    std::vector<std::size_t> probe_indices;
    std::vector<std::vector<double>> weak_probes; ///< weak_probes[n][j] = <e_{probe_indices[j]}, x_n>
    Termination termination = Termination::max_iter;
    bool period2_flag = false;

    std::size_t steps() const { return residuals.size(); }
    const Point& last() const { return iterates.back(); }
    std::size_t dim() const { return iterates.front().dim(); }
};

namespace detail {

inline bool escaped(const Point& x, double guard) { return !x.all_finite() || norm(x) > guard; }

inline void record_extras(IterationTrace& tr, const Point& x, const TraceOptions& opt) {
    if (opt.reference) tr.distances_to_ref->push_back(distance(x, *opt.reference));
    if (!opt.probes.empty()) {
        std::vector<double> row;
        for (std::size_t k : opt.probes) row.push_back(x[k - 1]);
        tr.weak_probes.push_back(std::move(row));
    }
}

inline IterationTrace run(const NonexpansiveMap& T, const Point& x0, const StoppingRule& stop,
                          const TraceOptions& opt, const MonotoneOperator* shadow_op) {
    stop.validate();
    if (x0.dim() != T.dim()) throw DimensionMismatch("iterate: x0 has the wrong dimension for " + T.name());
    if (opt.reference && opt.reference->dim() != x0.dim()) {
        throw DimensionMismatch("iterate: reference point has the wrong dimension");
    }
    for (std::size_t k : opt.probes) {
        if (k < 1 || k > x0.dim()) throw DomainError("iterate: probe index out of range");
    }

    IterationTrace tr;
    tr.probe_indices = opt.probes;
    if (opt.reference) tr.distances_to_ref.emplace();
    if (shadow_op) tr.shadows.emplace();

    auto push = [&](Point x) {
        if (shadow_op) tr.shadows->push_back(shadow_op->resolvent(x));
        record_extras(tr, x, opt);
        tr.iterates.push_back(std::move(x));
    };

    if (escaped(x0, stop.divergence_guard)) {
        push(x0);
        tr.termination = Termination::diverged;
        return tr;
    }
    push(x0);
    tr.termination = Termination::max_iter;
    for (std::size_t n = 0; n < stop.max_iter; ++n) {
        Point next = T(tr.iterates.back());
        const bool blew_up = escaped(next, stop.divergence_guard);
        const double r = blew_up ? std::numeric_limits<double>::infinity() : distance(next, tr.iterates.back());
        tr.residuals.push_back(r);
        if (blew_up) {
            // keep the offending iterate only if it is representable
            if (next.all_finite()) {
                push(std::move(next));
            } else {
                tr.residuals.pop_back();
            }
            tr.termination = Termination::diverged;
            return tr;
        }
        push(std::move(next));
        if (r <= stop.tol_residual) {
            tr.termination = Termination::converged;
            return tr;
        }
    }
    const std::size_t n = tr.iterates.size();
    if (n >= 3) {
        tr.period2_flag = distance(tr.iterates[n - 1], tr.iterates[n - 3]) <= period2_tolerance &&
                          tr.residuals.back() > stop.tol_residual;
    }
    return tr;
}

} // namespace detail

/// x_{n+1} = T x_n. Divergence is reported through `termination`.
inline IterationTrace iterate(const NonexpansiveMap& T, const Point& x0, const StoppingRule& stop = {},
                              const TraceOptions& opt = {}) {
    return detail::run(T, x0, stop, opt, nullptr);
}

inline IterationTrace peaceman_rachford(const MonotoneOperator& A, const MonotoneOperator& B, const Point& x0,
                                        const StoppingRule& stop = {}, const TraceOptions& opt = {}) {
    return detail::run(pr_operator(A, B), x0, stop, opt, &A);
}

inline IterationTrace douglas_rachford(const MonotoneOperator& A, const MonotoneOperator& B, const Point& x0,
                                       const StoppingRule& stop = {}, const TraceOptions& opt = {}) {
    return detail::run(dr_operator(A, B), x0, stop, opt, &A);
}

inline IterationTrace forward_backward(const MonotoneOperator& A, const MonotoneOperator& B, double gamma,
                                       const Point& x0, const StoppingRule& stop = {}, const TraceOptions& opt = {}) {
    return detail::run(fb_operator(A, B, gamma), x0, stop, opt, nullptr);
}

struct FejerReport {
    std::vector<double> distances;
    std::optional<std::size_t> first_violation; ///< k with ||x_{k+1} - xbar|| > ||x_k - xbar|| + slack
    bool monotone() const { return !first_violation.has_value(); }
};

inline constexpr double fejer_slack = 1e-12;

inline FejerReport fejer_check(const IterationTrace& trace, const Point& xbar) {
    if (trace.iterates.empty()) throw DomainError("fejer_check: empty trace");
    if (xbar.dim() != trace.dim()) throw DimensionMismatch("fejer_check: reference point has the wrong dimension");
    FejerReport r;
    for (const auto& x : trace.iterates) r.distances.push_back(distance(x, xbar));
    for (std::size_t k = 0; k + 1 < r.distances.size(); ++k) {
        if (r.distances[k + 1] > r.distances[k] + fejer_slack) {
            r.first_violation = k;
            break;
        }
    }
    return r;
}

} // namespace mosk
