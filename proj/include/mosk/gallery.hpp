#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mosk/core.hpp"
#include "mosk/errors.hpp"
#include "mosk/point.hpp"

/// Concrete operators, mappings, functions and witness sequences.
namespace mosk::gallery {

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;

// ===========================================================================
// Staircase mapping on R^2
//
//   T(x, y) = 0                                              x <= 0
//   T(x, y) = sum_{j<m} K_j w_j + ((x - a_{m-1}) / 2^m) K_m w_m   a_{m-1} <= x <= a_m
//
// with a_m = 2^{m+1} - 2, w_m = (2^m, 1)/sqrt(4^m + 1), K_m = sqrt(4^m - 4^{-m})
// and slope beta_m = K_m / 2^m on the m-th segment.

inline constexpr std::size_t staircase_cap = 40;

struct StaircaseDifference {
    Point dT;              ///< T(u) - T(v)
    double square_deficit; ///< ||u - v||^2 - ||T(u) - T(v)||^2
    Point gap;             ///< (u - v) - (T(u) - T(v))
};

class StaircaseParams {
public:
    StaircaseParams() {
        a_[0] = 0.0;
        w_[0] = {1.0, 0.0};
        K_[0] = 0.0;
        beta_[0] = 0.0;
        one_minus_beta_[0] = 1.0;
        theta_[0] = 0.0;
        for (std::size_t m = 1; m <= staircase_cap; ++m) {
            const double two_m = std::ldexp(1.0, static_cast<int>(m));
            const double four_m = two_m * two_m;
            const double inv_four_m = 1.0 / four_m;
            a_[m] = 2.0 * two_m - 2.0;
            const double r = std::sqrt(four_m + 1.0);
            w_[m] = {two_m / r, 1.0 / r};
            K_[m] = std::sqrt(four_m - inv_four_m);
            beta_[m] = K_[m] / two_m;
            // 1 - beta^2 = 4^{-2m}, so 1 - beta = 4^{-2m} / (1 + beta) without cancellation
            one_minus_beta_[m] = inv_four_m * inv_four_m / (1.0 + beta_[m]);
            theta_[m] = std::atan(1.0 / two_m);
        }
        // Neumaier-compensated prefix sums P_m = sum_{j<m} K_j w_j
        for (std::size_t c = 0; c < 2; ++c) {
            double sum = 0.0;
            double comp = 0.0;
            partial_[0][c] = 0.0;
            for (std::size_t m = 1; m <= staircase_cap + 1; ++m) {
                const double term = K_[m - 1] * w_[m - 1][c];
                const double t = sum + term;
                if (std::abs(sum) >= std::abs(term)) {
                    comp += (sum - t) + term;
                } else {
                    comp += (term - t) + sum;
                }
                sum = t;
                partial_[m][c] = sum + comp;
            }
        }
    }

    std::size_t cap() const noexcept { return staircase_cap; }
    double a(std::size_t m) const { return a_.at(m); }
    std::array<double, 2> w(std::size_t m) const { return w_.at(m); }
    double K(std::size_t m) const { return K_.at(m); }
    double beta(std::size_t m) const { return beta_.at(m); }
    double one_minus_beta(std::size_t m) const { return one_minus_beta_.at(m); }
    std::array<double, 2> partial_sum(std::size_t m) const { return partial_.at(m); }

    /// Segment index m >= 1 with a_{m-1} <= x <= a_m; 0 for x <= 0.
    std::size_t segment(double x) const {
        if (x <= 0.0) return 0;
        if (x > a_[staircase_cap]) {
            throw OverflowError("staircase: first coordinate beyond a_" + std::to_string(staircase_cap));
        }
        std::size_t m = 1;
        while (x > a_[m]) ++m;
        return m;
    }

    Point eval(const Point& p) const {
        if (p.dim() != 2) throw DimensionMismatch("staircase: expects dimension 2");
        const double x = p[0];
        const std::size_t m = segment(x);
        if (m == 0) return Point::zeros(2);
        const double frac = (x - a_[m - 1]) / std::ldexp(1.0, static_cast<int>(m));
        return Point({partial_[m][0] + frac * K_[m] * w_[m][0], partial_[m][1] + frac * K_[m] * w_[m][1]});
    }

    /// T(u) - T(v) together with the squared-norm deficit and the displacement
    /// gap, evaluated segment by segment so that neither loses precision to
    /// cancellation between the (possibly huge) values T(u) and T(v).
    StaircaseDifference difference(const Point& u, const Point& v) const {
        if (u.dim() != 2 || v.dim() != 2) throw DimensionMismatch("staircase: expects dimension 2");
        const double lo = std::min(u[0], v[0]);
        const double hi = std::max(u[0], v[0]);
        const double sign = u[0] >= v[0] ? 1.0 : -1.0;
        const double d2 = u[1] - v[1];
        segment(hi); // overflow guard

        const double l_neg = std::max(0.0, std::min(hi, 0.0) - lo);
        std::vector<std::pair<std::size_t, double>> pieces;
        const double start = std::max(lo, 0.0);
        if (hi > start) {
            for (std::size_t j = segment(start == 0.0 ? std::nextafter(0.0, 1.0) : start); j <= staircase_cap; ++j) {
                const double left = std::max(start, a_[j - 1]);
                const double right = std::min(hi, a_[j]);
                if (right > left) pieces.emplace_back(j, right - left);
                if (hi <= a_[j]) break;
            }
        }

        double seg_total = 0.0;
        std::array<double, 2> dT{0.0, 0.0};
        std::array<double, 2> U{0.0, 0.0};
        std::array<double, 2> E{0.0, 0.0};
        std::array<double, 2> gap{l_neg, 0.0};
        for (auto [j, len] : pieces) {
            seg_total += len;
            const double e = len * one_minus_beta_[j];
            const double half = 0.5 * theta_[j];
            for (std::size_t c = 0; c < 2; ++c) {
                dT[c] += beta_[j] * len * w_[j][c];
                U[c] += len * w_[j][c];
                E[c] += e * w_[j][c];
            }
            // e1 - w_j = (2 sin^2(theta_j/2), -sin theta_j)
            gap[0] += len * 2.0 * std::sin(half) * std::sin(half) + e * w_[j][0];
            gap[1] += -len * std::sin(theta_[j]) + e * w_[j][1];
        }
        double cross = 0.0;
        for (std::size_t p = 0; p < pieces.size(); ++p) {
            for (std::size_t q = p + 1; q < pieces.size(); ++q) {
                const double s = 2.0 * std::sin(0.5 * std::abs(theta_[pieces[p].first] - theta_[pieces[q].first]));
                cross += pieces[p].second * pieces[q].second * s * s;
            }
        }
        // ||d||^2 - ||dT||^2 split into nonnegative pieces:
        //   d2^2 + l_neg^2 + 2 l_neg S + (S^2 - ||U||^2) + <2U - E, E>
        const double deficit = d2 * d2 + l_neg * l_neg + 2.0 * l_neg * seg_total + cross +
                               (2.0 * U[0] - E[0]) * E[0] + (2.0 * U[1] - E[1]) * E[1];
        return {Point({sign * dT[0], sign * dT[1]}), deficit, Point({sign * gap[0], sign * gap[1] + d2})};
    }

private:
    std::array<double, staircase_cap + 1> a_{};
    std::array<std::array<double, 2>, staircase_cap + 1> w_{};
    std::array<double, staircase_cap + 1> K_{};
    std::array<double, staircase_cap + 1> beta_{};
    std::array<double, staircase_cap + 1> one_minus_beta_{};
    std::array<double, staircase_cap + 1> theta_{};
    std::array<std::array<double, 2>, staircase_cap + 2> partial_{};
};

inline const StaircaseParams& staircase_params() {
    static const StaircaseParams params;
    return params;
}

inline Point staircase_eval(const StaircaseParams& p, const Point& x) { return p.eval(x); }

struct StaircaseWitness {
    Point x;
    Point y;
    double square_deficit; ///< d_n
    double gap_norm;       ///< g_n
};

/// x_n = (a_n, 0), y_n = (a_{n-1}, 0): d_n = 4^{-n} while the gap tends to (0, -1).
inline StaircaseWitness staircase_witnesses(std::size_t n, const StaircaseParams& p = staircase_params()) {
    if (n < 1) throw DomainError("staircase_witnesses: n must be >= 1");
    if (n > p.cap()) throw OverflowError("staircase_witnesses: n beyond cap " + std::to_string(p.cap()));
    Point x({p.a(n), 0.0});
    Point y({p.a(n - 1), 0.0});
    const auto diff = p.difference(x, y);
    return {std::move(x), std::move(y), diff.square_deficit, norm(diff.gap)};
}

inline NonexpansiveMap staircase_map() {
    return NonexpansiveMap("staircase", 2, [](const Point& x) { return staircase_params().eval(x); });
}

// ===========================================================================
// Clamped sine and the inverse functions g, h

inline double clamp_sin(double x) {
    if (x >= half_pi) return 1.0;
    if (std::abs(x) < half_pi) return std::sin(x);
    return -1.0;
}

inline NonexpansiveMap clamp_sin_map() {
    return NonexpansiveMap("clamp-sin-map", 1, [](const Point& x) { return Point::scalar(clamp_sin(x.value())); });
}

/// Inverse of a strictly increasing scalar function on [lo, hi].
struct ScalarInverseSolver {
    std::string name;
    ScalarFunction forward;
    ScalarFunction derivative;
    double lo;
    double hi;
    double tol = 1e-12;
};

/// Newton's method safeguarded by bisection; a bisection step is taken
/// whenever the derivative falls below 1e-8 or Newton leaves the bracket.
/// Iterates until the step stalls at rounding level, then checks `tol`.
inline double solve_inverse(const ScalarInverseSolver& s, double value) {
    const double flo = s.forward(s.lo);
    const double fhi = s.forward(s.hi);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(flo), std::abs(fhi));
    if (!(value >= flo - slack && value <= fhi + slack)) {
        throw DomainError(s.name + ": value " + std::to_string(value) + " outside range");
    }
    if (value <= flo) return s.lo;
    if (value >= fhi) return s.hi;

    double a = s.lo;
    double b = s.hi;
    double t = a + (value - flo) / (fhi - flo) * (b - a);
    double best = t;
    double best_r = std::abs(s.forward(t) - value);
    for (int iter = 0; iter < 300; ++iter) {
        const double r = s.forward(t) - value;
        if (std::abs(r) < best_r) {
            best = t;
            best_r = std::abs(r);
        }
        if (r == 0.0) return t;
        if (r < 0.0) {
            a = t;
        } else {
            b = t;
        }
        const double d = s.derivative(t);
        double next = 0.5 * (a + b);
        if (d >= 1e-8) {
            const double newton = t - r / d;
            if (newton > a && newton < b) next = newton;
        }
        if (std::abs(next - t) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(t) || next <= a ||
            next >= b) {
            break;
        }
        t = next;
    }
    if (best_r <= s.tol) return best;
    throw NumericalFailure(s.name + ": tolerance not reached");
}

/// t - sin t without cancellation: a Taylor series below |t| = 1/2.
inline double t_minus_sin(double t) {
    if (std::abs(t) >= 0.5) return t - std::sin(t);
    const double t2 = t * t;
    double term = t * t2 / 6.0;
    double sum = term;
    for (int k = 2; k < 12; ++k) {
        term *= -t2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
    }
    return sum;
}

/// g: inverse of t -> t + sin t on [-pi/2, pi/2].
inline const ScalarInverseSolver& g_solver() {
    static const ScalarInverseSolver s{"g", [](double t) { return t + std::sin(t); },
                                       [](double t) { return 1.0 + std::cos(t); }, -half_pi, half_pi, 1e-12};
    return s;
}

/// h: inverse of t -> t - sin t on [-pi/2, pi/2]. h' is unbounded at 0.
inline const ScalarInverseSolver& h_solver() {
    static const ScalarInverseSolver s{"h", t_minus_sin,
                                       [](double t) {
                                           const double h = std::sin(0.5 * t);
                                           return 2.0 * h * h;
                                       },
                                       -half_pi, half_pi, 1e-12};
    return s;
}

inline double g_inverse(double v) { return solve_inverse(g_solver(), v); }
inline double h_inverse(double v) {
    // t - sin t ~ t^3/6
    if (v == 0.0) return 0.0;
    if (std::abs(v) < 1e-3) {
        double t = std::cbrt(6.0 * v);
        for (int i = 0; i < 8; ++i) {
            const double h = std::sin(0.5 * t);
            const double d = 2.0 * h * h;
            if (d == 0.0) break;
            const double step = (t_minus_sin(t) - v) / d;
            t -= step;
            if (std::abs(step) <= std::numeric_limits<double>::epsilon() * std::abs(t)) break;
        }
        if (std::abs(t_minus_sin(t) - v) <= h_solver().tol) return t;
    }
    return solve_inverse(h_solver(), v);
}

/// Closed form of ((Id + T)/2)^{-1} - Id for T = clamp_sin.
inline double clamp_sin_operator_eval(double x) {
    const double b = (pi + 2.0) / 4.0;
    if (x <= -b) return x + 1.0;
    if (std::abs(x) < b) return g_inverse(2.0 * x) - x;
    return x - 1.0;
}

/// Closed form of ((Id - T)/2)^{-1} - Id for T = clamp_sin; the inverse of
/// clamp_sin_operator_eval.
inline double clamp_sin_operator_inverse_eval(double x) {
    const double b = (pi - 2.0) / 4.0;
    if (x <= -b) return x - 1.0;
    if (std::abs(x) < b) return h_inverse(2.0 * x) - x;
    return x + 1.0;
}

/// Antiderivative of clamp_sin_operator_eval.
inline double clamp_sin_f(double x) {
    const double b = (pi + 2.0) / 4.0;
    if (x <= -b) return 0.5 * (x * x + 2.0 * x);
    if (std::abs(x) < b) {
        const double u = g_inverse(2.0 * x);
        return 0.5 * (2.0 * x * u - 0.5 * u * u + std::cos(u) - x * x - (pi + 1.0) / 2.0);
    }
    return 0.5 * (x * x - 2.0 * x);
}

/// The published closed form for the conjugate (with h in the cosine term).
/// It is an antiderivative of the inverse operator but sits 1/2 below the
/// actual conjugate of clamp_sin_f.
inline double clamp_sin_fstar_published(double x) {
    const double b = (pi - 2.0) / 4.0;
    if (x <= -b) return 0.5 * (x * x - 2.0 * x);
    if (std::abs(x) < b) {
        const double u = h_inverse(2.0 * x);
        return 0.5 * (2.0 * x * u - 0.5 * u * u - std::cos(u) - x * x + (pi - 1.0) / 2.0);
    }
    return 0.5 * (x * x + 2.0 * x);
}

/// Fenchel conjugate of clamp_sin_f.
inline double clamp_sin_fstar(double x) { return clamp_sin_fstar_published(x) + 0.5; }

// ===========================================================================
// Cubic operator A x = x^3

/// J_A for A = x^3 via Cardano: a(x)/6 - 2/a(x), a(x) = cbrt(108x + 12 sqrt(81x^2 + 12)).
/// Evaluated for |x| and mirrored.
inline double cubic_resolvent(double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    const double a = std::cbrt(108.0 * ax + 12.0 * std::sqrt(81.0 * ax * ax + 12.0));
    double y = a / 6.0 - 2.0 / a;
    // one Newton step on y + y^3 = |x| removes the rounding left by a/6 - 2/a near 0
    y -= (y + y * y * y - ax) / (1.0 + 3.0 * y * y);
    return x < 0.0 ? -y : y;
}

// ===========================================================================
// Convex function of the mixed-power example and its derivative

inline double quartic_mixed_f(double x) {
    if (x <= -1.0) return 4.0 * x * x - 2.0;
    if (x < 0.0) return 2.0 * x * x * x * x;
    if (x < 1.0) return x * std::sqrt(x);
    return 0.75 * x * x + 0.25;
}

inline double quartic_mixed_fprime(double x) {
    if (x <= -1.0) return 8.0 * x;
    if (x < 0.0) return 8.0 * x * x * x;
    if (x < 1.0) return 1.5 * std::sqrt(x);
    return 1.5 * x;
}

inline double quartic_mixed_fprime_inverse(double y) {
    if (y <= -8.0) return y / 8.0;
    if (y < 0.0) return std::cbrt(y / 8.0);
    if (y < 1.5) {
        const double r = y / 1.5;
        return r * r;
    }
    return y / 1.5;
}

// ===========================================================================
// One-dimensional convex functions and conjugation

struct FunctionEntry {
    std::string name;
    ScalarFunction eval_f;
    ScalarFunction eval_fprime;
    std::optional<ScalarFunction> eval_fstar;
};

inline FunctionEntry quartic_entry() {
    return {"quartic", [](double x) { return 0.25 * x * x * x * x; }, [](double x) { return x * x * x; },
            ScalarFunction([](double s) { return 0.75 * std::pow(std::abs(s), 4.0 / 3.0); })};
}

inline FunctionEntry quartic_mixed_entry() {
    return {"quartic-mixed", quartic_mixed_f, quartic_mixed_fprime, std::nullopt};
}

inline FunctionEntry clamp_sin_entry() {
    return {"clamp-sin", clamp_sin_f, clamp_sin_operator_eval, ScalarFunction(clamp_sin_fstar)};
}

/// f*(s) = s y - f(y) where f'(y) = s, with y found by bisection.
inline double fenchel_conjugate_1d(const FunctionEntry& entry, double xstar) {
    const auto& fp = entry.eval_fprime;
    double lo = -1.0;
    double hi = 1.0;
    while (fp(lo) > xstar) {
        if (-lo > bracket_radius_limit) throw NumericalFailure("fenchel_conjugate_1d: no lower bracket");
        hi = lo;
        lo *= 2.0;
    }
    while (fp(hi) < xstar) {
        if (hi > bracket_radius_limit) throw NumericalFailure("fenchel_conjugate_1d: no upper bracket");
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fp(mid) < xstar) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double y = std::abs(fp(lo) - xstar) <= std::abs(fp(hi) - xstar) ? lo : hi;
    return xstar * y - entry.eval_f(y);
}

// ===========================================================================
// Rotator by pi/2 on R^2

inline Point rotate(const Point& x) {
    if (x.dim() != 2) throw DimensionMismatch("rotator: expects dimension 2");
    return Point({-x[1], x[0]});
}

/// (S x, J_S x) with J_S = (Id - S)/2.
inline std::pair<Point, Point> rotator_ops(const Point& x) {
    Point s = rotate(x);
    Point j = 0.5 * (x - s);
    return {std::move(s), std::move(j)};
}

// ===========================================================================
// Subdifferential of the cone-restricted quadratic: only its witness graph points

inline std::pair<GraphSample, GraphSample> cone_subdiff_witnesses(std::size_t n) {
    if (n < 1) throw DomainError("cone_subdiff_witnesses: n must be >= 1");
    const double v = static_cast<double>(n);
    return {GraphSample{Point({v, 0.0}), Point({2.0 * v, 0.0})},
            GraphSample{Point({v, v}), Point({2.0 * v, 0.0})}};
}

/// <x*, x> / ||x||^2 at the graph point ((n, 0), (2n, 0)).
inline double cone_subdiff_coercivity_probe(std::size_t n) {
    const auto [a, b] = cone_subdiff_witnesses(n);
    (void)b;
    return dot(a.xstar, a.x) / squared_norm(a.x);
}

// ===========================================================================
// Truncated right shift on R^N

inline Point shift_map(const Point& x) {
    if (x.dim() < 2) throw DomainError("shift_map: dimension must be >= 2");
    Point y = Point::zeros(x.dim());
    for (std::size_t i = 1; i < x.dim(); ++i) y[i] = x[i - 1];
    return y;
}

inline constexpr std::size_t default_truncation = 256;

inline NonexpansiveMap shift_nonexpansive(std::size_t n = default_truncation) {
    if (n < 2) throw DomainError("shift: dimension must be >= 2");
    return NonexpansiveMap("shift", n, shift_map);
}

// ===========================================================================
// Witness families for the sequential definitions

struct WitnessFamily {
    std::string name;
    std::function<std::pair<Point, Point>(std::size_t)> generator;
    std::string expected_behavior;
    std::size_t cap = 1u << 20;
    /// Cancellation-free ||x_n - y_n||^2 - ||T x_n - T y_n||^2 when known.
    std::optional<std::function<double(std::size_t)>> square_deficit;
    /// Cancellation-free ||(x_n - y_n) - (T x_n - T y_n)|| when known.
    std::optional<std::function<double(std::size_t)>> gap_norm;
};

inline WitnessFamily staircase_witness_family() {
    WitnessFamily w;
    w.name = "staircase-ssne";
    w.generator = [](std::size_t n) {
        auto s = staircase_witnesses(n);
        return std::make_pair(s.x, s.y);
    };
    w.expected_behavior = "d_n = 4^-n -> 0 while ||gap_n|| -> 1";
    w.cap = staircase_cap;
    w.square_deficit = [](std::size_t n) { return staircase_witnesses(n).square_deficit; };
    w.gap_norm = [](std::size_t n) { return staircase_witnesses(n).gap_norm; };
    return w;
}

/// (x_n, y_n) = (n u, n u + c).
inline WitnessFamily scaled_pair_family(const Point& direction, const Point& offset) {
    direction.check_same_dim(offset);
    WitnessFamily w;
    w.name = "scaled-pair";
    w.generator = [direction, offset](std::size_t n) {
        Point x = static_cast<double>(n) * direction;
        Point y = x + offset;
        return std::make_pair(std::move(x), std::move(y));
    };
    w.expected_behavior = "constant difference c, base point running to infinity along u";
    return w;
}

// ===========================================================================
// Operators

inline MonotoneOperator cubic() {
    OperatorSpec s;
    s.name = "cubic";
    s.dim = 1;
    s.resolvent = [](const Point& x) { return Point::scalar(cubic_resolvent(x.value())); };
    s.direct_eval = [](const Point& x) {
        const double v = x.value();
        return Point::scalar(v * v * v);
    };
    s.inverse_direct_eval = [](const Point& x) { return Point::scalar(std::cbrt(x.value())); };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::uniformly_monotone}};
    s.inverse_properties = {{PropertyKind::maximally_monotone}};
    return MonotoneOperator(std::move(s));
}

inline MonotoneOperator normal_cone_zero(std::size_t dim = 1) {
    OperatorSpec s;
    s.name = "normal-cone-zero";
    s.dim = dim;
    s.resolvent = [dim](const Point&) { return Point::zeros(dim); };
    s.scaled_resolvent = [dim](const Point&, double) { return Point::zeros(dim); };
    s.inverse_direct_eval = [dim](const Point&) { return Point::zeros(dim); };
    s.properties = {{PropertyKind::maximally_monotone},
                    {PropertyKind::strongly_monotone, 1.0},
                    {PropertyKind::uniformly_monotone}};
    s.inverse_properties = {{PropertyKind::maximally_monotone}, {PropertyKind::lipschitz, 0.0}};
    return MonotoneOperator(std::move(s));
}

inline MonotoneOperator zero_operator(std::size_t dim = 1) {
    OperatorSpec s;
    s.name = "zero";
    s.dim = dim;
    s.resolvent = [](const Point& x) { return x; };
    s.scaled_resolvent = [](const Point& x, double) { return x; };
    s.direct_eval = [dim](const Point&) { return Point::zeros(dim); };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::lipschitz, 0.0}};
    s.inverse_properties = {{PropertyKind::maximally_monotone},
                            {PropertyKind::strongly_monotone, 1.0},
                            {PropertyKind::uniformly_monotone}};
    return MonotoneOperator(std::move(s));
}

inline MonotoneOperator identity_operator(std::size_t dim = 1) {
    OperatorSpec s;
    s.name = "identity";
    s.dim = dim;
    s.resolvent = [](const Point& x) { return 0.5 * x; };
    s.scaled_resolvent = [](const Point& x, double g) { return (1.0 / (1.0 + g)) * x; };
    s.direct_eval = [](const Point& x) { return x; };
    s.inverse_direct_eval = [](const Point& x) { return x; };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::uniformly_monotone},
                    {PropertyKind::strongly_monotone, 1.0}, {PropertyKind::cocoercive, 1.0},
                    {PropertyKind::lipschitz, 1.0}};
    s.inverse_properties = s.properties;
    return MonotoneOperator(std::move(s));
}

inline MonotoneOperator rotator() {
    OperatorSpec s;
    s.name = "rotator";
    s.dim = 2;
    s.resolvent = [](const Point& x) { return 0.5 * (x - rotate(x)); };
    // (Id + g S)^{-1} = (Id - g S)/(1 + g^2) since S^2 = -Id
    s.scaled_resolvent = [](const Point& x, double g) { return (1.0 / (1.0 + g * g)) * (x - g * rotate(x)); };
    s.direct_eval = rotate;
    s.inverse_direct_eval = [](const Point& x) { return -rotate(x); };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::lipschitz, 1.0}};
    s.inverse_properties = s.properties;
    return MonotoneOperator(std::move(s));
}

/// Operator with T = -R_A for T = clamp_sin: J_A = (Id - T)/2.
inline MonotoneOperator clamp_sin_operator() {
    OperatorSpec s;
    s.name = "clamp-sin-op";
    s.dim = 1;
    s.resolvent = [](const Point& x) {
        const double v = x.value();
        return Point::scalar(0.5 * (v - clamp_sin(v)));
    };
    s.direct_eval = [](const Point& x) { return Point::scalar(clamp_sin_operator_inverse_eval(x.value())); };
    s.inverse_direct_eval = [](const Point& x) { return Point::scalar(clamp_sin_operator_eval(x.value())); };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::uniformly_monotone}};
    s.inverse_properties = s.properties;
    return MonotoneOperator(std::move(s));
}

/// f' of the mixed-power function; the resolvent is root-found.
inline MonotoneOperator quartic_mixed_operator() {
    OperatorSpec s;
    s.name = "quartic-mixed";
    s.dim = 1;
    s.exact_resolvent = false;
    s.resolvent = [](const Point& x) {
        return Point::scalar(solve_scalar_monotone(quartic_mixed_fprime, x.value()));
    };
    s.direct_eval = [](const Point& x) { return Point::scalar(quartic_mixed_fprime(x.value())); };
    s.inverse_direct_eval = [](const Point& x) { return Point::scalar(quartic_mixed_fprime_inverse(x.value())); };
    s.properties = {{PropertyKind::maximally_monotone}, {PropertyKind::uniformly_monotone}};
    s.inverse_properties = s.properties;
    return MonotoneOperator(std::move(s));
}

/// Operator with T = -R_A for the staircase T.
inline MonotoneOperator staircase_operator() { return from_neg_reflected(staircase_map(), "staircase"); }

/// B with R_B = -R for the right shift R, i.e. J_B = (Id - R)/2.
inline MonotoneOperator shift_operator(std::size_t n = default_truncation) {
    return from_neg_reflected(shift_nonexpansive(n), "shift");
}

// ===========================================================================
// Registry

struct GalleryEntry {
    std::string id;
    std::string description;
    std::size_t dim;
    std::optional<MonotoneOperator> op;
    std::optional<NonexpansiveMap> map;
};

inline const std::vector<std::string>& gallery_ids() {
    static const std::vector<std::string> ids = {"cubic",        "normal-cone-zero", "zero",         "identity",
                                                 "rotator",      "staircase",        "clamp-sin-map", "clamp-sin-op",
                                                 "quartic-mixed", "cone-subdiff",    "shift"};
    return ids;
}

/// True for entries whose dimension can be chosen by the caller.
inline bool has_variable_dim(const std::string& id) {
    return id == "normal-cone-zero" || id == "zero" || id == "identity" || id == "shift";
}

/// Looks up a gallery entry; `dim` is honoured only by variable-dimension entries.
inline GalleryEntry gallery_entry(const std::string& id, std::optional<std::size_t> dim = std::nullopt) {
    if (dim && *dim == 0) throw DomainError("gallery: dimension must be >= 1");
    if (id == "cubic") return {id, "A x = x^3, Cardano resolvent", 1, cubic(), std::nullopt};
    if (id == "normal-cone-zero") {
        const std::size_t d = dim.value_or(1);
        return {id, "normal cone of {0}; J = 0", d, normal_cone_zero(d), std::nullopt};
    }
    if (id == "zero") {
        const std::size_t d = dim.value_or(1);
        return {id, "zero operator; J = Id", d, zero_operator(d), std::nullopt};
    }
    if (id == "identity") {
        const std::size_t d = dim.value_or(1);
        return {id, "identity operator; J = Id/2", d, identity_operator(d), std::nullopt};
    }
    if (id == "rotator") return {id, "rotation by pi/2 on R^2", 2, rotator(), std::nullopt};
    if (id == "staircase") {
        return {id, "piecewise-linear staircase on R^2 (SNE, not SSNE)", 2, staircase_operator(), staircase_map()};
    }
    if (id == "clamp-sin-map") {
        return {id, "clamped sine; contraction for large distances", 1, std::nullopt, clamp_sin_map()};
    }
    if (id == "clamp-sin-op") {
        return {id, "A with -R_A = clamped sine", 1, clamp_sin_operator(), clamp_sin_map()};
    }
    if (id == "quartic-mixed") return {id, "f' of the mixed-power convex function", 1, quartic_mixed_operator(), std::nullopt};
    if (id == "cone-subdiff") {
        return {id, "subdifferential witnesses: coercive without growth condition", 2, std::nullopt, std::nullopt};
    }
    if (id == "shift") {
        const std::size_t d = dim.value_or(default_truncation);
        return {id, "truncated right shift R and B with R_B = -R", d, shift_operator(d), shift_nonexpansive(d)};
    }
    throw DomainError("gallery: unknown identifier '" + id + "'");
}

} // namespace mosk::gallery
