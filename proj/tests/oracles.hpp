#pragma once

// Reference computations used only by the tests. They evaluate the defining
// formulas directly (bisection, extended precision), never the library's
// closed forms.

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

/// Root of an increasing function on [lo, hi] by plain bisection in long double.
inline long double bisect(const std::function<long double(long double)>& f, long double lo, long double hi,
                          int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (f(mid) < 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

/// y with y + y^3 = x.
inline double cubic_resolvent(double x) {
    const long double lx = x;
    const long double r = std::max(1.0L, std::cbrt(std::fabs(lx)) + 1.0L);
    return static_cast<double>(bisect([lx](long double y) { return y + y * y * y - lx; }, -r, r));
}

/// Staircase value at (x, 0) straight from the segment formula, in 100-digit arithmetic.
inline std::pair<big, big> staircase(const big& x) {
    if (x <= 0) return {big(0), big(0)};
    big sx = 0, sy = 0;
    big a_prev = 0;
    for (int m = 1; m <= 200; ++m) {
        const big two_m = boost::multiprecision::pow(big(2), m);
        const big four_m = two_m * two_m;
        const big a_m = 2 * two_m - 2;
        const big r = boost::multiprecision::sqrt(four_m + 1);
        const big K = boost::multiprecision::sqrt(four_m - 1 / four_m);
        const big wx = two_m / r;
        const big wy = 1 / r;
        if (x <= a_m) {
            const big frac = (x - a_prev) / two_m;
            return {sx + frac * K * wx, sy + frac * K * wy};
        }
        sx += K * wx;
        sy += K * wy;
        a_prev = a_m;
    }
    return {sx, sy};
}

struct StaircasePair {
    double square_deficit;
    double gap_norm;
};

/// ||x - y||^2 - ||Tx - Ty||^2 and ||(x - y) - (Tx - Ty)|| for points on the first axis.
inline StaircasePair staircase_pair(const big& x, const big& y) {
    const auto [tx1, tx2] = staircase(x);
    const auto [ty1, ty2] = staircase(y);
    const big d = x - y;
    const big e1 = tx1 - ty1;
    const big e2 = tx2 - ty2;
    const big deficit = d * d - (e1 * e1 + e2 * e2);
    const big g1 = d - e1;
    const big g2 = -e2;
    return {static_cast<double>(deficit), static_cast<double>(boost::multiprecision::sqrt(g1 * g1 + g2 * g2))};
}

inline big staircase_a(int m) { return 2 * boost::multiprecision::pow(big(2), m) - 2; }

/// Inverse of an increasing function on [lo, hi] by bisection.
inline double inverse_by_bisection(const std::function<long double(long double)>& f, double value, double lo,
                                   double hi) {
    const long double v = value;
    return static_cast<double>(bisect([&](long double t) { return f(t) - v; }, lo, hi));
}

} // namespace oracle
