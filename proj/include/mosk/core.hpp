#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mosk/errors.hpp"
#include "mosk/point.hpp"

namespace mosk {

using PointMap = std::function<Point(const Point&)>;
using ScalarFunction = std::function<double(double)>;
/// Resolvent of gamma*A evaluated at x.
using ScaledResolvent = std::function<Point(const Point&, double gamma)>;

/// Residual tolerance promised by closed-form resolvents.
inline constexpr double tol_resolvent_exact = 1e-12;
/// Residual tolerance promised by root-found resolvents.
inline constexpr double tol_resolvent_rootfound = 1e-10;
/// Bracket expansion starts at radius 1 and stops after this radius.
inline constexpr double bracket_radius_limit = 1152921504606846976.0; // 2^60

enum class PropertyKind {
    maximally_monotone,
    uniformly_monotone,
    strongly_monotone,
    cocoercive,
    lipschitz,
};

inline std::string to_string(PropertyKind k) {
    switch (k) {
    case PropertyKind::maximally_monotone: return "maximally-monotone";
    case PropertyKind::uniformly_monotone: return "uniformly-monotone";
    case PropertyKind::strongly_monotone: return "strongly-monotone";
    case PropertyKind::cocoercive: return "cocoercive";
    case PropertyKind::lipschitz: return "lipschitz";
    }
    return "unknown";
}

struct DeclaredProperty {
    PropertyKind kind;
    double parameter = 0.0;
    friend bool operator==(const DeclaredProperty&, const DeclaredProperty&) = default;
};

using DeclaredProperties = std::vector<DeclaredProperty>;

inline std::optional<double> find_property(const DeclaredProperties& props, PropertyKind kind) {
    for (const auto& p : props) {
        if (p.kind == kind) return p.parameter;
    }
    return std::nullopt;
}

/// Everything needed to build a MonotoneOperator. Only `resolvent` is required.
struct OperatorSpec {
    std::string name;
    std::size_t dim = 1;
    PointMap resolvent;
    bool exact_resolvent = true;
    std::optional<PointMap> direct_eval;
    std::optional<PointMap> inverse_direct_eval;
    std::optional<ScaledResolvent> scaled_resolvent;
    DeclaredProperties properties;
    DeclaredProperties inverse_properties;
};

/// Maximally monotone operator represented by its resolvent J_A = (Id + A)^{-1}.
///
/// Set-valued operators such as the normal cone of {0} have a resolvent but no
/// single-valued evaluation, so direct evaluation is optional metadata. The
/// declared properties are never consulted by the certifiers.
class MonotoneOperator {
public:
    explicit MonotoneOperator(OperatorSpec spec) : spec_(std::move(spec)) {
        if (spec_.dim == 0) throw DomainError("MonotoneOperator: dim must be >= 1");
        if (!spec_.resolvent) throw DomainError("MonotoneOperator: resolvent oracle required");
    }

    const std::string& name() const noexcept { return spec_.name; }
    std::size_t dim() const noexcept { return spec_.dim; }
    bool has_direct_eval() const noexcept { return spec_.direct_eval.has_value(); }
    bool has_inverse_direct_eval() const noexcept { return spec_.inverse_direct_eval.has_value(); }
    bool has_scaled_resolvent() const noexcept { return spec_.scaled_resolvent.has_value(); }
    bool exact_resolvent() const noexcept { return spec_.exact_resolvent; }
    double resolvent_tolerance() const noexcept {
        return spec_.exact_resolvent ? tol_resolvent_exact : tol_resolvent_rootfound;
    }
    const DeclaredProperties& declared_properties() const noexcept { return spec_.properties; }
    const OperatorSpec& spec() const noexcept { return spec_; }

    Point resolvent(const Point& x) const {
        check_dim(x);
        return spec_.resolvent(x);
    }

    Point evaluate(const Point& x) const {
        check_dim(x);
        if (!spec_.direct_eval) throw Unsupported(spec_.name + " has no direct evaluation");
        return (*spec_.direct_eval)(x);
    }

    Point evaluate_inverse(const Point& x) const {
        check_dim(x);
        if (!spec_.inverse_direct_eval) {
            throw Unsupported(spec_.name + " has no direct evaluation of its inverse");
        }
        return (*spec_.inverse_direct_eval)(x);
    }

    Point scaled_resolvent(const Point& x, double gamma) const {
        check_dim(x);
        if (!spec_.scaled_resolvent) throw Unsupported(spec_.name + " has no closed-form scaled resolvent");
        return (*spec_.scaled_resolvent)(x, gamma);
    }

    void check_dim(const Point& x) const {
        if (x.dim() != spec_.dim) {
            throw DimensionMismatch(spec_.name + ": expected dimension " + std::to_string(spec_.dim) +
                                    ", got " + std::to_string(x.dim()));
        }
    }

private:
    OperatorSpec spec_;
};

/// Single-valued mapping T on the ambient space, expected to be nonexpansive.
class NonexpansiveMap {
public:
    NonexpansiveMap(std::string name, std::size_t dim, PointMap eval)
        : name_(std::move(name)), dim_(dim), eval_(std::move(eval)) {
        if (dim_ == 0) throw DomainError("NonexpansiveMap: dim must be >= 1");
        if (!eval_) throw DomainError("NonexpansiveMap: eval oracle required");
    }

    const std::string& name() const noexcept { return name_; }
    std::size_t dim() const noexcept { return dim_; }

    Point operator()(const Point& x) const {
        if (x.dim() != dim_) {
            throw DimensionMismatch(name_ + ": expected dimension " + std::to_string(dim_) + ", got " +
                                    std::to_string(x.dim()));
        }
        return eval_(x);
    }

private:
    std::string name_;
    std::size_t dim_;
    PointMap eval_;
};

/// A graph point (x, x*) of a monotone operator.
struct GraphSample {
    Point x;
    Point xstar;
};

// ---------------------------------------------------------------------------
// Root finding

/// Solves y + a(y) = x for continuous nondecreasing scalar a.
///
/// The bracket grows from [-1, 1] by doubling up to 2^60; the bracket is then
/// narrowed by alternating Illinois (modified regula falsi) and bisection steps.
inline double solve_scalar_monotone(const ScalarFunction& a, double x, double tol = tol_resolvent_rootfound) {
    if (!(tol > 0.0)) throw DomainError("solve_scalar_monotone: tol must be positive");
    if (!std::isfinite(x)) throw DomainError("solve_scalar_monotone: non-finite target");
    auto residual = [&](double y) { return y + a(y) - x; };

    double lo = -1.0;
    double hi = 1.0;
    double flo = residual(lo);
    double fhi = residual(hi);
    while (flo > 0.0) {
        if (-lo > bracket_radius_limit) throw NumericalFailure("solve_scalar_monotone: lower bracket not found");
        hi = lo;
        fhi = flo;
        lo *= 2.0;
        flo = residual(lo);
    }
    while (fhi < 0.0) {
        if (hi > bracket_radius_limit) throw NumericalFailure("solve_scalar_monotone: upper bracket not found");
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = residual(hi);
    }
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;

    int side = 0;
    for (int iter = 0; iter < 400; ++iter) {
        double mid;
        if (iter % 2 == 0) {
            mid = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
        const double fm = residual(mid);
        if (std::abs(fm) <= tol) return mid;
        if (fm < 0.0) {
            lo = mid;
            flo = fm;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = mid;
            fhi = fm;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    const double best = std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi;
    if (std::abs(residual(best)) <= tol) return best;
    throw NumericalFailure("solve_scalar_monotone: tolerance not reached");
}

namespace detail {

// Dense Gaussian elimination with partial pivoting; the systems here are tiny.
inline std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        }
        if (m[piv * n + col] == 0.0) throw NumericalFailure("solve_dense: singular Jacobian");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] / m[col * n + col];
            for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> sol(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= m[i * n + c] * sol[c];
        sol[i] = s / m[i * n + i];
    }
    return sol;
}

} // namespace detail

/// Solves y + a(y) = x for a monotone vector field by damped Newton with a
/// forward-difference Jacobian. Id + a is strongly monotone, so the merit
/// function ||F||^2 decreases along Newton directions for smooth a.
inline Point solve_vector_monotone(const PointMap& a, const Point& x, double tol = tol_resolvent_rootfound,
                                   int max_iter = 200) {
    const std::size_t n = x.dim();
    auto residual = [&](const Point& y) { return y + a(y) - x; };
    Point y = x;
    Point f = residual(y);
    double fn = norm(f);
    for (int iter = 0; iter < max_iter && fn > tol; ++iter) {
        std::vector<double> jac(n * n);
        for (std::size_t c = 0; c < n; ++c) {
            const double h = 1e-7 * std::max(1.0, std::abs(y[c]));
            Point yp = y;
            yp[c] += h;
            const Point fp = residual(yp);
            for (std::size_t r = 0; r < n; ++r) jac[r * n + c] = (fp[r] - f[r]) / h;
        }
        std::vector<double> rhs(n);
        for (std::size_t r = 0; r < n; ++r) rhs[r] = -f[r];
        const auto step = detail::solve_dense(std::move(jac), std::move(rhs), n);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            Point cand = y;
            for (std::size_t i = 0; i < n; ++i) cand[i] += t * step[i];
            Point fc = residual(cand);
            const double fcn = norm(fc);
            if (fcn < fn) {
                y = std::move(cand);
                f = std::move(fc);
                fn = fcn;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (fn > tol) throw NumericalFailure("solve_vector_monotone: tolerance not reached");
    return y;
}

// ---------------------------------------------------------------------------
// Identity layer

inline Point resolvent(const MonotoneOperator& A, const Point& x) { return A.resolvent(x); }

/// R_A = 2 J_A - Id.
inline Point reflected_resolvent(const MonotoneOperator& A, const Point& x) {
    return 2.0 * A.resolvent(x) - x;
}

/// Minty parametrization z -> (J_A z, z - J_A z), a point of gra A.
inline GraphSample minty_sample(const MonotoneOperator& A, const Point& z) {
    Point x = A.resolvent(z);
    Point xstar = z - x;
    return {std::move(x), std::move(xstar)};
}

namespace detail {

inline DeclaredProperties scale_properties(const DeclaredProperties& props, double gamma) {
    DeclaredProperties out;
    for (auto p : props) {
        switch (p.kind) {
        case PropertyKind::cocoercive: p.parameter /= gamma; break;
        case PropertyKind::lipschitz: p.parameter *= gamma; break;
        case PropertyKind::strongly_monotone: p.parameter *= gamma; break;
        default: break;
        }
        out.push_back(p);
    }
    return out;
}

} // namespace detail

/// A^{-1}, whose resolvent is Id - J_A. Declared properties of A and A^{-1}
/// trade places, as do the direct evaluations.
inline MonotoneOperator invert(const MonotoneOperator& A) {
    OperatorSpec s;
    s.name = "inv(" + A.name() + ")";
    s.dim = A.dim();
    s.exact_resolvent = A.exact_resolvent();
    s.resolvent = [A](const Point& x) { return x - A.resolvent(x); };
    s.direct_eval = A.spec().inverse_direct_eval;
    s.inverse_direct_eval = A.spec().direct_eval;
    if (A.has_scaled_resolvent()) {
        // J_{gA^{-1}}(x) = x - g J_{A/g}(x/g)
        s.scaled_resolvent = [A](const Point& x, double g) {
            return x - g * A.scaled_resolvent((1.0 / g) * x, 1.0 / g);
        };
    }
    s.properties = A.spec().inverse_properties;
    s.inverse_properties = A.spec().properties;
    return MonotoneOperator(std::move(s));
}

/// A = ((Id - T)/2)^{-1} - Id, so that T = -R_A.
inline MonotoneOperator from_neg_reflected(const NonexpansiveMap& T, std::string name = {}) {
    OperatorSpec s;
    s.name = name.empty() ? "negR(" + T.name() + ")" : std::move(name);
    s.dim = T.dim();
    s.resolvent = [T](const Point& x) { return 0.5 * (x - T(x)); };
    s.properties = {{PropertyKind::maximally_monotone}};
    s.inverse_properties = {{PropertyKind::maximally_monotone}};
    return MonotoneOperator(std::move(s));
}

/// A = F^{-1} - Id, so that J_A = F.
inline MonotoneOperator from_firmly_nonexpansive(const NonexpansiveMap& F, std::string name = {}) {
    OperatorSpec s;
    s.name = name.empty() ? "fromJ(" + F.name() + ")" : std::move(name);
    s.dim = F.dim();
    s.resolvent = [F](const Point& x) { return F(x); };
    s.properties = {{PropertyKind::maximally_monotone}};
    s.inverse_properties = {{PropertyKind::maximally_monotone}};
    return MonotoneOperator(std::move(s));
}

/// gamma * A. Uses a registered closed form when available, otherwise solves
/// y + gamma A(y) = x with the scalar or vector root finder.
inline MonotoneOperator scale(const MonotoneOperator& A, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("scale: gamma must be positive");
    OperatorSpec s;
    s.name = std::to_string(gamma) + "*" + A.name();
    s.dim = A.dim();
    s.properties = detail::scale_properties(A.spec().properties, gamma);
    if (A.has_direct_eval()) {
        s.direct_eval = [A, gamma](const Point& x) { return gamma * A.evaluate(x); };
    }
    if (A.has_inverse_direct_eval()) {
        s.inverse_direct_eval = [A, gamma](const Point& x) { return A.evaluate_inverse((1.0 / gamma) * x); };
    }
    if (A.has_scaled_resolvent()) {
        s.exact_resolvent = A.exact_resolvent();
        s.resolvent = [A, gamma](const Point& x) { return A.scaled_resolvent(x, gamma); };
        s.scaled_resolvent = [A, gamma](const Point& x, double g) { return A.scaled_resolvent(x, g * gamma); };
    } else if (A.has_direct_eval()) {
        s.exact_resolvent = false;
        if (A.dim() == 1) {
            s.resolvent = [A, gamma](const Point& x) {
                const double y = solve_scalar_monotone(
                    [&](double t) { return gamma * A.evaluate(Point::scalar(t)).value(); }, x.value());
                return Point::scalar(y);
            };
        } else {
            s.resolvent = [A, gamma](const Point& x) {
                return solve_vector_monotone([&](const Point& y) { return gamma * A.evaluate(y); }, x);
            };
        }
    } else {
        throw Unsupported("scale: " + A.name() + " has neither direct evaluation nor a closed-form scaled resolvent");
    }
    return MonotoneOperator(std::move(s));
}

// ---------------------------------------------------------------------------
// Mapping helpers

inline NonexpansiveMap resolvent_map(const MonotoneOperator& A) {
    return NonexpansiveMap("J(" + A.name() + ")", A.dim(), [A](const Point& x) { return A.resolvent(x); });
}

inline NonexpansiveMap reflected_map(const MonotoneOperator& A) {
    return NonexpansiveMap("R(" + A.name() + ")", A.dim(),
                           [A](const Point& x) { return reflected_resolvent(A, x); });
}

inline NonexpansiveMap negated(const NonexpansiveMap& T) {
    return NonexpansiveMap("-" + T.name(), T.dim(), [T](const Point& x) { return -T(x); });
}

inline NonexpansiveMap identity_map(std::size_t dim) {
    return NonexpansiveMap("Id", dim, [](const Point& x) { return x; });
}

inline NonexpansiveMap scaled_map(const NonexpansiveMap& T, double s) {
    return NonexpansiveMap(std::to_string(s) + "*" + T.name(), T.dim(), [T, s](const Point& x) { return s * T(x); });
}

} // namespace mosk
