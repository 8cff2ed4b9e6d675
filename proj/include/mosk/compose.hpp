#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mosk/core.hpp"
#include "mosk/errors.hpp"
#include "mosk/point.hpp"

namespace mosk {

enum class ClassLevel { sne, ssne, cld };

inline std::string to_string(ClassLevel c) {
    switch (c) {
    case ClassLevel::sne: return "sne";
    case ClassLevel::ssne: return "ssne";
    case ClassLevel::cld: return "cld";
    }
    return "unknown";
}

/// A mapping together with the sign under which it carries its class:
/// +1 when the map itself is declared SNE/SSNE, -1 when its negative is.
struct SignedMap {
    NonexpansiveMap map;
    int sign;
    ClassLevel class_level;

    SignedMap(NonexpansiveMap m, int s, ClassLevel level) : map(std::move(m)), sign(s), class_level(level) {
        if (sign != 1 && sign != -1) throw DomainError("SignedMap: sign must be +1 or -1");
    }
};

/// x -> T_m(...T_1(x)...), with maps[0] applied first.
inline NonexpansiveMap compose(const std::vector<NonexpansiveMap>& maps) {
    if (maps.empty()) throw DomainError("compose: empty list");
    const std::size_t dim = maps.front().dim();
    std::string name;
    for (const auto& m : maps) {
        if (m.dim() != dim) throw DimensionMismatch("compose: " + m.name() + " has a different dimension");
        name = name.empty() ? m.name() : m.name() + "." + name;
    }
    return NonexpansiveMap(name, dim, [maps](const Point& x) {
        Point y = x;
        for (const auto& m : maps) y = m(y);
        return y;
    });
}

/// (-1)^{number of entries with sign -1}.
inline int predicted_sign(const std::vector<SignedMap>& signed_maps) {
    if (signed_maps.empty()) throw DomainError("predicted_sign: empty list");
    int s = 1;
    for (const auto& m : signed_maps) s *= m.sign;
    return s;
}

/// The composition of the underlying maps, multiplied by predicted_sign.
inline NonexpansiveMap signed_composition(const std::vector<SignedMap>& signed_maps) {
    std::vector<NonexpansiveMap> maps;
    for (const auto& m : signed_maps) maps.push_back(m.map);
    auto t = compose(maps);
    return predicted_sign(signed_maps) == 1 ? t : negated(t);
}

/// (1 - lambda) T1 + lambda T2.
inline NonexpansiveMap convex_combination(const NonexpansiveMap& t1, const NonexpansiveMap& t2, double lambda) {
    if (t1.dim() != t2.dim()) throw DimensionMismatch("convex_combination: dimensions differ");
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("convex_combination: lambda must lie in (0, 1)");
    return NonexpansiveMap("comb(" + t1.name() + "," + t2.name() + ")", t1.dim(),
                           [t1, t2, lambda](const Point& x) { return (1.0 - lambda) * t1(x) + lambda * t2(x); });
}

namespace detail {

inline void check_pair_dims(const MonotoneOperator& a, const MonotoneOperator& b, const char* what) {
    if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": operator dimensions differ");
}

} // namespace detail

/// R_B R_A.
inline NonexpansiveMap pr_operator(const MonotoneOperator& A, const MonotoneOperator& B) {
    detail::check_pair_dims(A, B, "pr_operator");
    return NonexpansiveMap("PR(" + A.name() + "," + B.name() + ")", A.dim(),
                           [A, B](const Point& x) { return reflected_resolvent(B, reflected_resolvent(A, x)); });
}

/// (Id + R_B R_A)/2.
inline NonexpansiveMap dr_operator(const MonotoneOperator& A, const MonotoneOperator& B) {
    detail::check_pair_dims(A, B, "dr_operator");
    return NonexpansiveMap("DR(" + A.name() + "," + B.name() + ")", A.dim(), [A, B](const Point& x) {
        return 0.5 * (x + reflected_resolvent(B, reflected_resolvent(A, x)));
    });
}

/// J_{gamma B}(Id - gamma A). A must be single valued and declared
/// beta-cocoercive, and gamma must lie in (0, 2 beta).
inline NonexpansiveMap fb_operator(const MonotoneOperator& A, const MonotoneOperator& B, double gamma) {
    detail::check_pair_dims(A, B, "fb_operator");
    if (!A.has_direct_eval()) throw Unsupported("fb_operator: " + A.name() + " has no direct evaluation");
    const auto beta = find_property(A.declared_properties(), PropertyKind::cocoercive);
    if (!beta) throw Unsupported("fb_operator: " + A.name() + " is not declared cocoercive");
    if (!(gamma > 0.0 && gamma < 2.0 * *beta)) {
        throw StepSizeOutOfRange("fb_operator: gamma = " + std::to_string(gamma) + " outside (0, " +
                                 std::to_string(2.0 * *beta) + ")");
    }
    const MonotoneOperator gB = scale(B, gamma);
    return NonexpansiveMap("FB(" + A.name() + "," + B.name() + ")", A.dim(),
                           [A, gB, gamma](const Point& x) { return gB.resolvent(x - gamma * A.evaluate(x)); });
}

} // namespace mosk
