#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mosk/errors.hpp"

namespace mosk {

/// Element of the ambient finite-dimensional Euclidean space.
///
/// Coordinates supplied from outside are validated (finite, nonempty).
/// Arithmetic results are not re-validated; the iteration layer guards
/// against blow-up with its divergence threshold instead.
class Point {
public:
    Point() = default;

    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) {
            throw DomainError("Point: dimension must be at least 1");
        }
        for (double c : coords_) {
            if (!std::isfinite(c)) {
                throw DomainError("Point: non-finite coordinate");
            }
        }
    }

    Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

    static Point zeros(std::size_t dim) {
        if (dim == 0) {
            throw DomainError("Point: dimension must be at least 1");
        }
        return Point(unchecked{}, std::vector<double>(dim, 0.0));
    }

    static Point scalar(double v) { return Point({v}); }

    /// Standard basis vector e_k, with k counted from 1.
    static Point basis(std::size_t dim, std::size_t k) {
        if (k == 0 || k > dim) {
            throw DomainError("Point::basis: index out of range");
        }
        Point p = zeros(dim);
        p.coords_[k - 1] = 1.0;
        return p;
    }

    std::size_t dim() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    std::span<double> coords() noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    double& operator[](std::size_t i) { return coords_[i]; }

    /// First coordinate; convenient for the many one-dimensional examples.
    double value() const { return coords_.front(); }

    bool all_finite() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
    }

    Point& operator+=(const Point& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
        return *this;
    }
    Point& operator-=(const Point& o) {
        check_same_dim(o);
        for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
        return *this;
    }
    Point& operator*=(double s) noexcept {
        for (double& c : coords_) c *= s;
        return *this;
    }

    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator*(double s, Point a) { return a *= s; }
    friend Point operator*(Point a, double s) { return a *= s; }
    friend Point operator-(Point a) { return a *= -1.0; }

    friend bool operator==(const Point&, const Point&) = default;

    void check_same_dim(const Point& o) const {
        if (o.dim() != dim()) {
            throw DimensionMismatch("Point: dimension " + std::to_string(dim()) + " vs " +
                                    std::to_string(o.dim()));
        }
    }

private:
    struct unchecked {};
    Point(unchecked, std::vector<double> coords) : coords_(std::move(coords)) {}

    std::vector<double> coords_;
};

inline double dot(const Point& a, const Point& b) {
    a.check_same_dim(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(const Point& a) { return dot(a, a); }

inline double norm(const Point& a) {
    // hypot-style scaling keeps huge staircase coordinates from overflowing the square
    double scale = 0.0;
    for (double c : a.coords()) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double c : a.coords()) {
        const double r = c / scale;
        s += r * r;
    }
    return scale * std::sqrt(s);
}

inline double distance(const Point& a, const Point& b) { return norm(a - b); }

} // namespace mosk
