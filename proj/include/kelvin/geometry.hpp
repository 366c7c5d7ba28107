#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace kelvin {

/// A point in R^2 or R^3. The dimension is fixed at construction and all
/// coordinates are required to be finite.
class Point {
public:
    Point() = default;

    Point(double x, double y) : c_{x, y, 0.0}, dim_(2) { check(); }
    Point(double x, double y, double z) : c_{x, y, z}, dim_(3) { check(); }

    static Point zero(int dim) {
        if (dim == 2) return Point(0.0, 0.0);
        if (dim == 3) return Point(0.0, 0.0, 0.0);
        throw std::invalid_argument("Point::zero: dimension must be 2 or 3");
    }

    int dim() const { return dim_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    double norm2() const { return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2]; }
    double norm() const { return std::sqrt(norm2()); }

    friend Point operator+(const Point& a, const Point& b) {
        a.require_same_dim(b);
        return Point::raw(a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2], a.dim_);
    }
    friend Point operator-(const Point& a, const Point& b) {
        a.require_same_dim(b);
        return Point::raw(a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2], a.dim_);
    }
    friend Point operator*(double s, const Point& a) {
        return Point::raw(s * a.c_[0], s * a.c_[1], s * a.c_[2], a.dim_);
    }

    friend double dot(const Point& a, const Point& b) {
        a.require_same_dim(b);
        return a.c_[0] * b.c_[0] + a.c_[1] * b.c_[1] + a.c_[2] * b.c_[2];
    }

    friend double distance(const Point& a, const Point& b) { return (a - b).norm(); }

    friend bool operator==(const Point& a, const Point& b) {
        return a.dim_ == b.dim_ && a.c_ == b.c_;
    }

    /// Shift one coordinate; used by finite-difference stencils.
    Point shifted(int axis, double h) const {
        Point p = *this;
        p.c_[static_cast<std::size_t>(axis)] += h;
        return p;
    }

private:
    static Point raw(double x, double y, double z, int dim) {
        Point p;
        p.c_ = {x, y, z};
        p.dim_ = dim;
        p.check();
        return p;
    }

    void check() const {
        if (!(std::isfinite(c_[0]) && std::isfinite(c_[1]) && std::isfinite(c_[2])))
            throw std::invalid_argument("Point: coordinates must be finite");
    }

    void require_same_dim(const Point& other) const {
        if (dim_ != other.dim_)
            throw std::invalid_argument("Point: mixed dimensions");
    }

    std::array<double, 3> c_{0.0, 0.0, 0.0};
    int dim_ = 0;
};

/// Unit vector along coordinate axis `axis` in the given dimension.
inline Point unit_vector(int dim, int axis) {
    Point p = Point::zero(dim);
    return p.shifted(axis, 1.0);
}

/// Surface measure of the unit sphere S^{n-1}.
inline double unit_sphere_area(int dim) {
    if (dim == 2) return 2.0 * M_PI;
    if (dim == 3) return 4.0 * M_PI;
    throw std::invalid_argument("unit_sphere_area: dimension must be 2 or 3");
}

/// Point on the unit sphere. 2D: angle phi. 3D: ct = cos(theta), phi azimuthal.
inline Point sphere_direction_2d(double phi) { return Point(std::cos(phi), std::sin(phi)); }

inline Point sphere_direction_3d(double ct, double phi) {
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    return Point(st * std::cos(phi), st * std::sin(phi), ct);
}

}  // namespace kelvin
