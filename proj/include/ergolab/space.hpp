#pragma once

#include <array>
#include <cmath>

namespace ergolab {

// A point of the phase space. One-dimensional spaces use only x.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class SpaceKind {
    Interval,        // [0,1]
    Circle,          // R/Z
    Torus,           // (R/Z)^2
    CircleInterval,  // (R/Z) x [0,1], coordinate 0 wraps
};

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::Interval;

    int dimension() const {
        return (kind == SpaceKind::Interval || kind == SpaceKind::Circle) ? 1 : 2;
    }

    bool coord_wraps(int i) const {
        switch (kind) {
            case SpaceKind::Interval: return false;
            case SpaceKind::Circle: return true;
            case SpaceKind::Torus: return true;
            case SpaceKind::CircleInterval: return i == 0;
        }
        return false;
    }

    // Wrap-around distance per coordinate, Euclidean combination.
    double distance(const Point& a, const Point& b) const;

    // Finite positive diameter (compactness proxy).
    double diameter() const;

    // Wrapping coordinates reduced into [0,1); interval coordinates untouched.
    Point reduce(Point p) const;

    bool contains(const Point& p, double tol = 0.0) const;
};

inline double wrap_unit(double v) {
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0;  // guards v just below an integer rounding up
    return v;
}

inline double circle_dist(double a, double b) {
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return d <= 0.5 ? d : 1.0 - d;
}

}  // namespace ergolab
