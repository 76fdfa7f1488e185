#include "ergolab/space.hpp"

#include <algorithm>

namespace ergolab {

double SpaceDescriptor::distance(const Point& a, const Point& b) const {
    switch (kind) {
        case SpaceKind::Interval:
            return std::fabs(a.x - b.x);
        case SpaceKind::Circle:
            return circle_dist(a.x, b.x);
        case SpaceKind::Torus: {
            double dx = circle_dist(a.x, b.x);
            double dy = circle_dist(a.y, b.y);
            return std::sqrt(dx * dx + dy * dy);
        }
        case SpaceKind::CircleInterval: {
            double dx = circle_dist(a.x, b.x);
            double dy = std::fabs(a.y - b.y);
            return std::sqrt(dx * dx + dy * dy);
        }
    }
    return 0.0;
}

double SpaceDescriptor::diameter() const {
    switch (kind) {
        case SpaceKind::Interval: return 1.0;
        case SpaceKind::Circle: return 0.5;
        case SpaceKind::Torus: return std::sqrt(0.5);
        case SpaceKind::CircleInterval: return std::sqrt(1.25);
    }
    return 1.0;
}

Point SpaceDescriptor::reduce(Point p) const {
    if (coord_wraps(0)) p.x = wrap_unit(p.x);
    if (dimension() > 1 && coord_wraps(1)) p.y = wrap_unit(p.y);
    return p;
}

bool SpaceDescriptor::contains(const Point& p, double tol) const {
    auto in_unit = [tol](double v) { return v >= -tol && v <= 1.0 + tol; };
    auto in_wrap = [tol](double v) { return v >= -tol && v < 1.0 + tol; };
    switch (kind) {
        case SpaceKind::Interval: return in_unit(p.x);
        case SpaceKind::Circle: return in_wrap(p.x);
        case SpaceKind::Torus: return in_wrap(p.x) && in_wrap(p.y);
        case SpaceKind::CircleInterval: return in_wrap(p.x) && in_unit(p.y);
    }
    return false;
}

}  // namespace ergolab
