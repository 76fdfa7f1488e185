#pragma once

#include <array>
#include <cstdint>

#include "ergolab/space.hpp"

namespace ergolab {

// Uniform partition of the phase space into m cells per dimension.
// Cells are [k/m, (k+1)/m) per coordinate (the last interval cell is closed
// at 1). Indexing is row-major over coordinates: coordinate 0 is the slow axis.
struct GridPartition {
    SpaceDescriptor space;
    int m = 0;

    int dim() const { return space.dimension(); }
    std::int64_t cell_count() const {
        return dim() == 1 ? m : static_cast<std::int64_t>(m) * m;
    }
    double width() const { return 1.0 / static_cast<double>(m); }

    int axis_cell(double v) const {
        int i = static_cast<int>(v * static_cast<double>(m));
        if (i < 0) i = 0;
        if (i >= m) i = m - 1;
        return i;
    }

    std::int64_t cell_of(Point p) const {
        p = space.reduce(p);
        int i0 = axis_cell(p.x);
        if (dim() == 1) return i0;
        return static_cast<std::int64_t>(i0) * m + axis_cell(p.y);
    }

    std::array<int, 2> coords(std::int64_t idx) const {
        if (dim() == 1) return {static_cast<int>(idx), 0};
        return {static_cast<int>(idx / m), static_cast<int>(idx % m)};
    }

    Point cell_corner(std::int64_t idx) const {
        auto c = coords(idx);
        return {c[0] * width(), c[1] * width()};
    }

    Point cell_center(std::int64_t idx) const {
        auto c = coords(idx);
        return {(c[0] + 0.5) * width(), (c[1] + 0.5) * width()};
    }

    bool compatible(const GridPartition& other) const {
        return m == other.m && space.kind == other.space.kind;
    }
};

}  // namespace ergolab
