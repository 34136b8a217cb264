#pragma once

#include "confcoord/jets/jet.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace confcoord::elliptic {

using jets::Point;
using Index = std::array<int, 4>;

constexpr int kMinResolution = 9;

/// Uniform Cartesian grid on a box, optionally a half box whose last axis
/// starts on the boundary face through the center.
class GridChart {
public:
    GridChart() = default;
    /// center ± half_width on every axis with `resolution` (odd) nodes per axis.
    static GridChart box(int dim, const Point& center, double half_width, int resolution);
    /// As box() on tangential axes; the last axis spans [center, center + half_width]
    /// with the same spacing, (resolution + 1) / 2 nodes.
    static GridChart half_box(int dim, const Point& center, double half_width, int resolution);
    /// General uniform grid with per-axis node counts and lower corner.
    static GridChart uniform(int dim, const Point& lo, double spacing, const Index& count, int min_count = 5);

    int dim() const { return dim_; }
    double spacing() const { return h_; }
    int count(int axis) const { return count_[axis]; }
    const Point& lower() const { return lo_; }
    Point upper() const;
    const Point& center() const { return center_; }
    bool half_space() const { return half_; }
    std::size_t size() const { return size_; }
    std::size_t stride(int axis) const { return stride_[axis]; }

    Index multi(std::size_t idx) const;
    std::size_t index(const Index& m) const;
    Point point(std::size_t idx) const;
    Point point(const Index& m) const;
    bool on_boundary(std::size_t idx) const;
    /// Fewest steps from idx to any face of the box.
    int boundary_distance(std::size_t idx) const;
    /// Node at the chart center (on the boundary face for half boxes).
    std::size_t center_index() const;

private:
    int dim_ = 0;
    double h_ = 0.0;
    Point lo_{};
    Point center_{};
    Index count_{};
    std::array<std::size_t, 4> stride_{};
    std::size_t size_ = 0;
    bool half_ = false;
};

/// Node samples of a scalar on a grid.
struct ScalarField {
    GridChart grid;
    std::vector<double> values;
};

} // namespace confcoord::elliptic
