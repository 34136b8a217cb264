#pragma once

#include "confcoord/elliptic/grid.hpp"

#include <span>

namespace confcoord::elliptic {

/// Tensor-product cubic Lagrange interpolation weights at x: the four nodes
/// per axis start at start[a] (clamped to the grid).
struct CubicStencil {
    Index start{};
    std::array<std::array<double, 4>, 4> weights{};
};

/// Throws ArgumentError when x lies outside the grid box.
CubicStencil cubic_stencil(const GridChart& grid, const Point& x);

/// Interpolates node samples (stride components per node, component k).
double interpolate(const GridChart& grid, const CubicStencil& st, std::span<const double> field,
                   std::size_t stride = 1, std::size_t component = 0);
double interpolate(const GridChart& grid, std::span<const double> field, const Point& x);

} // namespace confcoord::elliptic
