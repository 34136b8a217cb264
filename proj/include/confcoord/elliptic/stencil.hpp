#pragma once

#include "confcoord/elliptic/grid.hpp"

#include <span>
#include <vector>

namespace confcoord::elliptic {

/// Finite-difference weights for the derivatives 0..max_order at x0 from
/// samples at the given nodes (Fornberg). Row k holds the weights of d^k/dx^k.
std::vector<std::vector<double>> fd_weights(std::span<const double> nodes, double x0, int max_order);

/// Samples of d/dx^axis at node idx from a 5-point window: central where two
/// nodes are available on each side, shifted one-sided otherwise. O(h^4).
double derivative4(const GridChart& grid, std::span<const double> u, std::size_t idx, int axis);

/// Second derivative d²/dx^a dx^b at idx, composing 5-point windows
/// (6-point window for the pure second derivative so the order stays 4).
double second_derivative4(const GridChart& grid, std::span<const double> u, std::size_t idx, int a, int b);

/// derivative4 at every node.
std::vector<double> derivative_field(const GridChart& grid, std::span<const double> u, int axis);

} // namespace confcoord::elliptic
