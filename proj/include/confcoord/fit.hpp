#pragma once

#include <span>

namespace confcoord {

/// Least-squares slope of log y against log x. Needs at least two points with
/// positive x and y.
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace confcoord
