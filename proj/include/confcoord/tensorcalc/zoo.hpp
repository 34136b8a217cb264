#pragma once

#include "confcoord/random.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace confcoord::tensorcalc {

MetricSpec flat(int n);
/// c·δ for a positive scalar c.
MetricSpec conformally_flat(int n, ScalarFn c, const std::string& name);
/// c·δ with c parsed from an expression in x1..xn.
MetricSpec conformally_flat(int n, const std::string& expression);
/// 4 (1 + |x|²)^{-2} δ, the round unit sphere in stereographic coordinates.
MetricSpec sphere_stereographic(int n);
/// δ + h with h a seeded sum of trigonometric and bump terms, ‖h‖ <= amplitude.
MetricSpec perturbed_flat(int n, std::uint64_t seed, double amplitude = 0.1);
/// diag(-1, 1, .., 1) with time as coordinate 0.
MetricSpec minkowski(int n);
/// -(1 + s) dt² + (δ + h)_ij dx^i dx^j with seeded s, h of size <= amplitude.
///
/// The shift components g_0i vanish identically.
MetricSpec perturbed_minkowski(int n, std::uint64_t seed, double amplitude = 0.05);

struct MetricRequest {
    std::string kind; ///< one of zoo_names()
    int dim = 3;
    std::uint64_t seed = 1;
    double amplitude = -1.0; ///< negative selects the family default
    std::string expression;  ///< conformal factor for "conformally-flat"
};

/// Throws ConfigError for unknown kinds or missing parameters.
MetricSpec make_metric(const MetricRequest& request);
std::vector<std::string> zoo_names();

/// Seeded smooth scalar: trigonometric sum plus an affine part.
ScalarFn random_scalar(int n, std::uint64_t seed, double amplitude = 1.0);
/// exp of a seeded smooth scalar with |log c| <= amplitude.
ScalarFn random_positive_scalar(int n, std::uint64_t seed, double amplitude = 0.5);
Point random_point(Rng& rng, int n, double half_width);

} // namespace confcoord::tensorcalc
