#pragma once

#include "confcoord/charts/chart.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <vector>

namespace confcoord::charts {

/// The source metric in Z-coordinates on a regular Z-grid inside the image.
struct PulledBackMetric {
    GridChart zgrid;
    int dim = 0;
    bool boundary = false;
    /// False where inversion failed.
    std::vector<char> valid;
    std::size_t masked = 0;
    /// x(z), n entries per node.
    std::vector<double> x;
    /// g̃ = (∂x/∂Z)ᵀ g (∂x/∂Z), n·n entries per node.
    std::vector<double> g_tilde;
    /// |det g̃|^{-1/n} g̃.
    std::vector<double> g_hat;
    /// f∘Z⁻¹.
    std::vector<double> f;
};

constexpr int kResidualMargin = 5;

/// The Z-grid is a box of half-width fraction·ε/‖DZ(center)⁻¹‖∞ (a half box for
/// boundary charts) with `count` nodes per axis. Its extent is a fixed fraction
/// of the chart, independent of the x-grid spacing.
struct PullbackOptions {
    double fraction = 0.5;
    int count = 25;
};

PulledBackMetric pullback_metric(const ChartResult& cr, const PullbackOptions& options = {});

/// The pullback of c·g with f replaced by c^{-(n-2)/4} f.
PulledBackMetric conformally_rescaled(const PulledBackMetric& pb, const tensorcalc::ScalarFn& c);

struct GaugeResiduals {
    /// max |Γ_a(g̃) − 2∂_a log f|
    double r1 = 0.0;
    /// max Jacobi-scaled |Δ_{f^{p-2}g} Z^k| over max |Z|, on the x-grid
    double r2 = 0.0;
    /// max |Γ_a(ĝ) − 2∂_a log(|g̃|^{(n-2)/(4n)} f)|
    double r3 = 0.0;
    /// max |ĝ^{ab}∂_aΓ_b(ĝ) − (n-2)/(2(n-1)) R(ĝ) − ½ Γ^a Γ_a|
    double r4 = 0.0;
    std::size_t band_nodes = 0;
    std::size_t skipped_nodes = 0;
};

/// Residuals over the Z-grid band that excludes a 5-node margin (the flat face
/// of a boundary chart is kept). Curvature of the sampled metric comes from
/// order-2 jets assembled from 4th-order stencils. Throws ConfigError when the
/// band has fewer than 5 layers.
GaugeResiduals gauge_residuals(const ChartResult& cr, const PulledBackMetric& pb);

/// Γ_a(c δ) − 2∂_a log c^{(2-n)/4}, jet-exact.
std::vector<double> isothermal_gauge_check(const tensorcalc::ScalarFn& c, int n, const Point& x);

} // namespace confcoord::charts
