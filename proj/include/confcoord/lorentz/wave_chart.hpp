#pragma once

#include "confcoord/lorentz/wave.hpp"

#include <Eigen/Dense>

#include <vector>

namespace confcoord::lorentz {

constexpr int kMaxDurationHalvings = 3;

/// Conformal wave coordinates Z^k = f^k / f on a slab. Z^0 comes from the
/// data (0, 1), Z^k for k >= 1 from (x^k − p^k, 0) and f from (1, 0).
struct WaveChartResult {
    MetricSpec metric;
    Point center{};
    SlabChart slab;
    SpacetimeField f;
    std::vector<SpacetimeField> fk;
    StartCoefficients start;
    int halvings = 0;
    double max_speed = 0.0;

    /// ‖DZ|_S − I‖∞ with the time column from the flux-weighted start
    /// difference [A⁺(u¹−u⁰) + A⁻(u⁰−u⁻¹)] / (2Δt A⁰).
    double dz_error = 0.0;
    /// The same with the one-sided (−3u⁰ + 4u¹ − u²)/(2Δt).
    double dz_error_one_sided = 0.0;
    /// max_a |Γ_a(g in Z coordinates) − 2∂_{Z^a} log f| on the guarded interior.
    double gauge_residual = 0.0;
    std::size_t gauge_nodes = 0;
    double min_f = 0.0;

    int dim() const { return slab.dim(); }
    double z(int k, int level, std::size_t node) const { return fk[k].at(level, node) / f.at(level, node); }
};

/// Runs the n+1 Cauchy solves and the checks above. When f <= 0 somewhere in
/// the guarded region the slab duration is halved, at most 3 times, before
/// ChartFailure is thrown.
WaveChartResult build_wave_chart(const MetricSpec& g, const SlabChart& slab);

/// DZ at a node of level 0 from the solved fields, both time stencils.
struct SurfaceJacobian {
    Eigen::MatrixXd central;
    Eigen::MatrixXd one_sided;
};
SurfaceJacobian surface_jacobian(const WaveChartResult& cr, std::size_t node);

struct WaveRefinementRow {
    double h = 0.0;
    double dt = 0.0;
    double gauge_residual = 0.0;
    double dz_error = 0.0;
    double dz_error_one_sided = 0.0;
};

struct WaveRefinementStudy {
    std::vector<WaveRefinementRow> rows;
    /// log-log slope of the gauge residual against h.
    double slope = 0.0;
};

/// Joint (h, Δt) refinement at fixed half-width, duration and step ratio.
WaveRefinementStudy wave_refinement(const MetricSpec& g, const Point& center, double half_width, double duration,
                                    std::span<const int> resolutions, double ratio = kMaxStepRatio);

} // namespace confcoord::lorentz
