#pragma once

#include "confcoord/elliptic/grid.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <functional>
#include <span>
#include <vector>

namespace confcoord::lorentz {

using elliptic::GridChart;
using jets::Point;
using tensorcalc::MetricSpec;

constexpr double kMaxStepRatio = 0.5;
constexpr double kInstabilityGrowth = 1e6;

/// Spacetime slab [t0, t0 + steps·dt] × spatial box; time is coordinate 0.
struct SlabChart {
    /// Spatial grid in the coordinates x¹..x^{n-1}.
    GridChart space;
    double t0 = 0.0;
    int steps = 0;
    double dt = 0.0;

    /// Box of half-width L about the spatial part of `center`, duration T and
    /// Δt = T/steps with steps the least count giving Δt/h <= ratio.
    static SlabChart make(int n, const Point& center, double half_width, int resolution, double duration,
                          double ratio = kMaxStepRatio);

    int dim() const { return space.dim() + 1; }
    double h() const { return space.spacing(); }
    double ratio() const { return dt / space.spacing(); }
    double duration() const { return steps * dt; }
    double time(int level) const { return t0 + level * dt; }
    /// (t_level, x_node).
    Point point(int level, std::size_t node) const;
};

using SpacetimeFn = std::function<double(const Point&)>;

struct WaveOptions {
    /// Right-hand side F of L_g u = F; empty means zero.
    SpacetimeFn source;
    /// Exact solution injected on the spatial edge; when empty, edge nodes
    /// follow u0 + (t − t0) u1 and the domain-of-dependence guard applies.
    SpacetimeFn boundary;
};

/// u on every level of a slab. levels[m][i] is u(t_m, x_i); ghost is the
/// start level at t0 − Δt.
struct SpacetimeField {
    SlabChart slab;
    std::vector<std::vector<double>> levels;
    std::vector<double> ghost;
    bool guarded = true;

    double at(int level, std::size_t node) const { return levels[level][node]; }
    /// Inside the numerical cone of the slab interior, with `margin` extra nodes.
    bool in_guard(int level, std::size_t node, int margin = 0) const;
};

/// Time coefficient A = |g|^{1/2}(−g^{00}) sampled at t0 − Δt/2, t0, t0 + Δt/2;
/// the start conditions are A⁺(u¹−u⁰) + A⁻(u⁰−u⁻¹) = 2Δt A⁰ u1 and the
/// leapfrog step at level 0.
struct StartCoefficients {
    std::vector<double> minus, center, plus;
};

struct WaveSolution {
    std::vector<SpacetimeField> fields;
    StartCoefficients start;
    /// max N/√λ_min(γ) over sampled nodes.
    double max_speed = 0.0;
};

/// Explicit integration of L_g u = F, the conformal wave equation
///   |g|^{-1/2}[∂_t(A ∂_t u) − ∂_i(|g|^{1/2} g^{ij} ∂_j u)] + (n-2)/(4(n-1)) R u = F,
/// second order in time and space, for several Cauchy data sets at once.
/// Requires vanishing shift (UnsupportedError), Δt/h <= 0.5 and
/// max speed · Δt/h <= 1/√(n−1) (ConfigError). Growth of a field beyond
/// 1e6 times its data norm throws InstabilityError.
WaveSolution solve_cauchy_waves(const MetricSpec& g, std::span<const std::vector<double>> u0,
                                std::span<const std::vector<double>> u1, const SlabChart& slab,
                                const WaveOptions& options = {});

SpacetimeField solve_cauchy_wave(const MetricSpec& g, std::span<const double> u0, std::span<const double> u1,
                                 const SlabChart& slab, const WaveOptions& options = {});

/// Samples of u on the spatial grid at time t.
std::vector<double> sample_slice(const SlabChart& slab, double t, const SpacetimeFn& u);

/// max |u − exact| over guarded nodes of every level; `margin` trims further.
double guarded_error(const SpacetimeField& field, const SpacetimeFn& exact, int margin = 0);

} // namespace confcoord::lorentz
