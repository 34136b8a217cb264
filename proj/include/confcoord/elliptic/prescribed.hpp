#pragma once

#include "confcoord/elliptic/grid.hpp"
#include "confcoord/elliptic/operator.hpp"
#include "confcoord/elliptic/sparse.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace confcoord::elliptic {

enum class PrescribedMode { PositiveUnit, Interior, BoundaryNormal, BoundaryTangential };

/// Chart scale and discretization. Charts are solved tighter than the generic
/// Dirichlet default so that derivatives at the center stay below 1e-8.
struct ChartParams {
    double epsilon = 0.1;
    int resolution = 33;
    SolverOptions solver{1e-12, 50000};
    int max_shrinks = 6;
    bool half_space = false;
};

/// Dirichlet solves that share one grid and one positive solution f.
///
/// Interior charts use f = 1 on the whole boundary and then f(center) = 1;
/// boundary charts use f = 1 on every face, including the flat face Γ.
class PrescribedSolver {
public:
    PrescribedSolver(const MetricSpec& g, GridChart grid, SolverOptions options);

    const GridChart& grid() const { return grid_; }
    const MetricSpec& metric() const { return *metric_; }

    /// L_g f = 0, f = 1 on the boundary; throws SolverFailure when the solve
    /// fails or f ≤ 0 at some node.
    const std::vector<double>& positive_unit();
    /// u with Δ u = 0 for f^{p-2}g and u = data on the boundary.
    std::vector<double> rescaled_harmonic(const BoundaryFn& data);

    /// f^σ = f·(u - u(center)) with u = σ·(x - center) on the boundary.
    std::vector<double> interior(std::span<const double> sigma);
    /// f^n = f·v / c with v = x^n - center^n on the boundary (zero on Γ) and c
    /// fixing ∂_n f^n(center) = 1.
    std::vector<double> boundary_normal();
    /// f^k = f·v with v = x^k - center^k on the boundary.
    std::vector<double> boundary_tangential(int axis);

    /// Gradient at the center from 4th-order stencils.
    std::vector<double> center_gradient(std::span<const double> u) const;

    /// Worst report over all solves so far.
    const SolverReport& report() const { return report_; }

private:
    void record(const SolverReport& r);

    const MetricSpec* metric_;
    GridChart grid_;
    SolverOptions options_;
    std::vector<double> f_;
    std::optional<DiscreteOperator> rescaled_;
    SolverReport report_;
};

/// Grid of the given scale about center.
GridChart chart_grid(int dim, const Point& center, double epsilon, const ChartParams& params);

/// Calls attempt(epsilon) and halves epsilon on SolverFailure, at most
/// params.max_shrinks times. Returns the shrink count of the accepted attempt;
/// throws ConstructionFailure when the budget runs out.
int run_with_shrinking(const ChartParams& params, const std::function<void(double)>& attempt);

struct PrescribedRequest {
    PrescribedMode mode = PrescribedMode::PositiveUnit;
    Point center{};
    std::vector<double> sigma;
    int axis = 0;
    ChartParams params;
};

struct PrescribedResult {
    GridChart grid;
    double epsilon = 0.0;
    std::vector<double> f;
    /// f for PositiveUnit, otherwise the prescribed solution.
    std::vector<double> value;
    std::vector<double> gradient;
    SolverReport report;
};

PrescribedResult prescribed_solution(const MetricSpec& g, const PrescribedRequest& request);

} // namespace confcoord::elliptic
