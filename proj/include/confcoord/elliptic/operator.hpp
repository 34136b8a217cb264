#pragma once

#include "confcoord/elliptic/grid.hpp"
#include "confcoord/elliptic/sparse.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <functional>
#include <span>
#include <vector>

namespace confcoord::elliptic {

using tensorcalc::MetricSpec;

/// Node samples entering the divergence-form operator
///   (A u)_i = -inv_volume_i · D_a(flux^{ab} D_b u) + potential_i u_i.
struct CoefficientField {
    int dim = 0;
    /// |g|^{1/2} g^{ab}, n·n entries per node.
    std::vector<double> flux;
    /// |g|^{-1/2}.
    std::vector<double> inv_volume;
    /// Empty means zero potential.
    std::vector<double> potential;
};

/// Coefficients of L_g sampled on the grid. The potential (n-2)/(4(n-1)) R
/// is computed jet-exactly at every node when with_potential is set.
CoefficientField metric_coefficients(const MetricSpec& g, const GridChart& grid, bool with_potential = true);

/// Coefficients of Δ for the rescaled metric f^{p-2} g with node samples f > 0.
CoefficientField rescaled_coefficients(const MetricSpec& g, const GridChart& grid, std::span<const double> f);

struct DiscreteOperator {
    GridChart grid;
    SparseMatrix matrix;
};

/// Interior rows follow the face-averaged divergence stencil; boundary rows
/// are identity.
DiscreteOperator assemble_from_coefficients(const GridChart& grid, const CoefficientField& c);
/// Discrete L_g on the grid.
DiscreteOperator assemble_operator(const MetricSpec& g, const GridChart& grid);
/// Discrete Δ of f^{p-2} g, i.e. L of that metric with its scalar curvature dropped.
DiscreteOperator assemble_rescaled_laplacian(const MetricSpec& g, const GridChart& grid,
                                             std::span<const double> f);

/// A·u with boundary rows zeroed, so the result is the interior residual.
std::vector<double> apply_interior(const DiscreteOperator& op, std::span<const double> u);

using BoundaryFn = std::function<double(const Point&)>;

struct DirichletResult {
    ScalarField solution;
    SolverReport report;
};

/// Solves A u = rhs in the interior with u = data on boundary nodes.
/// `data` supplies the boundary values and the initial guess elsewhere.
/// Non-convergence throws SolverFailure.
DirichletResult solve_dirichlet(const DiscreteOperator& op, std::span<const double> data,
                                std::span<const double> rhs = {}, const SolverOptions& options = {});
/// Boundary values and initial guess from a function of position.
DirichletResult solve_dirichlet(const DiscreteOperator& op, const BoundaryFn& data,
                                std::span<const double> rhs = {}, const SolverOptions& options = {});

/// Samples of a function at every node.
std::vector<double> sample(const GridChart& grid, const BoundaryFn& fn);

} // namespace confcoord::elliptic
