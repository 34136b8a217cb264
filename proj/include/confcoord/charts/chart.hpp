#pragma once

#include "confcoord/elliptic/grid.hpp"
#include "confcoord/elliptic/prescribed.hpp"
#include "confcoord/elliptic/sparse.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace confcoord::charts {

using elliptic::ChartParams;
using elliptic::GridChart;
using jets::Point;
using tensorcalc::MetricSpec;

/// Conformal harmonic coordinates Z^k = f^k / f sampled on a chart grid.
struct ChartResult {
    MetricSpec metric;
    Point center{};
    bool boundary = false;
    GridChart grid;
    std::vector<double> f;
    std::vector<std::vector<double>> fk;
    std::vector<std::vector<double>> z;
    /// ∂_a Z^k at [(node · n + k) · n + a].
    std::vector<double> jacobian;
    double epsilon = 0.0;
    double h = 0.0;
    int shrink_count = 0;
    bool normalized = false;
    /// A with g(center) = AᵀA when normalized, identity otherwise.
    Eigen::MatrixXd normalization;
    elliptic::SolverReport report;

    int dim() const { return grid.dim(); }
    Eigen::MatrixXd jacobian_at(std::size_t node) const;
    Eigen::MatrixXd center_jacobian() const { return jacobian_at(grid.center_index()); }
    /// ‖DZ(center) − A‖∞ with A the normalization (identity when not normalized).
    double center_jacobian_error() const;
};

/// Nodewise Z^k = f^k / f and DZ = (1/f) DF − (1/f²) F ⊗ df with 4th-order stencils.
void assemble_quotients(ChartResult& cr);

/// Interior chart about p: one positive solution and n prescribed solutions
/// with σ = dx^k, or the rows of the Cholesky factor A of g(p) when normalize is set.
ChartResult build_interior_chart(const MetricSpec& g, const Point& p, const ChartParams& params, bool normalize = false);

/// Boundary chart on the half box above p: f = 1 on every face, tangential
/// Z^k with boundary value x^k − p^k, normal Z^n vanishing on the flat face.
ChartResult build_boundary_chart(const MetricSpec& g, const Point& p, const ChartParams& params);

/// Z at x by cubic interpolation of the node samples.
std::vector<double> chart_value(const ChartResult& cr, const Point& x);
/// DZ at x by cubic interpolation of the stored Jacobian.
Eigen::MatrixXd chart_jacobian(const ChartResult& cr, const Point& x);

constexpr double kInversionTolerance = 1e-12;
constexpr int kInversionSteps = 50;

/// Solves Z(x) = z by damped Newton steps with the interpolated Jacobian.
/// Throws InversionFailure when the iteration stalls or leaves the grid.
Point invert_chart(const ChartResult& cr, std::span<const double> z, std::optional<Point> guess = {});

} // namespace confcoord::charts
