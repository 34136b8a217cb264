#include "confcoord/charts/chart.hpp"

#include "confcoord/elliptic/interpolate.hpp"
#include "confcoord/elliptic/stencil.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::charts {

using elliptic::PrescribedSolver;

Eigen::MatrixXd ChartResult::jacobian_at(std::size_t node) const
{
    const int n = dim();
    Eigen::MatrixXd j(n, n);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            j(k, a) = jacobian[(node * n + k) * n + a];
    return j;
}

double ChartResult::center_jacobian_error() const
{
    return (center_jacobian() - normalization).cwiseAbs().maxCoeff();
}

void assemble_quotients(ChartResult& cr)
{
    const int n = cr.dim();
    const GridChart& grid = cr.grid;
    const std::size_t size = grid.size();
    cr.z.assign(n, std::vector<double>(size));
    for (int k = 0; k < n; ++k)
        for (std::size_t i = 0; i < size; ++i)
            cr.z[k][i] = cr.fk[k][i] / cr.f[i];
    cr.jacobian.assign(size * n * n, 0.0);
    parallel_for(size, [&](std::size_t i) {
        double f = cr.f[i];
        for (int a = 0; a < n; ++a) {
            double df = elliptic::derivative4(grid, cr.f, i, a);
            for (int k = 0; k < n; ++k) {
                double dfk = elliptic::derivative4(grid, cr.fk[k], i, a);
                cr.jacobian[(i * n + k) * n + a] = dfk / f - cr.fk[k][i] * df / (f * f);
            }
        }
    });
}

namespace {

void require_invertible_center(const ChartResult& cr)
{
    Eigen::MatrixXd j = cr.center_jacobian();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
    double smin = svd.singularValues().minCoeff(), smax = svd.singularValues().maxCoeff();
    if (!(smin > 1e-8 * smax))
        throw ChartFailure("chart Jacobian is singular at the center");
}

} // namespace

ChartResult build_interior_chart(const MetricSpec& g, const Point& p, const ChartParams& params, bool normalize)
{
    const int n = g.dim();
    g.require_in_domain(p);
    ChartParams local = params;
    local.half_space = false;
    ChartResult cr;
    cr.metric = g;
    cr.center = p;
    cr.normalized = normalize;
    cr.normalization = Eigen::MatrixXd::Identity(n, n);
    if (normalize) {
        Eigen::MatrixXd gp = g.values(p);
        g.validate(gp);
        Eigen::LLT<Eigen::MatrixXd> llt(gp);
        if (llt.info() != Eigen::Success)
            throw DegenerateMetricError("metric is not positive definite at the chart center");
        cr.normalization = llt.matrixU();
    }
    cr.shrink_count = elliptic::run_with_shrinking(local, [&](double eps) {
        PrescribedSolver solver(g, elliptic::chart_grid(n, p, eps, local), local.solver);
        cr.f = solver.positive_unit();
        cr.fk.clear();
        for (int k = 0; k < n; ++k) {
            std::vector<double> sigma(n);
            for (int a = 0; a < n; ++a)
                sigma[a] = cr.normalization(k, a);
            cr.fk.push_back(solver.interior(sigma));
        }
        cr.grid = solver.grid();
        cr.epsilon = eps;
        cr.h = cr.grid.spacing();
        cr.report = solver.report();
    });
    cr.report.shrink_count = cr.shrink_count;
    assemble_quotients(cr);
    require_invertible_center(cr);
    return cr;
}

ChartResult build_boundary_chart(const MetricSpec& g, const Point& p, const ChartParams& params)
{
    const int n = g.dim();
    g.require_in_domain(p);
    ChartParams local = params;
    local.half_space = true;
    ChartResult cr;
    cr.metric = g;
    cr.center = p;
    cr.boundary = true;
    cr.normalization = Eigen::MatrixXd::Identity(n, n);
    cr.shrink_count = elliptic::run_with_shrinking(local, [&](double eps) {
        PrescribedSolver solver(g, elliptic::chart_grid(n, p, eps, local), local.solver);
        cr.f = solver.positive_unit();
        cr.fk.clear();
        for (int k = 0; k + 1 < n; ++k)
            cr.fk.push_back(solver.boundary_tangential(k));
        cr.fk.push_back(solver.boundary_normal());
        cr.grid = solver.grid();
        cr.epsilon = eps;
        cr.h = cr.grid.spacing();
        cr.report = solver.report();
    });
    cr.report.shrink_count = cr.shrink_count;
    assemble_quotients(cr);
    require_invertible_center(cr);
    return cr;
}

std::vector<double> chart_value(const ChartResult& cr, const Point& x)
{
    auto st = elliptic::cubic_stencil(cr.grid, x);
    std::vector<double> z(cr.dim());
    for (int k = 0; k < cr.dim(); ++k)
        z[k] = elliptic::interpolate(cr.grid, st, cr.z[k]);
    return z;
}

Eigen::MatrixXd chart_jacobian(const ChartResult& cr, const Point& x)
{
    const int n = cr.dim();
    auto st = elliptic::cubic_stencil(cr.grid, x);
    Eigen::MatrixXd j(n, n);
    for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
            j(k, a) = elliptic::interpolate(cr.grid, st, cr.jacobian, n * n, k * n + a);
    return j;
}

Point invert_chart(const ChartResult& cr, std::span<const double> z, std::optional<Point> guess)
{
    const int n = cr.dim();
    if (static_cast<int>(z.size()) != n)
        throw ArgumentError("target point has the wrong dimension");
    const Point lo = cr.grid.lower(), hi = cr.grid.upper();
    auto clamp = [&](Point x) {
        for (int a = 0; a < n; ++a)
            x[a] = std::clamp(x[a], lo[a], hi[a]);
        return x;
    };
    auto residual = [&](const Point& x, Eigen::VectorXd& r) {
        auto zx = chart_value(cr, x);
        for (int k = 0; k < n; ++k)
            r[k] = zx[k] - z[k];
        return r.cwiseAbs().maxCoeff();
    };

    Point x;
    if (guess) {
        x = clamp(*guess);
    } else {
        Eigen::VectorXd zz(n);
        for (int k = 0; k < n; ++k)
            zz[k] = z[k];
        Eigen::VectorXd dx = cr.center_jacobian().lu().solve(zz);
        x = cr.center;
        for (int a = 0; a < n; ++a)
            x[a] += dx[a];
        x = clamp(x);
    }
    Eigen::VectorXd r(n), rn(n);
    double res = residual(x, r);
    for (int step = 0; step < kInversionSteps; ++step) {
        if (res <= kInversionTolerance)
            return x;
        Eigen::VectorXd dx = chart_jacobian(cr, x).lu().solve(r);
        double t = 1.0;
        bool accepted = false;
        for (int damp = 0; damp < 12; ++damp, t *= 0.5) {
            Point xn = x;
            for (int a = 0; a < n; ++a)
                xn[a] -= t * dx[a];
            xn = clamp(xn);
            double rnew = residual(xn, rn);
            if (rnew < res) {
                x = xn;
                r = rn;
                res = rnew;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    if (res <= kInversionTolerance)
        return x;
    throw InversionFailure("chart inversion did not converge (residual " + std::to_string(res) + ")", x);
}

} // namespace confcoord::charts
