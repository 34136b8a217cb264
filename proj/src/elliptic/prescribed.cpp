#include "confcoord/elliptic/prescribed.hpp"

#include "confcoord/elliptic/stencil.hpp"
#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace confcoord::elliptic {

PrescribedSolver::PrescribedSolver(const MetricSpec& g, GridChart grid, SolverOptions options)
    : metric_(&g), grid_(std::move(grid)), options_(options)
{
    report_.converged = true;
}

void PrescribedSolver::record(const SolverReport& r)
{
    report_.iterations += r.iterations;
    report_.residual = std::max(report_.residual, r.residual);
    report_.converged = report_.converged && r.converged;
}

const std::vector<double>& PrescribedSolver::positive_unit()
{
    if (!f_.empty())
        return f_;
    DiscreteOperator op = assemble_operator(*metric_, grid_);
    auto res = solve_dirichlet(op, [](const Point&) { return 1.0; }, {}, options_);
    record(res.report);
    std::vector<double> f = std::move(res.solution.values);
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i] > 0.0))
            throw SolverFailure("positive solution fails at node " + std::to_string(i));
    if (!grid_.half_space()) {
        double f0 = f[grid_.center_index()];
        for (double& v : f)
            v /= f0;
    }
    f_ = std::move(f);
    return f_;
}

std::vector<double> PrescribedSolver::rescaled_harmonic(const BoundaryFn& data)
{
    const auto& f = positive_unit();
    if (!rescaled_)
        rescaled_ = assemble_rescaled_laplacian(*metric_, grid_, f);
    auto res = solve_dirichlet(*rescaled_, data, {}, options_);
    record(res.report);
    return std::move(res.solution.values);
}

std::vector<double> PrescribedSolver::interior(std::span<const double> sigma)
{
    const int n = grid_.dim();
    if (static_cast<int>(sigma.size()) != n)
        throw ArgumentError("covector length must equal the dimension");
    const Point c = grid_.center();
    std::vector<double> s(sigma.begin(), sigma.end());
    auto u = rescaled_harmonic([&](const Point& x) {
        double v = 0.0;
        for (int a = 0; a < n; ++a)
            v += s[a] * (x[a] - c[a]);
        return v;
    });
    double u0 = u[grid_.center_index()];
    const auto& f = positive_unit();
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = f[i] * (u[i] - u0);
    return u;
}

std::vector<double> PrescribedSolver::boundary_normal()
{
    if (!grid_.half_space())
        throw PreconditionError("boundary_normal needs a half-space grid");
    const int k = grid_.dim() - 1;
    const Point c = grid_.center();
    auto v = rescaled_harmonic([&](const Point& x) { return x[k] - c[k]; });
    const auto& f = positive_unit();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] *= f[i];
    double slope = derivative4(grid_, v, grid_.center_index(), k);
    if (!(slope > 0.0))
        throw SolverFailure("normal derivative of the boundary solution is not positive");
    for (double& x : v)
        x /= slope;
    return v;
}

std::vector<double> PrescribedSolver::boundary_tangential(int axis)
{
    if (axis < 0 || axis >= grid_.dim())
        throw ArgumentError("axis out of range");
    const Point c = grid_.center();
    auto v = rescaled_harmonic([&](const Point& x) { return x[axis] - c[axis]; });
    const auto& f = positive_unit();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] *= f[i];
    return v;
}

std::vector<double> PrescribedSolver::center_gradient(std::span<const double> u) const
{
    std::vector<double> d(grid_.dim());
    for (int a = 0; a < grid_.dim(); ++a)
        d[a] = derivative4(grid_, u, grid_.center_index(), a);
    return d;
}

GridChart chart_grid(int dim, const Point& center, double epsilon, const ChartParams& params)
{
    return params.half_space ? GridChart::half_box(dim, center, epsilon, params.resolution)
                             : GridChart::box(dim, center, epsilon, params.resolution);
}

int run_with_shrinking(const ChartParams& params, const std::function<void(double)>& attempt)
{
    double eps = params.epsilon;
    std::ostringstream log;
    for (int shrink = 0; shrink <= params.max_shrinks; ++shrink) {
        try {
            attempt(eps);
            return shrink;
        } catch (const SolverFailure& e) {
            log << " [epsilon " << eps << ": " << e.what() << "]";
        }
        eps *= 0.5;
    }
    throw ConstructionFailure("prescribed solution not found after " + std::to_string(params.max_shrinks) +
                              " halvings:" + log.str());
}

PrescribedResult prescribed_solution(const MetricSpec& g, const PrescribedRequest& request)
{
    const int n = g.dim();
    ChartParams params = request.params;
    if (request.mode == PrescribedMode::BoundaryNormal || request.mode == PrescribedMode::BoundaryTangential)
        params.half_space = true;
    g.require_in_domain(request.center);
    PrescribedResult out;
    int shrinks = run_with_shrinking(params, [&](double eps) {
        PrescribedSolver solver(g, chart_grid(n, request.center, eps, params), params.solver);
        std::vector<double> value;
        switch (request.mode) {
        case PrescribedMode::PositiveUnit:
            value = solver.positive_unit();
            break;
        case PrescribedMode::Interior:
            value = solver.interior(request.sigma);
            break;
        case PrescribedMode::BoundaryNormal:
            value = solver.boundary_normal();
            break;
        case PrescribedMode::BoundaryTangential:
            value = solver.boundary_tangential(request.axis);
            break;
        }
        out.grid = solver.grid();
        out.epsilon = eps;
        out.f = solver.positive_unit();
        out.gradient = solver.center_gradient(value);
        out.value = std::move(value);
        out.report = solver.report();
    });
    out.report.shrink_count = shrinks;
    return out;
}

} // namespace confcoord::elliptic
