#include "confcoord/elliptic/operator.hpp"
#include "confcoord/elliptic/prescribed.hpp"
#include "confcoord/elliptic/stencil.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/fit.hpp"
#include "confcoord/tensorcalc/curvature.hpp"
#include "confcoord/tensorcalc/zoo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace confcoord;
using namespace confcoord::elliptic;
using namespace confcoord::tensorcalc;

namespace {

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

jets::Jet smooth_u(std::span<const jets::Jet> x)
{
    return sin(x[0] + 0.5 * x[1]) + x[1] * x[1] * x[2] + exp(0.3 * x[2]);
}

double smooth_u_value(const Point& p)
{
    return std::sin(p[0] + 0.5 * p[1]) + p[1] * p[1] * p[2] + std::exp(0.3 * p[2]);
}

// Max interior error of the discrete L_g against the jet-exact value at the
// nodes of the coarsest grid.
double operator_error(const MetricSpec& g, int resolution)
{
    const double hw = 0.4;
    GridChart grid = GridChart::box(3, {}, hw, resolution);
    auto op = assemble_operator(g, grid);
    auto u = sample(grid, smooth_u_value);
    auto lu = apply_interior(op, u);
    int step = (resolution - 1) / 8;
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Index m = grid.multi(i);
        bool coarse = m[0] % step == 0 && m[1] % step == 0 && m[2] % step == 0;
        if (!coarse || grid.on_boundary(i))
            continue;
        err = std::max(err, std::abs(lu[i] - conformal_laplacian_apply(g, smooth_u, grid.point(i))));
    }
    return err;
}

} // namespace

TEST(Grid, BoxLayout)
{
    GridChart g = GridChart::box(3, {1.0, 2.0, 3.0}, 0.5, 9);
    EXPECT_EQ(g.size(), 729u);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.125);
    Point c = g.point(g.center_index());
    EXPECT_DOUBLE_EQ(c[0], 1.0);
    EXPECT_DOUBLE_EQ(c[2], 3.0);
    EXPECT_TRUE(g.on_boundary(0));
    EXPECT_FALSE(g.on_boundary(g.center_index()));
    EXPECT_EQ(g.boundary_distance(g.center_index()), 4);
    EXPECT_THROW(GridChart::box(3, {}, 0.5, 7), ArgumentError);
    EXPECT_THROW(GridChart::box(3, {}, 0.5, 10), ArgumentError);
    EXPECT_THROW(GridChart::box(3, {}, -1.0, 9), ArgumentError);
}

TEST(Grid, HalfBoxStartsOnFace)
{
    GridChart g = GridChart::half_box(3, {}, 0.5, 17);
    EXPECT_EQ(g.count(2), 9);
    EXPECT_DOUBLE_EQ(g.lower()[2], 0.0);
    EXPECT_DOUBLE_EQ(g.upper()[2], 0.5);
    EXPECT_TRUE(g.on_boundary(g.center_index()));
    EXPECT_DOUBLE_EQ(g.point(g.center_index())[2], 0.0);
    EXPECT_THROW(GridChart::half_box(3, {}, 0.5, 15), ArgumentError);
}

TEST(Stencil, DerivativesOfQuarticAreExact)
{
    GridChart g = GridChart::box(3, {}, 1.0, 9);
    auto u = sample(g, [](const Point& x) { return std::pow(x[0], 4) - 2 * x[0] * x[1] * x[1] + x[2] * x[2] * x[2]; });
    for (std::size_t i : {std::size_t(0), g.center_index(), g.size() - 1, std::size_t(40)}) {
        Point x = g.point(i);
        EXPECT_NEAR(derivative4(g, u, i, 0), 4 * std::pow(x[0], 3) - 2 * x[1] * x[1], 1e-11);
        EXPECT_NEAR(derivative4(g, u, i, 1), -4 * x[0] * x[1], 1e-11);
        EXPECT_NEAR(second_derivative4(g, u, i, 0, 1), -4 * x[1], 1e-10);
        EXPECT_NEAR(second_derivative4(g, u, i, 2, 2), 6 * x[2], 1e-10);
    }
}

TEST(Stencil, FornbergCentralWeights)
{
    double nodes[] = {-2, -1, 0, 1, 2};
    auto w = fd_weights(nodes, 0.0, 2);
    EXPECT_NEAR(w[1][0], 1.0 / 12, 1e-15);
    EXPECT_NEAR(w[1][1], -8.0 / 12, 1e-15);
    EXPECT_NEAR(w[2][2], -30.0 / 12, 1e-14);
}

TEST(Operator, FlatStencilIsSevenPoint)
{
    GridChart grid = GridChart::box(3, {}, 0.5, 9);
    auto op = assemble_operator(flat(3), grid);
    std::size_t c = grid.center_index();
    double h2 = grid.spacing() * grid.spacing();
    auto cols = op.matrix.row_columns(c);
    auto vals = op.matrix.row_values(c);
    int nonzero = 0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (vals[k] == 0.0)
            continue;
        ++nonzero;
        if (cols[k] == c)
            EXPECT_NEAR(vals[k] * h2, 6.0, 1e-12);
        else
            EXPECT_NEAR(vals[k] * h2, -1.0, 1e-12);
    }
    EXPECT_EQ(nonzero, 7);
    EXPECT_DOUBLE_EQ(op.matrix.entry(0, 0), 1.0);
    EXPECT_EQ(op.matrix.row_columns(0).size(), 1u);
}

TEST(Operator, ExactOnBilinear)
{
    GridChart grid = GridChart::box(3, {}, 0.5, 9);
    auto op = assemble_operator(flat(3), grid);
    auto u = sample(grid, [](const Point& x) { return x[0] * x[1]; });
    EXPECT_LT(max_abs(apply_interior(op, u)), 1e-11);
}

TEST(Operator, SecondOrderAgainstJetReference)
{
    std::vector<MetricSpec> metrics = {sphere_stereographic(3), perturbed_flat(3, 7), conformally_flat(3, "(1+0.3*x1)^4"),
                                       perturbed_flat(3, 11)};
    for (const auto& g : metrics) {
        double hs[3], errs[3];
        int res[3] = {9, 17, 33};
        for (int k = 0; k < 3; ++k) {
            hs[k] = 0.8 / (res[k] - 1);
            errs[k] = operator_error(g, res[k]);
        }
        double slope = loglog_slope(hs, errs);
        EXPECT_GE(slope, 1.8) << g.name() << " errors " << errs[0] << " " << errs[1] << " " << errs[2];
    }
}

TEST(Operator, DegenerateSampleNamesNode)
{
    auto bad = conformally_flat(3, "x1");
    GridChart grid = GridChart::box(3, {}, 0.5, 9);
    try {
        assemble_operator(bad, grid);
        FAIL() << "expected a degenerate metric error";
    } catch (const DegenerateMetricError& e) {
        EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
    }
}

TEST(Dirichlet, LinearDataReproduced)
{
    GridChart grid = GridChart::box(3, {}, 0.5, 17);
    auto op = assemble_operator(flat(3), grid);
    // Start from zero in the interior so the solver has work to do.
    auto data = sample(grid, [&](const Point& x) { return x[0]; });
    std::vector<double> start = data;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!grid.on_boundary(i))
            start[i] = 0.0;
    auto res = solve_dirichlet(op, start);
    EXPECT_TRUE(res.report.converged);
    EXPECT_GT(res.report.iterations, 0);
    EXPECT_LE(res.report.residual, 1e-10);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        err = std::max(err, std::abs(res.solution.values[i] - data[i]));
        if (grid.on_boundary(i))
            EXPECT_EQ(res.solution.values[i], data[i]);
    }
    EXPECT_LT(err, 1e-8);
}

TEST(Dirichlet, NewtonianPotentialSecondOrder)
{
    Point q{2.0, 0.3, -0.1};
    auto exact = [&](const Point& x) {
        return 1.0 / std::sqrt(std::pow(x[0] - q[0], 2) + std::pow(x[1] - q[1], 2) + std::pow(x[2] - q[2], 2));
    };
    double hs[3], errs[3];
    int res[3] = {9, 17, 33};
    for (int k = 0; k < 3; ++k) {
        GridChart grid = GridChart::box(3, {}, 0.5, res[k]);
        auto op = assemble_operator(flat(3), grid);
        auto sol = solve_dirichlet(op, exact, {}, {1e-12, 50000});
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(sol.solution.values[i] - exact(grid.point(i))));
        hs[k] = grid.spacing();
        errs[k] = err;
    }
    EXPECT_GE(loglog_slope(hs, errs), 1.8);
    EXPECT_LT(errs[2], 1e-4);
}

TEST(Dirichlet, ManufacturedSolutionRecovered)
{
    auto g = perturbed_flat(3, 5);
    GridChart grid = GridChart::box(3, {}, 0.3, 9);
    auto op = assemble_operator(g, grid);
    auto u = sample(grid, smooth_u_value);
    auto rhs = op.matrix.multiply(u);
    std::vector<double> start = u;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!grid.on_boundary(i))
            start[i] = 0.0;
    const double tol = 1e-10;
    auto sol = solve_dirichlet(op, start, rhs, {tol, 50000});
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        err = std::max(err, std::abs(sol.solution.values[i] - u[i]));
    EXPECT_LE(err, 10 * tol * max_abs(u)) << sol.report.summary();
}

TEST(Dirichlet, DiscreteMaximumPrinciple)
{
    GridChart grid = GridChart::box(3, {}, 0.5, 17);
    auto op = assemble_operator(flat(3), grid);
    auto data = sample(grid, [](const Point& x) { return std::sin(5 * x[0]) * std::cos(3 * x[1]) + x[2]; });
    auto sol = solve_dirichlet(op, data);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.on_boundary(i)) {
            lo = std::min(lo, data[i]);
            hi = std::max(hi, data[i]);
        }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_GE(sol.solution.values[i], lo - 1e-12);
        EXPECT_LE(sol.solution.values[i], hi + 1e-12);
    }
}

TEST(Dirichlet, NonConvergenceThrows)
{
    GridChart grid = GridChart::box(3, {}, 0.5, 17);
    auto op = assemble_operator(flat(3), grid);
    EXPECT_THROW(solve_dirichlet(op, [](const Point& x) { return std::sin(9 * x[0]); }, {}, {1e-14, 2}),
                 SolverFailure);
}

TEST(Prescribed, FlatInteriorIsLinear)
{
    PrescribedRequest req;
    req.mode = PrescribedMode::Interior;
    req.sigma = {1.0, 0.0, 0.0};
    req.params.epsilon = 0.1;
    req.params.resolution = 17;
    auto out = prescribed_solution(flat(3), req);
    EXPECT_EQ(out.report.shrink_count, 0);
    EXPECT_LT(max_abs(std::vector<double>{out.gradient[0] - 1.0, out.gradient[1], out.gradient[2]}), 1e-8);
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        EXPECT_NEAR(out.f[i], 1.0, 1e-10);
        EXPECT_NEAR(out.value[i], out.grid.point(i)[0], 1e-10);
    }
}

TEST(Prescribed, PositiveUnitIsPositive)
{
    PrescribedRequest req;
    req.mode = PrescribedMode::PositiveUnit;
    req.center = {0.2, -0.1, 0.3};
    req.params.resolution = 17;
    auto out = prescribed_solution(perturbed_flat(3, 3), req);
    for (double v : out.f)
        EXPECT_GT(v, 0.0);
    EXPECT_DOUBLE_EQ(out.f[out.grid.center_index()], 1.0);
}

TEST(Prescribed, GradientErrorIsFirstOrderInEpsilon)
{
    auto g = conformally_flat(3, "(1+0.3*x1)^4");
    std::vector<double> sigma = {0.6, -0.8, 0.0};
    double eps[3] = {0.2, 0.1, 0.05}, errs[3];
    for (int k = 0; k < 3; ++k) {
        PrescribedRequest req;
        req.mode = PrescribedMode::Interior;
        req.sigma = sigma;
        req.params.epsilon = eps[k];
        auto out = prescribed_solution(g, req);
        double e = 0.0;
        for (int a = 0; a < 3; ++a)
            e = std::max(e, std::abs(out.gradient[a] - sigma[a]));
        errs[k] = e;
    }
    EXPECT_GE(loglog_slope(eps, errs), 0.9) << errs[0] << " " << errs[1] << " " << errs[2];
}

TEST(Prescribed, BoundaryNormalOnFlatHalfBox)
{
    PrescribedRequest req;
    req.mode = PrescribedMode::BoundaryNormal;
    req.params.resolution = 17;
    auto out = prescribed_solution(flat(3), req);
    ASSERT_TRUE(out.grid.half_space());
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        Point x = out.grid.point(i);
        EXPECT_NEAR(out.value[i], x[2], 1e-10);
        if (out.grid.multi(i)[2] == 0)
            EXPECT_EQ(out.value[i], 0.0);
    }
    EXPECT_NEAR(out.gradient[2], 1.0, 1e-12);
}

TEST(Prescribed, ShrinkLoop)
{
    ChartParams params;
    params.epsilon = 1.0;
    std::vector<double> tried;
    int shrinks = run_with_shrinking(params, [&](double eps) {
        tried.push_back(eps);
        if (eps > 0.3)
            throw SolverFailure("too large");
    });
    EXPECT_EQ(shrinks, 2);
    EXPECT_DOUBLE_EQ(tried.back(), 0.25);
    EXPECT_THROW(run_with_shrinking(params, [](double) { throw SolverFailure("never"); }), ConstructionFailure);
}
