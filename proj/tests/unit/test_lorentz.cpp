#include "confcoord/errors.hpp"
#include "confcoord/fit.hpp"
#include "confcoord/lorentz/wave_chart.hpp"
#include "confcoord/tensorcalc/curvature.hpp"
#include "confcoord/tensorcalc/expression.hpp"
#include "confcoord/tensorcalc/zoo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace confcoord;
using namespace confcoord::lorentz;
using namespace confcoord::tensorcalc;

namespace {

// u⁴ η with u = 1 − βt + γt², a conformally flat slab metric whose wave
// chart has f = (1 − βt)/u exactly.
MetricSpec pinched(double beta = 8.0, double gamma = 20.0)
{
    return MetricSpec("pinched", 3, Signature::Lorentzian, Box::cube(3, 10.0), [beta, gamma](std::span<const Jet> x) {
        Jet u = 1.0 - beta * x[0] + gamma * x[0] * x[0];
        Jet u4 = u * u * u * u;
        Jet z = x[0].constant_like(0.0);
        return std::vector<Jet>{-1.0 * u4, z, z, u4, z, u4};
    });
}

MetricSpec fast_light()
{
    return MetricSpec("fast", 3, Signature::Lorentzian, Box::cube(3, 10.0), [](std::span<const Jet> x) {
        Jet z = x[0].constant_like(0.0);
        return std::vector<Jet>{z - 4.0, z, z, z + 1.0, z, z + 1.0};
    });
}

MetricSpec shifted()
{
    return MetricSpec("shifted", 3, Signature::Lorentzian, Box::cube(3, 10.0), [](std::span<const Jet> x) {
        Jet z = x[0].constant_like(0.0);
        return std::vector<Jet>{z - 1.0, z + 0.1, z, z + 1.0, z, z + 1.0};
    });
}

double time_derivative(const ScalarFn& u, const Point& p)
{
    return u(jets::coordinates(3, 1, p)).derivative(0).value();
}

SpacetimeFn value_of(const ScalarFn& u)
{
    return [u](const Point& p) { return u(jets::coordinates(3, 0, p)).value(); };
}

struct Manufactured {
    MetricSpec g;
    ScalarFn u;
    double error(int resolution) const
    {
        auto slab = SlabChart::make(3, {}, 0.5, resolution, 0.125);
        auto exact = value_of(u);
        auto u0 = sample_slice(slab, 0.0, exact);
        auto u1 = sample_slice(slab, 0.0, [&](const Point& p) { return time_derivative(u, p); });
        WaveOptions opt;
        auto metric = g;
        auto fn = u;
        opt.source = [metric, fn](const Point& p) { return conformal_laplacian_apply(metric, fn, p); };
        return guarded_error(solve_cauchy_wave(g, u0, u1, slab, opt), exact);
    }
};

} // namespace

TEST(Slab, StepRatioAndCount)
{
    auto s = SlabChart::make(3, {0.1, 0.0, 0.2}, 0.5, 33, 0.125);
    EXPECT_EQ(s.steps, 8);
    EXPECT_NEAR(s.ratio(), 0.5, 1e-14);
    EXPECT_DOUBLE_EQ(s.t0, 0.1);
    EXPECT_DOUBLE_EQ(s.space.center()[1], 0.2);
    auto t = SlabChart::make(3, {}, 0.5, 33, 0.1, 0.3);
    EXPECT_LE(t.ratio(), 0.3);
    EXPECT_THROW(SlabChart::make(3, {}, 0.5, 33, 0.1, 0.6), ConfigError);
    EXPECT_THROW(SlabChart::make(3, {}, 0.5, 33, -0.1), ConfigError);
}

TEST(Wave, LinearInTimeIsExact)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.25);
    std::vector<double> u0(slab.space.size(), 0.0), u1(slab.space.size(), 1.0);
    auto u = solve_cauchy_wave(minkowski(3), u0, u1, slab);
    for (int m = 0; m <= slab.steps; ++m)
        for (std::size_t i = 0; i < slab.space.size(); ++i)
            ASSERT_NEAR(u.at(m, i), slab.time(m), 1e-15);
}

TEST(Wave, AffineDataPropagatesExactly)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.25);
    auto exact = [](const Point& p) { return 0.3 + 0.7 * p[1] - 1.1 * p[2] + 0.4 * p[0]; };
    auto u0 = sample_slice(slab, 0.0, exact);
    std::vector<double> u1(slab.space.size(), 0.4);
    auto u = solve_cauchy_wave(minkowski(3), u0, u1, slab);
    EXPECT_LE(guarded_error(u, exact), 1e-14);
}

TEST(Wave, PlaneWaveConvergesAtSecondOrder)
{
    auto exact = [](const Point& p) { return std::sin(p[1] - p[0]); };
    std::vector<double> hs, errs;
    for (int res : {17, 33, 65}) {
        auto slab = SlabChart::make(3, {}, 0.5, res, 0.125);
        auto u0 = sample_slice(slab, 0.0, exact);
        auto u1 = sample_slice(slab, 0.0, [](const Point& p) { return -std::cos(p[1] - p[0]); });
        hs.push_back(slab.h());
        errs.push_back(guarded_error(solve_cauchy_wave(minkowski(3), u0, u1, slab), exact));
    }
    EXPECT_GE(loglog_slope(hs, errs), 1.8);
}

TEST(Wave, ExactEdgeRemovesGuard)
{
    auto exact = [](const Point& p) { return std::sin(p[1] - p[0]) * std::cos(0.5 * p[2]) + p[0] * p[2]; };
    std::vector<double> hs, errs;
    for (int res : {17, 33}) {
        auto slab = SlabChart::make(3, {}, 0.5, res, 0.5);
        auto ufn = parse_scalar_expression("sin(x2-x1)*cos(0.5*x3)+x1*x3", 3);
        auto u0 = sample_slice(slab, 0.0, exact);
        auto u1 = sample_slice(slab, 0.0, [&](const Point& p) { return time_derivative(ufn, p); });
        WaveOptions opt;
        opt.boundary = exact;
        opt.source = [ufn](const Point& p) { return conformal_laplacian_apply(minkowski(3), ufn, p); };
        auto u = solve_cauchy_wave(minkowski(3), u0, u1, slab, opt);
        EXPECT_FALSE(u.guarded);
        hs.push_back(slab.h());
        errs.push_back(guarded_error(u, exact));
    }
    EXPECT_GE(loglog_slope(hs, errs), 1.8);
}

TEST(Wave, ManufacturedSolutionOnPerturbedMinkowski)
{
    Manufactured mf{perturbed_minkowski(3, 3, 0.05), parse_scalar_expression("sin(x2-0.8*x1)*exp(0.3*x3)+x1^2", 3)};
    std::vector<double> hs = {1.0 / 16, 1.0 / 32, 1.0 / 64}, errs;
    for (int res : {17, 33, 65})
        errs.push_back(mf.error(res));
    EXPECT_LT(errs.back(), 1e-4);
    EXPECT_GE(loglog_slope(hs, errs), 1.8);
}

TEST(Wave, GuardShrinksWithLevel)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    std::vector<double> z(slab.space.size(), 0.0);
    auto u = solve_cauchy_wave(minkowski(3), z, z, slab);
    std::size_t corner = 0;
    EXPECT_TRUE(u.in_guard(0, corner));
    EXPECT_FALSE(u.in_guard(1, corner));
    std::size_t c = slab.space.center_index();
    EXPECT_TRUE(u.in_guard(slab.steps, c));
}

TEST(Wave, CflViolation)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    std::vector<double> z(slab.space.size(), 0.0);
    EXPECT_THROW(solve_cauchy_wave(fast_light(), z, z, slab), ConfigError);
}

TEST(Wave, NonzeroShiftUnsupported)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    std::vector<double> z(slab.space.size(), 0.0);
    EXPECT_THROW(solve_cauchy_wave(shifted(), z, z, slab), UnsupportedError);
}

TEST(Wave, RiemannianMetricRejected)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    std::vector<double> z(slab.space.size(), 0.0);
    EXPECT_THROW(solve_cauchy_wave(flat(3), z, z, slab), PreconditionError);
}

TEST(Wave, RunawaySolutionDetected)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.25);
    std::vector<double> z(slab.space.size(), 0.0);
    WaveOptions opt;
    opt.source = [](const Point& p) { return std::exp(200.0 * p[0]); };
    EXPECT_THROW(solve_cauchy_wave(minkowski(3), z, z, slab, opt), InstabilityError);
}

TEST(Wave, QuotientInvarianceUnderCommonScale)
{
    auto g = perturbed_minkowski(3, 2, 0.05);
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    const std::size_t size = slab.space.size();
    std::vector<std::vector<double>> u0 = {std::vector<double>(size, 1.0), sample_slice(slab, 0, [](const Point& p) {
                                               return p[1];
                                           })};
    std::vector<std::vector<double>> u1 = {std::vector<double>(size, 0.0), std::vector<double>(size, 0.0)};
    auto base = solve_cauchy_waves(g, u0, u1, slab);
    for (double s : {2.0, 3.7}) {
        auto v0 = u0, v1 = u1;
        for (auto* set : {&v0, &v1})
            for (auto& f : *set)
                for (auto& x : f)
                    x *= s;
        auto scaled = solve_cauchy_waves(g, v0, v1, slab);
        for (int m = 0; m <= slab.steps; ++m)
            for (std::size_t i = 0; i < size; ++i) {
                double a = base.fields[1].at(m, i) / base.fields[0].at(m, i);
                double b = scaled.fields[1].at(m, i) / scaled.fields[0].at(m, i);
                if (s == 2.0)
                    ASSERT_EQ(a, b);
                else
                    ASSERT_NEAR(a, b, 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), 0.5));
            }
    }
}

TEST(WaveChart, MinkowskiIsIdentity)
{
    auto slab = SlabChart::make(3, {}, 0.5, 17, 0.125);
    auto cr = build_wave_chart(minkowski(3), slab);
    EXPECT_EQ(cr.halvings, 0);
    for (int m = 0; m <= slab.steps; ++m)
        for (std::size_t i = 0; i < slab.space.size(); ++i) {
            ASSERT_EQ(cr.f.at(m, i), 1.0);
            Point p = slab.point(m, i);
            ASSERT_NEAR(cr.z(0, m, i), p[0], 1e-15);
            ASSERT_NEAR(cr.z(1, m, i), p[1], 1e-14);
            ASSERT_NEAR(cr.z(2, m, i), p[2], 1e-14);
        }
    EXPECT_LE(cr.dz_error, 1e-13);
    EXPECT_LE(cr.dz_error_one_sided, 1e-12);
    EXPECT_LE(cr.gauge_residual, 1e-10);
}

TEST(WaveChart, SurfaceJacobianOnPerturbedMinkowski)
{
    auto g = perturbed_minkowski(3, 1, 0.05);
    std::vector<double> dts, one_sided;
    for (int res : {17, 33}) {
        auto cr = build_wave_chart(g, SlabChart::make(3, {}, 0.5, res, 0.125));
        EXPECT_LE(cr.dz_error, 1e-8);
        dts.push_back(cr.slab.dt);
        one_sided.push_back(cr.dz_error_one_sided);
    }
    EXPECT_GE(loglog_slope(dts, one_sided), 1.8);
}

TEST(WaveChart, GaugeResidualDecreasesUnderRefinement)
{
    std::vector<int> res = {17, 33};
    auto study = wave_refinement(perturbed_minkowski(3, 1, 0.05), {}, 0.5, 0.125, res);
    ASSERT_EQ(study.rows.size(), 2u);
    EXPECT_LT(study.rows[1].gauge_residual, study.rows[0].gauge_residual);
    EXPECT_GE(study.slope, 0.8);
}

TEST(WaveChart, ConformallyFlatChartMatchesClosedForm)
{
    auto g = pinched();
    auto slab = SlabChart::make(3, {}, 0.5, 33, 0.1);
    auto cr = build_wave_chart(g, slab);
    double err = 0.0;
    for (int m = 0; m <= cr.slab.steps; ++m)
        for (std::size_t i = 0; i < slab.space.size(); ++i)
            if (cr.f.in_guard(m, i)) {
                double t = slab.time(m);
                double u = 1.0 - 8.0 * t + 20.0 * t * t;
                err = std::max(err, std::abs(cr.f.at(m, i) - (1.0 - 8.0 * t) / u));
            }
    EXPECT_LT(err, 1e-3);
}

TEST(WaveChart, ShrinksDurationWhenFVanishes)
{
    auto cr = build_wave_chart(pinched(), SlabChart::make(3, {}, 0.5, 33, 0.4));
    EXPECT_EQ(cr.halvings, 2);
    EXPECT_GT(cr.min_f, 0.0);
    EXPECT_LE(cr.slab.duration(), 0.125);
}

TEST(WaveChart, GivesUpAfterThreeHalvings)
{
    EXPECT_THROW(build_wave_chart(pinched(), SlabChart::make(3, {}, 0.5, 33, 1.6)), ChartFailure);
}

TEST(WaveChart, FourDimensionsAtCoarseResolution)
{
    auto slab = SlabChart::make(4, {}, 0.5, 17, 0.125);
    auto cr = build_wave_chart(perturbed_minkowski(4, 5, 0.05), slab);
    EXPECT_LE(cr.dz_error, 1e-8);
    EXPECT_GT(cr.gauge_nodes, 0u);
    EXPECT_LT(cr.gauge_residual, 1e-2);
}
