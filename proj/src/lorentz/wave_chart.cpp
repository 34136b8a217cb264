#include "confcoord/lorentz/wave_chart.hpp"

#include "confcoord/elliptic/stencil.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/fit.hpp"
#include "confcoord/parallel.hpp"
#include "confcoord/tensorcalc/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::lorentz {

namespace {

std::vector<double> quotient_level(const SpacetimeField& num, const SpacetimeField& den, int level)
{
    std::vector<double> z(num.levels[level].size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = num.at(level, i) / den.at(level, i);
    return z;
}

WaveChartResult solve_chart(const MetricSpec& g, const SlabChart& slab)
{
    const int n = g.dim();
    const std::size_t size = slab.space.size();
    Point p{};
    p[0] = slab.t0;
    for (int a = 1; a < n; ++a)
        p[a] = slab.space.center()[a - 1];

    std::vector<std::vector<double>> u0, u1;
    u0.emplace_back(size, 1.0);
    u1.emplace_back(size, 0.0);
    u0.emplace_back(size, 0.0);
    u1.emplace_back(size, 1.0);
    for (int k = 1; k < n; ++k) {
        std::vector<double> x(size);
        for (std::size_t i = 0; i < size; ++i)
            x[i] = slab.space.point(i)[k - 1] - p[k];
        u0.push_back(std::move(x));
        u1.emplace_back(size, 0.0);
    }
    auto sol = solve_cauchy_waves(g, u0, u1, slab);

    WaveChartResult cr;
    cr.metric = g;
    cr.center = p;
    cr.slab = slab;
    cr.start = std::move(sol.start);
    cr.max_speed = sol.max_speed;
    cr.f = std::move(sol.fields[0]);
    for (int k = 0; k < n; ++k)
        cr.fk.push_back(std::move(sol.fields[k + 1]));

    cr.min_f = INFINITY;
    for (int m = 0; m <= slab.steps; ++m)
        for (std::size_t i = 0; i < size; ++i)
            if (cr.f.in_guard(m, i))
                cr.min_f = std::min(cr.min_f, cr.f.at(m, i));
    if (!(cr.min_f > 0.0))
        throw ChartFailure("f is not positive on the guarded slab");
    return cr;
}

// Γ_a(g̃) − 2∂_{Z^a} log f at one spacetime node, all derivatives from the
// three levels m−1, m, m+1.
double node_gauge_residual(const WaveChartResult& cr, const std::vector<std::vector<double>>* z,
                           const std::vector<double>* logf, int level, std::size_t i)
{
    const int n = cr.dim();
    const GridChart& sg = cr.slab.space;
    const double dt = cr.slab.dt;

    auto first = [&](const std::vector<double>* lv, int a) {
        if (a == 0)
            return (lv[2][i] - lv[0][i]) / (2.0 * dt);
        return elliptic::derivative4(sg, lv[1], i, a - 1);
    };
    auto second = [&](const std::vector<double>* lv, int a, int b) {
        if (a == 0 && b == 0)
            return (lv[2][i] - 2.0 * lv[1][i] + lv[0][i]) / (dt * dt);
        if (a == 0 || b == 0) {
            int s = (a == 0 ? b : a) - 1;
            return (elliptic::derivative4(sg, lv[2], i, s) - elliptic::derivative4(sg, lv[0], i, s)) / (2.0 * dt);
        }
        return elliptic::second_derivative4(sg, lv[1], i, a - 1, b - 1);
    };

    Point x = cr.slab.point(level, i);
    auto geo = tensorcalc::geometry_from_jets(cr.metric.jets(x, 2), cr.metric.signature(), tensorcalc::Depth::Basic);
    Eigen::MatrixXd gx(n, n), ginv(n, n), jac(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            gx(a, b) = geo.g[a * n + b].value();
            ginv(a, b) = geo.ginv[a * n + b].value();
        }
    Eigen::VectorXd gamma_tilde(n), dlogf(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> lv[3] = {z[0][k], z[1][k], z[2][k]};
        double box = 0.0;
        for (int a = 0; a < n; ++a) {
            jac(k, a) = first(lv, a);
            for (int b = 0; b < n; ++b)
                box += ginv(a, b) * second(lv, a, b);
        }
        double transport = 0.0;
        for (int b = 0; b < n; ++b)
            transport += geo.gamma_up[b].value() * jac(k, b);
        gamma_tilde[k] = -(box - transport);
    }
    for (int a = 0; a < n; ++a)
        dlogf[a] = first(logf, a);
    Eigen::MatrixXd jinv = jac.inverse();
    Eigen::MatrixXd gt = jinv.transpose() * gx * jinv;
    Eigen::VectorXd lower = gt * gamma_tilde;
    Eigen::VectorXd dlogf_z = jinv.transpose() * dlogf;
    return (lower - 2.0 * dlogf_z).cwiseAbs().maxCoeff();
}

void gauge_check(WaveChartResult& cr)
{
    const int n = cr.dim();
    const std::size_t size = cr.slab.space.size();
    cr.gauge_residual = 0.0;
    cr.gauge_nodes = 0;
    std::vector<std::vector<double>> z[3];
    std::vector<double> logf[3];
    auto load = [&](int slot, int level) {
        z[slot].clear();
        for (int k = 0; k < n; ++k)
            z[slot].push_back(quotient_level(cr.fk[k], cr.f, level));
        logf[slot].resize(size);
        for (std::size_t i = 0; i < size; ++i)
            logf[slot][i] = std::log(cr.f.at(level, i));
    };
    for (int m = 1; m < cr.slab.steps; ++m) {
        load(0, m - 1);
        load(1, m);
        load(2, m + 1);
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < size; ++i)
            if (cr.f.in_guard(m + 1, i, 2) && cr.slab.space.boundary_distance(i) >= 2)
                nodes.push_back(i);
        std::vector<double> r(nodes.size());
        parallel_for(nodes.size(), [&](std::size_t j) { r[j] = node_gauge_residual(cr, z, logf, m, nodes[j]); });
        for (double v : r)
            cr.gauge_residual = std::max(cr.gauge_residual, v);
        cr.gauge_nodes += nodes.size();
    }
}

void surface_check(WaveChartResult& cr)
{
    const int n = cr.dim();
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    cr.dz_error = 0.0;
    cr.dz_error_one_sided = 0.0;
    bool has_second = cr.slab.steps >= 2;
    for (std::size_t i = 0; i < cr.slab.space.size(); ++i) {
        if (!cr.f.in_guard(1, i))
            continue;
        auto j = surface_jacobian(cr, i);
        cr.dz_error = std::max(cr.dz_error, (j.central - id).cwiseAbs().maxCoeff());
        if (has_second && cr.f.in_guard(2, i))
            cr.dz_error_one_sided = std::max(cr.dz_error_one_sided, (j.one_sided - id).cwiseAbs().maxCoeff());
    }
}

} // namespace

SurfaceJacobian surface_jacobian(const WaveChartResult& cr, std::size_t i)
{
    const int n = cr.dim();
    const GridChart& sg = cr.slab.space;
    const double dt = cr.slab.dt;
    const auto& st = cr.start;
    auto central = [&](const SpacetimeField& u) {
        double fwd = st.plus[i] * (u.at(1, i) - u.at(0, i));
        double back = st.minus[i] * (u.at(0, i) - u.ghost[i]);
        return (fwd + back) / (2.0 * dt * st.center[i]);
    };
    auto one_sided = [&](const SpacetimeField& u) {
        if (cr.slab.steps < 2)
            return std::nan("");
        return (-3.0 * u.at(0, i) + 4.0 * u.at(1, i) - u.at(2, i)) / (2.0 * dt);
    };
    SurfaceJacobian out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
    const double f0 = cr.f.at(0, i);
    const double ft_c = central(cr.f), ft_o = one_sided(cr.f);
    for (int k = 0; k < n; ++k) {
        const auto& u = cr.fk[k];
        double uk = u.at(0, i);
        double ut_c = central(u), ut_o = one_sided(u);
        out.central(k, 0) = (ut_c * f0 - uk * ft_c) / (f0 * f0);
        out.one_sided(k, 0) = (ut_o * f0 - uk * ft_o) / (f0 * f0);
        for (int a = 1; a < n; ++a) {
            double du = elliptic::derivative4(sg, u.levels[0], i, a - 1);
            double df = elliptic::derivative4(sg, cr.f.levels[0], i, a - 1);
            double v = (du * f0 - uk * df) / (f0 * f0);
            out.central(k, a) = v;
            out.one_sided(k, a) = v;
        }
    }
    return out;
}

WaveChartResult build_wave_chart(const MetricSpec& g, const SlabChart& slab)
{
    SlabChart current = slab;
    for (int halving = 0;; ++halving) {
        try {
            WaveChartResult cr = solve_chart(g, current);
            cr.halvings = halving;
            surface_check(cr);
            gauge_check(cr);
            return cr;
        } catch (const ChartFailure& e) {
            if (halving == kMaxDurationHalvings || current.steps < 2)
                throw ChartFailure(std::string(e.what()) + " after " + std::to_string(halving) +
                                   " duration halvings");
            current.steps = (current.steps + 1) / 2;
        }
    }
}

WaveRefinementStudy wave_refinement(const MetricSpec& g, const Point& center, double half_width, double duration,
                                    std::span<const int> resolutions, double ratio)
{
    WaveRefinementStudy study;
    std::vector<double> hs, rs;
    for (int res : resolutions) {
        auto slab = SlabChart::make(g.dim(), center, half_width, res, duration, ratio);
        auto cr = build_wave_chart(g, slab);
        study.rows.push_back({cr.slab.h(), cr.slab.dt, cr.gauge_residual, cr.dz_error, cr.dz_error_one_sided});
        hs.push_back(cr.slab.h());
        rs.push_back(cr.gauge_residual);
    }
    bool positive = std::all_of(rs.begin(), rs.end(), [](double v) { return v > 0.0; });
    study.slope = positive && rs.size() >= 2 ? loglog_slope(hs, rs) : 0.0;
    return study;
}

} // namespace confcoord::lorentz
