#include "confcoord/lorentz/wave.hpp"

#include "confcoord/elliptic/operator.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"
#include "confcoord/tensorcalc/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::lorentz {

namespace {

constexpr double kShiftTolerance = 1e-14;

} // namespace

SlabChart SlabChart::make(int n, const Point& center, double half_width, int resolution, double duration,
                          double ratio)
{
    if (n < 2 || n > jets::kMaxDim)
        throw ConfigError("slab dimension out of range");
    if (!(duration > 0.0))
        throw ConfigError("slab duration must be positive");
    if (!(ratio > 0.0) || ratio > kMaxStepRatio)
        throw ConfigError("slab step ratio must lie in (0, 0.5]");
    Point spatial{};
    for (int a = 1; a < n; ++a)
        spatial[a - 1] = center[a];
    SlabChart s;
    try {
        s.space = GridChart::box(n - 1, spatial, half_width, resolution);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("slab grid: ") + e.what());
    }
    s.t0 = center[0];
    s.steps = std::max(1, static_cast<int>(std::ceil(duration / (ratio * s.space.spacing()) - 1e-9)));
    s.dt = duration / s.steps;
    return s;
}

Point SlabChart::point(int level, std::size_t node) const
{
    Point x = space.point(node);
    Point p{};
    p[0] = time(level);
    for (int a = 0; a + 1 < dim(); ++a)
        p[a + 1] = x[a];
    return p;
}

bool SpacetimeField::in_guard(int level, std::size_t node, int margin) const
{
    if (!guarded)
        return true;
    return slab.space.boundary_distance(node) >= level + margin;
}

std::vector<double> sample_slice(const SlabChart& slab, double t, const SpacetimeFn& u)
{
    std::vector<double> out(slab.space.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        Point p = slab.point(0, i);
        p[0] = t;
        out[i] = u(p);
    }
    return out;
}

double guarded_error(const SpacetimeField& field, const SpacetimeFn& exact, int margin)
{
    double err = 0.0;
    const SlabChart& s = field.slab;
    for (int m = 0; m <= s.steps; ++m)
        for (std::size_t i = 0; i < s.space.size(); ++i)
            if (field.in_guard(m, i, margin))
                err = std::max(err, std::abs(field.at(m, i) - exact(s.point(m, i))));
    return err;
}

namespace {

struct LevelSample {
    /// |g|^{1/2}(−g^{00}).
    std::vector<double> time_coeff;
    /// Largest N/√λ_min(γ) seen.
    double speed = 0.0;
};

Eigen::MatrixXd checked_values(const MetricSpec& g, const Point& p)
{
    const int n = g.dim();
    Eigen::MatrixXd m = g.values(p);
    g.validate(m);
    for (int a = 1; a < n; ++a)
        if (std::abs(m(0, a)) > kShiftTolerance)
            throw UnsupportedError("wave solver needs a metric with vanishing shift g_0i");
    return m;
}

double characteristic_speed(const Eigen::MatrixXd& m)
{
    const auto n = m.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.bottomRightCorner(n - 1, n - 1));
    double lmin = es.eigenvalues().minCoeff();
    return std::sqrt(-m(0, 0) / lmin);
}

LevelSample sample_time_coefficient(const MetricSpec& g, const SlabChart& slab, double t)
{
    LevelSample s;
    const std::size_t size = slab.space.size();
    s.time_coeff.resize(size);
    std::vector<double> speed(size);
    parallel_for(size, [&](std::size_t i) {
        Point p = slab.point(0, i);
        p[0] = t;
        Eigen::MatrixXd m = checked_values(g, p);
        double vol = std::sqrt(std::abs(m.determinant()));
        s.time_coeff[i] = vol * -m.inverse()(0, 0);
        speed[i] = characteristic_speed(m);
    });
    s.speed = *std::max_element(speed.begin(), speed.end());
    return s;
}

/// K u = −∂_i(|g|^{1/2} g^{ij} ∂_j u) + |g|^{1/2} c_n R u on the slice at t.
elliptic::DiscreteOperator spatial_operator(const MetricSpec& g, const SlabChart& slab, double t,
                                            std::vector<double>& volume)
{
    const int n = g.dim();
    const int d = n - 1;
    const std::size_t size = slab.space.size();
    const double cn = tensorcalc::conformal_coupling(n);
    elliptic::CoefficientField c;
    c.dim = d;
    c.flux.assign(size * d * d, 0.0);
    c.inv_volume.assign(size, 1.0);
    c.potential.assign(size, 0.0);
    volume.assign(size, 0.0);
    parallel_for(size, [&](std::size_t i) {
        Point p = slab.point(0, i);
        p[0] = t;
        checked_values(g, p);
        auto geo = tensorcalc::geometry_from_jets(g.jets(p, 2), g.signature(), tensorcalc::Depth::Basic);
        Eigen::MatrixXd m(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                m(a, b) = geo.g[a * n + b].value();
        double vol = std::sqrt(std::abs(m.determinant()));
        Eigen::MatrixXd inv = m.inverse();
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                c.flux[(i * d + a) * d + b] = vol * inv(a + 1, b + 1);
        c.potential[i] = vol * cn * geo.scalar.value();
        volume[i] = vol;
    });
    return elliptic::assemble_from_coefficients(slab.space, c);
}

void require_stable_ratio(const SlabChart& slab, double speed)
{
    const int d = slab.dim() - 1;
    double limit = 1.0 / std::sqrt(static_cast<double>(d));
    if (speed * slab.ratio() > limit)
        throw ConfigError("CFL violation: characteristic speed " + std::to_string(speed) + " times step ratio " +
                          std::to_string(slab.ratio()) + " exceeds " + std::to_string(limit));
}

double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace

WaveSolution solve_cauchy_waves(const MetricSpec& g, std::span<const std::vector<double>> u0,
                                std::span<const std::vector<double>> u1, const SlabChart& slab,
                                const WaveOptions& options)
{
    const int n = g.dim();
    if (g.signature() != tensorcalc::Signature::Lorentzian)
        throw PreconditionError("wave solver needs a Lorentzian metric");
    if (slab.dim() != n)
        throw DimensionError("slab and metric dimensions differ");
    if (u0.size() != u1.size() || u0.empty())
        throw ArgumentError("each field needs both Cauchy data");
    if (slab.ratio() > kMaxStepRatio * (1.0 + 1e-12))
        throw ConfigError("slab step ratio exceeds 0.5");
    const std::size_t size = slab.space.size();
    const std::size_t count = u0.size();
    for (std::size_t k = 0; k < count; ++k)
        if (u0[k].size() != size || u1[k].size() != size)
            throw ArgumentError("Cauchy data size does not match the slab grid");
    for (double t : {slab.t0, slab.t0 + slab.duration()}) {
        Point p = slab.point(0, 0);
        p[0] = t;
        g.require_in_domain(p);
        Point q = slab.point(0, size - 1);
        q[0] = t;
        g.require_in_domain(q);
    }

    const double dt = slab.dt;
    WaveSolution out;
    LevelSample minus = sample_time_coefficient(g, slab, slab.t0 - 0.5 * dt);
    LevelSample center = sample_time_coefficient(g, slab, slab.t0);
    LevelSample plus = sample_time_coefficient(g, slab, slab.t0 + 0.5 * dt);
    out.max_speed = std::max({minus.speed, center.speed, plus.speed});
    require_stable_ratio(slab, out.max_speed);
    out.start = {minus.time_coeff, center.time_coeff, plus.time_coeff};

    auto source_at = [&](int level, const std::vector<double>& volume, std::vector<double>& s) {
        s.assign(size, 0.0);
        if (!options.source)
            return;
        for (std::size_t i = 0; i < size; ++i)
            s[i] = volume[i] * options.source(slab.point(level, i));
    };
    auto inject = [&](int level, std::vector<double>& u, std::size_t k) {
        for (std::size_t i = 0; i < size; ++i) {
            if (!slab.space.on_boundary(i))
                continue;
            u[i] = options.boundary ? options.boundary(slab.point(level, i))
                                    : u0[k][i] + (slab.time(level) - slab.t0) * u1[k][i];
        }
    };

    out.fields.resize(count);
    std::vector<double> bound(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto& f = out.fields[k];
        f.slab = slab;
        f.guarded = !options.boundary;
        f.levels.assign(slab.steps + 1, std::vector<double>(size));
        f.levels[0] = u0[k];
        bound[k] = std::max({max_abs(u0[k]), max_abs(u1[k]) * slab.duration(), 1.0});
    }

    std::vector<double> volume, rhs;
    auto op = spatial_operator(g, slab, slab.t0, volume);
    source_at(0, volume, rhs);
    for (std::size_t k = 0; k < count; ++k) {
        auto& f = out.fields[k];
        auto ku = elliptic::apply_interior(op, u0[k]);
        f.ghost.resize(size);
        auto& next = f.levels[1];
        for (std::size_t i = 0; i < size; ++i) {
            double s = dt * dt * (rhs[i] - ku[i]);
            double flux = 2.0 * dt * center.time_coeff[i] * u1[k][i];
            next[i] = u0[k][i] + (flux + s) / (2.0 * plus.time_coeff[i]);
            f.ghost[i] = u0[k][i] - (flux - s) / (2.0 * minus.time_coeff[i]);
        }
        inject(1, next, k);
    }

    LevelSample below = plus;
    for (int m = 1; m < slab.steps; ++m) {
        LevelSample above = sample_time_coefficient(g, slab, slab.time(m) + 0.5 * dt);
        out.max_speed = std::max(out.max_speed, above.speed);
        require_stable_ratio(slab, out.max_speed);
        op = spatial_operator(g, slab, slab.time(m), volume);
        source_at(m, volume, rhs);
        for (std::size_t k = 0; k < count; ++k) {
            auto& f = out.fields[k];
            const auto& cur = f.levels[m];
            const auto& prev = f.levels[m - 1];
            auto& next = f.levels[m + 1];
            auto ku = elliptic::apply_interior(op, cur);
            for (std::size_t i = 0; i < size; ++i) {
                double back = below.time_coeff[i] * (cur[i] - prev[i]);
                next[i] = cur[i] + (back + dt * dt * (rhs[i] - ku[i])) / above.time_coeff[i];
            }
            inject(m + 1, next, k);
            double norm = max_abs(next);
            if (!std::isfinite(norm) || norm > kInstabilityGrowth * bound[k])
                throw InstabilityError("wave solution grew beyond 1e6 times its data at level " +
                                       std::to_string(m + 1));
        }
        below = std::move(above);
    }
    return out;
}

SpacetimeField solve_cauchy_wave(const MetricSpec& g, std::span<const double> u0, std::span<const double> u1,
                                 const SlabChart& slab, const WaveOptions& options)
{
    std::vector<std::vector<double>> a{std::vector<double>(u0.begin(), u0.end())};
    std::vector<std::vector<double>> b{std::vector<double>(u1.begin(), u1.end())};
    return std::move(solve_cauchy_waves(g, a, b, slab, options).fields[0]);
}

} // namespace confcoord::lorentz
