#include "confcoord/tensorcalc/zoo.hpp"

#include "confcoord/errors.hpp"
#include "confcoord/tensorcalc/expression.hpp"

#include <cmath>
#include <memory>

namespace confcoord::tensorcalc {

namespace {

constexpr double kDomainHalfWidth = 10.0;

struct Wave {
    Point k{};
    double phase = 0.0;
};

Wave random_wave(Rng& rng, int n, double kmax)
{
    Wave w;
    for (int a = 0; a < n; ++a)
        w.k[a] = rng.uniform(-kmax, kmax);
    w.phase = rng.uniform(0.0, 2.0 * M_PI);
    return w;
}

Jet wave_value(const Wave& w, std::span<const Jet> x, int n)
{
    Jet arg = x[0].constant_like(w.phase);
    for (int a = 0; a < n; ++a)
        arg += w.k[a] * x[a];
    return sin(arg);
}

/// Symmetric matrix field Σ_m A^m sin(k^m·x + φ^m) + B exp(-|x - x0|²) on a
/// block of coordinates, scaled so its spectral norm never exceeds `amplitude`.
struct MatrixField {
    int n = 0;    ///< coordinates the field depends on
    int size = 0; ///< matrix size
    std::vector<Wave> waves;
    std::vector<std::vector<double>> coeffs; ///< per term, upper triangle
    Point bump_center{};
    double scale = 0.0;

    MatrixField(Rng& rng, int coords, int msize, double amplitude) : n(coords), size(msize)
    {
        const int terms = 3;
        double bound = 0.0;
        for (int m = 0; m <= terms; ++m) {
            if (m < terms)
                waves.push_back(random_wave(rng, n, 2.0));
            std::vector<double> c;
            double frob = 0.0;
            for (int a = 0; a < size; ++a)
                for (int b = a; b < size; ++b) {
                    double v = rng.uniform(-1.0, 1.0);
                    c.push_back(v);
                    frob += (a == b ? 1.0 : 2.0) * v * v;
                }
            bound += std::sqrt(frob);
            coeffs.push_back(std::move(c));
        }
        for (int a = 0; a < n; ++a)
            bump_center[a] = rng.uniform(-0.5, 0.5);
        scale = amplitude / bound;
    }

    std::vector<Jet> eval(std::span<const Jet> x) const
    {
        std::vector<Jet> basis;
        for (const auto& w : waves)
            basis.push_back(wave_value(w, x, n));
        Jet r2 = x[0].constant_like(0.0);
        for (int a = 0; a < n; ++a) {
            Jet d = x[a] - bump_center[a];
            r2 += d * d;
        }
        basis.push_back(exp(-r2));
        std::vector<Jet> out;
        for (std::size_t i = 0; i < coeffs[0].size(); ++i) {
            Jet s = x[0].constant_like(0.0);
            for (std::size_t m = 0; m < basis.size(); ++m)
                s += coeffs[m][i] * basis[m];
            out.push_back(scale * s);
        }
        return out;
    }
};

Jet affine_sum(std::span<const Jet> x, const Point& slope, double offset, int n)
{
    Jet s = x[0].constant_like(offset);
    for (int a = 0; a < n; ++a)
        s += slope[a] * x[a];
    return s;
}

} // namespace

MetricSpec flat(int n)
{
    ComponentFn fn = [n](std::span<const Jet> x) {
        std::vector<Jet> c;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                c.push_back(x[0].constant_like(a == b ? 1.0 : 0.0));
        return c;
    };
    return MetricSpec("flat", n, Signature::Riemannian, Box::cube(n, kDomainHalfWidth), fn);
}

MetricSpec conformally_flat(int n, ScalarFn c, const std::string& name)
{
    return conformal_rescale(flat(n), std::move(c), name);
}

MetricSpec conformally_flat(int n, const std::string& expression)
{
    return conformally_flat(n, parse_scalar_expression(expression, n), "conformally-flat(" + expression + ")");
}

MetricSpec sphere_stereographic(int n)
{
    ScalarFn c = [n](std::span<const Jet> x) {
        Jet r2 = x[0] * x[0];
        for (int a = 1; a < n; ++a)
            r2 += x[a] * x[a];
        return 4.0 * pow(1.0 + r2, -2.0);
    };
    return conformally_flat(n, c, "sphere-stereographic");
}

MetricSpec perturbed_flat(int n, std::uint64_t seed, double amplitude)
{
    if (!(amplitude >= 0.0 && amplitude <= 0.1))
        throw ArgumentError("perturbed-flat amplitude must lie in [0, 0.1]");
    Rng rng(seed);
    auto field = std::make_shared<MatrixField>(rng, n, n, amplitude);
    ComponentFn fn = [n, field](std::span<const Jet> x) {
        auto h = field->eval(x);
        int k = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b, ++k)
                if (a == b)
                    h[k] += 1.0;
        return h;
    };
    return MetricSpec("perturbed-flat(" + std::to_string(seed) + ")", n, Signature::Riemannian,
                      Box::cube(n, kDomainHalfWidth), fn);
}

MetricSpec minkowski(int n)
{
    ComponentFn fn = [n](std::span<const Jet> x) {
        std::vector<Jet> c;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                c.push_back(x[0].constant_like(a != b ? 0.0 : (a == 0 ? -1.0 : 1.0)));
        return c;
    };
    return MetricSpec("minkowski", n, Signature::Lorentzian, Box::cube(n, kDomainHalfWidth), fn);
}

MetricSpec perturbed_minkowski(int n, std::uint64_t seed, double amplitude)
{
    if (!(amplitude >= 0.0 && amplitude <= 0.1))
        throw ArgumentError("perturbed-minkowski amplitude must lie in [0, 0.1]");
    Rng rng(seed);
    auto lapse = std::make_shared<MatrixField>(rng, n, 1, amplitude);
    auto spatial = std::make_shared<MatrixField>(rng, n, n - 1, amplitude);
    ComponentFn fn = [n, lapse, spatial](std::span<const Jet> x) {
        Jet s = lapse->eval(x)[0];
        auto h = spatial->eval(x);
        std::vector<Jet> c;
        int k = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                if (a == 0)
                    c.push_back(b == 0 ? -1.0 - s : x[0].constant_like(0.0));
                else
                    c.push_back(a == b ? 1.0 + h[k++] : h[k++]);
            }
        return c;
    };
    return MetricSpec("perturbed-minkowski(" + std::to_string(seed) + ")", n, Signature::Lorentzian,
                      Box::cube(n, kDomainHalfWidth), fn);
}

std::vector<std::string> zoo_names()
{
    return {"flat", "conformally-flat", "sphere-stereographic", "perturbed-flat", "minkowski",
            "perturbed-minkowski"};
}

MetricSpec make_metric(const MetricRequest& r)
{
    if (r.dim != 3 && r.dim != 4)
        throw ConfigError("metric.dim must be 3 or 4");
    try {
        if (r.kind == "flat")
            return flat(r.dim);
        if (r.kind == "conformally-flat") {
            if (r.expression.empty())
                throw ConfigError("conformally-flat metric needs metric.factor");
            return conformally_flat(r.dim, r.expression);
        }
        if (r.kind == "sphere-stereographic")
            return sphere_stereographic(r.dim);
        if (r.kind == "perturbed-flat")
            return perturbed_flat(r.dim, r.seed, r.amplitude < 0.0 ? 0.1 : r.amplitude);
        if (r.kind == "minkowski")
            return minkowski(r.dim);
        if (r.kind == "perturbed-minkowski")
            return perturbed_minkowski(r.dim, r.seed, r.amplitude < 0.0 ? 0.05 : r.amplitude);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown metric '" + r.kind + "'");
}

ScalarFn random_scalar(int n, std::uint64_t seed, double amplitude)
{
    Rng rng(seed);
    std::vector<Wave> waves;
    std::vector<double> amps;
    for (int m = 0; m < 4; ++m) {
        waves.push_back(random_wave(rng, n, 2.0));
        amps.push_back(amplitude * rng.uniform(-1.0, 1.0) / 4.0);
    }
    Point slope{};
    for (int a = 0; a < n; ++a)
        slope[a] = amplitude * rng.uniform(-0.5, 0.5);
    double offset = amplitude * rng.uniform(-0.5, 0.5);
    return [n, waves, amps, slope, offset](std::span<const Jet> x) {
        Jet s = affine_sum(x, slope, offset, n);
        for (std::size_t m = 0; m < waves.size(); ++m)
            s += amps[m] * wave_value(waves[m], x, n);
        return s;
    };
}

ScalarFn random_positive_scalar(int n, std::uint64_t seed, double amplitude)
{
    Rng rng(seed);
    std::vector<Wave> waves;
    std::vector<double> amps;
    for (int m = 0; m < 3; ++m) {
        waves.push_back(random_wave(rng, n, 1.5));
        amps.push_back(amplitude * rng.uniform(-1.0, 1.0) / 3.0);
    }
    return [n, waves, amps](std::span<const Jet> x) {
        Jet s = x[0].constant_like(0.0);
        for (std::size_t m = 0; m < waves.size(); ++m)
            s += amps[m] * wave_value(waves[m], x, n);
        return exp(s);
    };
}

Point random_point(Rng& rng, int n, double half_width)
{
    Point p{};
    for (int a = 0; a < n; ++a)
        p[a] = rng.uniform(-half_width, half_width);
    return p;
}

} // namespace confcoord::tensorcalc
