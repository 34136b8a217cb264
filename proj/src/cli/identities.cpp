#include "common.hpp"
#include "confcoord/charts/gauge.hpp"
#include "confcoord/conformalmaps/mobius.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/tensorcalc/curvature.hpp"
#include "confcoord/tensorcalc/expression.hpp"
#include "confcoord/tensorcalc/zoo.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::cli {

using namespace tensorcalc;
using detail::Stopwatch;
using detail::stream_seed;

namespace {

double value_at(const ScalarFn& f, int n, const Point& x) { return f(jets::coordinates(n, 0, x)).value(); }

double max_abs(const Tensor<double>& t)
{
    double m = 0.0;
    for (double v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

/// max_i |a_i − s·b_i| / max(s·max|b|, floor).
double weighted_difference(const Tensor<double>& a, const Tensor<double>& b, double s)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - s * b[i]));
    return d / std::max(std::abs(s) * max_abs(b), 1e-300);
}

double covariance(std::uint64_t seed, int n, int samples)
{
    Rng rng(stream_seed(seed, 10 + n));
    double worst = 0.0;
    const double w = (n - 2.0) / 4.0;
    for (int i = 0; i < samples; ++i) {
        std::uint64_t base = stream_seed(seed, 1000 * n + i);
        MetricSpec g = perturbed_flat(n, base, 0.1);
        ScalarFn c = random_positive_scalar(n, base + 1, 0.5);
        ScalarFn u = random_scalar(n, base + 2);
        Point x = random_point(rng, n, 1.0);
        ScalarFn cu = [c, u, w](std::span<const Jet> y) { return pow(c(y), w) * u(y); };
        double lhs = conformal_laplacian_apply(conformal_rescale(g, c), u, x);
        double rhs = std::pow(value_at(c, n, x), -(n + 2.0) / 4.0) * conformal_laplacian_apply(g, cu, x);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
    }
    return worst;
}

double yamabe_random(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 20));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        int n = i % 2 == 0 ? 3 : 4;
        std::uint64_t base = stream_seed(seed, 2000 + i);
        auto r = yamabe_scaling_residual(perturbed_flat(n, base, 0.1), random_positive_scalar(n, base + 1, 0.5),
                                         random_point(rng, n, 1.0));
        worst = std::max(worst, r.relative());
    }
    return worst;
}

double yamabe_flat(std::uint64_t seed)
{
    Rng rng(stream_seed(seed, 21));
    ScalarFn f = parse_scalar_expression("1 + 0.3*x1", 3);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        worst = std::max(worst, std::abs(yamabe_scaling_residual(flat(3), f, random_point(rng, 3, 1.0)).residual));
    return worst;
}

double bach_forms(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 30));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto cmp = bach_two_ways(perturbed_flat(4, stream_seed(seed, 3000 + i), 0.1), random_point(rng, 4, 1.0));
        worst = std::max(worst, cmp.relative_difference);
    }
    return worst;
}

struct Weights {
    double weyl = 0.0;
    double cotton = 0.0;
    double bach = 0.0;
};

Weights conformal_weights(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 40));
    Weights w;
    for (int i = 0; i < samples; ++i) {
        std::uint64_t base = stream_seed(seed, 4000 + i);
        ScalarFn c = random_positive_scalar(4, base, 0.5);
        MetricSpec g4 = perturbed_flat(4, base + 1, 0.1);
        Point x = random_point(rng, 4, 1.0);
        double cv = value_at(c, 4, x);
        auto b = curvature_bundle(g4, x, Depth::Full, 4);
        auto bc = curvature_bundle(conformal_rescale(g4, c), x, Depth::Full, 4);
        w.weyl = std::max(w.weyl, weighted_difference(bc.weyl, b.weyl, cv));
        w.bach = std::max(w.bach, weighted_difference(bc.bach, b.bach, 1.0 / cv));

        ScalarFn c3 = random_positive_scalar(3, base + 2, 0.5);
        MetricSpec g3 = perturbed_flat(3, base + 3, 0.1);
        Point x3 = random_point(rng, 3, 1.0);
        auto k = curvature_bundle(g3, x3, Depth::Full, 3);
        auto kc = curvature_bundle(conformal_rescale(g3, c3), x3, Depth::Full, 3);
        w.cotton = std::max(w.cotton, weighted_difference(kc.cotton, k.cotton, 1.0));
    }
    return w;
}

double christoffel_routes(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 50));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        int n = i % 2 == 0 ? 3 : 4;
        auto r = christoffel(perturbed_flat(n, stream_seed(seed, 5000 + i), 0.1), random_point(rng, n, 1.0));
        worst = std::max(worst, r.route_discrepancy);
    }
    return worst;
}

struct Algebraic {
    double bianchi = 0.0;
    double weyl_trace = 0.0;
};

Algebraic algebraic_identities(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 60));
    Algebraic out;
    for (int i = 0; i < samples; ++i) {
        int n = i % 2 == 0 ? 3 : 4;
        auto b = curvature_bundle(perturbed_flat(n, stream_seed(seed, 6000 + i), 0.1), random_point(rng, n, 1.0),
                                  Depth::Basic, 2);
        const auto& R = b.riemann;
        double scale = std::max(max_abs(R), 1e-300);
        double bianchi = 0.0, trace = 0.0;
        for (int a = 0; a < n; ++a)
            for (int bb = 0; bb < n; ++bb)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        bianchi = std::max(bianchi, std::abs(R(a, bb, c, d) + R(a, c, d, bb) + R(a, d, bb, c)));
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                double t = 0.0;
                for (int e = 0; e < n; ++e)
                    for (int f = 0; f < n; ++f)
                        t += b.ginv(e, f) * b.weyl(e, a, c, f);
                trace = std::max(trace, std::abs(t));
            }
        out.bianchi = std::max(out.bianchi, bianchi / scale);
        out.weyl_trace = std::max(out.weyl_trace, trace / scale);
    }
    return out;
}

double kelvin_inversion(std::uint64_t seed, int n, int points)
{
    Rng rng(stream_seed(seed, 70 + n));
    auto u = parse_scalar_expression(n == 3 ? "x1" : "x1*x4", n);
    double worst = 0.0;
    for (const auto& x : conformalmaps::annulus_points(rng, n, 0.5, 2.0, points))
        worst = std::max(worst,
                         std::abs(conformalmaps::kelvin_pullback_residual(conformalmaps::MobiusMap::inversion(n), u, x)));
    return worst;
}

double kelvin_random(std::uint64_t seed, int maps, int points)
{
    Rng rng(stream_seed(seed, 80));
    auto u = parse_scalar_expression("x1*x2 + 0.5*(x1^2 - x3^2) + 1", 3);
    double worst = 0.0;
    for (int m = 0; m < maps; ++m) {
        auto map = conformalmaps::MobiusMap::random(3, rng, 4);
        for (const auto& x : conformalmaps::annulus_points(rng, 3, 0.5, 2.0, points)) {
            try {
                worst = std::max(worst, std::abs(conformalmaps::kelvin_pullback_residual(map, u, x)));
            } catch (const SingularityError&) {
            }
        }
    }
    return worst;
}

double isothermal(std::uint64_t seed, int samples)
{
    Rng rng(stream_seed(seed, 90));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        int n = i % 2 == 0 ? 3 : 4;
        auto c = random_positive_scalar(n, stream_seed(seed, 9000 + i));
        Point x = random_point(rng, n, 1.0);
        auto geo = geometry_from_jets(conformally_flat(n, c, "isothermal").jets(x, 2), Signature::Riemannian,
                                      Depth::Basic);
        double scale = 0.0;
        for (int a = 0; a < n; ++a)
            scale = std::max(scale, std::abs(geo.gamma_down[a].value()));
        for (double v : charts::isothermal_gauge_check(c, n, x))
            worst = std::max(worst, std::abs(v) / std::max(scale, 1e-300));
    }
    return worst;
}

} // namespace

Report run_identities(const Scenario& s)
{
    const Config& c = s.config;
    const double tol = c.positive("tolerance.identity", 1e-9);
    Report r;
    Stopwatch sw;
    auto add = [&](const std::string& name, const std::string& anchor, double measured, double tolerance) {
        r.checks.push_back(make_check(name, anchor, measured, Relation::AtMost, tolerance, sw.ms()));
        s.note("identities: " + name);
        sw.reset();
    };
    const std::string cov = "L_{cg} u = c^{-(n+2)/4} L_g(c^{(n-2)/4} u)";
    add("conformal-laplacian-covariance-n3", cov, covariance(s.seed, 3, 100), tol);
    add("conformal-laplacian-covariance-n4", cov, covariance(s.seed, 4, 100), tol);
    add("yamabe-scaling", "R(f^{p-2} g) = f^{1-p} (4(n-1)/(n-2)) L_g f", yamabe_random(s.seed, 50), tol);
    add("yamabe-harmonic-flat", "R(f^{p-2} delta) = 0 for f = 1 + 0.3 x^1", yamabe_flat(s.seed),
        c.positive("tolerance.yamabe_flat", 1e-10));
    add("bach-two-forms", "B_ab from Schouten = B_ab from Weyl (n = 4)", bach_forms(s.seed, 20),
        c.positive("tolerance.bach_forms", 1e-8));
    Weights w = conformal_weights(s.seed, 30);
    double wt = sw.ms() / 3.0;
    r.checks.push_back(make_check("weyl-weight", "W(cg) = c W(g) (n = 4)", w.weyl, Relation::AtMost, tol, wt));
    r.checks.push_back(make_check("cotton-weight", "C(cg) = C(g) (n = 3)", w.cotton, Relation::AtMost, tol, wt));
    r.checks.push_back(make_check("bach-weight", "B(cg) = c^{-1} B(g) (n = 4)", w.bach, Relation::AtMost, tol, wt));
    s.note("identities: conformal weights");
    sw.reset();
    add("christoffel-routes", "g_ab Gamma^b = g^{bc} d_b g_ac - 1/2 d_a log|g|", christoffel_routes(s.seed, 20),
        c.positive("tolerance.route", 1e-12));
    Algebraic alg = algebraic_identities(s.seed, 20);
    double at = sw.ms() / 2.0;
    const double atol = c.positive("tolerance.algebraic", 1e-10);
    r.checks.push_back(
        make_check("riemann-first-bianchi", "R_abcd + R_acdb + R_adbc = 0", alg.bianchi, Relation::AtMost, atol, at));
    r.checks.push_back(
        make_check("weyl-trace-free", "g^{ef} W_eacf = 0", alg.weyl_trace, Relation::AtMost, atol, at));
    sw.reset();
    const double ktol = c.positive("tolerance.kelvin", 1e-10);
    const std::string kelvin = "L_delta(c^{(n-2)/4} F^*u) = 0 for harmonic u";
    add("kelvin-inversion-n3", kelvin, kelvin_inversion(s.seed, 3, 50), ktol);
    add("kelvin-inversion-n4", kelvin, kelvin_inversion(s.seed, 4, 50), ktol);
    add("kelvin-mobius", kelvin, kelvin_random(s.seed, 10, 50), ktol);
    add("isothermal-gauge", "Gamma_a(c delta) = 2 d_a log c^{(2-n)/4}", isothermal(s.seed, 50),
        c.positive("tolerance.isothermal", 1e-11));
    return r;
}

} // namespace confcoord::cli
