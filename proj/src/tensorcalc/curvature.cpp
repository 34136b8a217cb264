#include "confcoord/tensorcalc/curvature.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confcoord::tensorcalc {

namespace {

Jet at_order(const Jet& j, int k) { return j.order() == k ? j : j.truncated(k); }

std::vector<Jet> at_order(const std::vector<Jet>& v, int k)
{
    std::vector<Jet> r;
    r.reserve(v.size());
    for (const auto& j : v)
        r.push_back(at_order(j, k));
    return r;
}

Tensor<Jet> at_order(const Tensor<Jet>& t, int k)
{
    Tensor<Jet> r = t;
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = at_order(r[i], k);
    return r;
}

int order_of(const Tensor<Jet>& t) { return t[0].order(); }

/// ∇_e T_{i1..ir} = ∂_e T - Σ_k Γ^h_{e i_k} T_{..h..}, derivative index first.
Tensor<Jet> covariant_derivative(const Tensor<Jet>& t, const Tensor<Jet>& christoffel)
{
    int n = t.dim();
    int r = t.rank();
    int m = order_of(t) - 1;
    Tensor<Jet> gam = at_order(christoffel, m);
    Tensor<Jet> low = at_order(t, m);
    Tensor<Jet> out(n, r + 1);
    std::size_t block = t.size();
    int idx[8];
    std::vector<std::size_t> stride(r);
    std::size_t s = 1;
    for (int k = r - 1; k >= 0; --k) {
        stride[k] = s;
        s *= n;
    }
    for (int e = 0; e < n; ++e)
        for (std::size_t pos = 0; pos < block; ++pos) {
            t.unflatten(pos, idx);
            Jet v = t[pos].derivative(e);
            for (int k = 0; k < r; ++k)
                for (int h = 0; h < n; ++h) {
                    const Jet& gk = gam(h, e, idx[k]);
                    std::size_t other = pos - idx[k] * stride[k] + h * stride[k];
                    v -= gk * low[other];
                }
            out[e * block + pos] = std::move(v);
        }
    return out;
}

Tensor<double> values(const Tensor<Jet>& t)
{
    Tensor<double> r(t.dim(), t.rank());
    for (std::size_t i = 0; i < t.size(); ++i)
        r[i] = t[i].value();
    return r;
}

std::vector<double> values(const std::vector<Jet>& v)
{
    std::vector<double> r;
    for (const auto& j : v)
        r.push_back(j.value());
    return r;
}

Eigen::MatrixXd matrix_values(const std::vector<Jet>& v, int n)
{
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            m(a, b) = v[a * n + b].value();
    return m;
}

double max_abs(const Tensor<double>& t)
{
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        m = std::max(m, std::abs(t[i]));
    return m;
}

void schouten_bach(GeometryJets& geo)
{
    int n = geo.dim;
    int k = geo.order - 4;
    Tensor<Jet> dp = covariant_derivative(geo.schouten, geo.christoffel);
    Tensor<Jet> ddp = covariant_derivative(dp, geo.christoffel);
    auto ginv = at_order(geo.ginv, k);
    Tensor<Jet> p = at_order(geo.schouten, k);
    Tensor<Jet> w = at_order(geo.weyl, k);
    Tensor<Jet> ric = at_order(geo.ricci, k);
    Jet zero = ginv[0].constant_like(0.0);

    Tensor<Jet> pup(n, 2, zero), rup(n, 2, zero);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e)
                for (int f = 0; f < n; ++f) {
                    Jet gg = ginv[c * n + e] * ginv[d * n + f];
                    pup(c, d) += gg * p(e, f);
                    rup(c, d) += gg * ric(e, f);
                }

    Tensor<Jet> dw = covariant_derivative(geo.weyl, geo.christoffel);
    Tensor<Jet> ddw = covariant_derivative(dw, geo.christoffel);

    geo.bach = Tensor<Jet>(n, 2, zero);
    geo.bach_weyl = Tensor<Jet>(n, 2, zero);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet bs = zero;
            Jet bw = zero;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const Jet& gcd = ginv[c * n + d];
                    bs += gcd * (ddp(d, a, b, c) - ddp(d, c, a, b));
                    bs += pup(c, d) * w(a, c, b, d);
                    bw += 0.5 * rup(c, d) * w(a, c, b, d);
                    for (int e = 0; e < n; ++e)
                        for (int f = 0; f < n; ++f)
                            bw += ginv[c * n + e] * ginv[d * n + f] * ddw(e, f, a, c, b, d);
                }
            geo.bach(a, b) = bs;
            geo.bach_weyl(a, b) = bw;
        }
}

} // namespace

double conformal_coupling(int n) { return (n - 2.0) / (4.0 * (n - 1.0)); }
double yamabe_exponent(int n) { return 2.0 * n / (n - 2.0); }

GeometryJets geometry_from_jets(std::vector<Jet> g, Signature signature, Depth depth)
{
    GeometryJets geo;
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(g.size()))));
    if (n * n != static_cast<int>(g.size()) || n < 2 || n > jets::kMaxDim)
        throw ArgumentError("metric jets must form a square matrix of dimension 2..4");
    int order = g[0].order();
    if (order < 2)
        throw ArgumentError("curvature needs metric jets of order >= 2");
    if (depth == Depth::Full) {
        int need = n == 4 ? 4 : 3;
        if (order < need)
            throw ArgumentError("full curvature depth needs metric jets of order >= " + std::to_string(need));
    }
    geo.dim = n;
    geo.order = order;
    geo.signature = signature;
    geo.depth = depth;
    geo.g = std::move(g);
    geo.ginv = inverse(geo.g, n);
    double sign = signature == Signature::Riemannian ? 1.0 : -1.0;
    geo.log_abs_det = log(sign * determinant(geo.g, n));

    int k1 = order - 1;
    auto g1 = at_order(geo.g, k1);
    auto ginv1 = at_order(geo.ginv, k1);
    Jet zero1 = g1[0].constant_like(0.0);

    geo.dg = Tensor<Jet>(n, 3);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                geo.dg(c, a, b) = geo.g[a * n + b].derivative(c);

    geo.christoffel = Tensor<Jet>(n, 3, zero1);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                Jet s = zero1;
                for (int d = 0; d < n; ++d)
                    s += ginv1[c * n + d] * (geo.dg(a, b, d) + geo.dg(b, a, d) - geo.dg(d, a, b));
                s *= 0.5;
                geo.christoffel(c, a, b) = s;
                geo.christoffel(c, b, a) = s;
            }

    geo.gamma_up.assign(n, zero1);
    geo.gamma_down.assign(n, zero1);
    geo.gamma_down_alt.assign(n, zero1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                geo.gamma_up[a] += ginv1[b * n + c] * geo.christoffel(a, b, c);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            geo.gamma_down[a] += g1[a * n + b] * geo.gamma_up[b];
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                geo.gamma_down_alt[a] += ginv1[b * n + c] * geo.dg(b, a, c);
        geo.gamma_down_alt[a] -= 0.5 * geo.log_abs_det.derivative(a);
    }

    int k2 = order - 2;
    Tensor<Jet> gam2 = at_order(geo.christoffel, k2);
    auto g2 = at_order(geo.g, k2);
    auto ginv2 = at_order(geo.ginv, k2);
    Jet zero2 = g2[0].constant_like(0.0);

    Tensor<Jet> rup(n, 4, zero2); // R_abc^d at (a, b, c, d)
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    Jet v = geo.christoffel(d, b, c).derivative(a) - geo.christoffel(d, a, c).derivative(b);
                    for (int e = 0; e < n; ++e)
                        v += gam2(d, a, e) * gam2(e, b, c) - gam2(d, b, e) * gam2(e, a, c);
                    rup(b, a, c, d) = -v;
                    rup(a, b, c, d) = std::move(v);
                }

    geo.riemann = Tensor<Jet>(n, 4, zero2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b)
                continue;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int e = 0; e < n; ++e)
                        geo.riemann(a, b, c, d) += g2[d * n + e] * rup(a, b, c, e);
        }

    geo.ricci = Tensor<Jet>(n, 2, zero2);
    geo.scalar = zero2;
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            for (int a = 0; a < n; ++a)
                geo.ricci(b, c) += rup(a, b, c, a);
        }
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
            geo.scalar += ginv2[b * n + c] * geo.ricci(b, c);

    if (n >= 3) {
        geo.schouten = Tensor<Jet>(n, 2, zero2);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                geo.schouten(a, b) =
                    (geo.ricci(a, b) - geo.scalar * g2[a * n + b] / (2.0 * (n - 1))) / (n - 2.0);
        geo.weyl = Tensor<Jet>(n, 4, zero2);
        const auto& p = geo.schouten;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        geo.weyl(a, b, c, d) = geo.riemann(a, b, c, d) + p(a, c) * g2[b * n + d] -
                                               p(b, c) * g2[a * n + d] + p(b, d) * g2[a * n + c] -
                                               p(a, d) * g2[b * n + c];
    }

    if (depth == Depth::Full) {
        Tensor<Jet> dp = covariant_derivative(geo.schouten, geo.christoffel);
        geo.cotton = Tensor<Jet>(n, 3);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    geo.cotton(a, b, c) = dp(a, b, c) - dp(b, a, c);
        if (n == 4)
            schouten_bach(geo);
    }
    return geo;
}

CurvatureBundle values_of(const GeometryJets& geo)
{
    CurvatureBundle b;
    int n = geo.dim;
    b.dim = n;
    b.signature = geo.signature;
    b.depth = geo.depth;
    b.g = matrix_values(geo.g, n);
    b.ginv = matrix_values(geo.ginv, n);
    b.christoffel = values(geo.christoffel);
    b.gamma_up = values(geo.gamma_up);
    b.gamma_down = values(geo.gamma_down);
    b.riemann = values(geo.riemann);
    b.ricci = values(geo.ricci);
    b.scalar = geo.scalar.value();
    if (geo.schouten.size() > 0) {
        b.schouten = values(geo.schouten);
        b.weyl = values(geo.weyl);
    }
    if (geo.cotton.size() > 0) {
        b.cotton = values(geo.cotton);
        b.has_cotton = true;
    }
    if (geo.bach.size() > 0) {
        b.bach = values(geo.bach);
        b.obstruction = b.bach;
        b.has_bach = true;
    }
    return b;
}

CurvatureBundle curvature_bundle(const MetricSpec& g, const Point& x, Depth depth, int order)
{
    auto jets = g.jets(x, order);
    g.validate(matrix_values(jets, g.dim()));
    return values_of(geometry_from_jets(std::move(jets), g.signature(), depth));
}

ChristoffelResult christoffel(const MetricSpec& g, const Point& x)
{
    auto jets = g.jets(x, 2);
    g.validate(matrix_values(jets, g.dim()));
    GeometryJets geo = geometry_from_jets(std::move(jets), g.signature(), Depth::Basic);
    ChristoffelResult r;
    r.symbols = values(geo.christoffel);
    r.gamma_up = values(geo.gamma_up);
    r.gamma_down = values(geo.gamma_down);
    r.gamma_down_alt = values(geo.gamma_down_alt);
    double scale = 1.0, diff = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        scale = std::max(scale, std::abs(r.gamma_down[a]));
        diff = std::max(diff, std::abs(r.gamma_down[a] - r.gamma_down_alt[a]));
    }
    r.route_discrepancy = diff / scale;
    return r;
}

BachComparison bach_two_ways(const MetricSpec& g, const Point& x, int order)
{
    if (g.dim() != 4)
        throw DimensionError("the two Bach expressions are compared in dimension 4 only");
    if (order < 4)
        throw ArgumentError("Bach tensor needs metric jets of order >= 4");
    auto jets = g.jets(x, order);
    g.validate(matrix_values(jets, g.dim()));
    GeometryJets geo = geometry_from_jets(std::move(jets), g.signature(), Depth::Full);
    BachComparison c;
    c.schouten_form = values(geo.bach);
    c.weyl_form = values(geo.bach_weyl);
    double scale = std::max(max_abs(c.schouten_form), max_abs(c.weyl_form));
    double diff = 0.0;
    for (std::size_t i = 0; i < c.schouten_form.size(); ++i)
        diff = std::max(diff, std::abs(c.schouten_form[i] - c.weyl_form[i]));
    c.relative_difference = scale > 0.0 ? diff / scale : diff;
    return c;
}

void require_obstruction_dimension(int dim)
{
    if (dim % 2 == 1 || dim < 4)
        throw DimensionError("the obstruction tensor is defined in even dimension n >= 4");
    if (dim >= 6)
        throw UnsupportedError("obstruction tensor is implemented for n = 4 only");
}

Tensor<double> obstruction_tensor(const MetricSpec& g, const Point& x, int order)
{
    require_obstruction_dimension(g.dim());
    return curvature_bundle(g, x, Depth::Full, order).obstruction;
}

Jet conformal_laplacian_jet(const std::vector<Jet>& g, Signature signature, const Jet& u)
{
    GeometryJets geo = geometry_from_jets(g, signature, Depth::Basic);
    int n = geo.dim;
    int k1 = geo.order - 1;
    Jet sqrt_abs = exp(0.5 * at_order(geo.log_abs_det, k1));
    auto ginv1 = at_order(geo.ginv, k1);
    Jet div = geo.scalar.constant_like(0.0);
    std::vector<Jet> du;
    for (int b = 0; b < n; ++b)
        du.push_back(u.derivative(b));
    for (int a = 0; a < n; ++a) {
        Jet flux = sqrt_abs.constant_like(0.0);
        for (int b = 0; b < n; ++b)
            flux += ginv1[a * n + b] * du[b];
        div += (sqrt_abs * flux).derivative(a);
    }
    Jet sqrt2 = at_order(sqrt_abs, geo.order - 2);
    return -div / sqrt2 + conformal_coupling(n) * geo.scalar * at_order(u, geo.order - 2);
}

double conformal_laplacian_apply(const MetricSpec& g, const ScalarFn& u, const Point& x)
{
    g.require_in_domain(x);
    auto coords = jets::coordinates(g.dim(), 2, x);
    auto comps = g.components(coords);
    g.validate(matrix_values(comps, g.dim()));
    return conformal_laplacian_jet(comps, g.signature(), u(coords)).value();
}

ScalarResidual yamabe_scaling_residual(const MetricSpec& g, const ScalarFn& f, const Point& x)
{
    int n = g.dim();
    double p = yamabe_exponent(n);
    g.require_in_domain(x);
    auto coords = jets::coordinates(n, 2, x);
    auto comps = g.components(coords);
    g.validate(matrix_values(comps, n));
    Jet fj = f(coords);
    if (!(fj.value() > 0.0))
        throw SingularityError("conformal factor must be positive");
    Jet c = pow(fj, p - 2.0);
    std::vector<Jet> scaled;
    for (const auto& gab : comps)
        scaled.push_back(c * gab);
    double r_scaled = geometry_from_jets(scaled, g.signature(), Depth::Basic).scalar.value();
    double lf = conformal_laplacian_jet(comps, g.signature(), fj).value();
    double rhs = std::pow(fj.value(), 1.0 - p) * 4.0 * (n - 1.0) / (n - 2.0) * lf;
    ScalarResidual r;
    r.residual = r_scaled - rhs;
    r.scale = std::max(std::abs(r_scaled), std::abs(rhs));
    return r;
}

RicciSplit ricci_gauge_remainder(const MetricSpec& g, const Point& x)
{
    int n = g.dim();
    auto jets = g.jets(x, 2);
    g.validate(matrix_values(jets, n));
    GeometryJets geo = geometry_from_jets(std::move(jets), g.signature(), Depth::Basic);
    RicciSplit s;
    s.ricci = values(geo.ricci);
    s.leading = Tensor<double>(n, 2);
    s.remainder = Tensor<double>(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double lap = 0.0;
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    lap += geo.ginv[c * n + d].value() * geo.dg(d, a, b).derivative(c).value();
            double gauge = geo.gamma_down[b].derivative(a).value() + geo.gamma_down[a].derivative(b).value();
            s.leading(a, b) = -0.5 * lap + 0.5 * gauge;
            s.remainder(a, b) = s.ricci(a, b) - s.leading(a, b);
        }
    return s;
}

} // namespace confcoord::tensorcalc
