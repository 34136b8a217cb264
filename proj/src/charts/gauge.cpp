#include "confcoord/charts/gauge.hpp"

#include "confcoord/elliptic/interpolate.hpp"
#include "confcoord/elliptic/operator.hpp"
#include "confcoord/elliptic/stencil.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"
#include "confcoord/tensorcalc/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::charts {

using elliptic::Index;
using jets::Jet;
using jets::MonomialTable;

namespace {

void normalize_determinant(const double* gt, double* gh, int n, double& det_out)
{
    Eigen::Map<const Eigen::MatrixXd> m(gt, n, n);
    double det = std::abs(m.determinant());
    det_out = det;
    double s = std::pow(det, -1.0 / n);
    for (int k = 0; k < n * n; ++k)
        gh[k] = s * gt[k];
}

} // namespace

PulledBackMetric pullback_metric(const ChartResult& cr, const PullbackOptions& options)
{
    const int n = cr.dim();
    const int count = options.count;
    if (!(options.fraction > 0.0) || options.fraction * cr.epsilon > cr.epsilon - 2.0 * cr.h)
        throw ConfigError("pullback fraction must leave two chart nodes of margin");
    Eigen::MatrixXd jinv = cr.center_jacobian().inverse();
    double spread = jinv.cwiseAbs().rowwise().sum().maxCoeff();
    double w = options.fraction * cr.epsilon / spread;

    PulledBackMetric pb;
    pb.dim = n;
    pb.boundary = cr.boundary;
    try {
        pb.zgrid = cr.boundary ? GridChart::half_box(n, {}, w, count) : GridChart::box(n, {}, w, count);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("pullback grid: ") + e.what());
    }
    const std::size_t size = pb.zgrid.size();
    pb.valid.assign(size, 0);
    pb.x.assign(size * n, 0.0);
    pb.g_tilde.assign(size * n * n, 0.0);
    pb.g_hat.assign(size * n * n, 0.0);
    pb.f.assign(size, 0.0);

    parallel_for(size, [&](std::size_t i) {
        Point zp = pb.zgrid.point(i);
        std::vector<double> z(zp.begin(), zp.begin() + n);
        Point x;
        try {
            x = invert_chart(cr, z);
        } catch (const InversionFailure&) {
            return;
        }
        Eigen::MatrixXd g = cr.metric.values(x);
        Eigen::MatrixXd ji = chart_jacobian(cr, x).inverse();
        Eigen::MatrixXd gt = ji.transpose() * g * ji;
        for (int a = 0; a < n; ++a) {
            pb.x[i * n + a] = x[a];
            for (int b = 0; b < n; ++b)
                pb.g_tilde[(i * n + a) * n + b] = 0.5 * (gt(a, b) + gt(b, a));
        }
        double det;
        normalize_determinant(&pb.g_tilde[i * n * n], &pb.g_hat[i * n * n], n, det);
        pb.f[i] = elliptic::interpolate(cr.grid, cr.f, x);
        pb.valid[i] = 1;
    });
    pb.masked = static_cast<std::size_t>(std::count(pb.valid.begin(), pb.valid.end(), 0));
    return pb;
}

PulledBackMetric conformally_rescaled(const PulledBackMetric& pb, const tensorcalc::ScalarFn& c)
{
    const int n = pb.dim;
    PulledBackMetric out = pb;
    const double weight = -(n - 2) / 4.0;
    for (std::size_t i = 0; i < pb.zgrid.size(); ++i) {
        if (!pb.valid[i])
            continue;
        Point x{};
        for (int a = 0; a < n; ++a)
            x[a] = pb.x[i * n + a];
        double cv = c(jets::coordinates(n, 0, x)).value();
        if (!(cv > 0.0))
            throw PreconditionError("conformal factor must be positive");
        for (int k = 0; k < n * n; ++k)
            out.g_tilde[i * n * n + k] = cv * pb.g_tilde[i * n * n + k];
        double det;
        normalize_determinant(&out.g_tilde[i * n * n], &out.g_hat[i * n * n], n, det);
        out.f[i] = std::pow(cv, weight) * pb.f[i];
    }
    return out;
}

namespace {

// Order-2 jets of sampled metric components at a node, from 4th-order stencils.
std::vector<Jet> sampled_jets(const GridChart& grid, const std::vector<std::vector<double>>& comps, std::size_t node)
{
    const int n = grid.dim();
    const auto& table = MonomialTable::get(n);
    const std::size_t terms = table.count(2);
    Point center = grid.point(node);
    std::vector<Jet> out;
    out.reserve(comps.size());
    for (const auto& field : comps) {
        std::vector<double> coeff(terms, 0.0);
        for (std::size_t t = 0; t < terms; ++t) {
            const auto& alpha = table.monomial(t);
            int axes[2], m = 0;
            for (int a = 0; a < n; ++a)
                for (int r = 0; r < alpha[a]; ++r)
                    axes[m++] = a;
            double d;
            if (m == 0)
                d = field[node];
            else if (m == 1)
                d = elliptic::derivative4(grid, field, node, axes[0]);
            else
                d = elliptic::second_derivative4(grid, field, node, axes[0], axes[1]);
            coeff[t] = d / table.factorial(t);
        }
        out.push_back(Jet::from_coefficients(n, 2, center, std::move(coeff)));
    }
    return out;
}

std::vector<std::vector<double>> split_components(const std::vector<double>& packed, std::size_t size, int n)
{
    std::vector<std::vector<double>> comps(n * n, std::vector<double>(size));
    for (std::size_t i = 0; i < size; ++i)
        for (int k = 0; k < n * n; ++k)
            comps[k][i] = packed[i * n * n + k];
    return comps;
}

// Distance from the faces that count for the margin; the flat face of a
// boundary chart is exempt.
int margin_distance(const GridChart& grid, std::size_t idx, bool boundary)
{
    Index m = grid.multi(idx);
    int d = grid.count(0);
    for (int a = 0; a < grid.dim(); ++a) {
        bool flat_face = boundary && a == grid.dim() - 1;
        if (!flat_face)
            d = std::min(d, m[a]);
        d = std::min(d, grid.count(a) - 1 - m[a]);
    }
    return d;
}

bool support_valid(const PulledBackMetric& pb, std::size_t idx)
{
    if (pb.masked == 0)
        return true;
    const GridChart& g = pb.zgrid;
    const int n = g.dim();
    Index m = g.multi(idx);
    Index lo{}, hi{};
    for (int a = 0; a < n; ++a) {
        lo[a] = std::max(0, m[a] - 5);
        hi[a] = std::min(g.count(a) - 1, m[a] + 5);
    }
    Index k = lo;
    while (true) {
        if (!pb.valid[g.index(k)])
            return false;
        int a = n - 1;
        while (a >= 0 && ++k[a] > hi[a]) {
            k[a] = lo[a];
            --a;
        }
        if (a < 0)
            return true;
    }
}

} // namespace

GaugeResiduals gauge_residuals(const ChartResult& cr, const PulledBackMetric& pb)
{
    const int n = pb.dim;
    const GridChart& zg = pb.zgrid;
    for (int a = 0; a < n; ++a) {
        bool flat_face = pb.boundary && a == n - 1;
        int layers = zg.count(a) - (flat_face ? 1 : 2) * kResidualMargin;
        if (layers < 5)
            throw ConfigError("residual band too thin: needs at least 5 layers per axis");
    }
    const std::size_t size = zg.size();
    auto gt = split_components(pb.g_tilde, size, n);
    auto gh = split_components(pb.g_hat, size, n);
    std::vector<double> log_f(size, 0.0), log_fhat(size, 0.0);
    const double det_weight = (n - 2) / (4.0 * n);
    for (std::size_t i = 0; i < size; ++i) {
        if (!pb.valid[i])
            continue;
        Eigen::Map<const Eigen::MatrixXd> m(&pb.g_tilde[i * n * n], n, n);
        log_f[i] = std::log(pb.f[i]);
        log_fhat[i] = det_weight * std::log(std::abs(m.determinant())) + log_f[i];
    }
    const double coupling = (n - 2) / (2.0 * (n - 1));

    std::vector<std::size_t> band;
    for (std::size_t i = 0; i < size; ++i)
        if (margin_distance(zg, i, pb.boundary) >= kResidualMargin)
            band.push_back(i);

    struct Local {
        double r1 = 0, r3 = 0, r4 = 0;
        bool used = false;
    };
    std::vector<Local> local(band.size());
    parallel_for(band.size(), [&](std::size_t b) {
        std::size_t i = band[b];
        if (!support_valid(pb, i))
            return;
        auto geo_t = tensorcalc::geometry_from_jets(sampled_jets(zg, gt, i), tensorcalc::Signature::Riemannian,
                                                    tensorcalc::Depth::Basic);
        auto geo_h = tensorcalc::geometry_from_jets(sampled_jets(zg, gh, i), tensorcalc::Signature::Riemannian,
                                                    tensorcalc::Depth::Basic);
        Local& out = local[b];
        out.used = true;
        double trace = 0.0, gamma_sq = 0.0;
        for (int a = 0; a < n; ++a) {
            double dlf = elliptic::derivative4(zg, log_f, i, a);
            double dlfh = elliptic::derivative4(zg, log_fhat, i, a);
            out.r1 = std::max(out.r1, std::abs(geo_t.gamma_down[a].value() - 2.0 * dlf));
            out.r3 = std::max(out.r3, std::abs(geo_h.gamma_down[a].value() - 2.0 * dlfh));
            gamma_sq += geo_h.gamma_up[a].value() * geo_h.gamma_down[a].value();
            for (int c = 0; c < n; ++c)
                trace += geo_h.ginv[a * n + c].value() * geo_h.gamma_down[c].derivative(a).value();
        }
        out.r4 = std::abs(trace - coupling * geo_h.scalar.value() - 0.5 * gamma_sq);
    });

    GaugeResiduals res;
    for (const auto& l : local) {
        if (!l.used) {
            ++res.skipped_nodes;
            continue;
        }
        ++res.band_nodes;
        res.r1 = std::max(res.r1, l.r1);
        res.r3 = std::max(res.r3, l.r3);
        res.r4 = std::max(res.r4, l.r4);
    }

    // Harmonicity of each Z^k for f^{p-2} g on the x-grid.
    auto op = elliptic::assemble_rescaled_laplacian(cr.metric, cr.grid, cr.f);
    auto diag = op.matrix.diagonal();
    for (int k = 0; k < n; ++k) {
        auto r = elliptic::apply_interior(op, cr.z[k]);
        double zmax = 0.0, rmax = 0.0;
        for (std::size_t i = 0; i < cr.grid.size(); ++i) {
            zmax = std::max(zmax, std::abs(cr.z[k][i]));
            if (margin_distance(cr.grid, i, cr.boundary) >= kResidualMargin && !cr.grid.on_boundary(i))
                rmax = std::max(rmax, std::abs(r[i] / diag[i]));
        }
        if (zmax > 0.0)
            res.r2 = std::max(res.r2, rmax / zmax);
    }
    return res;
}

std::vector<double> isothermal_gauge_check(const tensorcalc::ScalarFn& c, int n, const Point& x)
{
    auto coords = jets::coordinates(n, 2, x);
    Jet cj = c(coords);
    if (!(cj.value() > 0.0))
        throw PreconditionError("conformal factor must be positive");
    std::vector<Jet> g(n * n, cj.constant_like(0.0));
    for (int a = 0; a < n; ++a)
        g[a * n + a] = cj;
    auto geo = tensorcalc::geometry_from_jets(g, tensorcalc::Signature::Riemannian, tensorcalc::Depth::Basic);
    Jet lc = log(cj) * ((2.0 - n) / 4.0);
    std::vector<double> r(n);
    for (int a = 0; a < n; ++a)
        r[a] = geo.gamma_down[a].value() - 2.0 * lc.derivative(a).value();
    return r;
}

} // namespace confcoord::charts
