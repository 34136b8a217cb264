#include "confcoord/probes/probes.hpp"

#include "confcoord/errors.hpp"
#include "confcoord/fit.hpp"
#include "confcoord/tensorcalc/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::probes {

using jets::Jet;
using jets::Point;
using tensorcalc::Signature;

namespace {

constexpr double kTTTolerance = 1e-12;
constexpr int kPhaseCount = 8;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double max_abs(const Tensor<double>& t)
{
    double m = 0.0;
    for (double v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

void require_tt(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h)
{
    if (tt_defect(xi, h) > kTTTolerance)
        throw PreconditionError("probe direction is not transverse-traceless for the wave covector");
}

void require_shapes(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h)
{
    if (h.rows() != xi.size() || h.cols() != xi.size())
        throw DimensionError("perturbation and covector dimensions differ");
    if (!(xi.norm() > 0.0))
        throw ArgumentError("wave covector must be nonzero");
}

Eigen::MatrixXd to_matrix(const Tensor<double>& t)
{
    const int n = t.dim();
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            m(a, b) = t(a, b);
    return m;
}

} // namespace

int derivative_phase(int order)
{
    int r = ((order % 4) + 4) % 4;
    return r < 2 ? 1 : -1;
}

std::vector<Eigen::MatrixXd> tt_basis(const Eigen::VectorXd& xi)
{
    const int n = static_cast<int>(xi.size());
    if (!(xi.norm() > 0.0))
        throw ArgumentError("wave covector must be nonzero");
    int axis = -1;
    for (int a = 0; a < n; ++a)
        if (xi[a] != 0.0) {
            if (axis >= 0) {
                axis = -2;
                break;
            }
            axis = a;
        }
    std::vector<Eigen::MatrixXd> basis;
    if (axis >= 0) {
        std::vector<int> rest;
        for (int a = 0; a < n; ++a)
            if (a != axis)
                rest.push_back(a);
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = i + 1; j < rest.size(); ++j) {
                Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
                m(rest[i], rest[j]) = m(rest[j], rest[i]) = 1.0;
                basis.push_back(m);
            }
        for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
            m(rest[i], rest[i]) = 1.0;
            m(rest[i + 1], rest[i + 1]) = -1.0;
            basis.push_back(m);
        }
        return basis;
    }
    // Project the symmetric unit matrices onto the TT subspace, then orthonormalize.
    Eigen::VectorXd u = xi / xi.norm();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) - u * u.transpose();
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            e(a, b) = e(b, a) = 1.0;
            Eigen::MatrixXd t = p * e * p;
            t -= (t.trace() / (n - 1)) * p;
            for (const auto& q : basis)
                t -= (t.cwiseProduct(q).sum()) * q;
            double norm = t.norm();
            if (norm > 1e-8)
                basis.push_back(t / norm);
        }
    return basis;
}

double tt_defect(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h)
{
    require_shapes(xi, h);
    double scale = xi.norm() * std::max(max_abs(h), 1e-300);
    double d = (h * xi).cwiseAbs().maxCoeff() / scale;
    d = std::max(d, std::abs(h.trace()) / std::max(max_abs(h), 1e-300));
    d = std::max(d, max_abs(h - h.transpose()) / std::max(max_abs(h), 1e-300));
    return d;
}

MetricSpec wave_perturbation(const Eigen::MatrixXd& h, const Eigen::VectorXd& xi, double k, double epsilon,
                             Signature background)
{
    require_shapes(xi, h);
    const int n = static_cast<int>(xi.size());
    Eigen::MatrixXd hh = h;
    Eigen::VectorXd xx = xi;
    tensorcalc::ComponentFn fn = [n, hh, xx, k, epsilon, background](std::span<const Jet> x) {
        Jet arg = x[0].constant_like(0.0);
        for (int a = 0; a < n; ++a)
            arg += (k * xx[a]) * x[a];
        Jet s = epsilon * sin(arg);
        std::vector<Jet> c;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                double base = a == b ? ((a == 0 && background == Signature::Lorentzian) ? -1.0 : 1.0) : 0.0;
                c.push_back(base + hh(a, b) * s);
            }
        return c;
    };
    return MetricSpec("wave-perturbation", n, background, tensorcalc::Box::cube(n, 1e6), fn);
}

Point phase_point(const Eigen::VectorXd& xi, double k, double phase)
{
    Point p{};
    double s = phase / (k * xi.squaredNorm());
    for (int a = 0; a < xi.size(); ++a)
        p[a] = s * xi[a];
    return p;
}

BachProbe tt_symbol_probe_bach(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h, double k, double epsilon)
{
    require_shapes(xi, h);
    if (xi.size() != 4)
        throw DimensionError("Bach symbol probe needs dimension 4");
    require_tt(xi, h);
    Point x = phase_point(xi, k, M_PI / 2.0);
    auto bach = [&](double eps) {
        auto b = tensorcalc::curvature_bundle(wave_perturbation(h, xi, k, eps), x, tensorcalc::Depth::Full);
        return to_matrix(b.bach);
    };
    BachProbe out;
    out.measured = (bach(epsilon) - bach(-epsilon)) / (2.0 * epsilon * std::pow(k, 4));
    out.expected = -0.5 * std::pow(xi.squaredNorm(), 2) * h;
    out.relative_error = max_abs(out.measured - out.expected) / max_abs(out.expected);
    Eigen::Index r, c;
    h.cwiseAbs().maxCoeff(&r, &c);
    out.ratio = out.measured(r, c) / (std::pow(xi.squaredNorm(), 2) * h(r, c));
    return out;
}

Tensor<double> cotton_symbol(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h)
{
    require_shapes(xi, h);
    const int n = static_cast<int>(xi.size());
    Tensor<double> s(n, 3);
    double tr = h.trace();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                s(a, b, c) = xi[a] * h(b, c) - (b == c ? xi[a] * tr / n : 0.0) - xi[b] * h(a, c);
    return s;
}

CottonProbe tt_symbol_probe_cotton(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h, double k, double epsilon)
{
    require_shapes(xi, h);
    if (xi.size() != 3)
        throw DimensionError("Cotton symbol probe needs dimension 3");
    const int n = 3;
    if (max_abs(h) > 0.0)
        require_tt(xi, h);
    Point x{};
    auto cotton = [&](double eps) {
        return tensorcalc::curvature_bundle(wave_perturbation(h, xi, k, eps), x, tensorcalc::Depth::Full).cotton;
    };
    Tensor<double> plus = cotton(epsilon), minus = cotton(-epsilon);
    CottonProbe out;
    out.phase = derivative_phase(3);
    out.measured = Tensor<double>(n, 3);
    out.symbol = Tensor<double>(n, 3);
    out.expected = Tensor<double>(n, 3);
    const double scale = 2.0 * epsilon * std::pow(k, 3);
    const double coeff = -1.0 / (2.0 * (n - 2)) * xi.squaredNorm();
    for (std::size_t i = 0; i < plus.size(); ++i) {
        out.measured[i] = (plus[i] - minus[i]) / scale;
        out.symbol[i] = out.phase * out.measured[i];
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                out.expected(a, b, c) = coeff * (xi[a] * h(b, c) - xi[b] * h(a, c));
    double diff = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i)
        diff = std::max(diff, std::abs(out.symbol[i] - out.expected[i]));
    double e = max_abs(out.expected);
    out.relative_error = e > 0.0 ? diff / e : diff;
    return out;
}

double laplacian_phase_self_test(double k)
{
    const int n = 3;
    Point x{};
    x[0] = M_PI / (2.0 * k);
    auto coords = jets::coordinates(n, 2, x);
    Jet u = sin(k * coords[0]);
    jets::MultiIndex alpha{};
    alpha[0] = 2;
    return u.partial(alpha) / (k * k);
}

PerturbationFamily ricci_family()
{
    PerturbationFamily f;
    f.dim = 3;
    f.h = Eigen::MatrixXd::Zero(3, 3);
    f.h(1, 1) = 1.0;
    f.xi = Eigen::VectorXd::Unit(3, 0);
    f.frequencies = {8.0, 16.0, 32.0};
    f.rule = AmplitudeRule::InverseFrequency;
    return f;
}

ScalarLinearization scalar_linearization(const Eigen::MatrixXd& h, const Eigen::VectorXd& xi, double k,
                                         double epsilon)
{
    require_shapes(xi, h);
    Point x = phase_point(xi, k, M_PI / 2.0);
    auto b = tensorcalc::curvature_bundle(wave_perturbation(h, xi, k, epsilon), x, tensorcalc::Depth::Basic, 2);
    ScalarLinearization out;
    out.measured = b.scalar / (epsilon * k * k * derivative_phase(2));
    out.expected = xi.dot(h * xi) - xi.squaredNorm() * h.trace();
    out.error = std::abs(out.measured - out.expected);
    return out;
}

FrequencyProbe frequency_probe(ProbeTarget target, const PerturbationFamily& family)
{
    if (family.frequencies.size() < 3)
        throw ConfigError("frequency probe needs at least three frequencies");
    require_shapes(family.xi, family.h);
    FrequencyProbe out;
    out.target = target;
    const double linear = family.xi.dot(family.h * family.xi) - family.xi.squaredNorm() * family.h.trace();
    std::vector<double> ks, lead, rem;
    for (double k : family.frequencies) {
        if (!(k > 0.0))
            throw ConfigError("probe frequencies must be positive");
        double eps = family.amplitude(k);
        double wave_k = family.oscillate ? k : 1.0;
        auto g = wave_perturbation(family.h, family.xi, wave_k, eps, family.background);
        FrequencyRow row{k, eps, 0.0, 0.0};
        for (int j = 0; j < kPhaseCount; ++j) {
            double phase = (j + 0.5) * M_PI / kPhaseCount;
            Point x = phase_point(family.xi, wave_k, phase);
            if (target == ProbeTarget::RicciRemainder) {
                auto s = tensorcalc::ricci_gauge_remainder(g, x);
                row.leading = std::max(row.leading, max_abs(s.leading));
                row.remainder = std::max(row.remainder, max_abs(s.remainder));
            } else {
                auto b = tensorcalc::curvature_bundle(g, x, tensorcalc::Depth::Basic, 2);
                double l = eps * wave_k * wave_k * derivative_phase(2) * linear * std::sin(phase);
                row.leading = std::max(row.leading, std::abs(l));
                row.remainder = std::max(row.remainder, std::abs(b.scalar - l));
            }
        }
        out.rows.push_back(row);
        ks.push_back(k);
        lead.push_back(row.leading);
        rem.push_back(row.remainder);
    }
    auto slope = [&](const std::vector<double>& y) {
        bool positive = std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; });
        return positive ? loglog_slope(ks, y) : 0.0;
    };
    out.leading_slope = slope(lead);
    out.remainder_slope = slope(rem);
    return out;
}

InjectivityCheck cotton_injectivity(int n, std::size_t samples, Rng& rng)
{
    if (n < 3 || n > jets::kMaxDim)
        throw DimensionError("Cotton symbol check needs dimension 3 or 4");
    InjectivityCheck out;
    out.samples = samples;
    out.min_ratio = INFINITY;
    out.min_singular_value = INFINITY;
    // Orthonormal basis of symmetric matrices.
    std::vector<Eigen::MatrixXd> sym;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            e(a, b) = e(b, a) = a == b ? 1.0 : std::sqrt(0.5);
            sym.push_back(e);
        }
    for (std::size_t s = 0; s < samples; ++s) {
        Eigen::VectorXd xi(n);
        Eigen::MatrixXd h(n, n);
        do {
            for (int a = 0; a < n; ++a)
                xi[a] = rng.uniform(-1.0, 1.0);
        } while (xi.norm() < 1e-3);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                h(a, b) = h(b, a) = rng.uniform(-1.0, 1.0);
        out.min_ratio = std::min(out.min_ratio, max_abs(cotton_symbol(xi, h)) / (xi.norm() * max_abs(h)));

        Eigen::MatrixXd map(n * n * n, sym.size());
        for (std::size_t j = 0; j < sym.size(); ++j) {
            auto t = cotton_symbol(xi, sym[j]);
            for (std::size_t i = 0; i < t.size(); ++i)
                map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t[i];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
        out.min_singular_value = std::min(out.min_singular_value, svd.singularValues().minCoeff() / xi.norm());
    }
    return out;
}

} // namespace confcoord::probes
