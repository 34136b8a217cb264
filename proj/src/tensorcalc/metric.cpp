#include "confcoord/tensorcalc/metric.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace confcoord::tensorcalc {

Box Box::cube(int dim, double half_width)
{
    Box b;
    for (int a = 0; a < dim; ++a) {
        b.lo[a] = -half_width;
        b.hi[a] = half_width;
    }
    return b;
}

bool Box::contains(const Point& x, int dim) const
{
    for (int a = 0; a < dim; ++a)
        if (!(x[a] >= lo[a] && x[a] <= hi[a]))
            return false;
    return true;
}

MetricSpec::MetricSpec(std::string name, int dim, Signature signature, Box domain, ComponentFn components)
    : name_(std::move(name)), dim_(dim), signature_(signature), domain_(domain), components_(std::move(components))
{
    if (dim != 3 && dim != 4)
        throw ArgumentError("metric dimension must be 3 or 4");
    if (!components_)
        throw ArgumentError("metric has no component expressions");
}

std::vector<Jet> MetricSpec::components(std::span<const Jet> x) const
{
    int n = dim_;
    std::vector<Jet> upper = components_(x);
    if (static_cast<int>(upper.size()) != n * (n + 1) / 2)
        throw ArgumentError("metric expression returned the wrong number of components");
    std::vector<Jet> full(n * n);
    int k = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b, ++k) {
            full[a * n + b] = upper[k];
            if (b != a)
                full[b * n + a] = upper[k];
        }
    return full;
}

std::vector<Jet> MetricSpec::jets(const Point& x, int order) const
{
    require_in_domain(x);
    auto coords = jets::coordinates(dim_, order, x);
    return components(coords);
}

Eigen::MatrixXd MetricSpec::values(const Point& x) const
{
    auto g = jets(x, 0);
    Eigen::MatrixXd m(dim_, dim_);
    for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
            m(a, b) = g[a * dim_ + b].value();
    return m;
}

void MetricSpec::require_in_domain(const Point& x) const
{
    if (!domain_.contains(x, dim_))
        throw ArgumentError("point outside the domain of metric '" + name_ + "'");
}

void MetricSpec::validate(const Eigen::MatrixXd& g) const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    int negative = 0;
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        if (!std::isfinite(ev[i]) || ev[i] == 0.0)
            throw DegenerateMetricError("singular metric '" + name_ + "'");
        if (ev[i] < 0.0)
            ++negative;
        lo = std::min(lo, std::abs(ev[i]));
        hi = std::max(hi, std::abs(ev[i]));
    }
    int expected = signature_ == Signature::Riemannian ? 0 : 1;
    if (negative != expected)
        throw DegenerateMetricError("metric '" + name_ + "' has the wrong signature");
    if (hi / lo > kMaxConditionNumber)
        throw DegenerateMetricError("metric '" + name_ + "' is ill-conditioned");
}

MetricSpec conformal_rescale(const MetricSpec& g, ScalarFn c, const std::string& name)
{
    int n = g.dim();
    MetricSpec base = g;
    ComponentFn fn = [base, c, n](std::span<const Jet> x) {
        Jet factor = c(x);
        auto full = base.components(x);
        std::vector<Jet> upper;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                upper.push_back(factor * full[a * n + b]);
        return upper;
    };
    return MetricSpec(name.empty() ? "c*" + g.name() : name, n, g.signature(), g.domain(), fn);
}

MetricSpec determinant_normalize(const MetricSpec& g)
{
    int n = g.dim();
    MetricSpec base = g;
    double sign = g.signature() == Signature::Riemannian ? 1.0 : -1.0;
    ComponentFn fn = [base, n, sign](std::span<const Jet> x) {
        auto full = base.components(x);
        Jet factor = pow(sign * determinant(full, n), -1.0 / n);
        std::vector<Jet> upper;
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                upper.push_back(factor * full[a * n + b]);
        return upper;
    };
    return MetricSpec("normalized " + g.name(), n, g.signature(), g.domain(), fn);
}

Jet determinant(std::span<const Jet> m, int n)
{
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Jet sum = m[0].constant_like(0.0);
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j])
                    ++inversions;
        Jet term = m[perm[0]];
        for (int i = 1; i < n; ++i)
            term = term * m[i * n + perm[i]];
        if (inversions % 2 == 0)
            sum += term;
        else
            sum -= term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

std::vector<Jet> inverse(std::span<const Jet> m, int n)
{
    std::vector<Jet> a(m.begin(), m.end());
    std::vector<Jet> inv(n * n, m[0].constant_like(0.0));
    for (int i = 0; i < n; ++i)
        inv[i * n + i] = m[0].constant_like(1.0);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value()))
                piv = r;
        if (a[piv * n + col].value() == 0.0)
            throw DegenerateMetricError("singular jet matrix");
        if (piv != col)
            for (int k = 0; k < n; ++k) {
                std::swap(a[piv * n + k], a[col * n + k]);
                std::swap(inv[piv * n + k], inv[col * n + k]);
            }
        Jet rp = reciprocal(a[col * n + col]);
        for (int k = 0; k < n; ++k) {
            a[col * n + k] = a[col * n + k] * rp;
            inv[col * n + k] = inv[col * n + k] * rp;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            Jet f = a[r * n + col];
            for (int k = 0; k < n; ++k) {
                a[r * n + k] -= f * a[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    return inv;
}

} // namespace confcoord::tensorcalc
