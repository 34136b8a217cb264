#include "confcoord/conformalmaps/mobius.hpp"

#include "confcoord/errors.hpp"

#include <cmath>
#include <sstream>

namespace confcoord::conformalmaps {

namespace {

constexpr double kOrthogonalityTolerance = 1e-12;

void require_dim(int n)
{
    if (n < 1 || n > jets::kMaxDim)
        throw ArgumentError("Möbius map dimension out of range");
}

double squared_norm(const Point& y, int n)
{
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        s += y[a] * y[a];
    return s;
}

} // namespace

MobiusMap MobiusMap::identity(int n)
{
    require_dim(n);
    return MobiusMap(n);
}

MobiusMap MobiusMap::translation(const Eigen::VectorXd& v)
{
    MobiusMap m = identity(static_cast<int>(v.size()));
    Primitive p;
    p.kind = PrimitiveKind::Translation;
    p.shift = v;
    m.steps_.push_back(p);
    return m;
}

MobiusMap MobiusMap::rotation(const Eigen::MatrixXd& q)
{
    if (q.rows() != q.cols())
        throw ArgumentError("rotation must be square");
    const int n = static_cast<int>(q.rows());
    MobiusMap m = identity(n);
    double defect = (q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(defect <= kOrthogonalityTolerance))
        throw ArgumentError("rotation matrix is not orthogonal");
    Primitive p;
    p.kind = PrimitiveKind::Rotation;
    p.rotation = q;
    m.steps_.push_back(p);
    return m;
}

MobiusMap MobiusMap::dilation(int n, double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ArgumentError("dilation factor must be positive");
    MobiusMap m = identity(n);
    Primitive p;
    p.kind = PrimitiveKind::Dilation;
    p.scale = lambda;
    m.steps_.push_back(p);
    return m;
}

MobiusMap MobiusMap::inversion(int n)
{
    MobiusMap m = identity(n);
    Primitive p;
    p.kind = PrimitiveKind::Inversion;
    m.steps_.push_back(p);
    return m;
}

MobiusMap MobiusMap::random(int n, Rng& rng, int steps, bool allow_inversion)
{
    MobiusMap m = identity(n);
    for (int s = 0; s < steps; ++s) {
        int kind = rng.integer(0, allow_inversion ? 3 : 2);
        if (kind == 0) {
            Eigen::VectorXd v(n);
            for (int a = 0; a < n; ++a)
                v[a] = rng.uniform(-1.0, 1.0);
            m = m.then(translation(v));
        } else if (kind == 1) {
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    a(i, j) = rng.uniform(-1.0, 1.0);
            Eigen::MatrixXd q = a.householderQr().householderQ();
            m = m.then(rotation(q));
        } else if (kind == 2) {
            m = m.then(dilation(n, rng.uniform(0.5, 2.0)));
        } else {
            m = m.then(inversion(n));
        }
    }
    return m;
}

MobiusMap MobiusMap::then(const MobiusMap& next) const
{
    if (next.dim_ != dim_)
        throw DimensionError("cannot compose Möbius maps of different dimension");
    MobiusMap out = *this;
    out.steps_.insert(out.steps_.end(), next.steps_.begin(), next.steps_.end());
    return out;
}

std::string MobiusMap::describe() const
{
    std::ostringstream os;
    os << "mobius[" << dim_ << "](";
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (i)
            os << ", ";
        switch (steps_[i].kind) {
        case PrimitiveKind::Translation:
            os << "translate";
            break;
        case PrimitiveKind::Rotation:
            os << "rotate";
            break;
        case PrimitiveKind::Dilation:
            os << "dilate " << steps_[i].scale;
            break;
        case PrimitiveKind::Inversion:
            os << "invert";
            break;
        }
    }
    os << ")";
    return os.str();
}

MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner)
{
    return inner.then(outer);
}

MobiusValue mobius_eval(const MobiusMap& map, const Point& x)
{
    const int n = map.dim();
    MobiusValue v;
    v.image = x;
    v.differential = Eigen::MatrixXd::Identity(n, n);
    v.factor = 1.0;
    for (const auto& p : map.steps()) {
        Point& y = v.image;
        switch (p.kind) {
        case PrimitiveKind::Translation:
            for (int a = 0; a < n; ++a)
                y[a] += p.shift[a];
            break;
        case PrimitiveKind::Rotation: {
            Eigen::VectorXd yy(n);
            for (int a = 0; a < n; ++a)
                yy[a] = y[a];
            yy = p.rotation * yy;
            for (int a = 0; a < n; ++a)
                y[a] = yy[a];
            v.differential = p.rotation * v.differential;
            break;
        }
        case PrimitiveKind::Dilation:
            for (int a = 0; a < n; ++a)
                y[a] *= p.scale;
            v.differential *= p.scale;
            v.factor *= p.scale * p.scale;
            break;
        case PrimitiveKind::Inversion: {
            double r2 = squared_norm(y, n);
            if (!(r2 > 0.0))
                throw SingularityError("Möbius inversion evaluated at its center");
            Eigen::MatrixXd d(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    d(a, b) = ((a == b ? 1.0 : 0.0) - 2.0 * y[a] * y[b] / r2) / r2;
            for (int a = 0; a < n; ++a)
                y[a] /= r2;
            v.differential = d * v.differential;
            v.factor /= r2 * r2;
            break;
        }
        }
    }
    return v;
}

std::vector<Jet> mobius_jets(const MobiusMap& map, std::span<const Jet> x, Jet* factor)
{
    const int n = map.dim();
    if (static_cast<int>(x.size()) != n)
        throw DimensionError("coordinate jets do not match the Möbius map dimension");
    std::vector<Jet> y(x.begin(), x.end());
    Jet c = y[0].constant_like(1.0);
    for (const auto& p : map.steps()) {
        switch (p.kind) {
        case PrimitiveKind::Translation:
            for (int a = 0; a < n; ++a)
                y[a] = y[a] + p.shift[a];
            break;
        case PrimitiveKind::Rotation: {
            std::vector<Jet> r(n, y[0].constant_like(0.0));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    r[a] += p.rotation(a, b) * y[b];
            y = std::move(r);
            break;
        }
        case PrimitiveKind::Dilation:
            for (int a = 0; a < n; ++a)
                y[a] = p.scale * y[a];
            c = (p.scale * p.scale) * c;
            break;
        case PrimitiveKind::Inversion: {
            Jet r2 = y[0].constant_like(0.0);
            for (int a = 0; a < n; ++a)
                r2 += y[a] * y[a];
            if (!(r2.value() > 0.0))
                throw SingularityError("Möbius inversion evaluated at its center");
            Jet inv = reciprocal(r2);
            for (int a = 0; a < n; ++a)
                y[a] = y[a] * inv;
            c = c * inv * inv;
            break;
        }
        }
    }
    if (factor)
        *factor = c;
    return y;
}

double conformality_defect(const MobiusValue& v)
{
    const auto n = v.differential.rows();
    Eigen::MatrixXd m = v.differential.transpose() * v.differential - v.factor * Eigen::MatrixXd::Identity(n, n);
    return m.cwiseAbs().maxCoeff() / v.factor;
}

namespace {

// -Σ ∂_a∂_a u at the jet center.
double flat_laplacian(const Jet& u, int n)
{
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        jets::MultiIndex alpha{};
        alpha[a] = 2;
        s += u.partial(alpha);
    }
    return -s;
}

Jet weighted_pullback(const MobiusMap& map, const ScalarFn& u, std::span<const Jet> coords)
{
    const int n = map.dim();
    Jet c;
    auto y = mobius_jets(map, coords, &c);
    return pow(c, (n - 2) / 4.0) * u(y);
}

} // namespace

double flat_conformal_laplacian(const ScalarFn& u, int n, const Point& x)
{
    auto coords = jets::coordinates(n, 2, x);
    return flat_laplacian(u(coords), n);
}

double kelvin_pullback_residual(const MobiusMap& map, const ScalarFn& u, const Point& x)
{
    const int n = map.dim();
    auto coords = jets::coordinates(n, 2, x);
    return flat_laplacian(weighted_pullback(map, u, coords), n);
}

PullbackCheck pullback_chart_check(const MobiusMap& map, std::span<const ScalarFn> u, const ScalarFn& v,
                                   std::span<const Point> points)
{
    const int n = map.dim();
    if (static_cast<int>(u.size()) != n)
        throw DimensionError("pullback check needs one numerator per coordinate");
    PullbackCheck out;
    for (const auto& x : points) {
        auto coords = jets::coordinates(n, 2, x);
        Jet den = weighted_pullback(map, v, coords);
        if (!(den.value() > 0.0))
            throw PreconditionError("quotient denominator must be positive");
        out.denominator = std::max(out.denominator, std::abs(flat_laplacian(den, n)));

        MobiusValue fx = mobius_eval(map, x);
        auto target = jets::coordinates(n, 2, fx.image);
        double v_target = v(target).value();
        out.source = std::max(out.source, std::abs(flat_laplacian(v(target), n)));
        for (int k = 0; k < n; ++k) {
            Jet num = weighted_pullback(map, u[k], coords);
            out.numerator = std::max(out.numerator, std::abs(flat_laplacian(num, n)));
            Jet uk_target = u[k](target);
            out.source = std::max(out.source, std::abs(flat_laplacian(uk_target, n)));
            double pulled = uk_target.value() / v_target;
            out.quotient = std::max(out.quotient, std::abs(pulled - num.value() / den.value()));
        }
        ++out.points;
    }
    return out;
}

std::vector<Point> annulus_points(Rng& rng, int n, double r_lo, double r_hi, std::size_t count)
{
    std::vector<Point> pts;
    pts.reserve(count);
    while (pts.size() < count) {
        Point p{};
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
            p[a] = rng.uniform(-1.0, 1.0);
            s += p[a] * p[a];
        }
        if (s > 1.0 || s < 1e-4)
            continue;
        double r = rng.uniform(r_lo, r_hi) / std::sqrt(s);
        for (int a = 0; a < n; ++a)
            p[a] *= r;
        pts.push_back(p);
    }
    return pts;
}

} // namespace confcoord::conformalmaps
