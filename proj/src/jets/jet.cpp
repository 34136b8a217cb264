#include "confcoord/jets/jet.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace confcoord::jets {

namespace {

constexpr int kBase = kMaxOrder + 1;

int encode(const MultiIndex& a)
{
    int key = 0;
    for (int i = kMaxDim - 1; i >= 0; --i)
        key = key * kBase + a[i];
    return key;
}

void enumerate(int dim, int pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out)
{
    if (pos == dim - 1) {
        cur[pos] = remaining;
        out.push_back(cur);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        cur[pos] = k;
        enumerate(dim, pos + 1, remaining - k, cur, out);
    }
    cur[pos] = 0;
}

} // namespace

MonomialTable::MonomialTable(int dim) : dim_(dim)
{
    for (int d = 0; d <= kMaxOrder; ++d) {
        MultiIndex cur{};
        enumerate(dim, 0, d, cur, monomials_);
        count_upto_.push_back(monomials_.size());
    }
    int key_space = 1;
    for (int i = 0; i < kMaxDim; ++i)
        key_space *= kBase;
    lookup_.assign(key_space, -1);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
        const auto& m = monomials_[i];
        int deg = 0;
        double fact = 1.0;
        for (int a = 0; a < kMaxDim; ++a) {
            deg += m[a];
            for (int k = 2; k <= m[a]; ++k)
                fact *= k;
        }
        degree_.push_back(deg);
        factorial_.push_back(fact);
        lookup_[encode(m)] = static_cast<int>(i);
    }
    raise_.assign(monomials_.size() * kMaxDim, -1);
    for (std::size_t i = 0; i < monomials_.size(); ++i)
        for (int a = 0; a < dim; ++a) {
            MultiIndex m = monomials_[i];
            m[a] += 1;
            raise_[i * kMaxDim + a] = index(m);
        }
    for (int d = 0; d <= kMaxOrder; ++d) {
        for (std::size_t i = 0; i < monomials_.size(); ++i)
            for (std::size_t j = 0; j < monomials_.size(); ++j) {
                if (degree_[i] + degree_[j] != d)
                    continue;
                MultiIndex m{};
                for (int a = 0; a < kMaxDim; ++a)
                    m[a] = monomials_[i][a] + monomials_[j][a];
                triples_.push_back({static_cast<int>(i), static_cast<int>(j), index(m)});
            }
        triples_upto_.push_back(triples_.size());
    }
}

const MonomialTable& MonomialTable::get(int dim)
{
    if (dim < 1 || dim > kMaxDim)
        throw ArgumentError("jet dimension must be in 1.." + std::to_string(kMaxDim));
    static std::once_flag flags[kMaxDim];
    static const MonomialTable* tables[kMaxDim] = {};
    std::call_once(flags[dim - 1], [dim] { tables[dim - 1] = new MonomialTable(dim); });
    return *tables[dim - 1];
}

int MonomialTable::index(const MultiIndex& alpha) const
{
    int deg = 0;
    for (int a = 0; a < kMaxDim; ++a) {
        if (alpha[a] < 0 || (a >= dim_ && alpha[a] != 0))
            return -1;
        deg += alpha[a];
    }
    if (deg > kMaxOrder)
        return -1;
    return lookup_[encode(alpha)];
}

Jet Jet::constant(int dim, int order, double value, const Point& center)
{
    if (order < 0 || order > kMaxOrder)
        throw ArgumentError("jet order must be in 0.." + std::to_string(kMaxOrder));
    const auto& t = MonomialTable::get(dim);
    Jet j;
    j.dim_ = dim;
    j.order_ = order;
    j.center_ = center;
    j.c_.assign(t.count(order), 0.0);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(int dim, int order, int axis, const Point& center)
{
    if (axis < 0 || axis >= dim)
        throw ArgumentError("jet variable axis " + std::to_string(axis) + " out of range");
    Jet j = constant(dim, order, center[axis], center);
    if (order >= 1) {
        MultiIndex e{};
        e[axis] = 1;
        j.c_[MonomialTable::get(dim).index(e)] = 1.0;
    }
    return j;
}

Jet Jet::from_coefficients(int dim, int order, const Point& center, std::vector<double> coefficients)
{
    Jet j = constant(dim, order, 0.0, center);
    if (coefficients.size() != j.c_.size())
        throw ArgumentError("coefficient count does not match jet shape");
    j.c_ = std::move(coefficients);
    return j;
}

double Jet::coefficient(const MultiIndex& alpha) const
{
    const auto& t = MonomialTable::get(dim_);
    int idx = t.index(alpha);
    if (idx < 0)
        throw ArgumentError("invalid multi-index");
    if (t.degree(idx) > order_)
        throw OrderExceededError("multi-index exceeds jet order " + std::to_string(order_));
    return c_[idx];
}

double Jet::partial(const MultiIndex& alpha) const
{
    const auto& t = MonomialTable::get(dim_);
    int idx = t.index(alpha);
    if (idx < 0)
        throw ArgumentError("invalid multi-index");
    if (t.degree(idx) > order_)
        throw OrderExceededError("derivative order exceeds jet order " + std::to_string(order_));
    return t.factorial(idx) * c_[idx];
}

Jet Jet::derivative(int axis) const
{
    if (axis < 0 || axis >= dim_)
        throw ArgumentError("derivative axis out of range");
    if (order_ == 0)
        throw OrderExceededError("cannot differentiate an order-0 jet");
    const auto& t = MonomialTable::get(dim_);
    Jet r = constant(dim_, order_ - 1, 0.0, center_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        int up = t.raise(i, axis);
        r.c_[i] = (t.monomial(i)[axis] + 1) * c_[up];
    }
    return r;
}

Jet Jet::truncated(int order) const
{
    if (order > order_)
        throw OrderExceededError("cannot raise jet order by truncation");
    Jet r = *this;
    r.order_ = order;
    r.c_.resize(MonomialTable::get(dim_).count(order));
    return r;
}

Jet Jet::constant_like(double value) const
{
    return constant(dim_, order_, value, center_);
}

double Jet::evaluate(const Point& displacement) const
{
    const auto& t = MonomialTable::get(dim_);
    double sum = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        double term = c_[i];
        const auto& m = t.monomial(i);
        for (int a = 0; a < dim_; ++a)
            for (int k = 0; k < m[a]; ++k)
                term *= displacement[a];
        sum += term;
    }
    return sum;
}

void Jet::require_compatible(const Jet& o) const
{
    if (dim_ != o.dim_ || order_ != o.order_ || center_ != o.center_ || c_.empty() || o.c_.empty())
        throw ArgumentError("incompatible jets (dimension, order or center differ)");
}

Jet& Jet::operator+=(const Jet& o)
{
    require_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    require_compatible(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& o)
{
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o)
{
    *this = *this / o;
    return *this;
}

Jet& Jet::operator+=(double s)
{
    c_[0] += s;
    return *this;
}

Jet& Jet::operator-=(double s)
{
    c_[0] -= s;
    return *this;
}

Jet& Jet::operator*=(double s)
{
    for (double& v : c_)
        v *= s;
    return *this;
}

Jet& Jet::operator/=(double s)
{
    if (s == 0.0)
        throw SingularityError("division of a jet by zero");
    for (double& v : c_)
        v /= s;
    return *this;
}

Jet operator-(const Jet& a)
{
    Jet r = a;
    r *= -1.0;
    return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b)
{
    a.require_compatible(b);
    Jet r = a.constant_like(0.0);
    const auto& t = MonomialTable::get(a.dim());
    auto x = a.coefficients();
    auto y = b.coefficients();
    auto z = r.coefficients();
    for (const auto& tr : t.triples(a.order()))
        z[tr.c] += x[tr.a] * y[tr.b];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) *= s; }

namespace {

/// f(a) = Σ_m d[m] (a - a0)^m, evaluated by Horner on the nilpotent part.
Jet compose(const Jet& a, const std::vector<double>& d)
{
    Jet nil = a;
    nil.coefficients()[0] = 0.0;
    Jet r = a.constant_like(d[a.order()]);
    for (int m = a.order() - 1; m >= 0; --m) {
        r = r * nil;
        r.coefficients()[0] += d[m];
    }
    return r;
}

bool is_integer(double r) { return std::floor(r) == r; }

} // namespace

Jet reciprocal(const Jet& a)
{
    double v = a.value();
    if (v == 0.0)
        throw SingularityError("division by a jet with zero value");
    std::vector<double> d(a.order() + 1);
    double p = 1.0 / v;
    for (int m = 0; m <= a.order(); ++m) {
        d[m] = (m % 2 == 0 ? p : -p);
        p /= v;
    }
    return compose(a, d);
}

Jet exp(const Jet& a)
{
    std::vector<double> d(a.order() + 1);
    double e = std::exp(a.value());
    double fact = 1.0;
    for (int m = 0; m <= a.order(); ++m) {
        if (m > 0)
            fact *= m;
        d[m] = e / fact;
    }
    return compose(a, d);
}

Jet log(const Jet& a)
{
    double v = a.value();
    if (!(v > 0.0))
        throw SingularityError("log of a jet with non-positive value");
    std::vector<double> d(a.order() + 1);
    d[0] = std::log(v);
    double p = 1.0;
    for (int m = 1; m <= a.order(); ++m) {
        p /= v;
        d[m] = (m % 2 == 1 ? p : -p) / m;
    }
    return compose(a, d);
}

Jet pow(const Jet& a, double r)
{
    double v = a.value();
    bool nonneg_int = is_integer(r) && r >= 0.0;
    if (v < 0.0 && !is_integer(r))
        throw SingularityError("non-integer power of a negative jet");
    if (v == 0.0 && !nonneg_int)
        throw SingularityError("power of a jet with zero value");
    std::vector<double> d(a.order() + 1, 0.0);
    double binom = 1.0;
    for (int m = 0; m <= a.order(); ++m) {
        if (m > 0)
            binom *= (r - (m - 1)) / m;
        if (nonneg_int && m > r)
            break;
        d[m] = binom * std::pow(v, r - m);
    }
    return compose(a, d);
}

Jet sqrt(const Jet& a)
{
    if (!(a.value() > 0.0))
        throw SingularityError("sqrt of a jet with non-positive value");
    return pow(a, 0.5);
}

Jet sin(const Jet& a)
{
    std::vector<double> d(a.order() + 1);
    double s = std::sin(a.value()), c = std::cos(a.value());
    const double cycle[4] = {s, c, -s, -c};
    double fact = 1.0;
    for (int m = 0; m <= a.order(); ++m) {
        if (m > 0)
            fact *= m;
        d[m] = cycle[m % 4] / fact;
    }
    return compose(a, d);
}

Jet cos(const Jet& a)
{
    std::vector<double> d(a.order() + 1);
    double s = std::sin(a.value()), c = std::cos(a.value());
    const double cycle[4] = {c, -s, -c, s};
    double fact = 1.0;
    for (int m = 0; m <= a.order(); ++m) {
        if (m > 0)
            fact *= m;
        d[m] = cycle[m % 4] / fact;
    }
    return compose(a, d);
}

std::vector<Jet> coordinates(int dim, int order, const Point& center)
{
    std::vector<Jet> x;
    x.reserve(dim);
    for (int a = 0; a < dim; ++a)
        x.push_back(Jet::variable(dim, order, a, center));
    return x;
}

} // namespace confcoord::jets
