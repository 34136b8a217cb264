#include "confcoord/errors.hpp"
#include "confcoord/jets/jet.hpp"
#include "confcoord/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace confcoord;
using namespace confcoord::jets;

namespace {

using ScalarOfPoint = std::function<double(const Point&)>;

/// Tensor-product central differences of second order, Richardson-extrapolated
/// to fourth order.
double fd_partial(const ScalarOfPoint& f, const Point& x, const MultiIndex& alpha, int dim, double h)
{
    auto stencil = [](int m, std::vector<std::pair<int, double>>& w, double& denom_pow) {
        w.clear();
        if (m == 0)
            w = {{0, 1.0}};
        else if (m == 1)
            w = {{1, 0.5}, {-1, -0.5}};
        else if (m == 2)
            w = {{1, 1.0}, {0, -2.0}, {-1, 1.0}};
        else
            w = {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}};
        denom_pow = m;
    };
    auto d = [&](double step) {
        std::vector<std::vector<std::pair<int, double>>> w(dim);
        double scale = 1.0;
        for (int a = 0; a < dim; ++a) {
            double p = 0;
            stencil(alpha[a], w[a], p);
            scale *= std::pow(step, p);
        }
        double sum = 0.0;
        std::function<void(int, Point, double)> rec = [&](int a, Point pt, double wt) {
            if (a == dim) {
                sum += wt * f(pt);
                return;
            }
            for (auto [off, c] : w[a]) {
                Point q = pt;
                q[a] += off * step;
                rec(a + 1, q, wt * c);
            }
        };
        rec(0, x, 1.0);
        return sum / scale;
    };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

Jet random_jet(Rng& rng, int dim, int order, const Point& c)
{
    std::vector<double> coeffs(MonomialTable::get(dim).count(order));
    for (double& v : coeffs)
        v = rng.uniform(-1.0, 1.0);
    coeffs[0] = rng.uniform(0.5, 2.0);
    return Jet::from_coefficients(dim, order, c, coeffs);
}

double max_diff(const Jet& a, const Jet& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        m = std::max(m, std::abs(a.coefficients()[i] - b.coefficients()[i]));
    return m;
}

double max_abs(const Jet& a)
{
    double m = 0.0;
    for (double v : a.coefficients())
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST(JetSeed, ConstantAndVariable)
{
    Point c{2.0, -1.0, 0.5};
    Jet k = Jet::constant(3, 4, 7.0, c);
    EXPECT_EQ(k.value(), 7.0);
    EXPECT_EQ(k.partial({1, 0, 0, 0}), 0.0);
    Jet y = Jet::variable(3, 4, 1, c);
    EXPECT_EQ(y.value(), -1.0);
    EXPECT_EQ(y.partial({0, 1, 0, 0}), 1.0);
    EXPECT_EQ(y.partial({0, 2, 0, 0}), 0.0);
}

TEST(JetSeed, InvalidAxisThrows)
{
    EXPECT_THROW(Jet::variable(3, 4, 3, Point{}), ArgumentError);
    EXPECT_THROW(Jet::variable(3, 4, -1, Point{}), ArgumentError);
    EXPECT_THROW(Jet::constant(5, 2, 1.0), ArgumentError);
}

TEST(JetArith, SquareAtTwo)
{
    Jet x = Jet::variable(1, 4, 0, Point{2.0});
    Jet s = x * x;
    EXPECT_DOUBLE_EQ(s.value(), 4.0);
    EXPECT_DOUBLE_EQ(s.partial({1}), 4.0);
    EXPECT_DOUBLE_EQ(s.partial({2}), 2.0);
    EXPECT_DOUBLE_EQ(s.partial({3}), 0.0);
}

TEST(JetArith, BinomialCubeMatchesClosedForm)
{
    // (1 + x + 2y)^3 about the origin: coefficient of x^i y^j is 3!/(i! j! k!) 2^j.
    auto xs = coordinates(2, 5, Point{});
    Jet p = 1.0 + xs[0] + 2.0 * xs[1];
    Jet cube = p * p * p;
    const double fact[] = {1, 1, 2, 6};
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j) {
            int k = 3 - i - j;
            double expected = 6.0 / (fact[i] * fact[j] * fact[k]) * std::pow(2.0, j);
            EXPECT_DOUBLE_EQ(cube.coefficient({i, j, 0, 0}), expected) << i << "," << j;
        }
    EXPECT_EQ(cube.coefficient({4, 0, 0, 0}), 0.0);
}

TEST(JetArith, IncompatibleJetsThrow)
{
    Jet a = Jet::variable(2, 3, 0, Point{});
    Jet b = Jet::variable(2, 4, 0, Point{});
    Jet c = Jet::variable(2, 3, 0, Point{1.0, 0.0});
    Jet d = Jet::variable(3, 3, 0, Point{});
    EXPECT_THROW(a + b, ArgumentError);
    EXPECT_THROW(a * c, ArgumentError);
    EXPECT_THROW(a - d, ArgumentError);
}

TEST(JetArith, DivisionByZeroValueThrows)
{
    Jet x = Jet::variable(2, 3, 0, Point{});
    EXPECT_THROW(1.0 / x, SingularityError);
    EXPECT_THROW(x / x, SingularityError);
    EXPECT_THROW(x / 0.0, SingularityError);
}

TEST(JetArith, DivisionInvertsMultiplication)
{
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Point c{rng.uniform(), rng.uniform(), rng.uniform()};
        Jet a = random_jet(rng, 3, 5, c), b = random_jet(rng, 3, 5, c);
        EXPECT_LT(max_diff((a * b) / b, a), 1e-12 * (1.0 + max_abs(a)));
    }
}

TEST(JetMap, LogExpRoundTrip)
{
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Point c{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        Jet a = random_jet(rng, 4, 4, c);
        EXPECT_LT(max_diff(log(exp(a)), a), 1e-13 * (1.0 + max_abs(a)));
        EXPECT_LT(max_diff(exp(log(a)), a), 1e-12 * (1.0 + max_abs(a)));
    }
}

TEST(JetMap, PowerTwoIsSquare)
{
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Jet a = random_jet(rng, 3, 6, Point{});
        a.coefficients()[0] = rng.uniform(-2.0, 2.0);
        EXPECT_LT(max_diff(pow(a, 2.0), a * a), 1e-13 * (1.0 + max_abs(a * a)));
    }
}

TEST(JetMap, SqrtSquaredAndTrigIdentity)
{
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        Jet a = random_jet(rng, 2, 6, Point{0.3, -0.2});
        Jet r = sqrt(a);
        EXPECT_LT(max_diff(r * r, a), 1e-12 * (1.0 + max_abs(a)));
        Jet one = sin(a) * sin(a) + cos(a) * cos(a);
        EXPECT_LT(max_diff(one, a.constant_like(1.0)), 1e-12);
    }
}

TEST(JetMap, DomainViolationsThrow)
{
    Jet m = Jet::constant(2, 3, -1.0);
    Jet z = Jet::constant(2, 3, 0.0);
    EXPECT_THROW(log(m), SingularityError);
    EXPECT_THROW(log(z), SingularityError);
    EXPECT_THROW(sqrt(m), SingularityError);
    EXPECT_THROW(sqrt(z), SingularityError);
    EXPECT_THROW(pow(m, 0.5), SingularityError);
    EXPECT_THROW(pow(z, -1.0), SingularityError);
    EXPECT_NO_THROW(pow(m, 3.0));
    EXPECT_NO_THROW(pow(z, 2.0));
}

TEST(JetPartial, OrderExceededThrows)
{
    Jet x = Jet::variable(3, 2, 0, Point{});
    EXPECT_THROW(x.partial({2, 1, 0, 0}), OrderExceededError);
    EXPECT_NO_THROW(x.partial({1, 1, 0, 0}));
    EXPECT_THROW(Jet::constant(2, 0, 1.0).derivative(0), OrderExceededError);
}

TEST(JetPartial, MixedSineAgainstFiniteDifferences)
{
    auto xs = coordinates(2, 4, Point{});
    Jet s = sin(xs[0] * xs[1]);
    double jet = s.partial({1, 1, 0, 0});
    EXPECT_DOUBLE_EQ(jet, 1.0);
    auto f = [](const Point& p) { return std::sin(p[0] * p[1]); };
    double fd = fd_partial(f, Point{}, {1, 1, 0, 0}, 2, 1e-4);
    EXPECT_NEAR(jet, fd, 1e-6);
}

TEST(JetPartial, CompositeAgainstFiniteDifferencesUpToThirdOrder)
{
    Rng rng(11);
    auto expr = [](auto x, auto y, auto z) { return exp(sin(x) * y) / (1.0 + z * z) + sqrt(2.0 + x * z); };
    auto f = [&](const Point& p) {
        using std::exp, std::sin, std::sqrt;
        return expr(p[0], p[1], p[2]);
    };
    for (int trial = 0; trial < 5; ++trial) {
        Point c{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        auto x = coordinates(3, 3, c);
        Jet j = expr(x[0], x[1], x[2]);
        const auto& table = MonomialTable::get(3);
        for (std::size_t i = 0; i < table.count(3); ++i) {
            MultiIndex a = table.monomial(i);
            double fd = fd_partial(f, c, a, 3, 2e-3);
            double jv = j.partial(a);
            EXPECT_NEAR(jv, fd, 1e-6 * std::max(1.0, std::abs(jv)))
                << "alpha=" << a[0] << a[1] << a[2];
        }
    }
}

TEST(JetInvariants, LeibnizRule)
{
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        Point c{rng.uniform(), rng.uniform(), rng.uniform()};
        Jet a = random_jet(rng, 3, 5, c), b = random_jet(rng, 3, 5, c);
        for (int axis = 0; axis < 3; ++axis) {
            Jet lhs = (a * b).derivative(axis);
            Jet rhs = a.derivative(axis) * b.truncated(4) + a.truncated(4) * b.derivative(axis);
            EXPECT_LT(max_diff(lhs, rhs), 1e-15 * 64 * (1.0 + max_abs(lhs)));
        }
    }
}

TEST(JetInvariants, RingAxioms)
{
    Rng rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        Point c{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        Jet a = random_jet(rng, 4, 4, c), b = random_jet(rng, 4, 4, c), d = random_jet(rng, 4, 4, c);
        EXPECT_EQ(max_diff(a + b, b + a), 0.0);
        EXPECT_LT(max_diff((a + b) + d, a + (b + d)), 1e-15 * 8);
        EXPECT_LT(max_diff(a * b, b * a), 1e-13);
        EXPECT_LT(max_diff((a * b) * d, a * (b * d)), 1e-12);
        EXPECT_LT(max_diff(a * (b + d), a * b + a * d), 1e-12);
    }
}

TEST(JetInvariants, TruncationIsPrefix)
{
    Rng rng(2);
    Jet a = random_jet(rng, 3, 6, Point{});
    Jet b = random_jet(rng, 3, 6, Point{});
    EXPECT_LT(max_diff((a * b).truncated(3), a.truncated(3) * b.truncated(3)), 1e-15);
    EXPECT_THROW(a.truncated(3).truncated(4), OrderExceededError);
}
