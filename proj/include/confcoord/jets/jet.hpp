#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace confcoord::jets {

constexpr int kMaxDim = 4;
constexpr int kMaxOrder = 8;

using MultiIndex = std::array<int, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Graded enumeration of monomials x^α, |α| <= kMaxOrder, in a fixed dimension.
///
/// Monomials of degree <= K form a prefix of the enumeration, so a jet of order
/// K stores exactly `count(K)` coefficients and truncation is a resize.
class MonomialTable {
public:
    struct Triple {
        int a, b, c; ///< x^a * x^b = x^c
    };

    static const MonomialTable& get(int dim);

    int dim() const { return dim_; }
    std::size_t count(int order) const { return count_upto_[order]; }
    const MultiIndex& monomial(std::size_t i) const { return monomials_[i]; }
    int degree(std::size_t i) const { return degree_[i]; }
    /// Index of α, or -1 when |α| > kMaxOrder.
    int index(const MultiIndex& alpha) const;
    /// Index of monomial i times x^axis.
    int raise(std::size_t i, int axis) const { return raise_[i * kMaxDim + axis]; }
    /// Products whose result has degree <= order.
    std::span<const Triple> triples(int order) const
    {
        return {triples_.data(), triples_upto_[order]};
    }
    double factorial(std::size_t i) const { return factorial_[i]; }

private:
    explicit MonomialTable(int dim);

    int dim_;
    std::vector<MultiIndex> monomials_;
    std::vector<int> degree_;
    std::vector<double> factorial_;
    std::vector<std::size_t> count_upto_;
    std::vector<int> lookup_;
    std::vector<int> raise_;
    std::vector<Triple> triples_;
    std::vector<std::size_t> triples_upto_;
};

/// Truncated multivariate Taylor expansion about a center point.
///
/// Coefficient c_α multiplies (x - center)^α, so ∂^α f(center) = α! c_α.
class Jet {
public:
    Jet() = default;

    static Jet constant(int dim, int order, double value, const Point& center = {});
    /// The coordinate function x^axis.
    static Jet variable(int dim, int order, int axis, const Point& center);
    /// Builds a jet from raw coefficients in table order.
    static Jet from_coefficients(int dim, int order, const Point& center,
                                 std::vector<double> coefficients);

    int dim() const { return dim_; }
    int order() const { return order_; }
    const Point& center() const { return center_; }
    bool empty() const { return c_.empty(); }

    double value() const { return c_[0]; }
    double coefficient(const MultiIndex& alpha) const;
    /// ∂^α at the center.
    double partial(const MultiIndex& alpha) const;
    /// First derivative along one axis; the result has order - 1.
    Jet derivative(int axis) const;
    Jet truncated(int order) const;
    /// Same center and shape, every coefficient zero except the value.
    Jet constant_like(double value) const;
    /// Evaluates the Taylor polynomial at center + displacement.
    double evaluate(const Point& displacement) const;

    std::span<const double> coefficients() const { return c_; }
    std::span<double> coefficients() { return c_; }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

    /// Throws ArgumentError unless dimension, order and center agree.
    void require_compatible(const Jet& o) const;

private:
    int dim_ = 0;
    int order_ = 0;
    Point center_{};
    std::vector<double> c_;
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double r);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

/// Seeds the coordinate functions x^0..x^{dim-1} about `center`.
std::vector<Jet> coordinates(int dim, int order, const Point& center);

} // namespace confcoord::jets
