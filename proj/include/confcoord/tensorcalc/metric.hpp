#pragma once

#include "confcoord/jets/jet.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace confcoord::tensorcalc {

using jets::Jet;
using jets::Point;

enum class Signature { Riemannian, Lorentzian };

/// Axis-aligned coordinate box on which a metric expression is defined.
struct Box {
    Point lo{};
    Point hi{};

    static Box cube(int dim, double half_width);
    bool contains(const Point& x, int dim) const;
};

/// Upper-triangular metric components g_00, g_01, .., g_0n, g_11, .. as jets of x.
using ComponentFn = std::function<std::vector<Jet>(std::span<const Jet>)>;
/// Jet-evaluable scalar expression u(x).
using ScalarFn = std::function<Jet(std::span<const Jet>)>;

constexpr double kMaxConditionNumber = 1e6;

/// Metric given by jet-evaluable component expressions.
///
/// Positivity (or Lorentzian signature) and the condition-number bound are
/// checked at the points where the metric is evaluated.
class MetricSpec {
public:
    MetricSpec() = default;
    MetricSpec(std::string name, int dim, Signature signature, Box domain, ComponentFn components);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    Signature signature() const { return signature_; }
    const Box& domain() const { return domain_; }

    /// Full n×n component jets (row-major) from coordinate jets.
    std::vector<Jet> components(std::span<const Jet> x) const;
    /// Component jets of the given order about x.
    std::vector<Jet> jets(const Point& x, int order) const;
    Eigen::MatrixXd values(const Point& x) const;

    /// Throws ArgumentError outside the domain.
    void require_in_domain(const Point& x) const;
    /// Throws DegenerateMetricError when the eigenvalues at x are inconsistent
    /// with the signature or the condition number exceeds the bound.
    void validate(const Eigen::MatrixXd& g) const;

private:
    std::string name_;
    int dim_ = 0;
    Signature signature_ = Signature::Riemannian;
    Box domain_;
    ComponentFn components_;
};

/// Component jets of c·g.
MetricSpec conformal_rescale(const MetricSpec& g, ScalarFn c, const std::string& name = "");
/// |det g|^{-1/n} g.
MetricSpec determinant_normalize(const MetricSpec& g);

/// det of a row-major n×n jet matrix.
Jet determinant(std::span<const Jet> m, int n);
/// Inverse of a row-major n×n jet matrix by Gauss-Jordan with pivoting on values.
std::vector<Jet> inverse(std::span<const Jet> m, int n);

} // namespace confcoord::tensorcalc
