#pragma once

#include "confcoord/jets/jet.hpp"
#include "confcoord/random.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace confcoord::conformalmaps {

using jets::Jet;
using jets::Point;
using tensorcalc::ScalarFn;

enum class PrimitiveKind { Translation, Rotation, Dilation, Inversion };

struct Primitive {
    PrimitiveKind kind = PrimitiveKind::Translation;
    Eigen::VectorXd shift;    ///< translation
    Eigen::MatrixXd rotation; ///< orthogonal Q
    double scale = 1.0;       ///< dilation λ
};

/// Composition of Möbius primitives of ℝⁿ, applied in order (first step first).
class MobiusMap {
public:
    MobiusMap() = default;

    static MobiusMap identity(int n);
    static MobiusMap translation(const Eigen::VectorXd& v);
    /// Throws ArgumentError unless ‖QᵀQ − I‖∞ <= 1e-12.
    static MobiusMap rotation(const Eigen::MatrixXd& q);
    /// Throws ArgumentError unless λ > 0.
    static MobiusMap dilation(int n, double lambda);
    /// x ↦ x/|x|².
    static MobiusMap inversion(int n);
    /// Seeded composition of `steps` primitives; inversions only when allowed.
    static MobiusMap random(int n, Rng& rng, int steps, bool allow_inversion = true);

    int dim() const { return dim_; }
    std::span<const Primitive> steps() const { return steps_; }
    /// next ∘ this.
    MobiusMap then(const MobiusMap& next) const;
    std::string describe() const;

private:
    explicit MobiusMap(int n) : dim_(n) {}
    int dim_ = 0;
    std::vector<Primitive> steps_;
};

/// outer ∘ inner.
MobiusMap compose(const MobiusMap& outer, const MobiusMap& inner);

struct MobiusValue {
    Point image{};
    Eigen::MatrixXd differential;
    /// c with DFᵀDF = c I.
    double factor = 1.0;
};

/// Closed-form image, differential and conformal factor. Throws
/// SingularityError when an inversion step meets its center.
MobiusValue mobius_eval(const MobiusMap& map, const Point& x);

/// The same map applied to coordinate jets; `factor` receives c as a jet.
std::vector<Jet> mobius_jets(const MobiusMap& map, std::span<const Jet> x, Jet* factor = nullptr);

/// ‖DFᵀDF − cI‖∞ / c.
double conformality_defect(const MobiusValue& v);

/// L_δ(c^{(n-2)/4} · u∘F)(x), evaluated with order-2 jets.
double kelvin_pullback_residual(const MobiusMap& map, const ScalarFn& u, const Point& x);

/// L_δ u at x.
double flat_conformal_laplacian(const ScalarFn& u, int n, const Point& x);

struct PullbackCheck {
    /// max over points and k of |L_δ(c^{(n-2)/4} u_k∘F)|
    double numerator = 0.0;
    /// max over points of |L_δ(c^{(n-2)/4} v∘F)|
    double denominator = 0.0;
    /// max |F*Z^k − (c^{(n-2)/4}u_k∘F)/(c^{(n-2)/4}v∘F)|
    double quotient = 0.0;
    /// max |L_δ u_k|, |L_δ v| on the target, at the image points
    double source = 0.0;
    std::size_t points = 0;
};

/// Pullback of the quotient chart Z^k = u_k / v through F at the given points.
/// Throws PreconditionError where v∘F <= 0.
PullbackCheck pullback_chart_check(const MobiusMap& map, std::span<const ScalarFn> u, const ScalarFn& v,
                                   std::span<const Point> points);

/// Points with radius in [r_lo, r_hi] about the origin.
std::vector<Point> annulus_points(Rng& rng, int n, double r_lo, double r_hi, std::size_t count);

} // namespace confcoord::conformalmaps
