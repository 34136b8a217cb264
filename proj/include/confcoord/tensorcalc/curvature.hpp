#pragma once

#include "confcoord/tensorcalc/metric.hpp"
#include "confcoord/tensorcalc/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace confcoord::tensorcalc {

enum class Depth {
    Basic, ///< through Riemann, Ricci, R, Schouten and Weyl
    Full   ///< adds Cotton and, in dimension 4, Bach
};

constexpr int kDefaultJetOrder = 5;

/// Jet-valued curvature of a metric about one point.
///
/// Orders drop by one per differentiation: for metric jets of order K the
/// Christoffel symbols have order K-1, curvature K-2, Cotton K-3, Bach K-4.
/// Riemann follows the convention R_abcd = g_de R_abc^e with
/// R_abc^d = ∂_a Γ^d_bc - ∂_b Γ^d_ac + Γ^d_ae Γ^e_bc - Γ^d_be Γ^e_ac,
/// so R_bc = R_abc^a and W below is trace-free.
struct GeometryJets {
    int dim = 0;
    int order = 0;
    Signature signature = Signature::Riemannian;
    Depth depth = Depth::Basic;

    std::vector<Jet> g;     ///< g_ab, row-major
    std::vector<Jet> ginv;  ///< g^ab
    Jet log_abs_det;        ///< log|g|
    Tensor<Jet> dg;         ///< ∂_c g_ab at (c, a, b)
    Tensor<Jet> christoffel; ///< Γ^c_ab at (c, a, b)
    std::vector<Jet> gamma_up;       ///< Γ^a = g^bc Γ^a_bc
    std::vector<Jet> gamma_down;     ///< Γ_a = g_ab Γ^b
    std::vector<Jet> gamma_down_alt; ///< Γ_a = g^bc ∂_b g_ac - ½ ∂_a log|g|

    Tensor<Jet> riemann; ///< R_abcd
    Tensor<Jet> ricci;
    Jet scalar;
    Tensor<Jet> schouten;
    Tensor<Jet> weyl;

    Tensor<Jet> cotton;    ///< C_abc = ∇_a P_bc - ∇_b P_ac
    Tensor<Jet> bach;      ///< from the Schouten tensor
    Tensor<Jet> bach_weyl; ///< ∇^c∇^d W_acbd + ½ R^cd W_acbd
};

/// Full pipeline from metric component jets (row-major, all of equal order).
GeometryJets geometry_from_jets(std::vector<Jet> g, Signature signature, Depth depth);

/// Pointwise curvature values.
struct CurvatureBundle {
    int dim = 0;
    Signature signature = Signature::Riemannian;
    Depth depth = Depth::Basic;
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    Tensor<double> christoffel; ///< Γ^c_ab at (c, a, b)
    std::vector<double> gamma_up;
    std::vector<double> gamma_down;
    Tensor<double> riemann;
    Tensor<double> ricci;
    double scalar = 0.0;
    Tensor<double> schouten;
    Tensor<double> weyl;
    Tensor<double> cotton;
    Tensor<double> bach;
    Tensor<double> obstruction;
    bool has_cotton = false;
    bool has_bach = false;
};

CurvatureBundle curvature_bundle(const MetricSpec& g, const Point& x, Depth depth = Depth::Full,
                                 int order = kDefaultJetOrder);
CurvatureBundle values_of(const GeometryJets& geo);

struct ChristoffelResult {
    Tensor<double> symbols;           ///< Γ^c_ab at (c, a, b)
    std::vector<double> gamma_up;
    std::vector<double> gamma_down;   ///< via Γ^a lowered
    std::vector<double> gamma_down_alt; ///< via g^bc ∂_b g_ac - ½ ∂_a log|g|
    double route_discrepancy = 0.0;   ///< max |difference| / max(1, max |Γ_a|)
};

ChristoffelResult christoffel(const MetricSpec& g, const Point& x);

struct BachComparison {
    Tensor<double> schouten_form;
    Tensor<double> weyl_form;
    double relative_difference = 0.0; ///< max |difference| / max |B|
};

/// Both expressions of the Bach tensor; dimension 4 only.
BachComparison bach_two_ways(const MetricSpec& g, const Point& x, int order = kDefaultJetOrder);

/// Obstruction tensor; equals the Bach tensor in dimension 4.
Tensor<double> obstruction_tensor(const MetricSpec& g, const Point& x, int order = kDefaultJetOrder);
/// Dimension check shared by obstruction evaluation paths.
void require_obstruction_dimension(int dim);

/// (n-2) / (4(n-1)).
double conformal_coupling(int n);
/// 2n / (n-2).
double yamabe_exponent(int n);

/// L_g u = Δ_g u + (n-2)/(4(n-1)) R u with Δ_g = -|g|^{-1/2} ∂_a(|g|^{1/2} g^ab ∂_b).
/// In Lorentzian signature |g| = -det g and the same formula gives the wave operator.
double conformal_laplacian_apply(const MetricSpec& g, const ScalarFn& u, const Point& x);
/// The same operator from precomputed jets of order >= 2.
Jet conformal_laplacian_jet(const std::vector<Jet>& g, Signature signature, const Jet& u);

struct ScalarResidual {
    double residual = 0.0;
    double scale = 0.0; ///< magnitude of the compared terms
    double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// R(f^{p-2} g) - f^{1-p} (4(n-1)/(n-2)) L_g f.
ScalarResidual yamabe_scaling_residual(const MetricSpec& g, const ScalarFn& f, const Point& x);

struct RicciSplit {
    Tensor<double> ricci;
    /// -½ g^cd ∂_c∂_d g_ab + ½(∂_a Γ_b + ∂_b Γ_a)
    Tensor<double> leading;
    Tensor<double> remainder;
};

RicciSplit ricci_gauge_remainder(const MetricSpec& g, const Point& x);

} // namespace confcoord::tensorcalc
