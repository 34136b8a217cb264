#pragma once

#include "confcoord/random.hpp"
#include "confcoord/tensorcalc/metric.hpp"
#include "confcoord/tensorcalc/tensor.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace confcoord::probes {

using tensorcalc::MetricSpec;
using tensorcalc::Tensor;

/// Sign of d-th derivative of sin at the phase where the result is ±sin or ±cos
/// equal to one: d ≡ 0, 1 (mod 4) give +1, d ≡ 2, 3 give −1.
int derivative_phase(int order);

/// Orthonormal (Frobenius) basis of symmetric h with ξ^a h_ab = 0 and tr h = 0.
/// For axis-aligned ξ the entries are exact.
std::vector<Eigen::MatrixXd> tt_basis(const Eigen::VectorXd& xi);

/// max(|ξ^a h_ab|, |tr h|, |h − hᵀ|) relative to |ξ|·‖h‖.
double tt_defect(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h);

/// δ + ε h sin(k ξ·x) (or η + … for a Lorentzian background).
MetricSpec wave_perturbation(const Eigen::MatrixXd& h, const Eigen::VectorXd& xi, double k, double epsilon,
                             tensorcalc::Signature background = tensorcalc::Signature::Riemannian);

/// A point where k ξ·x equals `phase`.
jets::Point phase_point(const Eigen::VectorXd& xi, double k, double phase);

struct BachProbe {
    /// (S(ε) − S(−ε)) / (2ε k⁴) at the sin = 1 point.
    Eigen::MatrixXd measured;
    /// −½ |ξ|⁴ h.
    Eigen::MatrixXd expected;
    /// ‖measured − expected‖∞ / ‖expected‖∞.
    double relative_error = 0.0;
    /// measured_ab / h_ab on the largest entry of h.
    double ratio = 0.0;
};

/// Linearized Bach tensor of δ + ε h sin(k ξ·x) in dimension 4.
/// Throws DimensionError for n ≠ 4 and PreconditionError for non-TT h.
BachProbe tt_symbol_probe_bach(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h, double k, double epsilon);

struct CottonProbe {
    /// (S(ε) − S(−ε)) / (2ε k³) at x = 0, where cos(k ξ·x) = 1.
    Tensor<double> measured;
    /// derivative_phase(3) · measured, the real symbol action.
    Tensor<double> symbol;
    /// −1/(2(n−2)) |ξ|² (ξ_a h_bc − ξ_b h_ac).
    Tensor<double> expected;
    /// ‖symbol − expected‖∞ / ‖expected‖∞, or the absolute value when expected = 0.
    double relative_error = 0.0;
    int phase = -1;
};

/// Linearized Cotton tensor in dimension 3. Throws DimensionError for n ≠ 3 and
/// PreconditionError for non-TT h.
CottonProbe tt_symbol_probe_cotton(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h, double k, double epsilon);

/// ∂_1∂_1 sin(k x¹) at the sin = 1 point, divided by k², against derivative_phase(2).
double laplacian_phase_self_test(double k);

enum class ProbeTarget { RicciRemainder, ScalarLinearization };
enum class AmplitudeRule { Fixed, InverseFrequency };

struct PerturbationFamily {
    tensorcalc::Signature background = tensorcalc::Signature::Riemannian;
    int dim = 3;
    Eigen::MatrixXd h;
    Eigen::VectorXd xi;
    std::vector<double> frequencies;
    AmplitudeRule rule = AmplitudeRule::InverseFrequency;
    double epsilon = 0.1;
    /// When false the profile is sin(ξ·x) for every k, a k-independent family.
    bool oscillate = true;

    double amplitude(double k) const { return rule == AmplitudeRule::Fixed ? epsilon : 1.0 / k; }
};

/// δ + (1/k) sin(k x¹) e₂⊗e₂ on ℝ³ with k ∈ {8, 16, 32}.
PerturbationFamily ricci_family();

struct FrequencyRow {
    double k = 0.0;
    double epsilon = 0.0;
    double leading = 0.0;
    double remainder = 0.0;
};

struct FrequencyProbe {
    ProbeTarget target = ProbeTarget::RicciRemainder;
    std::vector<FrequencyRow> rows;
    double leading_slope = 0.0;
    double remainder_slope = 0.0;
};

/// Leading part and remainder over the frequency list, as the maximum over
/// eight phases of k ξ·x. For the Ricci target the leading part is
/// −½ g^{cd}∂_c∂_d g_ab + ½(∂_aΓ_b + ∂_bΓ_a); for the scalar target it is
/// the linearization ε k² · derivative_phase(2) · (ξ^aξ^b h_ab − |ξ|² tr h) sin.
/// Throws ConfigError with fewer than three frequencies.
FrequencyProbe frequency_probe(ProbeTarget target, const PerturbationFamily& family);

struct ScalarLinearization {
    double measured = 0.0; ///< R(δ + ε h sin) / (ε k² · derivative_phase(2)) at sin = 1
    double expected = 0.0; ///< ξ^aξ^b h_ab − |ξ|² tr h
    double error = 0.0;
};

ScalarLinearization scalar_linearization(const Eigen::MatrixXd& h, const Eigen::VectorXd& xi, double k,
                                         double epsilon);

/// ξ_a h_bc − (1/n) ξ_a tr(h) δ_bc − ξ_b h_ac.
Tensor<double> cotton_symbol(const Eigen::VectorXd& xi, const Eigen::MatrixXd& h);

struct InjectivityCheck {
    std::size_t samples = 0;
    /// min ‖symbol‖∞ / (|ξ| ‖h‖∞) over random pairs.
    double min_ratio = 0.0;
    /// min over sampled ξ of the smallest singular value of h ↦ symbol on
    /// symmetric h (orthonormal basis), divided by |ξ|.
    double min_singular_value = 0.0;
};

InjectivityCheck cotton_injectivity(int n, std::size_t samples, Rng& rng);

} // namespace confcoord::probes
