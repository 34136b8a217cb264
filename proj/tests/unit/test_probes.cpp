#include "confcoord/errors.hpp"
#include "confcoord/probes/probes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace confcoord;
using namespace confcoord::probes;

namespace {

Eigen::MatrixXd sym_pair(int n, int a, int b)
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(a, b) = h(b, a) = 1.0;
    return h;
}

Eigen::MatrixXd diag_pair(int n, int a, int b)
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(a, a) = 1.0;
    h(b, b) = -1.0;
    return h;
}

double max_abs(const Tensor<double>& t)
{
    double m = 0.0;
    for (double v : t.data())
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST(Phase, DerivativeOrders)
{
    EXPECT_EQ(derivative_phase(0), 1);
    EXPECT_EQ(derivative_phase(1), 1);
    EXPECT_EQ(derivative_phase(2), -1);
    EXPECT_EQ(derivative_phase(3), -1);
    EXPECT_EQ(derivative_phase(4), 1);
    EXPECT_EQ(derivative_phase(7), -1);
}

TEST(Phase, FlatLaplacianSelfTest)
{
    for (double k : {1.0, 8.0, 32.0})
        EXPECT_NEAR(laplacian_phase_self_test(k), derivative_phase(2), 1e-12);
}

TEST(TTBasis, AxisAlignedIsExact)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(4, 0);
    auto basis = tt_basis(xi);
    ASSERT_EQ(basis.size(), 5u);
    for (const auto& h : basis) {
        EXPECT_EQ((h * xi).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_EQ(h.trace(), 0.0);
        EXPECT_EQ(tt_defect(xi, h), 0.0);
    }
}

TEST(TTBasis, GeneralCovectorIsOrthonormal)
{
    Rng rng(11);
    for (int n : {3, 4}) {
        Eigen::VectorXd xi(n);
        for (int a = 0; a < n; ++a)
            xi[a] = rng.uniform(-1.0, 1.0);
        auto basis = tt_basis(xi);
        ASSERT_EQ(static_cast<int>(basis.size()), n * (n + 1) / 2 - n - 1);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            EXPECT_LT(tt_defect(xi, basis[i]), 1e-12);
            for (std::size_t j = 0; j < basis.size(); ++j)
                EXPECT_NEAR(basis[i].cwiseProduct(basis[j]).sum(), i == j ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(TTBasis, RejectsZeroCovector)
{
    EXPECT_THROW(tt_basis(Eigen::VectorXd::Zero(3)), ArgumentError);
}

TEST(BachProbe, ProportionalToDirectionAndFrequencyIndependent)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(4, 0);
    for (const auto& h : {sym_pair(4, 1, 2), diag_pair(4, 1, 2)}) {
        auto p8 = tt_symbol_probe_bach(xi, h, 8.0, 1e-4);
        auto p16 = tt_symbol_probe_bach(xi, h, 16.0, 1e-4);
        EXPECT_LT((p8.measured - p8.ratio * h).cwiseAbs().maxCoeff(), 1e-6 * std::abs(p8.ratio));
        EXPECT_NEAR(p8.ratio, p16.ratio, 1e-4 * std::abs(p8.ratio));
        EXPECT_GT(std::abs(p8.ratio), 0.1);
    }
}

TEST(BachProbe, RatioIndependentOfTTDirection)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(4, 0);
    auto a = tt_symbol_probe_bach(xi, sym_pair(4, 1, 2), 8.0, 1e-4);
    auto b = tt_symbol_probe_bach(xi, diag_pair(4, 1, 3), 8.0, 1e-4);
    EXPECT_NEAR(a.ratio, b.ratio, 1e-6 * std::abs(a.ratio));
}

TEST(BachProbe, Preconditions)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(4, 0);
    EXPECT_THROW(tt_symbol_probe_bach(xi, sym_pair(4, 0, 1), 8.0, 1e-4), PreconditionError);
    EXPECT_THROW(tt_symbol_probe_bach(xi, Eigen::MatrixXd::Identity(4, 4), 8.0, 1e-4), PreconditionError);
    EXPECT_THROW(tt_symbol_probe_bach(Eigen::VectorXd::Unit(3, 0), sym_pair(3, 1, 2), 8.0, 1e-4), DimensionError);
    EXPECT_THROW(tt_symbol_probe_bach(xi, sym_pair(3, 1, 2), 8.0, 1e-4), DimensionError);
}

TEST(CottonProbe, MatchesClosedForm)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(3, 0);
    for (const auto& h : {sym_pair(3, 1, 2), diag_pair(3, 1, 2)}) {
        auto p = tt_symbol_probe_cotton(xi, h, 8.0, 1e-4);
        EXPECT_EQ(p.phase, -1);
        EXPECT_LT(p.relative_error, 1e-5);
        EXPECT_GT(max_abs(p.expected), 0.1);
    }
}

TEST(CottonProbe, GeneralCovector)
{
    Eigen::VectorXd xi(3);
    xi << 0.6, -0.3, 0.5;
    auto basis = tt_basis(xi);
    auto p = tt_symbol_probe_cotton(xi, basis[0], 4.0, 1e-4);
    EXPECT_LT(p.relative_error, 1e-5);
}

TEST(CottonProbe, ZeroDirectionGivesZero)
{
    auto p = tt_symbol_probe_cotton(Eigen::VectorXd::Unit(3, 0), Eigen::MatrixXd::Zero(3, 3), 8.0, 1e-4);
    EXPECT_EQ(max_abs(p.measured), 0.0);
    EXPECT_EQ(p.relative_error, 0.0);
}

TEST(CottonProbe, FrequencyDoubling)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(3, 0);
    auto h = sym_pair(3, 1, 2);
    auto a = tt_symbol_probe_cotton(xi, h, 8.0, 1e-4);
    auto b = tt_symbol_probe_cotton(xi, h, 16.0, 1e-4);
    for (std::size_t i = 0; i < a.measured.size(); ++i)
        EXPECT_NEAR(a.measured[i], b.measured[i], 1e-6);
}

TEST(CottonProbe, Preconditions)
{
    EXPECT_THROW(tt_symbol_probe_cotton(Eigen::VectorXd::Unit(3, 0), sym_pair(3, 0, 1), 8.0, 1e-4),
                 PreconditionError);
    EXPECT_THROW(tt_symbol_probe_cotton(Eigen::VectorXd::Unit(4, 0), sym_pair(4, 1, 2), 8.0, 1e-4),
                 DimensionError);
}

TEST(CottonSymbol, InjectiveOnSymmetricPerturbations)
{
    Rng rng(5);
    for (int n : {3, 4}) {
        auto c = cotton_injectivity(n, 100, rng);
        EXPECT_EQ(c.samples, 100u);
        EXPECT_GT(c.min_ratio, 0.0);
        EXPECT_GT(c.min_singular_value, 1e-3);
    }
}

TEST(CottonSymbol, VanishesOnlyForZero)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(3, 0);
    EXPECT_EQ(max_abs(cotton_symbol(xi, Eigen::MatrixXd::Zero(3, 3))), 0.0);
    EXPECT_GT(max_abs(cotton_symbol(xi, Eigen::MatrixXd::Identity(3, 3))), 0.0);
    EXPECT_GT(max_abs(cotton_symbol(xi, sym_pair(3, 0, 0))), 0.0);
}

TEST(FrequencyProbe, RicciFamilySlopes)
{
    auto p = frequency_probe(ProbeTarget::RicciRemainder, ricci_family());
    ASSERT_EQ(p.rows.size(), 3u);
    EXPECT_NEAR(p.leading_slope, 1.0, 0.1);
    EXPECT_LE(p.remainder_slope, 0.2);
}

TEST(FrequencyProbe, ScalarTargetSlopes)
{
    auto f = ricci_family();
    auto p = frequency_probe(ProbeTarget::ScalarLinearization, f);
    EXPECT_NEAR(p.leading_slope, 1.0, 0.1);
    EXPECT_LE(p.remainder_slope, 0.2);
}

TEST(FrequencyProbe, NonOscillatingFamilyIsFlat)
{
    auto f = ricci_family();
    f.oscillate = false;
    f.rule = AmplitudeRule::Fixed;
    f.epsilon = 0.1;
    auto p = frequency_probe(ProbeTarget::RicciRemainder, f);
    EXPECT_NEAR(p.leading_slope, 0.0, 1e-10);
    EXPECT_NEAR(p.remainder_slope, 0.0, 1e-10);
}

TEST(FrequencyProbe, NeedsThreeFrequencies)
{
    auto f = ricci_family();
    f.frequencies = {8.0, 16.0};
    EXPECT_THROW(frequency_probe(ProbeTarget::RicciRemainder, f), ConfigError);
}

TEST(ScalarLinearization, ErrorIsLinearInAmplitude)
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(1, 1) = 1.0;
    h(0, 1) = h(1, 0) = 0.5;
    Eigen::VectorXd xi(3);
    xi << 1.0, 0.5, 0.0;
    auto a = scalar_linearization(h, xi, 4.0, 1e-3);
    auto b = scalar_linearization(h, xi, 4.0, 5e-4);
    EXPECT_NEAR(a.measured, a.expected, 1e-2 * std::abs(a.expected));
    EXPECT_GT(a.error, 0.0);
    EXPECT_NEAR(a.error / b.error, 2.0, 0.05);
}

TEST(BachProbe, AmplitudeHalvingConvergesQuadratically)
{
    Eigen::VectorXd xi = Eigen::VectorXd::Unit(4, 0);
    auto h = sym_pair(4, 1, 2);
    auto a = tt_symbol_probe_bach(xi, h, 8.0, 2e-2);
    auto b = tt_symbol_probe_bach(xi, h, 8.0, 1e-2);
    auto c = tt_symbol_probe_bach(xi, h, 8.0, 1e-4);
    double da = std::abs(a.ratio - c.ratio), db = std::abs(b.ratio - c.ratio);
    ASSERT_GT(db, 0.0);
    EXPECT_NEAR(da / db, 4.0, 0.2);
}

TEST(WavePerturbation, LorentzianBackground)
{
    auto g = wave_perturbation(sym_pair(3, 1, 2), Eigen::VectorXd::Unit(3, 1), 2.0, 0.0,
                               tensorcalc::Signature::Lorentzian);
    auto j = g.jets(jets::Point{}, 0);
    EXPECT_EQ(j[0].value(), -1.0);
    EXPECT_EQ(j[4].value(), 1.0);
}
